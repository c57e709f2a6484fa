use num_traits::Zero;
use serde::Serialize;

use crate::algebra::BasisKey;
use crate::error::{Error, Result};
use crate::scalar::{format_rational, Rational, Scalar};
use crate::RationalMatrix;

use super::window::WindowedModule;

/// Degree-preserving module map, one block `φ_k : A_k → B_k` per index.
#[derive(Debug, Clone, PartialEq)]
pub struct IntertwinerMap {
    pub lo: i64,
    pub blocks: Vec<RationalMatrix>,
}

impl IntertwinerMap {
    pub fn block(&self, k: i64) -> Option<&RationalMatrix> {
        usize::try_from(k - self.lo).ok().and_then(|i| self.blocks.get(i))
    }

    pub fn is_invertible(&self) -> bool {
        self.blocks.iter().all(|b| b.rows() == b.cols() && b.rank() == b.rows())
    }
}

impl Serialize for IntertwinerMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let blocks: Vec<(i64, Vec<Vec<String>>)> = self
            .blocks
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let dense =
                    b.to_dense().iter().map(|row| row.iter().map(format_rational).collect()).collect();
                (self.lo + i as i64, dense)
            })
            .collect();
        blocks.serialize(s)
    }
}

/// Searches for an invertible graded map intertwining the generator actions
/// of `a` and `b` on the common window. Returns `None` if every solution of
/// the intertwining equations is singular at some index.
pub fn find_intertwiner(a: &WindowedModule, b: &WindowedModule) -> Result<Option<IntertwinerMap>> {
    if a.range() != b.range() || a.offset() != b.offset() {
        return Err(Error::ModuleMismatch("intertwiner search needs equal ranges and weight offsets".into()));
    }
    let (lo, hi) = a.range();
    let shapes: Vec<(usize, usize)> =
        (lo..=hi).map(|k| (b.dim(k).unwrap_or(0), a.dim(k).unwrap_or(0))).collect();
    if shapes.iter().any(|(r, c)| r != c) {
        return Ok(None);
    }
    let mut offsets = Vec::with_capacity(shapes.len() + 1);
    let mut total = 0;
    for (r, c) in &shapes {
        offsets.push(total);
        total += r * c;
    }
    let var = |k: i64, r: usize, c: usize| offsets[(k - lo) as usize] + r * shapes[(k - lo) as usize].1 + c;

    let mut gens: Vec<BasisKey> = a.generators().chain(b.generators()).copied().collect();
    gens.push(BasisKey::Central);
    gens.sort();
    gens.dedup();

    // φ_{k+d} ρ_A(g)_k − ρ_B(g)_k φ_k = 0, one row per matrix entry.
    let mut rows: Vec<Vec<(usize, Rational)>> = Vec::new();
    for g in &gens {
        for k in lo..=hi {
            let t = k + g.degree();
            if !a.in_range(t) {
                continue;
            }
            let (Some(ma), Some(mb)) = (a.action(g, k), b.action(g, k)) else {
                continue;
            };
            let (bt, at) = shapes[(t - lo) as usize];
            let (bk, ak) = shapes[(k - lo) as usize];
            for r in 0..bt {
                for c in 0..ak {
                    let mut row = Vec::new();
                    for m in 0..at {
                        let x = ma.get(m, c);
                        if !x.is_zero() {
                            row.push((var(t, r, m), x));
                        }
                    }
                    for m in 0..bk {
                        let x = mb.get(r, m);
                        if !x.is_zero() {
                            row.push((var(k, m, c), -x));
                        }
                    }
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let mut system = RationalMatrix::zeros(rows.len(), total);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, x) in row {
            system.add_at(i, j, x);
        }
    }
    let kernel = system.reduce().kernel;
    if kernel.is_empty() {
        return Ok(if total == 0 {
            Some(IntertwinerMap { lo, blocks: assemble(&shapes, &offsets, &[]) })
        } else {
            None
        });
    }
    // A generic combination of the kernel basis is invertible iff some
    // solution is; a few deterministic probes make a miss vanishingly rare.
    for probe in 0..8i64 {
        let mut v = vec![Rational::from_int(0); total];
        for (j, basis) in kernel.iter().enumerate() {
            let w = Rational::from_frac(1 + (j as i64 + 1) * (2 * probe + 3), 1 + probe);
            let w = if j == 0 { Rational::from_int(1) } else { w };
            for (x, y) in v.iter_mut().zip(basis) {
                *x += w.clone() * y.clone();
            }
        }
        let map = IntertwinerMap { lo, blocks: assemble(&shapes, &offsets, &v) };
        if map.is_invertible() {
            return Ok(Some(map));
        }
        if kernel.len() == 1 {
            break;
        }
    }
    Ok(None)
}

fn assemble(shapes: &[(usize, usize)], offsets: &[usize], v: &[Rational]) -> Vec<RationalMatrix> {
    shapes
        .iter()
        .zip(offsets)
        .map(|(&(r, c), &off)| {
            let mut m = RationalMatrix::zeros(r, c);
            for i in 0..r {
                for j in 0..c {
                    if let Some(x) = v.get(off + i * c + j) {
                        m.set(i, j, x.clone());
                    }
                }
            }
            m
        })
        .collect()
}
