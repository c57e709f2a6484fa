use std::collections::VecDeque;

use serde::Serialize;

use crate::algebra::BasisKey;
use crate::matrix::RowEchelon;
use crate::scalar::{Rational, Scalar};

use super::intermediate::{build_window, IntermediateSpec};
use super::window::WindowedModule;

#[derive(Debug, Clone, Serialize)]
pub struct ClosureTable {
    /// Dimension of the closure inside each `V_k`, indexed from `lo`.
    pub dims: Vec<usize>,
    /// Total dimension after each sweep over the newly added vectors.
    pub history: Vec<usize>,
}

impl ClosureTable {
    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }
}

/// Smallest subspace of the window containing `seeds` and stable under the
/// given generators (as far as their action stays inside the window).
///
/// Seeds are `(k, v)` with `v` a coordinate vector of `V_k`.
pub fn submodule_closure(
    module: &WindowedModule,
    seeds: &[(i64, Vec<Rational>)],
    generators: &[BasisKey],
) -> ClosureTable {
    let (lo, _) = module.range();
    let mut spaces: Vec<RowEchelon<Rational>> = module.dims().iter().map(|&d| RowEchelon::new(d)).collect();
    let mut frontier: VecDeque<(i64, Vec<Rational>)> = VecDeque::new();
    for (k, v) in seeds {
        if module.in_range(*k) && spaces[(k - lo) as usize].insert(v.clone()) {
            frontier.push_back((*k, v.clone()));
        }
    }
    let mut history = vec![spaces.iter().map(RowEchelon::rank).sum()];
    while !frontier.is_empty() {
        let mut next = VecDeque::new();
        for (k, v) in frontier.drain(..) {
            for g in generators {
                let t = k + g.degree();
                if !module.in_range(t) {
                    continue;
                }
                let Some(m) = module.action(g, k) else { continue };
                let w = m.mul_vec(&v);
                if w.iter().all(Scalar::is_negligible) {
                    continue;
                }
                if spaces[(t - lo) as usize].insert(w.clone()) {
                    next.push_back((t, w));
                }
            }
        }
        frontier = next;
        history.push(spaces.iter().map(RowEchelon::rank).sum());
    }
    ClosureTable { dims: spaces.iter().map(RowEchelon::rank).collect(), history }
}

#[derive(Debug, Clone, Serialize)]
pub struct IrreducibilityVerdict {
    pub module: String,
    pub range: (i64, i64),
    pub bruteforce: bool,
    pub criterion: bool,
    /// Seed indices whose closure does not fill the window.
    pub proper_seeds: Vec<i64>,
}

impl IrreducibilityVerdict {
    pub fn agree(&self) -> bool {
        self.bruteforce == self.criterion
    }
}

/// Brute force: the window is irreducible when the closure of every single
/// basis vector fills it. Compared against the classical criterion.
pub fn irreducible_verdict(spec: &IntermediateSpec, lo: i64, hi: i64) -> IrreducibilityVerdict {
    let module = build_window(spec, lo, hi);
    let gens: Vec<BasisKey> = module.generators().copied().collect();
    let mut proper = Vec::new();
    for k in lo..=hi {
        let d = module.dim(k).unwrap_or(0);
        for basis in 0..d {
            let mut v = vec![Rational::from_int(0); d];
            v[basis] = Rational::from_int(1);
            let table = submodule_closure(&module, &[(k, v)], &gens);
            if table.dims != module.dims() {
                proper.push(k);
                break;
            }
        }
    }
    IrreducibilityVerdict {
        module: spec.label(),
        range: (lo, hi),
        bruteforce: proper.is_empty(),
        criterion: spec.irreducible_by_criterion(),
        proper_seeds: proper,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn unit(k: i64) -> (i64, Vec<Rational>) {
        (k, vec![int(1)])
    }

    #[test]
    fn a00_closures() {
        let m = build_window(&IntermediateSpec::aab(int(0), int(0)), -6, 6);
        let gens: Vec<_> = m.generators().copied().collect();
        let t = submodule_closure(&m, &[unit(0)], &gens);
        assert_eq!(t.total(), 1);
        let t = submodule_closure(&m, &[unit(1)], &gens);
        // Every x_k with k != 0 is reached, and L_{-1} x_1 = x_0 as well.
        assert_eq!(t.dims, vec![1; 13]);
        assert!(t.history.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn irreducible_window_fills() {
        let m = build_window(&IntermediateSpec::aab(rat(1, 2), int(2)), -6, 6);
        let gens: Vec<_> = m.generators().copied().collect();
        for k in -6..=6 {
            assert_eq!(submodule_closure(&m, &[unit(k)], &gens).total(), 13);
        }
    }

    #[test]
    fn verdict_examples() {
        for (a, b, expect) in [(rat(1, 2), int(1), true), (int(0), int(1), false), (int(0), int(2), true)] {
            let v = irreducible_verdict(&IntermediateSpec::aab(a, b), -8, 8);
            assert_eq!((v.bruteforce, v.criterion), (expect, expect));
        }
    }
}
