use std::collections::BTreeSet;

use crate::algebra::BasisKey;
use crate::error::{Error, Result};
use crate::RationalMatrix;

use super::window::WindowedModule;

/// Possible support of a module: the window, extended to infinity on open
/// sides.
fn support(m: &WindowedModule) -> (Option<i64>, Option<i64>) {
    let (lo, hi) = m.range();
    (m.closed_below().then_some(lo), m.closed_above().then_some(hi))
}

/// Tensor product of two windows with the Leibniz action
/// `g(a ⊗ b) = ga ⊗ b + a ⊗ gb`.
///
/// `V_k = ⊕_{p+q=k} A_p ⊗ B_q` over the pairs inside both windows. An
/// action is recorded only where every pair contributing to source and
/// target lies inside the windows; elsewhere it is marked unknown, so the
/// result never claims more than the factors determine.
pub fn tensor(a: &WindowedModule, b: &WindowedModule) -> Result<WindowedModule> {
    if a.variant() != b.variant() {
        return Err(Error::MixedVariants { left: a.variant().to_string(), right: b.variant().to_string() });
    }
    let (alo, ahi) = a.range();
    let (blo, bhi) = b.range();
    let (lo, hi) = (alo + blo, ahi + bhi);
    // (p, q, offset inside V_k) for every index k.
    let layout: Vec<Vec<(i64, i64, usize)>> = (lo..=hi)
        .map(|k| {
            let mut off = 0;
            let mut out = Vec::new();
            for q in blo..=bhi {
                let p = k - q;
                if a.in_range(p) {
                    out.push((p, q, off));
                    off += a.dim(p).unwrap_or(0) * b.dim(q).unwrap_or(0);
                }
            }
            out
        })
        .collect();
    let dims: Vec<usize> = (lo..=hi)
        .map(|k| {
            layout[(k - lo) as usize]
                .iter()
                .map(|&(p, q, _)| a.dim(p).unwrap_or(0) * b.dim(q).unwrap_or(0))
                .sum()
        })
        .collect();
    let mut out = WindowedModule::new(a.variant(), a.offset() + b.offset(), lo, hi, dims)?;
    out.set_central(a.central() + b.central());
    out.set_closed(a.closed_above() && b.closed_above(), a.closed_below() && b.closed_below());

    let (sa, sb) = (support(a), support(b));
    let complete = |k: i64| -> bool {
        // Every q in supp B with k − q in supp A must lie in both windows.
        let q_lo = match (sb.0, sa.1) {
            (Some(x), Some(y)) => Some(x.max(k - y)),
            (Some(x), None) => Some(x),
            (None, Some(y)) => Some(k - y),
            (None, None) => None,
        };
        let q_hi = match (sb.1, sa.0) {
            (Some(x), Some(y)) => Some(x.min(k - y)),
            (Some(x), None) => Some(x),
            (None, Some(y)) => Some(k - y),
            (None, None) => None,
        };
        match (q_lo, q_hi) {
            (Some(l), Some(h)) => l > h || (blo <= l && h <= bhi && alo <= k - h && k - l <= ahi),
            _ => false,
        }
    };

    let gens: BTreeSet<BasisKey> = a.generators().filter(|g| b.is_declared(g)).copied().collect();
    for g in gens {
        out.declare(g);
        let d = g.degree();
        for k in lo..=hi {
            let t = k + d;
            if !out.in_range(t) {
                continue;
            }
            if !(complete(k) && complete(t)) {
                out.mark_unknown(g, k);
                continue;
            }
            match leibniz(a, b, &g, &layout[(k - lo) as usize], &layout[(t - lo) as usize], &out, k) {
                Some(m) => out.set_action(g, k, m)?,
                None => out.mark_unknown(g, k),
            }
        }
    }
    Ok(out)
}

fn leibniz(
    a: &WindowedModule,
    b: &WindowedModule,
    g: &BasisKey,
    src: &[(i64, i64, usize)],
    tgt: &[(i64, i64, usize)],
    out: &WindowedModule,
    k: i64,
) -> Option<RationalMatrix> {
    let d = g.degree();
    let rows = out.dim(k + d)?;
    let cols = out.dim(k)?;
    let mut m = RationalMatrix::zeros(rows, cols);
    let find = |p: i64, q: i64| tgt.iter().find(|&&(x, y, _)| x == p && y == q).map(|t| t.2);
    for &(p, q, off) in src {
        let (dp, dq) = (a.dim(p)?, b.dim(q)?);
        if dp * dq == 0 {
            continue;
        }
        // (g·a) ⊗ b
        let ga = a.action(g, p)?;
        if !ga.is_zero() {
            let toff = find(p + d, q)?;
            for (&(r, c), x) in ga.entries() {
                for j in 0..dq {
                    m.add_at(toff + r * dq + j, off + c * dq + j, x.clone());
                }
            }
        }
        // a ⊗ (g·b)
        let gb = b.action(g, q)?;
        if !gb.is_zero() {
            let toff = find(p, q + d)?;
            let dt = b.dim(q + d)?;
            for (&(r, c), x) in gb.entries() {
                for i in 0..dp {
                    m.add_at(toff + i * dt + r, off + i * dq + c, x.clone());
                }
            }
        }
    }
    Some(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraWindow;
    use crate::modules::{build_window, check_module_axioms, IntermediateSpec};
    use crate::scalar::{int, rat};

    #[test]
    fn band_dimensions() {
        let a = build_window(&IntermediateSpec::aab(int(0), int(0)), -6, 6);
        let b = build_window(&IntermediateSpec::aab(int(0), int(1)), 0, 1);
        let t = tensor(&a, &b).unwrap();
        assert_eq!(t.range(), (-6, 7));
        assert!((-5..=6).all(|k| t.dim(k) == Some(2)));
        // Neither factor is closed, so nothing is claimed about the action.
        assert!(t.action(&BasisKey::vir(1), 0).is_none());
    }

    #[test]
    fn doubled_module_passes_axioms() {
        let a = build_window(&IntermediateSpec::aab(rat(1, 2), int(2)), -6, 6);
        let gens: Vec<_> = a.generators().copied().collect();
        let triv = WindowedModule::trivial(a.variant(), 2, gens);
        let t = tensor(&a, &triv).unwrap();
        assert_eq!(t.dims(), &[2; 13][..]);
        assert_eq!(t.action(&BasisKey::vir(0), 1).unwrap(), RationalMatrix::scalar(2, rat(3, 2)));
        let rep = check_module_axioms(&t, AlgebraWindow::new(3, 0));
        assert!(rep.passed(), "{:?}", rep.violations);
    }

    #[test]
    fn zero_width_factor() {
        let a = build_window(&IntermediateSpec::aab(int(0), int(0)), -3, 3);
        let z = WindowedModule::new(a.variant(), int(0), 0, -1, vec![]).unwrap();
        let t = tensor(&a, &z).unwrap();
        assert_eq!(t.total_dim(), 0);
    }
}
