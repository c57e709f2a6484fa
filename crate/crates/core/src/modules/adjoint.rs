use crate::algebra::{AlgebraVariant, BasisKey, StructureConstants};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::RationalMatrix;

use super::window::WindowedModule;

/// Basis of the degree-`alpha` piece of `B̃_{m,n}`: `L_{α,m..=n}`, then `C`
/// in degree 0 when `m = 0`.
pub fn adjoint_basis(m: i64, n: i64, alpha: i64) -> Vec<BasisKey> {
    let mut out: Vec<BasisKey> = (m..=n).map(|i| BasisKey::gen(alpha, i)).collect();
    if m == 0 && alpha == 0 {
        out.push(BasisKey::Central);
    }
    out
}

/// The adjoint action of the level-`≥ 0` part of `B` on the quotient
/// `B̃_{m,n}` (levels `m..=n`), on degrees `lo..=hi`.
pub fn adjoint_window(m: i64, n: i64, lo: i64, hi: i64) -> Result<WindowedModule> {
    if m < 0 || n < m {
        return Err(Error::InvalidVariant(format!("adjoint window needs 0 <= m <= n, got ({m},{n})")));
    }
    let variant = AlgebraVariant::quotient(0, n)?;
    let dims = (lo..=hi).map(|a| adjoint_basis(m, n, a).len()).collect();
    let mut module = WindowedModule::new(variant, Rational::from_int(0), lo, hi, dims)?;
    let span = (hi - lo).max(0);
    for beta in -span..=span {
        for l in 0..=n {
            let g = BasisKey::gen(beta, l);
            module.declare(g);
            for alpha in lo..=hi {
                let t = alpha + beta;
                if !module.in_range(t) {
                    continue;
                }
                let src = adjoint_basis(m, n, alpha);
                let tgt = adjoint_basis(m, n, t);
                let mut mat = RationalMatrix::zeros(tgt.len(), src.len());
                for (c, x) in src.iter().enumerate() {
                    let terms: Vec<(BasisKey, Rational)> = variant.bracket_basis(&g, x);
                    for (key, coef) in terms {
                        // Levels outside m..=n vanish in the quotient.
                        if let Some(r) = tgt.iter().position(|y| *y == key) {
                            mat.add_at(r, c, coef);
                        }
                    }
                }
                module.set_action(g, alpha, mat)?;
            }
        }
    }
    Ok(module)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraWindow;
    use crate::modules::check_module_axioms;
    use crate::scalar::int;

    #[test]
    fn dims_and_sample_action() {
        let w = adjoint_window(0, 1, -4, 4).unwrap();
        let expect: Vec<usize> = (-4..=4).map(|a| if a == 0 { 3 } else { 2 }).collect();
        assert_eq!(w.dims(), &expect[..]);
        // [L_{1,1}, L_{1,0}] = L_{2,1}
        let m = w.action(&BasisKey::gen(1, 1), 1).unwrap();
        assert_eq!(m.get(1, 0), int(1));
        assert_eq!(m.get(0, 0), int(0));
    }

    #[test]
    fn adjoint_passes_axioms() {
        let w = adjoint_window(0, 1, -4, 4).unwrap();
        let rep = check_module_axioms(&w, AlgebraWindow::new(2, 1));
        assert!(rep.passed(), "{:?}", rep.violations);
        let w = adjoint_window(1, 2, -3, 3).unwrap();
        assert!(check_module_axioms(&w, AlgebraWindow::new(2, 2)).passed());
    }
}
