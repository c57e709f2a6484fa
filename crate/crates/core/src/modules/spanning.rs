use serde::Serialize;

use crate::algebra::BasisKey;
use crate::error::{Error, Result};
use crate::matrix::RowEchelon;
use crate::scalar::Scalar;

use super::window::WindowedModule;

/// Indices of the generating block `M = V_{-2} ⊕ … ⊕ V_2`.
pub const M_RANGE: (i64, i64) = (-2, 2);

#[derive(Debug, Clone, Serialize)]
pub struct SpanningReport {
    pub range: (i64, i64),
    pub holds: bool,
    /// Indices where `M + Vir·M` falls short of `V_k`.
    pub deficient: Vec<i64>,
}

/// Checks `V = M + Vir·M` on the window: every `V_k` is spanned by `M_k`
/// together with the images `L_{k−i} V_i`, `i ∈ [−2, 2]`.
pub fn spanning_check_m(module: &WindowedModule) -> Result<SpanningReport> {
    let (lo, hi) = module.range();
    if lo > -8 || hi < 8 {
        return Err(Error::ModuleMismatch(format!(
            "spanning check needs a window containing [-8, 8], got [{lo}, {hi}]"
        )));
    }
    let mut deficient = Vec::new();
    for k in lo..=hi {
        let d = module.dim(k).unwrap_or(0);
        let mut span = RowEchelon::new(d);
        if (M_RANGE.0..=M_RANGE.1).contains(&k) {
            for j in 0..d {
                let mut v = vec![crate::Rational::from_int(0); d];
                v[j] = crate::Rational::from_int(1);
                span.insert(v);
            }
        }
        for i in M_RANGE.0..=M_RANGE.1 {
            let Some(m) = module.action(&BasisKey::vir(k - i), i) else {
                continue;
            };
            for col in m.transpose().to_dense() {
                if span.rank() == d {
                    break;
                }
                span.insert(col);
            }
        }
        if span.rank() < d {
            deficient.push(k);
        }
    }
    Ok(SpanningReport { range: (lo, hi), holds: deficient.is_empty(), deficient })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::{build_window, IntermediateSpec};
    use crate::scalar::{int, rat};
    use crate::RationalMatrix;

    #[test]
    fn intermediate_windows_are_spanned() {
        for (a, b) in [(rat(1, 2), int(2)), (int(0), int(0))] {
            let m = build_window(&IntermediateSpec::aab(a, b), -8, 8);
            assert!(spanning_check_m(&m).unwrap().holds);
        }
    }

    #[test]
    fn disconnected_space_detected() {
        let mut m = build_window(&IntermediateSpec::aab(rat(1, 2), int(2)), -8, 8);
        for i in -2..=2 {
            m.set_action(BasisKey::vir(5 - i), i, RationalMatrix::zeros(1, 1)).unwrap();
        }
        assert_eq!(spanning_check_m(&m).unwrap().deficient, vec![5]);
    }

    #[test]
    fn small_window_rejected() {
        let m = build_window(&IntermediateSpec::aab(int(0), int(0)), -4, 4);
        assert!(spanning_check_m(&m).is_err());
    }
}
