use num_traits::Zero;
use serde::Serialize;

use crate::algebra::BasisKey;
use crate::scalar::{format_rational, is_integer, Rational, Scalar};

use super::closure::submodule_closure;
use super::window::WindowedModule;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    HighestWeightLike {
        top: i64,
    },
    LowestWeightLike {
        bottom: i64,
    },
    IntermediateSeries {
        #[serde(with = "crate::scalar::serde_rational")]
        a: Rational,
        #[serde(with = "crate::scalar::serde_rational")]
        b: Rational,
        /// `a` reduced to 0 when it is an integer.
        #[serde(with = "crate::scalar::serde_rational")]
        canonical_a: Rational,
    },
    Unknown {
        reason: String,
    },
}

impl Classification {
    pub fn label(&self) -> String {
        match self {
            Classification::HighestWeightLike { .. } => "highest-weight-like".into(),
            Classification::LowestWeightLike { .. } => "lowest-weight-like".into(),
            Classification::IntermediateSeries { canonical_a, b, .. } => {
                format!("intermediate-series({},{})", format_rational(canonical_a), format_rational(b))
            }
            Classification::Unknown { .. } => "unknown".into(),
        }
    }
}

/// Sorts a window into the trichotomy highest weight / lowest weight /
/// intermediate series, or `Unknown`. A window that is both highest-weight-like
/// and fits the intermediate series (finite support) is reported as
/// highest-weight-like.
pub fn classify_window(module: &WindowedModule) -> Classification {
    let fit = fit_intermediate(module);
    if let Some(top) = extremal(module, true) {
        return Classification::HighestWeightLike { top };
    }
    match fit {
        Ok(c) => c,
        Err(reason) => match extremal(module, false) {
            Some(bottom) => Classification::LowestWeightLike { bottom },
            None => Classification::Unknown { reason },
        },
    }
}

/// Highest (or lowest) nonzero index, provided nothing lives beyond it and
/// its weight space generates the whole window.
fn extremal(module: &WindowedModule, top: bool) -> Option<i64> {
    let (lo, hi) = module.range();
    let mut nonzero = module.indices().filter(|&k| module.dim(k) != Some(0));
    let k = if top { nonzero.next_back()? } else { nonzero.next()? };
    let bounded = if top { k < hi || module.closed_above() } else { k > lo || module.closed_below() };
    if !bounded {
        return None;
    }
    let d = module.dim(k)?;
    let seeds: Vec<(i64, Vec<Rational>)> = (0..d)
        .map(|j| {
            let mut v = vec![Rational::from_int(0); d];
            v[j] = Rational::from_int(1);
            (k, v)
        })
        .collect();
    let gens: Vec<BasisKey> = module.generators().copied().collect();
    (submodule_closure(module, &seeds, &gens).dims == module.dims()).then_some(k)
}

fn fit_intermediate(module: &WindowedModule) -> Result<Classification, String> {
    if module.dims().iter().any(|&d| d > 1) {
        return Err("weight spaces of dimension > 1".into());
    }
    if !module.central().is_zero() {
        return Err("nonzero central charge".into());
    }
    if module.stored_actions().any(|((g, _), m)| g.level() != Some(0) && !m.is_zero()) {
        return Err("positive-level generators act nontrivially".into());
    }
    let entry = |i: i64, k: i64| -> Option<Rational> {
        if module.dim(k) != Some(1) || module.dim(k + i) != Some(1) || !module.in_range(k + i) {
            return None;
        }
        module.action(&BasisKey::vir(i), k).map(|m| m.get(0, 0))
    };
    let n = Rational::from_int;
    let a =
        module.indices().find_map(|k| entry(0, k).map(|e| e - n(k))).ok_or("no weight operator available")?;
    let b = module
        .generators()
        .filter(|g| g.level() == Some(0) && g.degree() != 0)
        .find_map(|g| {
            let i = g.degree();
            module.indices().find_map(|k| entry(i, k).map(|e| (e - a.clone() - n(k)) / n(i)))
        })
        .ok_or("no off-diagonal action available")?;
    for g in module.generators().filter(|g| g.level() == Some(0)) {
        let i = g.degree();
        for k in module.indices() {
            if let Some(e) = entry(i, k) {
                if e != a.clone() + n(k) + b.clone() * n(i) {
                    return Err(format!("L_{i} on V_{k} does not fit (a, b)"));
                }
            }
        }
    }
    let canonical_a = if is_integer(&a) { n(0) } else { a.clone() };
    Ok(Classification::IntermediateSeries { a, b, canonical_a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::{build_window, extend_trivially, tensor, IntermediateSpec};
    use crate::scalar::{int, rat};

    #[test]
    fn recovers_parameters() {
        let m = extend_trivially(&build_window(&IntermediateSpec::aab(rat(1, 2), int(2)), -6, 6), 2);
        assert_eq!(
            classify_window(&m),
            Classification::IntermediateSeries { a: rat(1, 2), b: int(2), canonical_a: rat(1, 2) }
        );
        let m = build_window(&IntermediateSpec::aab(int(3), rat(-1, 3)), -5, 5);
        assert_eq!(classify_window(&m).label(), "intermediate-series(0,-1/3)");
    }

    #[test]
    fn doubled_module_is_unknown() {
        let a = build_window(&IntermediateSpec::aab(rat(1, 2), int(2)), -5, 5);
        let gens: Vec<_> = a.generators().copied().collect();
        let t = tensor(&a, &WindowedModule::trivial(a.variant(), 2, gens)).unwrap();
        assert!(matches!(classify_window(&t), Classification::Unknown { .. }));
    }

    #[test]
    fn finite_support_prefers_highest_weight() {
        let gens: Vec<_> = (-2..=2).map(BasisKey::vir).collect();
        let t = WindowedModule::trivial(crate::algebra::AlgebraVariant::Virasoro, 1, gens);
        assert_eq!(classify_window(&t), Classification::HighestWeightLike { top: 0 });
    }
}
