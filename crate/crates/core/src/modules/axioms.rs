use serde::Serialize;

use crate::algebra::{AlgebraWindow, BasisKey, StructureConstants};
use crate::scalar::{Rational, Scalar};
use crate::RationalMatrix;

use super::window::WindowedModule;

#[derive(Debug, Clone, Serialize)]
pub struct ModuleViolation {
    pub kind: &'static str,
    pub pair: Vec<String>,
    pub source: i64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModuleAxiomReport {
    pub window: AlgebraWindow,
    pub pairs_checked: usize,
    pub composites_checked: usize,
    /// Composites skipped because a matrix left the window or a bracket
    /// term is not a declared generator.
    pub composites_skipped: usize,
    pub violations: Vec<ModuleViolation>,
}

impl ModuleAxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `ρ([x, y]) = ρ(x)ρ(y) − ρ(y)ρ(x)` on every weight space where all
/// matrices involved are determined, for declared generators in `window`,
/// and checks that `L_{0,0}` acts on `V_k` as `a + k`.
pub fn check_module_axioms(module: &WindowedModule, window: AlgebraWindow) -> ModuleAxiomReport {
    let variant = module.variant();
    let gens: Vec<BasisKey> = module
        .generators()
        .filter(|g| {
            g.degree().abs() <= window.degree_bound && g.level().is_some_and(|l| l <= window.level_cap)
        })
        .copied()
        .collect();
    let mut violations = Vec::new();
    let mut composites = 0;
    let mut skipped = 0;

    let l0 = BasisKey::gen(0, 0);
    if module.is_declared(&l0) {
        for k in module.indices() {
            let d = module.dim(k).unwrap_or(0);
            if let Some(m) = module.action(&l0, k) {
                let expect = RationalMatrix::scalar(d, module.offset().clone() + Rational::from_int(k));
                if m != expect {
                    violations.push(ModuleViolation {
                        kind: "weight",
                        pair: vec![l0.display_in(variant)],
                        source: k,
                        detail: format!(
                            "L_0 on V_{k} is not a + k = {}",
                            module.offset().clone() + Rational::from_int(k)
                        ),
                    });
                }
            }
        }
    }

    let mut pairs = 0;
    for (n, x) in gens.iter().enumerate() {
        for y in &gens[n + 1..] {
            pairs += 1;
            let bracket: Vec<(BasisKey, Rational)> = variant.bracket_basis(x, y);
            for k in module.indices() {
                let (dx, dy) = (x.degree(), y.degree());
                let rhs = (|| {
                    let xy = module.action(x, k + dy)?.mul(&module.action(y, k)?);
                    let yx = module.action(y, k + dx)?.mul(&module.action(x, k)?);
                    Some(xy.sub(&yx))
                })();
                let Some(rhs) = rhs else {
                    skipped += 1;
                    continue;
                };
                let lhs = bracket.iter().try_fold(
                    RationalMatrix::zeros(rhs.rows(), rhs.cols()),
                    |acc, (key, c)| {
                        let m = module.action(key, k)?;
                        Some(acc.add(&m.scale(c)))
                    },
                );
                let Some(lhs) = lhs else {
                    skipped += 1;
                    continue;
                };
                composites += 1;
                if lhs != rhs {
                    violations.push(ModuleViolation {
                        kind: "bracket",
                        pair: vec![x.display_in(variant), y.display_in(variant)],
                        source: k,
                        detail: format!(
                            "ρ([x,y]) = {:?} but [ρx,ρy] = {:?}",
                            lhs.to_dense_strings(),
                            rhs.to_dense_strings()
                        ),
                    });
                }
            }
        }
    }
    ModuleAxiomReport {
        window,
        pairs_checked: pairs,
        composites_checked: composites,
        composites_skipped: skipped,
        violations,
    }
}

trait DenseStrings {
    fn to_dense_strings(&self) -> Vec<Vec<String>>;
}

impl DenseStrings for RationalMatrix {
    fn to_dense_strings(&self) -> Vec<Vec<String>> {
        self.to_dense().into_iter().map(|r| r.into_iter().map(|v| v.to_string()).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::{build_window, extend_trivially, IntermediateSpec};
    use crate::scalar::{int, rat};

    #[test]
    fn intermediate_window_passes() {
        let m = build_window(&IntermediateSpec::aab(rat(1, 2), int(2)), -10, 10);
        let r = check_module_axioms(&m, AlgebraWindow::new(3, 0));
        assert!(r.passed(), "{:?}", r.violations.first());
        assert!(r.composites_checked > 0);
    }

    #[test]
    fn trivial_extension_passes_b_check() {
        let m = build_window(&IntermediateSpec::aab(rat(1, 2), int(2)), -10, 10);
        let e = extend_trivially(&m, 2);
        let r = check_module_axioms(&e, AlgebraWindow::new(3, 2));
        assert!(r.passed(), "{:?}", r.violations.first());
    }

    #[test]
    fn corrupted_entry_is_named() {
        let mut m = build_window(&IntermediateSpec::aab(rat(1, 2), int(2)), -6, 6);
        m.set_action(BasisKey::vir(1), 0, RationalMatrix::scalar(1, int(99))).unwrap();
        let r = check_module_axioms(&m, AlgebraWindow::new(2, 0));
        assert!(!r.passed());
        assert!(r.violations.iter().any(|v| v.pair.contains(&"L_{1}".to_string())));
    }

    #[test]
    fn broken_virasoro_module_stays_broken_after_extension() {
        let mut m = build_window(&IntermediateSpec::aab(int(0), int(0)), -6, 6);
        m.set_action(BasisKey::vir(2), 1, RationalMatrix::scalar(1, int(5))).unwrap();
        assert!(!check_module_axioms(&m, AlgebraWindow::new(3, 0)).passed());
        let e = extend_trivially(&m, 2);
        assert!(!check_module_axioms(&e, AlgebraWindow::new(3, 2)).passed());
    }
}
