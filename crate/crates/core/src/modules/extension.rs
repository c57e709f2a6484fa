use num_traits::Zero;
use serde::Serialize;

use crate::algebra::BasisKey;
use crate::matrix::RowEchelon;
use crate::scalar::{Rational, Scalar};
use crate::RationalMatrix;

use super::window::WindowedModule;

#[derive(Debug, Clone, Serialize)]
pub struct LevelSolution {
    pub level: i64,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    /// Dimension allowed by the linear relations alone.
    pub linear_dimension: usize,
    /// The quadratic relation forced the level to act as zero.
    pub quadratic_forced_zero: bool,
    /// Basis of the solution space, one coordinate vector per solution.
    /// Coordinates enumerate the entries of `X_k : V_k → V_{k+1}` by
    /// increasing `k`, row-major inside each block.
    #[serde(skip)]
    pub basis: Vec<Vec<Rational>>,
}

impl LevelSolution {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionSpace {
    pub level_cap: i64,
    pub range: (i64, i64),
    pub levels: Vec<LevelSolution>,
    /// No relation could be imposed (or nothing to solve for).
    pub inconclusive: bool,
}

impl ExtensionSpace {
    pub fn dimension(&self) -> usize {
        self.levels.iter().map(LevelSolution::dimension).sum()
    }

    /// Only the trivial extension survives.
    pub fn is_trivial(&self) -> bool {
        !self.inconclusive && self.dimension() == 0
    }
}

/// A term `coef · P X_m Q` with `X_m : V_m → V_{m+1}` unknown; a missing
/// factor is the identity.
struct Term {
    coef: Rational,
    left: Option<RationalMatrix>,
    m: i64,
    right: Option<RationalMatrix>,
}

impl Term {
    /// Nonzero `(p, P[r,p])` for row `r` of the left factor.
    fn left_row(&self, r: usize, width: usize) -> Vec<(usize, Rational)> {
        match &self.left {
            None => vec![(r, Rational::from_int(1))],
            Some(m) => (0..width).map(|p| (p, m.get(r, p))).filter(|(_, x)| !x.is_zero()).collect(),
        }
    }

    fn right_col(&self, c: usize, height: usize) -> Vec<(usize, Rational)> {
        match &self.right {
            None => vec![(c, Rational::from_int(1))],
            Some(m) => (0..height).map(|q| (q, m.get(q, c))).filter(|(_, x)| !x.is_zero()).collect(),
        }
    }
}

/// Linear constraints on the degree-one, level-`i` operators `X = ρ(L_{1,i})`
/// of a would-be extension of a Virasoro window.
///
/// Writing `L_{γ,i}` for the operators forced by `[L_α, L_{1,i}] =
/// (1 − (i+1)α) L_{α+1,i}`, two routes to `L_{α+β+1,i}` must agree:
///
/// `(1−(i+1)(α+β)) [L_α,[L_β,X]] = (1−(i+1)β)(1+β−(i+1)α) [L_{α+β},X]`.
///
/// Every instance whose intermediate weights stay in the window is imposed.
///
/// The brackets between positive levels then give, for `i + j ≤ level_cap`,
///
/// `(1−(i+j+1)(β+1)) [X_i,[L_β,X_j]] = (1−(j+1)β)((i+1)(β+1)−(j+1)) [L_{β+1},X_{i+j}]`,
///
/// quadratic in the unknowns. It is used to eliminate: a level whose linear
/// solutions form a line is set to zero when the left side with `i = j`
/// cannot be matched by any admissible `X_{2i}`. Larger solution spaces keep
/// the linear bound, so a nonzero dimension is an upper bound; zero is exact.
pub fn extension_space(vir_mod: &WindowedModule, level_cap: i64) -> ExtensionSpace {
    let (lo, hi) = vir_mod.range();
    let slots: Vec<i64> = (lo..hi).collect();
    let shape = |m: i64| (vir_mod.dim(m + 1).unwrap_or(0), vir_mod.dim(m).unwrap_or(0));
    let mut offsets = Vec::with_capacity(slots.len());
    let mut unknowns = 0;
    for &m in &slots {
        offsets.push(unknowns);
        let (r, c) = shape(m);
        unknowns += r * c;
    }
    let var = |m: i64, r: usize, c: usize| offsets[(m - lo) as usize] + r * shape(m).1 + c;
    let l = |a: i64, k: i64| vir_mod.action(&BasisKey::vir(a), k);
    let span = vir_mod.width();

    let mut levels = Vec::new();
    for level in 1..=level_cap {
        let n = |x: i64| Rational::from_int(x);
        let mut echelon = RowEchelon::new(unknowns);
        let mut equations = 0;
        'outer: for alpha in -span..=span {
            for beta in -span..=span {
                let lhs = n(1 - (level + 1) * (alpha + beta));
                let rhs = n(1 - (level + 1) * beta) * n(1 + beta - (level + 1) * alpha);
                for k in lo..=hi {
                    let Some(terms) = relation_terms(&l, k, alpha, beta, &lhs, &rhs) else {
                        continue;
                    };
                    if terms.iter().any(|t| !(lo..hi).contains(&t.m)) {
                        continue;
                    }
                    let target = k + alpha + beta + 1;
                    let rows = vir_mod.dim(target).unwrap_or(0);
                    let cols = vir_mod.dim(k).unwrap_or(0);
                    for r in 0..rows {
                        for c in 0..cols {
                            let mut eq = vec![Rational::from_int(0); unknowns];
                            for t in &terms {
                                let (xr, xc) = shape(t.m);
                                let right = t.right_col(c, xc);
                                for (p, a) in t.left_row(r, xr) {
                                    for (q, b) in &right {
                                        eq[var(t.m, p, *q)] += t.coef.clone() * a.clone() * b.clone();
                                    }
                                }
                            }
                            equations += 1;
                            echelon.insert(eq);
                            if echelon.rank() == unknowns {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        let basis = echelon.kernel();
        levels.push(LevelSolution {
            level,
            unknowns,
            equations,
            rank: echelon.rank(),
            linear_dimension: basis.len(),
            quadratic_forced_zero: false,
            basis,
        });
    }
    let blocks = |v: &[Rational]| -> Vec<RationalMatrix> {
        slots
            .iter()
            .map(|&m| {
                let (r, c) = shape(m);
                let o = offsets[(m - lo) as usize];
                let mut b = RationalMatrix::zeros(r, c);
                for i in 0..r {
                    for j in 0..c {
                        b.set(i, j, v[o + i * c + j].clone());
                    }
                }
                b
            })
            .collect()
    };
    loop {
        let mut changed = false;
        for idx in 0..levels.len() {
            let level = levels[idx].level;
            let double = 2 * level;
            if levels[idx].basis.len() != 1 || double > level_cap {
                continue;
            }
            let x = blocks(&levels[idx].basis[0]);
            let targets: Vec<Vec<RationalMatrix>> =
                levels[(double - 1) as usize].basis.iter().map(|v| blocks(v)).collect();
            let xb = |m: i64| (lo..hi).contains(&m).then(|| &x[(m - lo) as usize]);
            let mut lhs_all = Vec::new();
            let mut rhs_cols: Vec<Vec<Rational>> = vec![Vec::new(); targets.len()];
            for beta in -span..=span {
                let c_lhs = Rational::from_int(1 - (double + 1) * (beta + 1));
                let c_rhs =
                    Rational::from_int((1 - (level + 1) * beta) * ((level + 1) * (beta + 1) - (level + 1)));
                for k in lo..=hi {
                    let Some(lhs) = nested_commutator(&l, &xb, k, beta) else {
                        continue;
                    };
                    let rhs: Option<Vec<RationalMatrix>> = targets
                        .iter()
                        .map(|t| {
                            let tb = |m: i64| (lo..hi).contains(&m).then(|| &t[(m - lo) as usize]);
                            Some(
                                l(beta + 1, k + 1)?.mul(tb(k)?).sub(&tb(k + beta + 1)?.mul(&l(beta + 1, k)?)),
                            )
                        })
                        .collect();
                    let Some(rhs) = rhs else { continue };
                    lhs_all.extend(lhs.scale(&c_lhs).to_dense().into_iter().flatten());
                    for (col, r) in rhs_cols.iter_mut().zip(&rhs) {
                        col.extend(r.scale(&c_rhs).to_dense().into_iter().flatten());
                    }
                }
            }
            if lhs_all.is_empty() {
                continue;
            }
            let mut span_rhs = RowEchelon::new(lhs_all.len());
            for col in rhs_cols {
                span_rhs.insert(col);
            }
            if !span_rhs.contains(&lhs_all) {
                levels[idx].basis.clear();
                levels[idx].quadratic_forced_zero = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let inconclusive = unknowns == 0 || levels.is_empty() || levels.iter().all(|s| s.equations == 0);
    ExtensionSpace { level_cap, range: (lo, hi), levels, inconclusive }
}

/// `[X,[L_β,X]] = 2 X L_β X − X X L_β − L_β X X` on `V_k`, or `None` if a
/// factor leaves the window.
fn nested_commutator<'a>(
    l: &impl Fn(i64, i64) -> Option<RationalMatrix>,
    x: &impl Fn(i64) -> Option<&'a RationalMatrix>,
    k: i64,
    beta: i64,
) -> Option<RationalMatrix> {
    let two = Rational::from_int(2);
    let a = x(k + beta + 1)?.mul(&l(beta, k + 1)?).mul(x(k)?).scale(&two);
    let b = x(k + beta + 1)?.mul(x(k + beta)?).mul(&l(beta, k)?);
    let c = l(beta, k + 2)?.mul(x(k + 1)?).mul(x(k)?);
    Some(a.sub(&b).sub(&c))
}

/// Expands `lhs·[L_α,[L_β,X]] − rhs·[L_{α+β},X]` on `V_k` into terms
/// `P X_m Q`, or `None` if some factor leaves the window.
fn relation_terms(
    l: &impl Fn(i64, i64) -> Option<RationalMatrix>,
    k: i64,
    alpha: i64,
    beta: i64,
    lhs: &Rational,
    rhs: &Rational,
) -> Option<Vec<Term>> {
    let sum = alpha + beta;
    let t = |coef: Rational, left, m, right| Term { coef, left, m, right };
    let terms = vec![
        t(lhs.clone(), Some(l(alpha, k + 1 + beta)?.mul(&l(beta, k + 1)?)), k, None),
        t(-lhs.clone(), Some(l(alpha, k + beta + 1)?), k + beta, Some(l(beta, k)?)),
        t(-lhs.clone(), Some(l(beta, k + alpha + 1)?), k + alpha, Some(l(alpha, k)?)),
        t(lhs.clone(), None, k + sum, Some(l(beta, k + alpha)?.mul(&l(alpha, k)?))),
        t(-rhs.clone(), Some(l(sum, k + 1)?), k, None),
        t(rhs.clone(), None, k + sum, Some(l(sum, k)?)),
    ];
    Some(terms.into_iter().filter(|t| !t.coef.is_zero()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::{build_window, tensor, IntermediateSpec};
    use crate::scalar::{int, rat};

    #[test]
    fn irreducible_window_has_no_extension() {
        let m = build_window(&IntermediateSpec::aab(rat(1, 2), int(2)), -12, 12);
        let ext = extension_space(&m, 2);
        assert!(!ext.inconclusive);
        assert_eq!(ext.dimension(), 0);
    }

    #[test]
    fn doubled_module_has_no_extension() {
        let a = build_window(&IntermediateSpec::aab(rat(1, 2), int(2)), -8, 8);
        let gens: Vec<_> = a.generators().copied().collect();
        let t = WindowedModule::trivial(a.variant(), 2, gens);
        let m = tensor(&a, &t).unwrap();
        assert!(m.dims().iter().all(|&d| d == 2));
        assert!(extension_space(&m, 2).is_trivial());
    }

    #[test]
    fn quadratic_relation_removes_linear_line() {
        for b in [int(0), int(1)] {
            let m = build_window(&IntermediateSpec::aab(rat(1, 2), b), -6, 6);
            let ext = extension_space(&m, 2);
            assert_eq!(ext.levels[0].linear_dimension, 1);
            assert!(ext.levels[0].quadratic_forced_zero);
            assert!(ext.is_trivial());
        }
    }

    #[test]
    fn genuine_level_one_action_survives() {
        // ad L_{1,1} on the adjoint module of B_0/B_2.
        let adjoint = crate::modules::adjoint_window(0, 1, -5, 5).unwrap();
        let vir = adjoint.restrict_generators(|g| g.level() == Some(0));
        let ext = extension_space(&vir, 2);
        assert_eq!(ext.levels[0].dimension(), 1);
        assert!(!ext.levels[0].quadratic_forced_zero);
    }

    #[test]
    fn empty_window_is_inconclusive() {
        let m = WindowedModule::new(m_variant(), int(0), 0, 3, vec![0; 4]).unwrap();
        assert!(extension_space(&m, 2).inconclusive);
    }

    fn m_variant() -> crate::algebra::AlgebraVariant {
        crate::algebra::AlgebraVariant::Virasoro
    }
}
