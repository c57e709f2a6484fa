//! Exhaustive sweeps over finite windows of an algebra: Lie axioms,
//! Virasoro embedding, Laurent realization, associated graded structure and
//! generation closures.

use rayon::prelude::*;
use serde::Serialize;

use crate::matrix::RowEchelon;
use crate::scalar::{Rational, Scalar};

use super::constants::StructureConstants;
use super::element::{bracket_with, AlgebraElement, Element};
use super::laurent::{laurent_bracket, LaurentOp};
use super::variant::{AlgebraVariant, BasisKey};

/// Finite window of basis keys: `|α| ≤ degree_bound`, level `≤ level_cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AlgebraWindow {
    pub degree_bound: i64,
    pub level_cap: i64,
}

impl AlgebraWindow {
    pub fn new(degree_bound: i64, level_cap: i64) -> Self {
        AlgebraWindow { degree_bound, level_cap }
    }

    pub fn keys(&self, variant: AlgebraVariant) -> Vec<BasisKey> {
        variant.window_keys(self.degree_bound, self.level_cap)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomViolation {
    pub kind: &'static str,
    pub keys: Vec<String>,
    pub residual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub variant: AlgebraVariant,
    pub window: AlgebraWindow,
    pub basis_size: usize,
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks antisymmetry on all ordered pairs and the Jacobi identity on all
/// basis triples of the window.
///
/// The Jacobi sum is alternating in its arguments once antisymmetry holds,
/// so it is evaluated on strictly increasing triples only; triples with a
/// repeated key reduce to antisymmetry.
pub fn verify_algebra_axioms<F, S>(constants: &S, window: AlgebraWindow) -> AxiomReport
where
    F: Scalar,
    S: StructureConstants<F>,
{
    let variant = constants.variant();
    let keys = window.keys(variant);
    let elems: Vec<Element<F>> =
        keys.iter().map(|k| Element::from_terms_unchecked(variant, [(*k, F::one())])).collect();
    let n = elems.len();
    let br = |x: &Element<F>, y: &Element<F>| bracket_with(constants, x, y);

    let mut violations: Vec<AxiomViolation> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let elems = &elems;
            let keys = &keys;
            (a..n).filter_map(move |b| {
                let sum = br(&elems[a], &elems[b]).try_add(&br(&elems[b], &elems[a])).expect("same variant");
                (!sum.is_zero()).then(|| AxiomViolation {
                    kind: "antisymmetry",
                    keys: vec![keys[a].display_in(variant), keys[b].display_in(variant)],
                    residual: sum.to_string(),
                })
            })
        })
        .collect();

    let jacobi: Vec<AxiomViolation> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let elems = &elems;
            let keys = &keys;
            (a + 1..n).flat_map(move |b| {
                let yz_cache = br(&elems[a], &elems[b]);
                (b + 1..n).filter_map(move |c| {
                    let (x, y, z) = (&elems[a], &elems[b], &elems[c]);
                    let t1 = br(x, &br(y, z));
                    let t2 = br(y, &br(z, x));
                    let t3 = br(z, &yz_cache);
                    let sum = t1.try_add(&t2).and_then(|s| s.try_add(&t3)).expect("same variant");
                    (!sum.is_zero()).then(|| AxiomViolation {
                        kind: "jacobi",
                        keys: [a, b, c].iter().map(|&t| keys[t].display_in(variant)).collect(),
                        residual: sum.to_string(),
                    })
                })
            })
        })
        .collect();
    violations.extend(jacobi);

    AxiomReport {
        variant,
        window,
        basis_size: n,
        pairs_checked: n * (n + 1) / 2,
        triples_checked: if n >= 3 { n * (n - 1) * (n - 2) / 6 } else { 0 },
        violations,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VirConsistency {
    pub degree_bound: i64,
    /// Rescaling with `C_B ↦ c0 · C_Vir`, when one exists.
    pub c0: Option<String>,
    pub unique: bool,
    pub homomorphism: bool,
    pub quotient_matches: bool,
    pub pairs_checked: usize,
    pub mismatches: Vec<String>,
}

impl VirConsistency {
    pub fn passed(&self) -> bool {
        self.homomorphism && self.unique && self.quotient_matches
    }

    pub fn c0_value(&self) -> Option<Rational> {
        self.c0.as_deref().and_then(|s| crate::scalar::parse_rational(s).ok())
    }
}

/// Finds the central rescaling making `L_{α,0} ↦ L_α` a homomorphism from
/// `span{L_{α,0}, C} ⊂ B` onto the Virasoro algebra, and confirms `B̃_{0,0}`
/// brackets agree under the same rescaling.
pub fn vir_consistency(degree_bound: i64) -> VirConsistency {
    let b = AlgebraVariant::BlockB;
    let v = AlgebraVariant::Virasoro;
    let q = AlgebraVariant::Quotient { m: 0, n: 0 };
    let mut mismatches = Vec::new();
    let mut central_pairs: Vec<(Rational, Rational, i64)> = Vec::new();
    let mut q_central: Vec<(Rational, Rational, i64)> = Vec::new();
    let mut pairs = 0;
    for a in -degree_bound..=degree_bound {
        for c in -degree_bound..=degree_bound {
            pairs += 1;
            let (x, y) = (BasisKey::vir(a), BasisKey::vir(c));
            let in_b = StructureConstants::<Rational>::bracket_basis(&b, &x, &y);
            let in_v = StructureConstants::<Rational>::bracket_basis(&v, &x, &y);
            let in_q = StructureConstants::<Rational>::bracket_basis(&q, &x, &y);
            let lin = |terms: &[(BasisKey, Rational)]| {
                terms.iter().filter(|(k, _)| !k.is_central()).cloned().collect::<Vec<_>>()
            };
            let cen = |terms: &[(BasisKey, Rational)]| {
                terms
                    .iter()
                    .find(|(k, _)| k.is_central())
                    .map_or_else(|| Rational::from_int(0), |(_, c)| c.clone())
            };
            if lin(&in_b) != lin(&in_v) {
                mismatches.push(format!("linear part differs for (L_{a}, L_{c})"));
            }
            if lin(&in_q) != lin(&in_v) {
                mismatches.push(format!("quotient linear part differs for (L_{a}, L_{c})"));
            }
            if a + c != 0 && (!cen(&in_b).is_negligible() || !cen(&in_v).is_negligible()) {
                mismatches.push(format!("central term for (L_{a}, L_{c}) with a+b != 0"));
            }
            central_pairs.push((cen(&in_b), cen(&in_v), a));
            q_central.push((cen(&in_q), cen(&in_v), a));
        }
    }

    let c0 = central_pairs.iter().find(|(cb, _, _)| !cb.is_negligible()).map(|(cb, cv, _)| cv / cb);
    let unique = c0.is_some();
    let fits = |c: &Option<Rational>, list: &[(Rational, Rational, i64)]| {
        list.iter().all(|(cb, cv, _)| match c {
            Some(c) => &(cb * c) == cv,
            None => cv.is_negligible(),
        })
    };
    let homomorphism = mismatches.iter().all(|m| m.starts_with("quotient")) && fits(&c0, &central_pairs);
    let quotient_matches = !mismatches.iter().any(|m| m.starts_with("quotient")) && fits(&c0, &q_central);
    VirConsistency {
        degree_bound,
        c0: c0.map(|c| c.to_string()),
        unique,
        homomorphism,
        quotient_matches,
        pairs_checked: pairs,
        mismatches,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairCheck {
    pub check: &'static str,
    pub window: AlgebraWindow,
    pub pairs_checked: usize,
    pub mismatches: Vec<String>,
}

impl PairCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the Laurent-polynomial bracket with the abstract bracket of `B`
/// on every pair of window keys, central terms included.
pub fn realization_check(window: AlgebraWindow) -> PairCheck {
    let b = AlgebraVariant::BlockB;
    let keys = window.keys(b);
    let mut mismatches = Vec::new();
    let mut pairs = 0;
    for x in &keys {
        for y in &keys {
            pairs += 1;
            let (lx, ly) = (
                LaurentOp::<Rational>::from_key(x).expect("B key"),
                LaurentOp::<Rational>::from_key(y).expect("B key"),
            );
            let via_laurent = laurent_bracket(&lx, &ly).to_element();
            let direct = bracket_with(
                &b,
                &AlgebraElement::from_terms_unchecked(b, [(*x, Rational::from_int(1))]),
                &AlgebraElement::from_terms_unchecked(b, [(*y, Rational::from_int(1))]),
            );
            if via_laurent != direct {
                mismatches.push(format!("[{x}, {y}]: realization {via_laurent} vs {direct}"));
            }
        }
    }
    PairCheck { check: "laurent_realization", window, pairs_checked: pairs, mismatches }
}

/// The top filtration component of `[x^α D^{i+1}, x^β D^{j+1}]` in `W_∞`
/// must be `((i+1)β − (j+1)α) x^{α+β} D^{i+j+1}`, with nothing above it.
pub fn associated_graded_check(window: AlgebraWindow) -> PairCheck {
    let w = AlgebraVariant::Winf;
    let mut mismatches = Vec::new();
    let mut pairs = 0;
    let bound = window.degree_bound;
    for a in -bound..=bound {
        for b in -bound..=bound {
            for i in 0..=window.level_cap {
                for j in 0..=window.level_cap {
                    pairs += 1;
                    let terms: Vec<(BasisKey, Rational)> =
                        w.bracket_basis(&BasisKey::gen(a, i + 1), &BasisKey::gen(b, j + 1));
                    let top_level = i + j + 1;
                    let mut top = Rational::from_int(0);
                    for (k, c) in &terms {
                        match k.level() {
                            Some(l) if l == top_level => top = c.clone(),
                            Some(l) if l > top_level => mismatches.push(format!(
                                "(α,i)=({a},{i}), (β,j)=({b},{j}): term above filtration degree, D^{l}"
                            )),
                            _ => {}
                        }
                    }
                    let expected = Rational::from_int((i + 1) * b - (j + 1) * a);
                    if top != expected {
                        mismatches.push(format!(
                            "(α,i)=({a},{i}), (β,j)=({b},{j}): top coefficient {top}, B constant {expected}"
                        ));
                    }
                }
            }
        }
    }
    PairCheck { check: "associated_graded", window, pairs_checked: pairs, mismatches }
}

/// How [`generation_closure`] grows the span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureMode {
    /// Brackets of span elements with each other: the generated subalgebra.
    Subalgebra,
    /// Brackets of span elements with every window basis key: the ideal.
    Ideal,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosureReport {
    pub mode: ClosureMode,
    pub window: AlgebraWindow,
    pub dimension: usize,
    pub iterations: usize,
    /// Window keys whose basis vector lies in the closure.
    pub reached: Vec<BasisKey>,
}

impl ClosureReport {
    pub fn reaches(&self, key: &BasisKey) -> bool {
        self.reached.contains(key)
    }
}

/// Span closure of `seeds` under brackets, restricted to the window.
///
/// A bracket whose support leaves the window is discarded, so the result is
/// the window part of the subalgebra (or ideal) generated by the seeds.
pub fn generation_closure<F, S>(
    constants: &S,
    seeds: &[Element<F>],
    window: AlgebraWindow,
    mode: ClosureMode,
) -> ClosureReport
where
    F: Scalar,
    S: StructureConstants<F>,
{
    let variant = constants.variant();
    let keys = window.keys(variant);
    let index = |k: &BasisKey| keys.binary_search(k).ok();
    let to_vec = |e: &Element<F>| -> Option<Vec<F>> {
        let mut v = vec![F::zero(); keys.len()];
        for (k, c) in e.terms() {
            v[index(k)?] = c.clone();
        }
        Some(v)
    };
    let to_elem = |v: &[F]| {
        Element::from_terms_unchecked(variant, v.iter().enumerate().map(|(n, c)| (keys[n], c.clone())))
    };
    let basis_elems: Vec<Element<F>> =
        keys.iter().map(|k| Element::from_terms_unchecked(variant, [(*k, F::one())])).collect();

    let mut span = RowEchelon::new(keys.len());
    for s in seeds {
        if let Some(v) = to_vec(s) {
            span.insert(v);
        }
    }
    let mut iterations = 0;
    loop {
        iterations += 1;
        let before = span.rank();
        let current: Vec<Element<F>> = span.rows().iter().map(|r| to_elem(r)).collect();
        let partners: &[Element<F>] = match mode {
            ClosureMode::Subalgebra => &current,
            ClosureMode::Ideal => &basis_elems,
        };
        let mut fresh = Vec::new();
        for x in &current {
            for y in partners {
                let z = bracket_with(constants, x, y);
                if z.is_zero() {
                    continue;
                }
                if let Some(v) = to_vec(&z) {
                    fresh.push(v);
                }
            }
        }
        for v in fresh {
            span.insert(v);
        }
        if span.rank() == before {
            break;
        }
    }
    let reached = keys
        .iter()
        .enumerate()
        .filter(|(n, _)| {
            let mut e = vec![F::zero(); keys.len()];
            e[*n] = F::one();
            span.contains(&e)
        })
        .map(|(_, k)| *k)
        .collect();
    ClosureReport { mode, window, dimension: span.rank(), iterations, reached }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vir_consistency_finds_one_half() {
        let r = vir_consistency(10);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.c0.as_deref(), Some("1/2"));
        assert_eq!(vir_consistency(2).c0.as_deref(), Some("1/2"));
    }

    #[test]
    fn small_sweeps_pass() {
        let w = AlgebraWindow::new(2, 1);
        for v in [
            AlgebraVariant::Virasoro,
            AlgebraVariant::BlockB,
            AlgebraVariant::BlockBbar,
            AlgebraVariant::W1inf,
            AlgebraVariant::Winf,
            AlgebraVariant::Quotient { m: 0, n: 1 },
            AlgebraVariant::Quotient { m: 1, n: 2 },
        ] {
            let r = verify_algebra_axioms::<Rational, _>(&v, w);
            assert!(r.passed(), "{v}: {:?}", r.violations.first());
        }
    }

    #[test]
    fn realization_and_graded_small() {
        assert!(realization_check(AlgebraWindow::new(2, 2)).passed());
        assert!(associated_graded_check(AlgebraWindow::new(2, 2)).passed());
    }
}
