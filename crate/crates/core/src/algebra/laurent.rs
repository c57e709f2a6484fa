//! Realization of `B` inside `C[x, x⁻¹] ⊗ tC[t] ⊕ CC`, with
//! `L_{α,i} = x^α t^{i+1}`.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

use super::element::Element;
use super::variant::{AlgebraVariant, BasisKey};

/// `x^α f(t) + c·C` with `f ∈ tQ[t]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentOp<F> {
    pub alpha: i64,
    /// Coefficient of `t^p`, `p ≥ 1`. Zero coefficients are not stored.
    pub poly: BTreeMap<u32, F>,
    pub central: F,
}

impl<F: Scalar> LaurentOp<F> {
    pub fn monomial(alpha: i64, power: u32, coeff: F) -> Self {
        assert!(power >= 1, "f must lie in tQ[t]");
        let mut poly = BTreeMap::new();
        if !coeff.is_negligible() {
            poly.insert(power, coeff);
        }
        LaurentOp { alpha, poly, central: F::zero() }
    }

    /// Image of a `B` basis key; `None` for keys outside `B`.
    pub fn from_key(key: &BasisKey) -> Option<Self> {
        match *key {
            BasisKey::Gen { alpha, level } if level >= 0 => {
                Some(Self::monomial(alpha, (level + 1) as u32, F::one()))
            }
            BasisKey::Gen { .. } => None,
            BasisKey::Central => Some(LaurentOp { alpha: 0, poly: BTreeMap::new(), central: F::one() }),
        }
    }

    /// Translation back to `B`: `x^α t^p ↦ L_{α,p-1}`.
    pub fn to_element(&self) -> Element<F> {
        let mut terms: Vec<(BasisKey, F)> = self
            .poly
            .iter()
            .map(|(&p, c)| (BasisKey::gen(self.alpha, i64::from(p) - 1), c.clone()))
            .collect();
        terms.push((BasisKey::Central, self.central.clone()));
        Element::from_terms_unchecked(AlgebraVariant::BlockB, terms)
    }
}

/// `[x^α f, x^β g] = x^{α+β}(β f' g − α f g') + δ_{α+β,0} (α³−α)/6 Res_t(t⁻³ f g) C`.
///
/// The residue picks the coefficient of `t⁻¹` in `t⁻³ f g`, i.e. the `t²`
/// coefficient of `f g`. Central parts of the inputs bracket to zero.
pub fn laurent_bracket<F: Scalar>(a: &LaurentOp<F>, b: &LaurentOp<F>) -> LaurentOp<F> {
    let alpha = F::from_int(a.alpha);
    let beta = F::from_int(b.alpha);
    let mut poly: BTreeMap<u32, F> = BTreeMap::new();
    let mut residue = F::zero();
    for (&p, fa) in &a.poly {
        for (&q, gb) in &b.poly {
            let prod = fa.clone() * gb.clone();
            // β f'g − α f g' on t^p · t^q gives (β p − α q) t^{p+q-1}
            let c = (beta.clone() * F::from_int(i64::from(p)) - alpha.clone() * F::from_int(i64::from(q)))
                * prod.clone();
            *poly.entry(p + q - 1).or_insert_with(F::zero) += c;
            if p + q == 2 {
                residue += prod;
            }
        }
    }
    poly.retain(|_, c| !c.is_negligible());
    let central =
        if a.alpha + b.alpha == 0 { F::from_frac(a.alpha.pow(3) - a.alpha, 6) * residue } else { F::zero() };
    LaurentOp { alpha: a.alpha + b.alpha, poly, central }
}
