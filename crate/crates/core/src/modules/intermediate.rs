//! Modules of the intermediate series: `A_{a,b}`, `A(a)` and `B(a)`, each
//! with basis `{x_k}` and trivial central action.

use serde::{Deserialize, Serialize};

use crate::algebra::{vir_central_rescale, AlgebraVariant, BasisKey};
use crate::scalar::{is_integer, Rational, Scalar};
use crate::RationalMatrix;

use super::window::WindowedModule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// `L_i x_k = (a + k + b i) x_{i+k}`.
    Aab,
    /// `L_i x_k = (i + k) x_{i+k}` for `k ≠ 0`, `L_i x_0 = i(i + a) x_i`.
    Aa,
    /// `L_i x_k = k x_{i+k}` for `k ≠ -i`, `L_i x_{-i} = -i(i + a) x_0`.
    Ba,
}

impl std::str::FromStr for Family {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "Aab" => Ok(Family::Aab),
            "Aa" => Ok(Family::Aa),
            "Ba" => Ok(Family::Ba),
            other => Err(crate::Error::parse("family", format!("`{other}` is not one of Aab, Aa, Ba"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntermediateSpec {
    pub family: Family,
    pub a: Rational,
    pub b: Rational,
}

impl IntermediateSpec {
    pub fn aab(a: Rational, b: Rational) -> Self {
        IntermediateSpec { family: Family::Aab, a, b }
    }

    pub fn a_of(a: Rational) -> Self {
        IntermediateSpec { family: Family::Aa, a, b: Rational::from_int(0) }
    }

    pub fn b_of(a: Rational) -> Self {
        IntermediateSpec { family: Family::Ba, a, b: Rational::from_int(0) }
    }

    /// Weight offset: `L_0 x_k = (offset + k) x_k`.
    pub fn offset(&self) -> Rational {
        match self.family {
            Family::Aab => self.a.clone(),
            Family::Aa | Family::Ba => Rational::from_int(0),
        }
    }

    /// Irreducibility by the classical rule: `A_{a,b}` is irreducible iff
    /// `a ∉ Z` or `b ∉ {0, 1}`. `A(a)` and `B(a)` always contain a proper
    /// submodule (`span{x_k : k ≠ 0}` and `C x_0` respectively).
    pub fn irreducible_by_criterion(&self) -> bool {
        match self.family {
            Family::Aab => {
                !is_integer(&self.a) || (self.b != Rational::from_int(0) && self.b != Rational::from_int(1))
            }
            Family::Aa | Family::Ba => false,
        }
    }

    pub fn label(&self) -> String {
        match self.family {
            Family::Aab => format!("A_{{{},{}}}", self.a, self.b),
            Family::Aa => format!("A({})", self.a),
            Family::Ba => format!("B({})", self.a),
        }
    }
}

/// Coefficient and target index of `generator · x_k`. Generators of
/// positive level and the central element act as zero.
pub fn act_intermediate(spec: &IntermediateSpec, generator: &BasisKey, k: i64) -> (Rational, i64) {
    let (i, level) = match *generator {
        BasisKey::Gen { alpha, level } => (alpha, level),
        BasisKey::Central => return (Rational::from_int(0), k),
    };
    let target = k + i;
    if level != 0 {
        return (Rational::from_int(0), target);
    }
    let n = Rational::from_int;
    let c = match spec.family {
        Family::Aab => spec.a.clone() + n(k) + spec.b.clone() * n(i),
        Family::Aa if k == 0 => n(i) * (n(i) + spec.a.clone()),
        Family::Aa => n(i + k),
        Family::Ba if k == -i => -n(i) * (n(i) + spec.a.clone()),
        Family::Ba => n(k),
    };
    (c, target)
}

/// Materializes the module on `[lo, hi]` as a Virasoro module with 1×1
/// matrices for every `L_i` that can act inside the window.
pub fn build_window(spec: &IntermediateSpec, lo: i64, hi: i64) -> WindowedModule {
    let width = (hi - lo + 1).max(0) as usize;
    let mut m = WindowedModule::new(AlgebraVariant::Virasoro, spec.offset(), lo, hi, vec![1; width])
        .expect("consistent shape");
    let span = (hi - lo).max(0);
    for i in -span..=span {
        let g = BasisKey::vir(i);
        m.declare(g);
        for k in lo..=hi {
            if !m.in_range(k + i) {
                continue;
            }
            let (c, _) = act_intermediate(spec, &g, k);
            m.set_action(g, k, RationalMatrix::scalar(1, c)).expect("shapes agree");
        }
    }
    m
}

/// Regards a Virasoro window as a `B`-module on which every generator of
/// positive level (up to `level_cap`) acts by zero. The Virasoro central
/// charge `c` becomes `c/2` on the central element of `B`.
pub fn extend_trivially(vir_mod: &WindowedModule, level_cap: i64) -> WindowedModule {
    let mut m = vir_mod.clone().with_variant(AlgebraVariant::BlockB);
    m.set_central(vir_mod.central().clone() * vir_central_rescale());
    let span = m.width();
    for level in 1..=level_cap {
        for alpha in -span..=span {
            m.declare(BasisKey::gen(alpha, level));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn action_examples() {
        let s = IntermediateSpec::aab(rat(1, 2), int(2));
        assert_eq!(act_intermediate(&s, &BasisKey::vir(2), 3), (rat(15, 2), 5));
        let s = IntermediateSpec::a_of(rat(1, 3));
        assert_eq!(act_intermediate(&s, &BasisKey::vir(3), 0), (int(10), 3));
        let s = IntermediateSpec::b_of(rat(1, 3));
        assert_eq!(act_intermediate(&s, &BasisKey::vir(3), -3), (int(-10), 0));
        for k in -3..3 {
            assert_eq!(act_intermediate(&s, &BasisKey::gen(1, 1), k).0, int(0));
        }
    }

    #[test]
    fn window_entries() {
        let m = build_window(&IntermediateSpec::aab(int(0), int(0)), -3, 3);
        assert_eq!(m.action(&BasisKey::vir(1), 0).unwrap().get(0, 0), int(0));
        let m = build_window(&IntermediateSpec::aab(rat(1, 2), int(0)), -3, 3);
        assert_eq!(m.action(&BasisKey::vir(0), 2).unwrap().get(0, 0), rat(5, 2));
        let m = build_window(&IntermediateSpec::b_of(int(0)), -3, 3);
        assert_eq!(m.action(&BasisKey::vir(1), -1).unwrap().get(0, 0), int(-1));
        assert!(m.action(&BasisKey::vir(1), 3).is_none());
    }

    #[test]
    fn criterion() {
        assert!(IntermediateSpec::aab(rat(1, 2), int(1)).irreducible_by_criterion());
        assert!(!IntermediateSpec::aab(int(0), int(1)).irreducible_by_criterion());
        assert!(IntermediateSpec::aab(int(0), int(2)).irreducible_by_criterion());
        assert!(!IntermediateSpec::aab(int(3), int(0)).irreducible_by_criterion());
    }
}
