use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Rational, Scalar};

use super::constants::StructureConstants;
use super::variant::{AlgebraVariant, BasisKey};

/// Finite linear combination of basis keys of one algebra variant.
#[derive(Clone, PartialEq)]
pub struct Element<F> {
    variant: AlgebraVariant,
    terms: BTreeMap<BasisKey, F>,
}

impl<F: Scalar> Element<F> {
    pub fn zero(variant: AlgebraVariant) -> Self {
        Element { variant, terms: BTreeMap::new() }
    }

    pub fn basis(variant: AlgebraVariant, key: BasisKey) -> Result<Self> {
        Self::from_terms(variant, [(key, F::one())])
    }

    /// Builds an element, rejecting keys that are not valid for `variant`.
    pub fn from_terms(
        variant: AlgebraVariant,
        terms: impl IntoIterator<Item = (BasisKey, F)>,
    ) -> Result<Self> {
        variant.validate()?;
        let mut out = Self::zero(variant);
        for (k, c) in terms {
            variant.check_key(&k)?;
            out.add_term(k, c);
        }
        Ok(out)
    }

    pub(crate) fn from_terms_unchecked(
        variant: AlgebraVariant,
        terms: impl IntoIterator<Item = (BasisKey, F)>,
    ) -> Self {
        let mut out = Self::zero(variant);
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn variant(&self) -> AlgebraVariant {
        self.variant
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisKey, &F)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &BasisKey> {
        self.terms.keys()
    }

    pub fn coeff(&self, key: &BasisKey) -> F {
        self.terms.get(key).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_term(&mut self, key: BasisKey, c: F) {
        if c.is_negligible() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing += c;
                if existing.is_negligible() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    fn same_variant(&self, other: &Self) -> Result<()> {
        if self.variant == other.variant {
            Ok(())
        } else {
            Err(Error::MixedVariants { left: self.variant.to_string(), right: other.variant.to_string() })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_variant(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, factor: &F) -> Self {
        let mut out = Self::zero(self.variant);
        for (k, c) in &self.terms {
            out.add_term(*k, c.clone() * factor.clone());
        }
        out
    }

    /// Lie bracket using the variant's own structure constants.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.same_variant(other)?;
        Ok(bracket_with(&self.variant, self, other))
    }

    /// Degrees present among the non-central keys, plus 0 for `C`.
    pub fn degrees(&self) -> Vec<i64> {
        let mut ds: Vec<i64> = self.terms.keys().map(BasisKey::degree).collect();
        ds.dedup();
        ds
    }
}

/// Bilinear extension of `constants` to arbitrary elements.
pub fn bracket_with<F: Scalar, S: StructureConstants<F> + ?Sized>(
    constants: &S,
    x: &Element<F>,
    y: &Element<F>,
) -> Element<F> {
    let mut out = Element::zero(x.variant);
    for (kx, cx) in &x.terms {
        for (ky, cy) in &y.terms {
            let scale = cx.clone() * cy.clone();
            for (k, c) in constants.bracket_basis(kx, ky) {
                out.add_term(k, c * scale.clone());
            }
        }
    }
    out
}

impl<F: Scalar> fmt::Display for Element<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            let text = c.to_string();
            let (negative, magnitude) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            match (n, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let key = k.display_in(self.variant);
            if magnitude == "1" {
                write!(f, "{key}")?;
            } else {
                write!(f, "{magnitude}·{key}")?;
            }
        }
        Ok(())
    }
}

impl<F: Scalar> fmt::Debug for Element<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.variant, self)
    }
}

/// Exact-rational algebra element.
pub type AlgebraElement = Element<Rational>;

/// JSON form: `{"variant": ..., "terms": [{"alpha", "level", "coeff"}], "central": "p/q"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementJson {
    pub variant: AlgebraVariant,
    #[serde(default)]
    pub terms: Vec<TermJson>,
    #[serde(default = "zero_text")]
    pub central: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub alpha: i64,
    #[serde(default)]
    pub level: i64,
    #[serde(default = "one_text")]
    pub coeff: String,
}

fn zero_text() -> String {
    "0".to_string()
}

fn one_text() -> String {
    "1".to_string()
}

impl From<&AlgebraElement> for ElementJson {
    fn from(e: &AlgebraElement) -> Self {
        let mut terms = Vec::new();
        let mut central = Rational::from_int(0);
        for (k, c) in &e.terms {
            match *k {
                BasisKey::Gen { alpha, level } => terms.push(TermJson { alpha, level, coeff: c.to_string() }),
                BasisKey::Central => central = c.clone(),
            }
        }
        ElementJson { variant: e.variant, terms, central: central.to_string() }
    }
}

impl TryFrom<ElementJson> for AlgebraElement {
    type Error = Error;

    fn try_from(j: ElementJson) -> Result<Self> {
        let mut terms = Vec::new();
        for (n, t) in j.terms.into_iter().enumerate() {
            let c = parse_rational(&t.coeff)
                .map_err(|e| Error::parse(format!("terms[{n}].coeff"), e.to_string()))?;
            terms.push((BasisKey::gen(t.alpha, t.level), c));
        }
        let central = parse_rational(&j.central).map_err(|e| Error::parse("central", e.to_string()))?;
        terms.push((BasisKey::Central, central));
        let terms: Vec<_> = terms.into_iter().filter(|(_, c)| !c.is_negligible()).collect();
        AlgebraElement::from_terms(j.variant, terms)
    }
}

impl Serialize for AlgebraElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementJson::from(self).serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn b(alpha: i64, level: i64) -> AlgebraElement {
        AlgebraElement::basis(AlgebraVariant::BlockB, BasisKey::gen(alpha, level)).unwrap()
    }

    #[test]
    fn block_bracket_examples() {
        assert_eq!(b(1, 0).bracket(&b(-1, 0)).unwrap().to_string(), "-2·L_{0,0}");
        let e = b(2, 0).bracket(&b(-2, 0)).unwrap();
        assert_eq!(e.coeff(&BasisKey::gen(0, 0)), int(-4));
        assert_eq!(e.coeff(&BasisKey::Central), int(1));
        assert_eq!(e.to_string(), "-4·L_{0,0} + C");
        assert!(b(0, 2).bracket(&b(0, 3)).unwrap().is_zero());
        assert_eq!(b(1, 1).bracket(&b(2, 0)).unwrap().to_string(), "3·L_{3,1}");
    }

    #[test]
    fn virasoro_display() {
        let v = AlgebraVariant::Virasoro;
        let x = AlgebraElement::basis(v, BasisKey::vir(2)).unwrap();
        let y = AlgebraElement::basis(v, BasisKey::vir(-2)).unwrap();
        let e = x.bracket(&y).unwrap();
        assert_eq!(e.coeff(&BasisKey::Central), rat(1, 2));
        assert_eq!(e.to_string(), "-4·L_{0} + 1/2·C");
    }

    #[test]
    fn mixed_variants_rejected() {
        let x = b(1, 0);
        let y = AlgebraElement::basis(AlgebraVariant::Virasoro, BasisKey::vir(1)).unwrap();
        assert!(matches!(x.bracket(&y), Err(Error::MixedVariants { .. })));
    }

    #[test]
    fn invalid_keys_rejected() {
        assert!(AlgebraElement::basis(AlgebraVariant::BlockB, BasisKey::gen(0, -1)).is_err());
        assert!(AlgebraElement::basis(AlgebraVariant::Winf, BasisKey::gen(0, 0)).is_err());
    }

    #[test]
    fn central_is_central() {
        let c = AlgebraElement::basis(AlgebraVariant::BlockB, BasisKey::Central).unwrap();
        assert!(c.bracket(&b(3, 2)).unwrap().is_zero());
    }

    #[test]
    fn json_form() {
        let e = b(2, 0).bracket(&b(-2, 0)).unwrap();
        let text = serde_json::to_string(&e).unwrap();
        assert_eq!(text, r#"{"variant":"B","terms":[{"alpha":0,"level":0,"coeff":"-4"}],"central":"1"}"#);
        let back: ElementJson = serde_json::from_str(&text).unwrap();
        assert_eq!(AlgebraElement::try_from(back).unwrap(), e);
    }
}
