use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The algebras the engine knows how to bracket in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraVariant {
    /// `L_i`, `C` with the classical Virasoro relations.
    Virasoro,
    /// Block-type algebra `B`: `L_{α,i}` with `i ≥ 0`, and `C`.
    BlockB,
    /// The larger Block algebra: `L_{α,i}` with `i ≥ -1`, and `C`.
    BlockBbar,
    /// Differential operators `x^α D^i` (`i ≥ 0`) with central extension.
    W1inf,
    /// The subalgebra of `W1inf` spanned by `x^α D^i` with `i ≥ 1`, and `C`.
    Winf,
    /// `B_m / B_{n+1}` with `0 ≤ m ≤ n`. Carries `C` only when `m = 0`.
    Quotient { m: i64, n: i64 },
}

impl AlgebraVariant {
    pub fn quotient(m: i64, n: i64) -> Result<Self> {
        let v = AlgebraVariant::Quotient { m, n };
        v.validate()?;
        Ok(v)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            AlgebraVariant::Quotient { m, n } if m < 0 || m > n => Err(Error::InvalidVariant(format!(
                "quotient levels must satisfy 0 <= m <= n, got m={m}, n={n}"
            ))),
            _ => Ok(()),
        }
    }

    /// Smallest admissible level.
    pub fn min_level(&self) -> i64 {
        match *self {
            AlgebraVariant::Virasoro | AlgebraVariant::BlockB | AlgebraVariant::W1inf => 0,
            AlgebraVariant::BlockBbar => -1,
            AlgebraVariant::Winf => 1,
            AlgebraVariant::Quotient { m, .. } => m,
        }
    }

    /// Largest admissible level, if bounded.
    pub fn max_level(&self) -> Option<i64> {
        match *self {
            AlgebraVariant::Virasoro => Some(0),
            AlgebraVariant::Quotient { n, .. } => Some(n),
            _ => None,
        }
    }

    pub fn has_central(&self) -> bool {
        !matches!(self, AlgebraVariant::Quotient { m, .. } if *m > 0)
    }

    pub fn is_valid(&self, key: &BasisKey) -> bool {
        match *key {
            BasisKey::Central => self.has_central(),
            BasisKey::Gen { level, .. } => {
                level >= self.min_level() && self.max_level().is_none_or(|max| level <= max)
            }
        }
    }

    pub fn check_key(&self, key: &BasisKey) -> Result<()> {
        if self.is_valid(key) {
            Ok(())
        } else {
            Err(Error::InvalidKey { key: key.to_string(), variant: self.to_string() })
        }
    }

    /// Admissible levels up to `cap` (inclusive).
    pub fn levels_up_to(&self, cap: i64) -> Vec<i64> {
        let hi = self.max_level().map_or(cap, |m| m.min(cap));
        (self.min_level()..=hi).collect()
    }

    /// All basis keys with `|α| ≤ degree_bound` and level `≤ level_cap`,
    /// followed by `C` when the variant has it.
    pub fn window_keys(&self, degree_bound: i64, level_cap: i64) -> Vec<BasisKey> {
        let mut keys = Vec::new();
        for alpha in -degree_bound..=degree_bound {
            for level in self.levels_up_to(level_cap) {
                keys.push(BasisKey::gen(alpha, level));
            }
        }
        if self.has_central() {
            keys.push(BasisKey::Central);
        }
        keys
    }
}

impl fmt::Display for AlgebraVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraVariant::Virasoro => write!(f, "Vir"),
            AlgebraVariant::BlockB => write!(f, "B"),
            AlgebraVariant::BlockBbar => write!(f, "Bbar"),
            AlgebraVariant::W1inf => write!(f, "W1inf"),
            AlgebraVariant::Winf => write!(f, "Winf"),
            AlgebraVariant::Quotient { m, n } => write!(f, "Quotient({m},{n})"),
        }
    }
}

impl FromStr for AlgebraVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "Vir" | "Virasoro" => return Ok(AlgebraVariant::Virasoro),
            "B" | "BlockB" => return Ok(AlgebraVariant::BlockB),
            "Bbar" | "BlockBbar" => return Ok(AlgebraVariant::BlockBbar),
            "W1inf" => return Ok(AlgebraVariant::W1inf),
            "Winf" => return Ok(AlgebraVariant::Winf),
            _ => {}
        }
        let inner = t
            .strip_prefix("Quotient(")
            .or_else(|| t.strip_prefix("Q("))
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidVariant(t.to_string()))?;
        let (m, n) = inner.split_once(',').ok_or_else(|| Error::InvalidVariant(t.to_string()))?;
        let parse = |x: &str| x.trim().parse::<i64>().map_err(|_| Error::InvalidVariant(t.to_string()));
        AlgebraVariant::quotient(parse(m)?, parse(n)?)
    }
}

impl Serialize for AlgebraVariant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for AlgebraVariant {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A graded basis element: `L_{α,i}` (or `x^α D^i` for the W variants), or
/// the central element. Ordered by degree, then level, with `C` last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisKey {
    Gen { alpha: i64, level: i64 },
    Central,
}

impl BasisKey {
    pub const fn gen(alpha: i64, level: i64) -> Self {
        BasisKey::Gen { alpha, level }
    }

    /// Virasoro-style generator `L_α = L_{α,0}`.
    pub const fn vir(alpha: i64) -> Self {
        BasisKey::Gen { alpha, level: 0 }
    }

    /// Degree in the `Z`-gradation; `C` has degree zero.
    pub fn degree(&self) -> i64 {
        match *self {
            BasisKey::Gen { alpha, .. } => alpha,
            BasisKey::Central => 0,
        }
    }

    pub fn level(&self) -> Option<i64> {
        match *self {
            BasisKey::Gen { level, .. } => Some(level),
            BasisKey::Central => None,
        }
    }

    pub fn is_central(&self) -> bool {
        matches!(self, BasisKey::Central)
    }

    pub fn display_in(&self, variant: AlgebraVariant) -> String {
        match (*self, variant) {
            (BasisKey::Central, _) => "C".to_string(),
            (BasisKey::Gen { alpha, .. }, AlgebraVariant::Virasoro) => format!("L_{{{alpha}}}"),
            (BasisKey::Gen { alpha, level }, AlgebraVariant::W1inf | AlgebraVariant::Winf) => {
                format!("x^{{{alpha}}}D^{{{level}}}")
            }
            (BasisKey::Gen { alpha, level }, _) => format!("L_{{{alpha},{level}}}"),
        }
    }
}

impl fmt::Display for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in(AlgebraVariant::BlockB))
    }
}

impl Serialize for BasisKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_constraints() {
        assert!(AlgebraVariant::BlockB.is_valid(&BasisKey::gen(3, 0)));
        assert!(!AlgebraVariant::BlockB.is_valid(&BasisKey::gen(3, -1)));
        assert!(AlgebraVariant::BlockBbar.is_valid(&BasisKey::gen(3, -1)));
        assert!(!AlgebraVariant::Winf.is_valid(&BasisKey::gen(0, 0)));
        assert!(!AlgebraVariant::Virasoro.is_valid(&BasisKey::gen(0, 1)));
        let q = AlgebraVariant::quotient(1, 2).unwrap();
        assert!(q.is_valid(&BasisKey::gen(0, 2)));
        assert!(!q.is_valid(&BasisKey::gen(0, 0)));
        assert!(!q.is_valid(&BasisKey::Central));
        assert!(AlgebraVariant::quotient(2, 1).is_err());
    }

    #[test]
    fn names_round_trip() {
        for v in [
            AlgebraVariant::Virasoro,
            AlgebraVariant::BlockB,
            AlgebraVariant::BlockBbar,
            AlgebraVariant::W1inf,
            AlgebraVariant::Winf,
            AlgebraVariant::Quotient { m: 0, n: 2 },
        ] {
            assert_eq!(v.to_string().parse::<AlgebraVariant>().unwrap(), v);
        }
        assert!("Q(3,1)".parse::<AlgebraVariant>().is_err());
        assert!("sl2".parse::<AlgebraVariant>().is_err());
    }

    #[test]
    fn key_order_is_degree_then_level_then_central() {
        let mut keys =
            vec![BasisKey::Central, BasisKey::gen(1, 0), BasisKey::gen(-1, 2), BasisKey::gen(-1, 0)];
        keys.sort();
        assert_eq!(
            keys,
            vec![BasisKey::gen(-1, 0), BasisKey::gen(-1, 2), BasisKey::gen(1, 0), BasisKey::Central]
        );
    }
}
