use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraVariant, BasisKey};
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Rational, Scalar};
use crate::RationalMatrix;

/// A finite range `[lo, hi]` of weight spaces `V_k` (weight `a + k`) of a
/// graded module, with explicit action matrices.
///
/// The action of a declared generator `g` of degree `d` on `V_k` is a
/// `dim V_{k+d} × dim V_k` matrix. Entries that were never set are zero;
/// entries whose target leaves the window are unknown. A module that is
/// `closed_above` has no weight spaces above `hi` (likewise below), so
/// actions leaving the window on that side are known to vanish.
#[derive(Clone, PartialEq)]
pub struct WindowedModule {
    variant: AlgebraVariant,
    offset: Rational,
    lo: i64,
    hi: i64,
    dims: Vec<usize>,
    generators: BTreeSet<BasisKey>,
    actions: BTreeMap<(BasisKey, i64), RationalMatrix>,
    unknown: BTreeSet<(BasisKey, i64)>,
    central: Rational,
    closed_above: bool,
    closed_below: bool,
}

impl WindowedModule {
    pub fn new(
        variant: AlgebraVariant,
        offset: Rational,
        lo: i64,
        hi: i64,
        dims: Vec<usize>,
    ) -> Result<Self> {
        let width = if hi >= lo { (hi - lo + 1) as usize } else { 0 };
        if dims.len() != width {
            return Err(Error::DimensionMismatch { expected: width, actual: dims.len() });
        }
        Ok(WindowedModule {
            variant,
            offset,
            lo,
            hi,
            dims,
            generators: BTreeSet::new(),
            actions: BTreeMap::new(),
            unknown: BTreeSet::new(),
            central: Rational::from_int(0),
            closed_above: false,
            closed_below: false,
        })
    }

    /// The `dim`-dimensional trivial module concentrated in degree 0.
    pub fn trivial(
        variant: AlgebraVariant,
        dim: usize,
        generators: impl IntoIterator<Item = BasisKey>,
    ) -> Self {
        let mut m = Self::new(variant, Rational::from_int(0), 0, 0, vec![dim]).expect("consistent shape");
        m.closed_above = true;
        m.closed_below = true;
        for g in generators {
            m.declare(g);
        }
        m
    }

    pub fn variant(&self) -> AlgebraVariant {
        self.variant
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn central(&self) -> &Rational {
        &self.central
    }

    pub fn set_central(&mut self, value: Rational) {
        self.central = value;
    }

    pub fn closed_above(&self) -> bool {
        self.closed_above
    }

    pub fn closed_below(&self) -> bool {
        self.closed_below
    }

    pub fn set_closed(&mut self, above: bool, below: bool) {
        self.closed_above = above;
        self.closed_below = below;
    }

    pub fn in_range(&self, k: i64) -> bool {
        self.lo <= k && k <= self.hi
    }

    /// `dim V_k`: known inside the window, zero beyond a closed edge,
    /// unknown otherwise.
    pub fn dim(&self, k: i64) -> Option<usize> {
        if self.in_range(k) {
            Some(self.dims[(k - self.lo) as usize])
        } else if (k > self.hi && self.closed_above) || (k < self.lo && self.closed_below) {
            Some(0)
        } else {
            None
        }
    }

    pub fn generators(&self) -> impl Iterator<Item = &BasisKey> {
        self.generators.iter()
    }

    pub fn is_declared(&self, g: &BasisKey) -> bool {
        g.is_central() || self.generators.contains(g)
    }

    pub fn declare(&mut self, g: BasisKey) {
        if !g.is_central() {
            self.generators.insert(g);
        }
    }

    /// Marks the action of `g` on `V_k` as unknown even though both weight
    /// spaces are in the window.
    pub fn mark_unknown(&mut self, g: BasisKey, k: i64) {
        self.actions.remove(&(g, k));
        self.unknown.insert((g, k));
    }

    pub fn set_action(&mut self, g: BasisKey, k: i64, matrix: RationalMatrix) -> Result<()> {
        if g.is_central() {
            return Err(Error::ModuleMismatch("the central element acts by the declared scalar".into()));
        }
        let src = self
            .dim(k)
            .filter(|_| self.in_range(k))
            .ok_or_else(|| Error::ModuleMismatch(format!("source index {k} outside window")))?;
        let tgt = self.dim(k + g.degree()).ok_or_else(|| {
            Error::ModuleMismatch(format!("target index {} outside window", k + g.degree()))
        })?;
        if matrix.shape() != (tgt, src) {
            return Err(Error::ModuleMismatch(format!(
                "action of {g} on V_{k}: expected {tgt}x{src}, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        self.declare(g);
        self.unknown.remove(&(g, k));
        if matrix.is_zero() {
            self.actions.remove(&(g, k));
        } else {
            self.actions.insert((g, k), matrix);
        }
        Ok(())
    }

    /// Matrix of `g : V_k → V_{k+deg g}`, when determined by the window.
    pub fn action(&self, g: &BasisKey, k: i64) -> Option<RationalMatrix> {
        let src = self.dim(k)?;
        if g.is_central() {
            return Some(RationalMatrix::scalar(src, self.central.clone()));
        }
        if !self.generators.contains(g) || self.unknown.contains(&(*g, k)) {
            return None;
        }
        let tgt = self.dim(k + g.degree())?;
        Some(self.actions.get(&(*g, k)).cloned().unwrap_or_else(|| RationalMatrix::zeros(tgt, src)))
    }

    /// Stored nonzero action matrices.
    pub fn stored_actions(&self) -> impl Iterator<Item = (&(BasisKey, i64), &RationalMatrix)> {
        self.actions.iter()
    }

    /// Copy keeping only the generators accepted by `keep`.
    pub fn restrict_generators(&self, keep: impl Fn(&BasisKey) -> bool) -> Self {
        let mut out = self.clone();
        out.generators.retain(|g| keep(g));
        out.actions.retain(|(g, _), _| keep(g));
        out.unknown.retain(|(g, _)| keep(g));
        out
    }

    pub(crate) fn with_variant(mut self, variant: AlgebraVariant) -> Self {
        self.variant = variant;
        self
    }

    /// Largest `|degree|` of a generator that can act inside the window.
    pub fn width(&self) -> i64 {
        (self.hi - self.lo).max(0)
    }
}

impl std::fmt::Debug for WindowedModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WindowedModule")
            .field("variant", &self.variant)
            .field("offset", &self.offset.to_string())
            .field("range", &(self.lo, self.hi))
            .field("dims", &self.dims)
            .field("generators", &self.generators.len())
            .field("stored_actions", &self.actions.len())
            .finish()
    }
}

/// JSON form of a [`WindowedModule`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    pub variant: AlgebraVariant,
    pub offset: String,
    pub range: (i64, i64),
    pub dims: Vec<usize>,
    #[serde(default = "zero_text")]
    pub central: String,
    #[serde(default)]
    pub closed_above: bool,
    #[serde(default)]
    pub closed_below: bool,
    pub generators: Vec<KeyJson>,
    #[serde(default)]
    pub actions: Vec<ActionJson>,
    #[serde(default)]
    pub unknown: Vec<(KeyJson, i64)>,
}

fn zero_text() -> String {
    "0".into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KeyJson {
    pub alpha: i64,
    pub level: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionJson {
    pub generator: KeyJson,
    pub source: i64,
    pub matrix: RationalMatrix,
}

fn key_json(k: &BasisKey) -> KeyJson {
    match *k {
        BasisKey::Gen { alpha, level } => KeyJson { alpha, level },
        BasisKey::Central => unreachable!("central element is not a declared generator"),
    }
}

impl From<&WindowedModule> for ModuleJson {
    fn from(m: &WindowedModule) -> Self {
        ModuleJson {
            variant: m.variant,
            offset: m.offset.to_string(),
            range: (m.lo, m.hi),
            dims: m.dims.clone(),
            central: m.central.to_string(),
            closed_above: m.closed_above,
            closed_below: m.closed_below,
            generators: m.generators.iter().map(key_json).collect(),
            actions: m
                .actions
                .iter()
                .map(|((g, k), mat)| ActionJson { generator: key_json(g), source: *k, matrix: mat.clone() })
                .collect(),
            unknown: m.unknown.iter().map(|(g, k)| (key_json(g), *k)).collect(),
        }
    }
}

impl TryFrom<ModuleJson> for WindowedModule {
    type Error = Error;

    fn try_from(j: ModuleJson) -> Result<Self> {
        let offset = parse_rational(&j.offset).map_err(|e| Error::parse("offset", e.to_string()))?;
        let central = parse_rational(&j.central).map_err(|e| Error::parse("central", e.to_string()))?;
        let (lo, hi) = j.range;
        let mut m = WindowedModule::new(j.variant, offset, lo, hi, j.dims)
            .map_err(|e| Error::parse("dims", e.to_string()))?;
        m.central = central;
        m.closed_above = j.closed_above;
        m.closed_below = j.closed_below;
        for (n, g) in j.generators.iter().enumerate() {
            let key = BasisKey::gen(g.alpha, g.level);
            j.variant.check_key(&key).map_err(|e| Error::parse(format!("generators[{n}]"), e.to_string()))?;
            m.declare(key);
        }
        for (n, a) in j.actions.into_iter().enumerate() {
            let key = BasisKey::gen(a.generator.alpha, a.generator.level);
            if !m.generators.contains(&key) {
                return Err(Error::parse(
                    format!("actions[{n}].generator"),
                    format!("{} is not a declared generator", key.display_in(j.variant)),
                ));
            }
            m.set_action(key, a.source, a.matrix)
                .map_err(|e| Error::parse(format!("actions[{n}]"), e.to_string()))?;
        }
        for (g, k) in j.unknown {
            m.mark_unknown(BasisKey::gen(g.alpha, g.level), k);
        }
        Ok(m)
    }
}

impl Serialize for WindowedModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModuleJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for WindowedModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ModuleJson::deserialize(d)?;
        WindowedModule::try_from(j).map_err(serde::de::Error::custom)
    }
}
