//! Highest-weight modules over the finite-level quotients `B̃_{0,n}`.
//!
//! A vector of `V(Λ)` is a combination of PBW monomials
//! `L_{−α_1,i_1} ⋯ L_{−α_r,i_r} v_Λ` with factors in canonical order:
//! `(α, i)` nonincreasing lexicographically.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{
    generation_closure, AlgebraVariant, AlgebraWindow, BasisKey, ClosureMode, ClosureReport, Element,
    StructureConstants,
};
use crate::error::{Error, Result};
use crate::modules::WindowedModule;
use crate::scalar::{format_rational, Rational};
use crate::RationalMatrix;

/// Values of `Λ` on `L_{0,i}` (`0 ≤ i ≤ n`) and on `C`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightFunctional {
    #[serde(with = "rational_list")]
    pub lambda: Vec<Rational>,
    #[serde(with = "crate::scalar::serde_rational", default = "Rational::zero")]
    pub c: Rational,
}

mod rational_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "crate::scalar::serde_rational")] Rational);
        let v: Vec<Wrap> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|w| w.0).collect())
    }
}

impl WeightFunctional {
    pub fn new(lambda: Vec<Rational>, c: Rational) -> Self {
        WeightFunctional { lambda, c }
    }

    pub fn zero(n: usize) -> Self {
        WeightFunctional::new(vec![Rational::zero(); n + 1], Rational::zero())
    }

    /// Level cap `n` this functional is defined for.
    pub fn level_cap(&self) -> i64 {
        self.lambda.len() as i64 - 1
    }
}

/// Canonically ordered factor list; `(α, i)` stands for `L_{−α,i}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PbwMonomial(Vec<(i64, i64)>);

impl PbwMonomial {
    pub fn vacuum() -> Self {
        PbwMonomial(Vec::new())
    }

    /// Sorts `factors` into canonical order.
    pub fn from_factors(mut factors: Vec<(i64, i64)>) -> Self {
        factors.sort_by(|a, b| b.cmp(a));
        PbwMonomial(factors)
    }

    pub fn factors(&self) -> &[(i64, i64)] {
        &self.0
    }

    pub fn depth(&self) -> i64 {
        self.0.iter().map(|f| f.0).sum()
    }

    pub fn is_canonical(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, i) in &self.0 {
            write!(f, "L_{{-{a},{i}}}")?;
        }
        write!(f, "v")
    }
}

impl Serialize for PbwMonomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub type PbwVector = BTreeMap<PbwMonomial, Rational>;

fn add_into(acc: &mut PbwVector, m: PbwMonomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match acc.entry(m) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn add_scaled(acc: &mut PbwVector, v: &PbwVector, c: &Rational) {
    for (m, x) in v {
        add_into(acc, m.clone(), x.clone() * c.clone());
    }
}

/// All canonical monomials of the given depth, in increasing order. Their
/// number is the count of partitions of `depth` into parts carrying one of
/// `n + 1` colors.
pub fn verma_basis(n: i64, depth: i64) -> Vec<PbwMonomial> {
    fn rec(rest: i64, max: (i64, i64), n: i64, cur: &mut Vec<(i64, i64)>, out: &mut Vec<PbwMonomial>) {
        if rest == 0 {
            out.push(PbwMonomial(cur.clone()));
            return;
        }
        for a in (1..=rest.min(max.0)).rev() {
            let top = if a == max.0 { max.1 } else { n };
            for i in (0..=top).rev() {
                cur.push((a, i));
                rec(rest - a, (a, i), n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if depth >= 0 && n >= 0 {
        rec(depth, (depth, n), n, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

/// The Verma module `V(Λ)` over `B̃_{0,n}`, with memoized straightening.
pub struct VermaModule {
    n: i64,
    weight: WeightFunctional,
    variant: AlgebraVariant,
    cache: Mutex<HashMap<(BasisKey, PbwMonomial), PbwVector>>,
}

impl fmt::Debug for VermaModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VermaModule").field("n", &self.n).field("weight", &self.weight).finish()
    }
}

impl VermaModule {
    pub fn new(weight: WeightFunctional) -> Result<Self> {
        let n = weight.level_cap();
        if n < 0 {
            return Err(Error::parse("lambda", "needs at least one value"));
        }
        Ok(VermaModule {
            n,
            variant: AlgebraVariant::quotient(0, n)?,
            weight,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn level_cap(&self) -> i64 {
        self.n
    }

    pub fn weight(&self) -> &WeightFunctional {
        &self.weight
    }

    pub fn variant(&self) -> AlgebraVariant {
        self.variant
    }

    fn check(&self, g: &BasisKey) -> Result<()> {
        self.variant.check_key(g)
    }

    /// `g · v` for a basis element `g` of `B̃_{0,n}`.
    pub fn act(&self, g: &BasisKey, v: &PbwVector) -> Result<PbwVector> {
        self.check(g)?;
        let mut out = PbwVector::new();
        for (m, c) in v {
            add_scaled(&mut out, &self.act_monomial(g, m), c);
        }
        Ok(out)
    }

    /// Normal form of `X_1 ⋯ X_r v_Λ` for negative generators `X_s`.
    pub fn normal_order(&self, word: &[BasisKey]) -> Result<PbwVector> {
        let mut v = PbwVector::from([(PbwMonomial::vacuum(), Rational::one())]);
        for g in word.iter().rev() {
            if g.degree() >= 0 {
                return Err(Error::InvalidKey { key: g.to_string(), variant: "negative part".into() });
            }
            v = self.act(g, &v)?;
        }
        Ok(v)
    }

    fn act_monomial(&self, g: &BasisKey, m: &PbwMonomial) -> PbwVector {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&(*g, m.clone())) {
            return hit.clone();
        }
        let out = self.act_uncached(g, m);
        self.cache.lock().expect("cache lock").insert((*g, m.clone()), out.clone());
        out
    }

    fn act_uncached(&self, g: &BasisKey, m: &PbwMonomial) -> PbwVector {
        let mut out = PbwVector::new();
        let (alpha, level) = match *g {
            BasisKey::Central => {
                add_into(&mut out, m.clone(), self.weight.c.clone());
                return out;
            }
            BasisKey::Gen { alpha, level } => (alpha, level),
        };
        let Some((&head, tail)) = m.0.split_first() else {
            match alpha {
                a if a < 0 => add_into(&mut out, PbwMonomial(vec![(-a, level)]), Rational::one()),
                0 => add_into(&mut out, m.clone(), self.weight.lambda[level as usize].clone()),
                _ => {}
            }
            return out;
        };
        if alpha < 0 && (-alpha, level) >= head {
            let mut f = Vec::with_capacity(m.0.len() + 1);
            f.push((-alpha, level));
            f.extend_from_slice(&m.0);
            add_into(&mut out, PbwMonomial(f), Rational::one());
            return out;
        }
        // g X rest = X (g rest) + [g, X] rest
        let x = BasisKey::gen(-head.0, head.1);
        let rest = PbwMonomial(tail.to_vec());
        for (m2, c) in self.act_monomial(g, &rest) {
            add_scaled(&mut out, &self.act_monomial(&x, &m2), &c);
        }
        let bracket: Vec<(BasisKey, Rational)> = self.variant.bracket_basis(g, &x);
        for (k, c) in bracket {
            add_scaled(&mut out, &self.act_monomial(&k, &rest), &c);
        }
        out
    }

    /// Matrix of `g` from depth `d` to depth `d − deg g` in the canonical
    /// bases returned by [`verma_basis`].
    pub fn action_matrix(&self, g: &BasisKey, depth: i64) -> Result<RationalMatrix> {
        self.check(g)?;
        let src = verma_basis(self.n, depth);
        let tgt = verma_basis(self.n, depth - g.degree());
        let index: HashMap<&PbwMonomial, usize> = tgt.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut mat = RationalMatrix::zeros(tgt.len(), src.len());
        for (c, m) in src.iter().enumerate() {
            for (m2, x) in self.act_monomial(g, m) {
                let r = index[&m2];
                mat.add_at(r, c, x);
            }
        }
        Ok(mat)
    }

    /// Positive generators used to test for singular vectors.
    pub fn positive_generators(&self) -> Vec<BasisKey> {
        let mut out: Vec<BasisKey> = (0..=self.n).map(|i| BasisKey::gen(1, i)).collect();
        out.push(BasisKey::gen(2, 0));
        out
    }

    /// Basis of the vectors of depth `d` killed by every positive generator.
    pub fn singular_vectors(&self, depth: i64) -> Result<Vec<PbwVector>> {
        let basis = verma_basis(self.n, depth);
        if depth == 0 {
            return Ok(vec![PbwVector::from([(PbwMonomial::vacuum(), Rational::one())])]);
        }
        let blocks = self
            .positive_generators()
            .iter()
            .map(|g| self.action_matrix(g, depth))
            .collect::<Result<Vec<_>>>()?;
        let kernel = RationalMatrix::vstack(&blocks).reduce().kernel;
        Ok(kernel
            .into_iter()
            .map(|v| {
                let mut out = PbwVector::new();
                for (m, c) in basis.iter().zip(v) {
                    add_into(&mut out, m.clone(), c);
                }
                out
            })
            .collect())
    }

    /// Whether every `L_{α,i}` with `1 ≤ α ≤ max_degree` kills `v`.
    pub fn annihilated_by_positive(&self, v: &PbwVector, max_degree: i64) -> bool {
        (1..=max_degree)
            .flat_map(|a| (0..=self.n).map(move |i| BasisKey::gen(a, i)))
            .all(|g| self.act(&g, v).map(|w| w.is_empty()).unwrap_or(false))
    }

    /// The weight spaces of depth `0..=depth` as a window `[−depth, 0]`,
    /// closed above, with every generator of degree `|α| ≤ depth`.
    pub fn window(&self, depth: i64) -> Result<WindowedModule> {
        let dims = (-depth..=0).map(|k| verma_basis(self.n, -k).len()).collect();
        let mut m = WindowedModule::new(self.variant, self.weight.lambda[0].clone(), -depth, 0, dims)?;
        m.set_closed(true, false);
        m.set_central(self.weight.c.clone());
        for alpha in -depth..=depth {
            for level in 0..=self.n {
                let g = BasisKey::gen(alpha, level);
                m.declare(g);
                for k in -depth..=0 {
                    let t = k + alpha;
                    if t < -depth {
                        continue;
                    }
                    let mat = if t > 0 {
                        RationalMatrix::zeros(0, m.dim(k).unwrap_or(0))
                    } else {
                        self.action_matrix(&g, -k)?
                    };
                    m.set_action(g, k, mat)?;
                }
            }
        }
        Ok(m)
    }
}

/// Straightens `X_1 ⋯ X_r v_Λ` (negative generators only) by repeatedly
/// swapping an out-of-order adjacent pair picked by `choose(count)`, which
/// must return an index below `count`. Used to test independence of the
/// straightening strategy.
pub fn straighten_by(
    module: &VermaModule,
    word: &[BasisKey],
    mut choose: impl FnMut(usize) -> usize,
) -> Result<PbwVector> {
    let mut pending: Vec<(Vec<(i64, i64)>, Rational)> = Vec::new();
    let mut factors = Vec::new();
    for g in word {
        module.check(g)?;
        match *g {
            BasisKey::Gen { alpha, level } if alpha < 0 => factors.push((-alpha, level)),
            _ => return Err(Error::InvalidKey { key: g.to_string(), variant: "negative part".into() }),
        }
    }
    pending.push((factors, Rational::one()));
    let mut out = PbwVector::new();
    while let Some((w, c)) = pending.pop() {
        let inversions: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&j| w[j] < w[j + 1]).collect();
        if inversions.is_empty() {
            add_into(&mut out, PbwMonomial(w), c);
            continue;
        }
        let j = inversions[choose(inversions.len())];
        let (x, y) = (w[j], w[j + 1]);
        let mut swapped = w.clone();
        swapped.swap(j, j + 1);
        pending.push((swapped, c.clone()));
        let bracket: Vec<(BasisKey, Rational)> =
            module.variant.bracket_basis(&BasisKey::gen(-x.0, x.1), &BasisKey::gen(-y.0, y.1));
        for (k, b) in bracket {
            let mut shorter = w[..j].to_vec();
            shorter.push((-k.degree(), k.level().expect("negative degree")));
            shorter.extend_from_slice(&w[j + 2..]);
            pending.push((shorter, c.clone() * b));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct QuasifiniteReport {
    pub level_cap: i64,
    /// `dim V(Λ)_{−d}` for `d = 0..=depth_cap`.
    pub dims: Vec<usize>,
}

/// Weight-space dimensions of the Verma modules over `B̃_{0,n}`.
pub fn quasifinite_report(n: i64, depth_cap: i64) -> QuasifiniteReport {
    QuasifiniteReport { level_cap: n, dims: (0..=depth_cap).map(|d| verma_basis(n, d).len()).collect() }
}

/// Checks that `{L_{1,i}} ∪ {L_{2,0}}` generates the positive part of
/// `B̃_{0,n}` up to the given degree.
pub fn positive_generation(n: i64, degree_bound: i64) -> Result<(ClosureReport, bool)> {
    let variant = AlgebraVariant::quotient(0, n)?;
    let mut seeds: Vec<Element<Rational>> =
        (0..=n).map(|i| Element::basis(variant, BasisKey::gen(1, i))).collect::<Result<_>>()?;
    seeds.push(Element::basis(variant, BasisKey::gen(2, 0))?);
    let report =
        generation_closure(&variant, &seeds, AlgebraWindow::new(degree_bound, n), ClosureMode::Subalgebra);
    let full = (1..=degree_bound)
        .flat_map(|a| (0..=n).map(move |i| BasisKey::gen(a, i)))
        .all(|k| report.reaches(&k));
    Ok((report, full))
}

/// Renders a vector as `(monomial, coefficient)` pairs in canonical order.
pub fn vector_terms(v: &PbwVector) -> Vec<(String, String)> {
    v.iter().map(|(m, c)| (m.to_string(), format_rational(c))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn module(lambda: Vec<Rational>, c: Rational) -> VermaModule {
        VermaModule::new(WeightFunctional::new(lambda, c)).unwrap()
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(verma_basis(1, 1).len(), 2);
        assert_eq!(verma_basis(1, 2).len(), 5);
        assert_eq!(verma_basis(1, 3).len(), 10);
        assert_eq!(verma_basis(3, 0), vec![PbwMonomial::vacuum()]);
        assert!(verma_basis(2, 5).iter().all(PbwMonomial::is_canonical));
    }

    #[test]
    fn reordering_produces_bracket_term() {
        let v = module(vec![int(1), int(2)], int(0));
        let a = v.normal_order(&[BasisKey::gen(-1, 0), BasisKey::gen(-1, 1)]).unwrap();
        let b = v.normal_order(&[BasisKey::gen(-1, 1), BasisKey::gen(-1, 0)]).unwrap();
        assert_eq!(a.len(), 2);
        let mut diff = b.clone();
        add_scaled(&mut diff, &a, &int(-1));
        assert_eq!(diff, PbwVector::from([(PbwMonomial(vec![(2, 1)]), int(-1))]));
        let sq = v.normal_order(&[BasisKey::gen(-1, 0), BasisKey::gen(-1, 0)]).unwrap();
        assert_eq!(sq, PbwVector::from([(PbwMonomial(vec![(1, 0), (1, 0)]), int(1))]));
    }

    #[test]
    fn action_examples() {
        let lam = vec![rat(2, 3), rat(-1, 5)];
        let v = module(lam.clone(), rat(7, 2));
        let x = v.normal_order(&[BasisKey::gen(-1, 0)]).unwrap();
        let y = v.act(&BasisKey::gen(1, 0), &x).unwrap();
        assert_eq!(y, PbwVector::from([(PbwMonomial::vacuum(), rat(-4, 3))]));
        let vac = PbwVector::from([(PbwMonomial::vacuum(), int(1))]);
        assert_eq!(v.act(&BasisKey::gen(0, 1), &vac).unwrap()[&PbwMonomial::vacuum()], lam[1]);
        let c = v.act(&BasisKey::Central, &x).unwrap();
        assert_eq!(c.values().next().unwrap(), &rat(7, 2));
    }

    #[test]
    fn singular_vector_examples() {
        let generic = module(vec![rat(3, 7), rat(-5, 11)], rat(2, 9));
        assert!(generic.singular_vectors(1).unwrap().is_empty());
        assert_eq!(generic.singular_vectors(0).unwrap().len(), 1);
        let zero = module(vec![int(0), int(0)], int(0));
        let sv = zero.singular_vectors(1).unwrap();
        assert!(!sv.is_empty());
        assert!(sv.iter().all(|v| zero.annihilated_by_positive(v, 3)));
    }

    #[test]
    fn positive_part_generated() {
        for n in 0..=2 {
            assert!(positive_generation(n, 5).unwrap().1);
        }
    }

    #[test]
    fn dims_table() {
        assert_eq!(quasifinite_report(1, 3).dims, vec![1, 2, 5, 10]);
        assert_eq!(quasifinite_report(0, 4).dims, vec![1, 1, 2, 3, 5]);
    }

    #[test]
    fn weight_json() {
        let w: WeightFunctional = serde_json::from_str(r#"{"lambda": ["1/2", 3], "c": "-2"}"#).unwrap();
        assert_eq!(w.lambda, vec![rat(1, 2), int(3)]);
        assert_eq!(serde_json::to_string(&w).unwrap(), r#"{"lambda":["1/2","3"],"c":"-2"}"#);
    }
}
