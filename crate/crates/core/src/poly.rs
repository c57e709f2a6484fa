//! Sparse multivariate polynomials over a fixed, ordered symbol alphabet.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Ordered list of symbol names. Cheap to clone; compared by content.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet(Arc<Vec<String>>);

impl Alphabet {
    pub fn new<S: AsRef<str>>(symbols: &[S]) -> Self {
        Alphabet(Arc::new(symbols.iter().map(|s| s.as_ref().to_string()).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, symbol: &str) -> Result<usize> {
        self.0.iter().position(|s| s == symbol).ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

type Exponents = Vec<u32>;

/// Polynomial with coefficients in `F`. Zero coefficients are never stored;
/// terms iterate in lexicographic exponent order.
#[derive(Clone, PartialEq)]
pub struct Poly<F> {
    alphabet: Alphabet,
    terms: BTreeMap<Exponents, F>,
}

impl<F: Scalar> Poly<F> {
    pub fn zero(alphabet: &Alphabet) -> Self {
        Poly { alphabet: alphabet.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(alphabet: &Alphabet, c: F) -> Self {
        Self::monomial(alphabet, vec![0; alphabet.len()], c)
    }

    pub fn one(alphabet: &Alphabet) -> Self {
        Self::constant(alphabet, F::one())
    }

    pub fn int(alphabet: &Alphabet, n: i64) -> Self {
        Self::constant(alphabet, F::from_int(n))
    }

    pub fn var(alphabet: &Alphabet, symbol: &str) -> Result<Self> {
        let idx = alphabet.index_of(symbol)?;
        let mut exps = vec![0; alphabet.len()];
        exps[idx] = 1;
        Ok(Self::monomial(alphabet, exps, F::one()))
    }

    pub fn monomial(alphabet: &Alphabet, exps: Vec<u32>, c: F) -> Self {
        assert_eq!(exps.len(), alphabet.len(), "exponent vector length");
        let mut p = Self::zero(alphabet);
        p.add_term(exps, c);
        p
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &F)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial is constant.
    pub fn constant_value(&self) -> Option<F> {
        match self.terms.len() {
            0 => Some(F::zero()),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, exps: Exponents, c: F) {
        if c.is_negligible() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(existing) => {
                *existing += c;
                if existing.is_negligible() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch {
                left: self.alphabet.symbols().to_vec(),
                right: other.alphabet.symbols().to_vec(),
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.alphabet);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    pub fn scale(&self, factor: &F) -> Self {
        let mut out = Self::zero(&self.alphabet);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone() * factor.clone());
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(&self.alphabet);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Highest power of `symbol` that occurs; zero for the zero polynomial.
    pub fn degree_in(&self, symbol: &str) -> Result<u32> {
        let idx = self.alphabet.index_of(symbol)?;
        Ok(self.terms.keys().map(|e| e[idx]).max().unwrap_or(0))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// The polynomial in the remaining symbols multiplying `symbol^degree`.
    pub fn coeff(&self, symbol: &str, degree: u32) -> Result<Self> {
        let idx = self.alphabet.index_of(symbol)?;
        let mut out = Self::zero(&self.alphabet);
        for (e, c) in &self.terms {
            if e[idx] == degree {
                let mut e = e.clone();
                e[idx] = 0;
                out.add_term(e, c.clone());
            }
        }
        Ok(out)
    }

    pub fn derive(&self, symbol: &str) -> Result<Self> {
        let idx = self.alphabet.index_of(symbol)?;
        let mut out = Self::zero(&self.alphabet);
        for (e, c) in &self.terms {
            if e[idx] > 0 {
                let mut e2 = e.clone();
                e2[idx] -= 1;
                out.add_term(e2, c.clone() * F::from_int(i64::from(e[idx])));
            }
        }
        Ok(out)
    }

    /// Full evaluation; every symbol that occurs must be assigned.
    pub fn eval(&self, assignment: &BTreeMap<String, F>) -> Result<F> {
        let mut values = Vec::with_capacity(self.alphabet.len());
        for s in self.alphabet.symbols() {
            values.push(assignment.get(s).cloned());
        }
        let mut total = F::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (idx, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let v = values[idx]
                    .as_ref()
                    .ok_or_else(|| Error::UnassignedSymbol(self.alphabet.symbols()[idx].clone()))?;
                term *= v.powi(k);
            }
            total += term;
        }
        Ok(total)
    }

    /// Replaces `symbol` by `value` everywhere.
    pub fn substitute(&self, symbol: &str, value: &Self) -> Result<Self> {
        self.check(value)?;
        let idx = self.alphabet.index_of(symbol)?;
        let max = self.terms.keys().map(|e| e[idx]).max().unwrap_or(0);
        let powers: Vec<Self> = std::iter::successors(Some(Self::one(&self.alphabet)), |p| Some(p * value))
            .take(max as usize + 1)
            .collect();
        let mut out = Self::zero(&self.alphabet);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            rest[idx] = 0;
            let base = Self::monomial(&self.alphabet, rest, c.clone());
            out = &out + &(&base * &powers[e[idx] as usize]);
        }
        Ok(out)
    }

    /// Assigns a scalar to `symbol`, keeping the other symbols free.
    pub fn assign(&self, symbol: &str, value: &F) -> Result<Self> {
        self.substitute(symbol, &Self::constant(&self.alphabet, value.clone()))
    }

    /// `Σ_d coeff(symbol, d) · symbol^d`, the expansion `coeff` inverts.
    pub fn expand_in(&self, symbol: &str) -> Result<Vec<Self>> {
        let deg = self.degree_in(symbol)?;
        (0..=deg).map(|d| self.coeff(symbol, d)).collect()
    }
}

impl<F: Scalar> std::ops::Add for &Poly<F> {
    type Output = Poly<F>;

    /// Panics on alphabet mismatch; use [`Poly::try_add`] to handle it.
    fn add(self, rhs: Self) -> Poly<F> {
        self.try_add(rhs).expect("polynomial alphabets differ")
    }
}

impl<F: Scalar> std::ops::Sub for &Poly<F> {
    type Output = Poly<F>;

    fn sub(self, rhs: Self) -> Poly<F> {
        self.try_sub(rhs).expect("polynomial alphabets differ")
    }
}

impl<F: Scalar> std::ops::Mul for &Poly<F> {
    type Output = Poly<F>;

    fn mul(self, rhs: Self) -> Poly<F> {
        self.try_mul(rhs).expect("polynomial alphabets differ")
    }
}

impl<F: Scalar> std::ops::Neg for &Poly<F> {
    type Output = Poly<F>;

    fn neg(self) -> Poly<F> {
        Poly::neg(self)
    }
}

impl<F: Scalar> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest total degree first reads more naturally
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (n, (e, c)) in terms.into_iter().enumerate() {
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(idx, &k)| {
                    let s = &self.alphabet.symbols()[idx];
                    if k == 1 {
                        s.clone()
                    } else {
                        format!("{s}^{k}")
                    }
                })
                .collect();
            let text = c.to_string();
            let (negative, magnitude) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if n == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            if factors.is_empty() {
                write!(f, "{magnitude}")?;
            } else if magnitude == "1" {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{magnitude}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<F: Scalar> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Serialize for Poly<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(Vec<u32>, String)> =
            self.terms.iter().map(|(e, c)| (e.clone(), c.to_string())).collect();
        let mut st = s.serialize_struct("MultiPoly", 3)?;
        st.serialize_field("alphabet", self.alphabet.symbols())?;
        st.serialize_field("terms", &terms)?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}
