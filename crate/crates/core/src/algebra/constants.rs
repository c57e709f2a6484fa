//! Structure constants of every supported variant.

use crate::scalar::Scalar;

use super::variant::{AlgebraVariant, BasisKey};

/// Bracket of two basis elements as a list of `(key, coefficient)` terms.
///
/// Implemented by [`AlgebraVariant`]; test fixtures implement it to inject
/// faults into the axiom sweeps.
pub trait StructureConstants<F: Scalar>: Sync {
    fn variant(&self) -> AlgebraVariant;

    fn bracket_basis(&self, x: &BasisKey, y: &BasisKey) -> Vec<(BasisKey, F)>;
}

impl<F: Scalar> StructureConstants<F> for AlgebraVariant {
    fn variant(&self) -> AlgebraVariant {
        *self
    }

    fn bracket_basis(&self, x: &BasisKey, y: &BasisKey) -> Vec<(BasisKey, F)> {
        let (&BasisKey::Gen { alpha: a, level: i }, &BasisKey::Gen { alpha: b, level: j }) = (x, y) else {
            return Vec::new();
        };
        let mut out: Vec<(BasisKey, F)> = match *self {
            AlgebraVariant::Virasoro => virasoro(a, b),
            AlgebraVariant::BlockB => block(a, i, b, j),
            AlgebraVariant::BlockBbar => block_bar(a, i, b, j),
            AlgebraVariant::W1inf | AlgebraVariant::Winf => differential(a, i, b, j),
            AlgebraVariant::Quotient { n, .. } => {
                let mut terms = block(a, i, b, j);
                terms.retain(|(k, _)| k.level().is_none_or(|l| l <= n));
                terms
            }
        };
        out.retain(|(_, c)| !c.is_negligible());
        out
    }
}

fn int<F: Scalar>(n: i64) -> F {
    F::from_int(n)
}

/// `[L_a, L_b] = (b - a) L_{a+b} + (a³ - a)/12 δ_{a+b,0} C`.
fn virasoro<F: Scalar>(a: i64, b: i64) -> Vec<(BasisKey, F)> {
    let mut out = vec![(BasisKey::vir(a + b), int(b - a))];
    if a + b == 0 {
        out.push((BasisKey::Central, F::from_frac(a * a * a - a, 12)));
    }
    out
}

/// `[L_{a,i}, L_{b,j}] = ((i+1)b - (j+1)a) L_{a+b,i+j} + δ_{a+b,0} δ_{i+j,0} (a³-a)/6 C`.
fn block<F: Scalar>(a: i64, i: i64, b: i64, j: i64) -> Vec<(BasisKey, F)> {
    let mut out = vec![(BasisKey::gen(a + b, i + j), int((i + 1) * b - (j + 1) * a))];
    if a + b == 0 && i + j == 0 {
        out.push((BasisKey::Central, F::from_frac(a * a * a - a, 6)));
    }
    out
}

/// Same linear part as [`block`], central term `a δ_{a+b,0} δ_{i+j,-2} C`.
fn block_bar<F: Scalar>(a: i64, i: i64, b: i64, j: i64) -> Vec<(BasisKey, F)> {
    let mut out = vec![(BasisKey::gen(a + b, i + j), int((i + 1) * b - (j + 1) * a))];
    if a + b == 0 && i + j == -2 {
        out.push((BasisKey::Central, int(a)));
    }
    out
}

/// `[x^a D^i, x^b D^j] = x^{a+b}((D+b)^i D^j - D^i (D+a)^j) + δ_{a+b,0} Ψ C`,
/// with `D = x d/dx`, `(D+b)^i = Σ_k binom(i,k) b^{i-k} D^k`, and the
/// standard 2-cocycle `Ψ = Σ_{m=-a}^{-1} m^i (m+a)^j` for `a ≥ 0`
/// (`-Σ_{m=0}^{-a-1} m^i (m+a)^j` for `a < 0`).
///
/// The closed form `(-1)^i i! j! binom(a+i, i+j+1)` is the same cocycle in
/// the basis `x^{a+i} (d/dx)^i`; in this basis it agrees only for `i+j ≤ 1`
/// and breaks the Jacobi identity beyond.
fn differential<F: Scalar>(a: i64, i: i64, b: i64, j: i64) -> Vec<(BasisKey, F)> {
    let (iu, ju) = (i as u32, j as u32);
    let mut by_power: Vec<F> = vec![F::zero(); (i + j + 1) as usize];
    for k in 0..=iu {
        let c = binomial::<F>(i64::from(iu), k) * int::<F>(b).powi(iu - k);
        by_power[(k + ju) as usize] += c;
    }
    for k in 0..=ju {
        let c = binomial::<F>(i64::from(ju), k) * int::<F>(a).powi(ju - k);
        by_power[(iu + k) as usize] -= c;
    }
    let mut out: Vec<(BasisKey, F)> =
        by_power.into_iter().enumerate().map(|(p, c)| (BasisKey::gen(a + b, p as i64), c)).collect();
    if a + b == 0 {
        let term = |m: i64| int::<F>(m).powi(iu) * int::<F>(m + a).powi(ju);
        let c = if a >= 0 {
            (-a..0).fold(F::zero(), |acc, m| acc + term(m))
        } else {
            (0..-a).fold(F::zero(), |acc, m| acc - term(m))
        };
        out.push((BasisKey::Central, c));
    }
    out
}

/// Generalized binomial `n(n-1)…(n-k+1)/k!`, valid for negative `n`.
pub(crate) fn binomial<F: Scalar>(n: i64, k: u32) -> F {
    let mut num = F::one();
    for t in 0..i64::from(k) {
        num *= int::<F>(n - t);
    }
    num / factorial::<F>(k)
}

pub(crate) fn factorial<F: Scalar>(k: u32) -> F {
    (1..=i64::from(k)).fold(F::one(), |acc, t| acc * int::<F>(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int as q, rat, Rational};

    fn br(v: AlgebraVariant, x: BasisKey, y: BasisKey) -> Vec<(BasisKey, Rational)> {
        v.bracket_basis(&x, &y)
    }

    #[test]
    fn generalized_binomial() {
        assert_eq!(binomial::<Rational>(3, 3), q(1));
        assert_eq!(binomial::<Rational>(2, 3), q(0));
        assert_eq!(binomial::<Rational>(-1, 3), q(-1));
        assert_eq!(binomial::<Rational>(5, 0), q(1));
    }

    #[test]
    fn w_bracket_examples() {
        let w = AlgebraVariant::W1inf;
        assert_eq!(br(w, BasisKey::gen(1, 1), BasisKey::gen(-1, 1)), vec![(BasisKey::gen(0, 1), q(-2))]);
        assert_eq!(
            br(w, BasisKey::gen(2, 1), BasisKey::gen(-2, 1)),
            vec![(BasisKey::gen(0, 1), q(-4)), (BasisKey::Central, q(-1))]
        );
    }

    #[test]
    fn w_cocycle_beyond_first_order() {
        let w = AlgebraVariant::W1inf;
        let central = |x, y| br(w, x, y).into_iter().find(|(k, _)| k.is_central()).map_or(q(0), |(_, c)| c);
        // (-3)² + (-2)² + (-1)²
        assert_eq!(central(BasisKey::gen(3, 2), BasisKey::gen(-3, 0)), q(14));
        assert_eq!(central(BasisKey::gen(-3, 0), BasisKey::gen(3, 2)), q(-14));
        assert_eq!(central(BasisKey::gen(0, 2), BasisKey::gen(0, 3)), q(0));
    }

    #[test]
    fn virasoro_central_term() {
        assert_eq!(
            br(AlgebraVariant::Virasoro, BasisKey::vir(2), BasisKey::vir(-2)),
            vec![(BasisKey::vir(0), q(-4)), (BasisKey::Central, rat(1, 2))]
        );
    }

    #[test]
    fn bbar_central_term() {
        assert_eq!(
            br(AlgebraVariant::BlockBbar, BasisKey::gen(3, -1), BasisKey::gen(-3, -1)),
            vec![(BasisKey::Central, q(3))]
        );
    }

    #[test]
    fn quotient_discards_high_levels() {
        let v = AlgebraVariant::Quotient { m: 0, n: 1 };
        assert!(br(v, BasisKey::gen(1, 1), BasisKey::gen(2, 1)).is_empty());
        assert_eq!(br(v, BasisKey::gen(1, 1), BasisKey::gen(2, 0)), vec![(BasisKey::gen(3, 1), q(3))]);
    }
}
