use blockalg::algebra::{bracket_with, AlgebraElement, StructureConstants};
use blockalg::scalar::rat;
use blockalg::verma::{straighten_by, PbwVector, VermaModule, WeightFunctional};
use blockalg::{AlgebraVariant, Alphabet, BasisKey, MultiPoly, Rational, RationalMatrix};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = RationalMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r).prop_map(|rows| {
            RationalMatrix::from_dense(
                rows.into_iter().map(|row| row.into_iter().map(|x| rat(x, 1)).collect()).collect(),
            )
        })
    })
}

fn xyz() -> Alphabet {
    Alphabet::new(&["x", "y", "z"])
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    proptest::collection::vec(((0u32..3, 0u32..3, 0u32..2), small_rational()), 0..5).prop_map(|terms| {
        let a = xyz();
        terms.into_iter().fold(MultiPoly::zero(&a), |acc, ((i, j, k), c)| {
            &acc + &MultiPoly::monomial(&a, vec![i, j, k], c)
        })
    })
}

fn variant() -> impl Strategy<Value = AlgebraVariant> {
    prop_oneof![
        Just(AlgebraVariant::BlockB),
        Just(AlgebraVariant::BlockBbar),
        Just(AlgebraVariant::Virasoro),
        Just(AlgebraVariant::W1inf),
        Just(AlgebraVariant::Winf),
        Just(AlgebraVariant::Quotient { m: 0, n: 2 }),
        Just(AlgebraVariant::Quotient { m: 1, n: 3 }),
    ]
}

fn key_in(v: AlgebraVariant) -> impl Strategy<Value = BasisKey> {
    let lo = v.min_level();
    let hi = v.max_level().unwrap_or(3).min(lo + 3);
    (-5i64..=5, lo..=hi).prop_map(|(a, i)| BasisKey::gen(a, i))
}

fn element(v: AlgebraVariant) -> impl Strategy<Value = AlgebraElement> {
    proptest::collection::vec((key_in(v), small_rational()), 1..4)
        .prop_map(move |terms| AlgebraElement::from_terms(v, terms).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_is_annihilated(m in matrix(5, 6)) {
        let red = m.reduce();
        prop_assert_eq!(red.rank + red.kernel.len(), m.cols());
        for v in &red.kernel {
            prop_assert!(m.mul_vec(v).iter().all(|x| *x == rat(0, 1)));
        }
        prop_assert_eq!(red.rank, m.transpose().rank());
    }

    #[test]
    fn solve_recovers_consistent_systems(m in matrix(4, 4), seed in proptest::collection::vec(-3i64..=3, 4)) {
        let x: Vec<Rational> = seed.into_iter().take(m.cols()).map(|n| rat(n, 1)).collect();
        prop_assume!(x.len() == m.cols());
        let rhs = m.mul_vec(&x);
        let y = m.solve(&rhs).unwrap().expect("consistent system");
        prop_assert_eq!(m.mul_vec(&y), rhs);
    }

    #[test]
    fn polynomial_ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn coefficients_reconstruct_the_polynomial(p in poly(), symbol in prop::sample::select(vec!["x", "y", "z"])) {
        let a = p.alphabet().clone();
        let s = MultiPoly::var(&a, symbol).unwrap();
        let rebuilt = p
            .expand_in(symbol)
            .unwrap()
            .iter()
            .enumerate()
            .fold(MultiPoly::zero(&a), |acc, (d, c)| &acc + &(c * &s.pow(d as u32)));
        prop_assert_eq!(rebuilt, p);
    }

    #[test]
    fn brackets_are_graded_and_antisymmetric((v, x, y) in variant().prop_flat_map(|v| (Just(v), key_in(v), key_in(v)))) {
        let xy: Vec<(BasisKey, Rational)> = v.bracket_basis(&x, &y);
        let yx: Vec<(BasisKey, Rational)> = v.bracket_basis(&y, &x);
        let negated: Vec<(BasisKey, Rational)> = yx.into_iter().map(|(k, c)| (k, -c)).collect();
        prop_assert_eq!(&xy, &negated);
        for (k, _) in &xy {
            match k {
                BasisKey::Central => prop_assert_eq!(x.degree() + y.degree(), 0),
                _ => prop_assert_eq!(k.degree(), x.degree() + y.degree()),
            }
            prop_assert!(v.is_valid(k));
        }
    }

    #[test]
    fn jacobi_on_random_elements((v, x, y, z) in variant().prop_flat_map(|v| (Just(v), element(v), element(v), element(v)))) {
        let br = |a: &AlgebraElement, b: &AlgebraElement| bracket_with(&v, a, b);
        let sum = br(&x, &br(&y, &z))
            .try_add(&br(&y, &br(&z, &x)))
            .unwrap()
            .try_add(&br(&z, &br(&x, &y)))
            .unwrap();
        prop_assert!(sum.is_zero(), "Jacobi residual {}", sum);
    }
}

fn weight(n: usize) -> impl Strategy<Value = WeightFunctional> {
    (proptest::collection::vec(small_rational(), n + 1), small_rational())
        .prop_map(|(lambda, c)| WeightFunctional::new(lambda, c))
}

fn negative_word(n: i64) -> impl Strategy<Value = Vec<BasisKey>> {
    proptest::collection::vec((1i64..=3, 0..=n).prop_map(|(a, i)| BasisKey::gen(-a, i)), 0..5)
}

fn sub(a: &PbwVector, b: &PbwVector) -> PbwVector {
    let mut out = a.clone();
    for (m, c) in b {
        let e = out.entry(m.clone()).or_insert_with(|| rat(0, 1));
        *e -= c.clone();
    }
    out.retain(|_, c| *c != rat(0, 1));
    out
}

fn setup(n: i64) -> impl Strategy<Value = (VermaModule, Vec<BasisKey>)> {
    (weight(n as usize), negative_word(n)).prop_map(|(w, word)| (VermaModule::new(w).unwrap(), word))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn straightening_is_confluent(
        n in 1i64..=2,
        word in negative_word(2),
        choices in proptest::collection::vec(any::<usize>(), 64),
    ) {
        let word: Vec<BasisKey> = word.into_iter().filter(|k| k.level().unwrap() <= n).collect();
        let module = VermaModule::new(WeightFunctional::zero(n as usize)).unwrap();
        let mut it = choices.into_iter().cycle();
        let random = straighten_by(&module, &word, |count| it.next().unwrap() % count).unwrap();
        prop_assert_eq!(random, module.normal_order(&word).unwrap());
    }

    #[test]
    fn action_respects_brackets(
        (module, word) in (1i64..=2).prop_flat_map(setup),
        x in (-3i64..=3, 0i64..=2),
        y in (-3i64..=3, 0i64..=2),
    ) {
        let n = module.level_cap();
        let (x, y) = (BasisKey::gen(x.0, x.1.min(n)), BasisKey::gen(y.0, y.1.min(n)));
        let v = module.normal_order(&word).unwrap();
        let xy_v = module.act(&x, &module.act(&y, &v).unwrap()).unwrap();
        let yx_v = module.act(&y, &module.act(&x, &v).unwrap()).unwrap();
        let mut expected = PbwVector::new();
        for (k, c) in StructureConstants::<Rational>::bracket_basis(&module.variant(), &x, &y) {
            let kv = module.act(&k, &v).unwrap();
            expected = sub(&expected, &kv.into_iter().map(|(m, a)| (m, -a * c.clone())).collect());
        }
        prop_assert_eq!(sub(&xy_v, &yx_v), expected);
    }

    #[test]
    fn weights_add((module, word) in (0i64..=2).prop_flat_map(setup), g in (-3i64..=3, 0i64..=2)) {
        let g = BasisKey::gen(g.0, g.1.min(module.level_cap()));
        let depth: i64 = word.iter().map(|k| -k.degree()).sum();
        let v = module.normal_order(&word).unwrap();
        for m in module.act(&g, &v).unwrap().keys() {
            prop_assert_eq!(m.depth(), depth - g.degree());
        }
    }
}
