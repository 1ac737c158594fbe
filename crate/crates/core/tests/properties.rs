use num_bigint::BigInt;
use proptest::prelude::*;

use mwf_core::cyclotomic::CyclotomicInteger;
use mwf_core::distribution::{same_at_q, BallQuery, Distribution};
use mwf_core::expr::{parse, Poly};
use mwf_core::random::{self, SbShape};
use mwf_core::schwartz::SbFunction;
use mwf_core::{FieldElement, LocalField, MotivicScalar};

fn cyc(p: u32) -> impl Strategy<Value = CyclotomicInteger> {
    prop::collection::vec(-20i64..20, p as usize - 1)
        .prop_map(move |c| CyclotomicInteger::from_coords(p, c.into_iter().map(BigInt::from).collect()).unwrap())
}

fn field(q: u32) -> LocalField {
    LocalField::with_q(q).unwrap()
}

fn elem(k: &LocalField, seed: u64, lo: i64, hi: i64) -> FieldElement {
    random::element(k, &mut random::rng(seed), lo, hi)
}

fn poly_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("x".to_string()),
        Just("y".to_string()),
        Just("t".to_string()),
        Just("t^-1".to_string()),
        (1i64..4).prop_map(|n| n.to_string()),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}*{b}")),
            (inner, 1u32..3).prop_map(|(a, e)| format!("({a})^{e}")),
        ]
    })
}

fn formula_text() -> impl Strategy<Value = String> {
    (poly_text(), poly_text(), 1i64..4, 0u32..3).prop_map(|(a, b, n, shape)| match shape {
        0 => format!("ord({a}) <= min(ord({b}), {n})"),
        1 => format!("{n} | ord({a}) and ac({b}) = [1]"),
        _ => format!("not (ord({a}) - 2*ord({b}) > {n} or ac({a}) = [0])"),
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cyclotomic_ring_axioms(a in cyc(3), b in cyc(3), c in cyc(3)) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&CyclotomicInteger::one(3)), a.clone());
    }

    #[test]
    fn cyclotomic_ring_axioms_p5(a in cyc(5), b in cyc(5)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul_zeta_pow(5), a.clone());
        prop_assert_eq!(a.mul_zeta_pow(2).mul_zeta_pow(3), a);
    }

    #[test]
    fn eval_at_q_is_a_ring_homomorphism(seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3, 4, 5])) {
        let k = field(q);
        let mut rng = random::rng(seed);
        let a = random::scalar(k.p(), &mut rng).add(&random::scalar(k.p(), &mut rng));
        let b = random::scalar(k.p(), &mut rng).mul(&MotivicScalar::geometric(k.p(), 1));
        let qq = q as u64;
        prop_assert_eq!(a.add(&b).eval_at_q(qq).unwrap(), a.eval_at_q(qq).unwrap().add(&b.eval_at_q(qq).unwrap()));
        prop_assert_eq!(a.mul(&b).eval_at_q(qq).unwrap(), a.eval_at_q(qq).unwrap().mul(&b.eval_at_q(qq).unwrap()));
    }

    #[test]
    fn field_is_a_ring_and_ord_is_ultrametric(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let k = field(3);
        let (x, y, z) = (elem(&k, s1, -3, 4), elem(&k, s2, -3, 4), elem(&k, s3, -2, 3));
        prop_assert_eq!(k.add(&x, &y), k.add(&y, &x));
        prop_assert_eq!(k.mul(&x, &y), k.mul(&y, &x));
        prop_assert_eq!(k.mul(&x, &k.add(&y, &z)), k.add(&k.mul(&x, &y), &k.mul(&x, &z)));
        prop_assert!(k.sub(&x, &x).is_zero());
        let o = |v: &FieldElement| v.ord_or_max().unwrap();
        prop_assert!(o(&k.add(&x, &y)) >= o(&x).min(o(&y)));
        if !x.is_zero() && !y.is_zero() {
            prop_assert_eq!(o(&k.mul(&x, &y)), o(&x) + o(&y));
        }
        prop_assert_eq!(k.parse(&k.format(&x)).unwrap(), x);
    }

    #[test]
    fn character_is_additive(s1 in any::<u64>(), s2 in any::<u64>(), q in prop::sample::select(vec![2u32, 3, 4, 5])) {
        let k = field(q);
        let (x, y) = (elem(&k, s1, -2, 3), elem(&k, s2, -2, 3));
        let lhs = k.character_exponent(&k.add(&x, &y)).unwrap();
        let rhs = (k.character_exponent(&x).unwrap() + k.character_exponent(&y).unwrap()) % k.p();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn taylor_identity(text in poly_text(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let k = field(3);
        let e = parse(&text).unwrap();
        let g = Poly::from_term(&k, &e.term, &["x", "y"]).unwrap();
        let x = vec![elem(&k, s1, -2, 2), elem(&k, s1 ^ 1, -1, 2)];
        let h = vec![elem(&k, s2, -1, 2), elem(&k, s2 ^ 1, 0, 3)];
        let xh: Vec<FieldElement> = x.iter().zip(&h).map(|(a, b)| k.add(a, b)).collect();
        let mut rhs = g.eval(&k, &x).unwrap();
        for (d, hi) in g.gradient(&k).iter().zip(&h) {
            rhs = k.add(&rhs, &k.mul(&d.eval(&k, &x).unwrap(), hi));
        }
        let both: Vec<FieldElement> = x.iter().chain(&h).cloned().collect();
        let r = g.taylor_remainder(&k);
        for i in 0..2 {
            for j in 0..2 {
                let rij = r[i][j].eval(&k, &both).unwrap();
                rhs = k.add(&rhs, &k.mul(&rij, &k.mul(&h[i], &h[j])));
            }
        }
        prop_assert_eq!(g.eval(&k, &xh).unwrap(), rhs);
    }

    #[test]
    fn parser_round_trip(text in formula_text()) {
        let e = parse(&text).unwrap();
        let printed = e.to_string();
        let again = parse(&printed).unwrap();
        prop_assert_eq!(&again.term, &e.term);
        prop_assert_eq!(again.to_string(), printed);
        prop_assert_eq!(again.vars, e.vars);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn fourier_inversion(seed in any::<u64>(), q in prop::sample::select(vec![2u32, 3, 5]), m in 1usize..3) {
        let k = field(q);
        let phi = random::sb(&k, &mut random::rng(seed), &SbShape::new(m)).unwrap();
        prop_assert!(phi.fourier(&k).unwrap().fourier_inverse(&k).unwrap().same_function(&k, &phi).unwrap());
        prop_assert!(phi.fourier_inverse(&k).unwrap().fourier(&k).unwrap().same_function(&k, &phi).unwrap());
        let ff = phi.fourier(&k).unwrap().fourier(&k).unwrap();
        let want = phi.reflect(&k).unwrap().scale(&k, &MotivicScalar::l_pow(k.p(), -(m as i64))).unwrap();
        prop_assert!(ff.same_function(&k, &want).unwrap());
    }

    #[test]
    fn convolution_commutes_and_refinement_preserves(seed in any::<u64>()) {
        let k = field(3);
        let mut rng = random::rng(seed);
        let phi = random::sb(&k, &mut rng, &SbShape::new(1)).unwrap();
        let psi = random::sb(&k, &mut rng, &SbShape::new(1)).unwrap();
        prop_assert!(phi.convolve(&k, &psi).unwrap().same_function(&k, &psi.convolve(&k, &phi).unwrap()).unwrap());
        let fine = phi.refine_to_depth(&k, phi.constancy_bound() + 1).unwrap();
        prop_assert!(fine.same_function(&k, &phi).unwrap());
        for _ in 0..5 {
            let x = random::vector(&k, &mut rng, 1, -3, 4);
            prop_assert_eq!(fine.evaluate(&k, &x).unwrap(), phi.evaluate(&k, &x).unwrap());
        }
    }

    #[test]
    fn queries_are_additive_over_children(seed in any::<u64>()) {
        let k = field(3);
        let mut rng = random::rng(seed);
        let phi = random::sb(&k, &mut rng, &SbShape::new(1)).unwrap();
        let us = [Distribution::from_sb(&phi), Distribution::from_sb(&phi).fourier()];
        let q = random::queries(&k, &mut rng, 1, 1, -2, (-2, 2), (-2, 2)).remove(0);
        for u in &us {
            let parent = u.query(&k, &BallQuery::untwisted(q.center.clone(), q.radius)).unwrap();
            let mut sum = MotivicScalar::zero(3);
            for c in k.coset_reps(&q.center, q.radius, q.radius + 1).unwrap() {
                sum.add_assign(&u.query(&k, &BallQuery::untwisted(c, q.radius + 1)).unwrap());
            }
            prop_assert!(same_at_q(&k, &parent, &sum).unwrap());
        }
    }

    #[test]
    fn integration_is_linear(seed in any::<u64>()) {
        let k = field(2);
        let mut rng = random::rng(seed);
        let phi = random::sb(&k, &mut rng, &SbShape::new(2)).unwrap();
        let psi = random::sb(&k, &mut rng, &SbShape::new(2)).unwrap();
        let s = random::scalar(2, &mut rng);
        let lhs = phi.scale(&k, &s).unwrap().add(&k, &psi).unwrap().integrate();
        prop_assert_eq!(lhs, s.mul(&phi.integrate()).add(&psi.integrate()));
        prop_assert!(SbFunction::ball(&k, 2, 0).integrate() == MotivicScalar::one(2));
    }
}
