use mwf_core::distribution::{
    diagonal_product, paley_wiener_check, same_at_q, param_pullback, param_pushforward, pullback, tensor, BallQuery,
    Distribution, ParamFamily, PullbackData,
};
use mwf_core::expr::{constant, poly_map};
use mwf_core::random::{self, SbShape};
use mwf_core::schwartz::SbFunction;
use mwf_core::{oracle, Error, FieldElement, LocalField, MotivicScalar};

fn fe(k: &LocalField, s: &str) -> FieldElement {
    constant(k, s).unwrap()
}

fn l(k: &LocalField, e: i64) -> MotivicScalar {
    MotivicScalar::l_pow(k.p(), e)
}

fn q1(k: &LocalField, c: &str, r: i64, xi: &str) -> BallQuery {
    BallQuery::new(vec![fe(k, c)], r, vec![fe(k, xi)])
}

#[test]
fn function_and_dirac_queries() {
    let k = LocalField::with_q(3).unwrap();
    let u = Distribution::from_sb(&SbFunction::ball(&k, 1, 0));
    assert_eq!(u.query(&k, &q1(&k, "0", 1, "0")).unwrap(), l(&k, -1));
    assert!(u.query(&k, &q1(&k, "t^-1", 0, "0")).unwrap().is_zero());
    assert!(u.query(&k, &q1(&k, "0", 0, "t^-1")).unwrap().is_zero());

    let d = Distribution::dirac(&k, vec![FieldElement::zero()]);
    for a in -2..4 {
        assert_eq!(d.query(&k, &q1(&k, "0", a, "0")).unwrap(), l(&k, 0));
        assert_eq!(d.query(&k, &q1(&k, "0", a, "t^-3 + 2")).unwrap(), l(&k, 0));
    }
    assert!(d.query(&k, &q1(&k, "t^-1", 0, "0")).unwrap().is_zero());

    assert_eq!(d.eval_on_sb(&k, &SbFunction::ball(&k, 1, 0)).unwrap(), l(&k, 0));
    assert_eq!(u.eval_on_sb(&k, &SbFunction::ball(&k, 1, 0)).unwrap(), l(&k, 0));
    let mut rng = random::rng(1);
    for _ in 0..20 {
        let phi = random::sb(&k, &mut rng, &SbShape::new(1)).unwrap();
        let psi = random::sb(&k, &mut rng, &SbShape::new(1)).unwrap();
        let want = phi.multiply(&k, &psi).unwrap().integrate();
        let u = Distribution::from_sb(&phi);
        assert!(same_at_q(&k, &u.eval_on_sb(&k, &psi).unwrap(), &want).unwrap());
        let (lo, hi) = (psi.support_bound(), psi.constancy_bound());
        let wide = u.eval_on_sb_window(&k, &psi, lo - 2, hi + 2).unwrap();
        assert!(same_at_q(&k, &wide, &want).unwrap());
    }
}

#[test]
fn graph_of_square() {
    let k = LocalField::with_q(3).unwrap();
    let g = poly_map(&k, &["x^2"], &["x"]).unwrap();
    let u = Distribution::graph(&k, g.clone()).unwrap();
    let z = FieldElement::zero();
    let box0 = BallQuery::untwisted(vec![z.clone(), z.clone()], 0);
    assert_eq!(u.query(&k, &box0).unwrap(), l(&k, 0));
    let off = BallQuery::untwisted(vec![z.clone(), fe(&k, "t^-1")], 0);
    assert!(u.query(&k, &off).unwrap().is_zero());

    for (eta, depth) in [("t^-2", 3), ("2*t^-2 + t^-1", 3), ("t^-3", 4)] {
        let q = BallQuery::new(vec![z.clone(), z.clone()], 0, vec![z.clone(), fe(&k, eta)]);
        let got = u.query(&k, &q).unwrap().eval_at_q(3).unwrap();
        let a = oracle::graph_query(&k, &g, &q.center, 0, &q.freq, depth).unwrap();
        let b = oracle::graph_query(&k, &g, &q.center, 0, &q.freq, depth + 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(got, a, "{eta}");
    }
    // a constrained, twisted query off the origin
    let q = BallQuery::new(vec![fe(&k, "1"), fe(&k, "1")], 1, vec![fe(&k, "t^-1"), fe(&k, "t^-2")]);
    let got = u.query(&k, &q).unwrap().eval_at_q(3).unwrap();
    assert_eq!(got, oracle::graph_query(&k, &g, &q.center, 1, &q.freq, 4).unwrap());
}

#[test]
fn coset_additivity_and_twisted_consistency() {
    let k = LocalField::with_q(3).unwrap();
    let mut rng = random::rng(11);
    let phi = random::sb(&k, &mut rng, &SbShape::new(1)).unwrap();
    let g = poly_map(&k, &["x^2 + t*x"], &["x"]).unwrap();
    let dists = vec![
        Distribution::from_sb(&phi),
        Distribution::dirac(&k, vec![fe(&k, "t^-1 + 2")]),
        Distribution::from_sb(&phi).fourier(),
    ];
    for u in &dists {
        for c in ["0", "t^-1", "2 + t"] {
            for a in -1..2 {
                let parent = u.query(&k, &q1(&k, c, a, "0")).unwrap();
                let mut sum = MotivicScalar::zero(3);
                for child in k.coset_reps(&[fe(&k, c)], a, a + 1).unwrap() {
                    sum.add_assign(&u.query(&k, &BallQuery::untwisted(child, a + 1)).unwrap());
                }
                assert!(same_at_q(&k, &parent, &sum).unwrap(), "{u:?} at {c}, {a}");
                // a frequency of ord ≥ 1 − α only contributes the phase at the centre
                let xi = FieldElement::t_pow(1 - a);
                let tw = u.query(&k, &BallQuery::new(vec![fe(&k, c)], a, vec![xi.clone()])).unwrap();
                let e = k.pairing_exponent(&[fe(&k, c).head(a).unwrap()], &[xi]).unwrap();
                assert_eq!(tw, parent.mul_zeta_pow(e as i64));
            }
        }
    }
    let gr = Distribution::graph(&k, g).unwrap();
    let c = vec![FieldElement::zero(), FieldElement::zero()];
    let parent = gr.query(&k, &BallQuery::untwisted(c.clone(), 0)).unwrap();
    let mut sum = MotivicScalar::zero(3);
    for child in k.coset_reps(&c, 0, 1).unwrap() {
        sum.add_assign(&gr.query(&k, &BallQuery::untwisted(child, 1)).unwrap());
    }
    assert!(same_at_q(&k, &parent, &sum).unwrap());
}

#[test]
fn fourier_of_distributions() {
    let k = LocalField::with_q(3).unwrap();
    let d = Distribution::dirac(&k, vec![FieldElement::zero()]).fourier();
    for a in -2..3 {
        assert_eq!(d.query(&k, &q1(&k, "0", a, "0")).unwrap(), l(&k, -a));
    }
    let mut rng = random::rng(5);
    let qs = random::queries(&k, &mut rng, 1, 20, -2, (-2, 2), (-2, 2));
    for _ in 0..10 {
        let phi = random::sb(&k, &mut rng, &SbShape::new(1)).unwrap();
        let u = Distribution::from_sb(&phi);
        let fu = Distribution::from_sb(&phi.fourier(&k).unwrap());
        let ffu = u.fourier().fourier();
        let refl = u.reflect().scale(&l(&k, -1));
        for q in &qs {
            assert_eq!(u.fourier().query(&k, q).unwrap(), fu.query(&k, q).unwrap());
            assert_eq!(ffu.query(&k, q).unwrap(), refl.query(&k, q).unwrap());
        }
    }
}

#[test]
fn products_by_schwartz_functions() {
    let k = LocalField::with_q(3).unwrap();
    let d = Distribution::dirac(&k, vec![FieldElement::zero()]);
    let in_support = Distribution::product_by_sb(&SbFunction::ball(&k, 1, 0), &d).unwrap();
    let outside = Distribution::product_by_sb(&SbFunction::indicator(&k, vec![fe(&k, "t^-1")], 0).unwrap(), &d).unwrap();
    let mut rng = random::rng(9);
    let qs = random::queries(&k, &mut rng, 1, 20, -1, (-1, 2), (-2, 2));
    for q in &qs {
        assert_eq!(in_support.query(&k, q).unwrap(), d.query(&k, q).unwrap());
        assert!(outside.query(&k, q).unwrap().is_zero());
    }
    for _ in 0..10 {
        let phi = random::sb(&k, &mut rng, &SbShape::new(1)).unwrap();
        let psi = random::sb(&k, &mut rng, &SbShape::new(1)).unwrap();
        let a = Distribution::product_by_sb(&phi, &Distribution::from_sb(&psi)).unwrap();
        let b = Distribution::from_sb(&phi.multiply(&k, &psi).unwrap());
        for q in &qs {
            assert_eq!(a.query(&k, q).unwrap(), b.query(&k, q).unwrap());
        }
    }
}

#[test]
fn paley_wiener_examples() {
    let k = LocalField::with_q(3).unwrap();
    let ball = SbFunction::ball(&k, 1, 0);
    let mut rng = random::rng(3);
    let battery = random::queries(&k, &mut rng, 1, 10, -1, (-1, 2), (-1, 1));
    let u = Distribution::from_sb(&ball);
    let pw = paley_wiener_check(&k, &u, &ball, 1, 1, &battery).unwrap();
    assert!(pw.verdict);
    assert_eq!(pw.reconstruction, SbFunction::ball(&k, 1, 1));

    let d = Distribution::dirac(&k, vec![FieldElement::zero()]);
    let pw = paley_wiener_check(&k, &d, &ball, 0, 1, &battery).unwrap();
    assert!(!pw.verdict);
    assert!(pw.witness.is_some());
}

#[test]
fn tensor_products() {
    let k = LocalField::with_q(3).unwrap();
    let z = FieldElement::zero();
    let d = Distribution::dirac(&k, vec![z.clone()]);
    let dd = tensor(&k, &d, &d, 3, 1).unwrap();
    let d2 = Distribution::dirac(&k, vec![z.clone(), z.clone()]);
    let mut rng = random::rng(21);
    let qs = random::queries(&k, &mut rng, 2, 20, -1, (-1, 2), (-2, 2));
    for q in &qs {
        assert_eq!(dd.query(&k, q).unwrap(), d2.query(&k, q).unwrap());
    }
    let u = Distribution::from_sb(&SbFunction::ball(&k, 1, 0));
    let du = tensor(&k, &d, &u, 3, 2).unwrap();
    for a in -1..4 {
        let q = BallQuery::untwisted(vec![z.clone(), z.clone()], a);
        assert_eq!(du.query(&k, &q).unwrap(), l(&k, -a.max(0)));
    }
    for _ in 0..5 {
        let phi = random::sb(&k, &mut rng, &SbShape::new(1)).unwrap();
        let psi = random::sb(&k, &mut rng, &SbShape::new(1)).unwrap();
        let t = tensor(&k, &Distribution::from_sb(&phi), &Distribution::from_sb(&psi), 2, 3).unwrap();
        let f = Distribution::from_sb(&phi.tensor(&k, &psi).unwrap());
        for q in &qs {
            assert_eq!(t.query(&k, q).unwrap(), f.query(&k, q).unwrap());
        }
    }
}

#[test]
fn tensor_refuses_asymmetric_pairs() {
    let k = LocalField::with_q(2).unwrap();
    let d = Distribution::dirac(&k, vec![FieldElement::zero()]);
    // a functional that is not linear in its queries
    let bad = Distribution::custom(
        2,
        1,
        std::sync::Arc::new(|_k: &LocalField, q: &BallQuery| Ok(MotivicScalar::from_int(2, q.radius.abs() + 1))),
    );
    assert!(matches!(tensor(&k, &bad, &d, 6, 4), Err(Error::Precondition(_))));
}

#[test]
fn pullbacks() {
    let k = LocalField::with_q(3).unwrap();
    let mut rng = random::rng(8);
    let qs = random::queries(&k, &mut rng, 1, 25, -2, (-2, 2), (-2, 2));
    let ball = SbFunction::ball(&k, 1, 0);
    let u = Distribution::from_sb(&ball);

    let id = poly_map(&k, &["x"], &["x"]).unwrap();
    let pb = pullback(id, &u, PullbackData::default()).unwrap();
    let want = u.scale(&l(&k, -1));
    for q in &qs {
        assert_eq!(pb.query(&k, q).unwrap(), want.query(&k, q).unwrap(), "{}", q.format(&k));
    }

    let sq = poly_map(&k, &["x^2"], &["x"]).unwrap();
    let pb = pullback(sq.clone(), &u, PullbackData::default()).unwrap();
    for q in &qs {
        let got = pb.query(&k, q).unwrap().mul(&l(&k, 1)).eval_at_q(3).unwrap();
        let depth = q.radius.max(4);
        let brute = oracle::composed_query(&k, &ball, &sq, &q.center, q.radius, &q.freq, depth).unwrap();
        assert_eq!(got, brute, "{}", q.format(&k));
    }

    let a = fe(&k, "t^-1 + 1");
    let tr = poly_map(&k, &["x + t^-1 + 1"], &["x"]).unwrap();
    let d = Distribution::dirac(&k, vec![FieldElement::zero()]);
    assert!(matches!(
        pullback(tr.clone(), &d, PullbackData::default())
            .unwrap()
            .query(&k, &qs[0]),
        Err(Error::Precondition(_))
    ));
    let data = PullbackData {
        n_delta: Some(0),
        ..PullbackData::default()
    };
    let pb = pullback(tr, &d, data).unwrap();
    let want = Distribution::dirac(&k, vec![k.neg(&a)]).scale(&l(&k, -1));
    for q in &qs {
        assert_eq!(pb.query(&k, q).unwrap(), want.query(&k, q).unwrap(), "{}", q.format(&k));
    }
}

#[test]
fn diagonal_products() {
    let k = LocalField::with_q(3).unwrap();
    let mut rng = random::rng(13);
    let qs = random::queries(&k, &mut rng, 1, 15, -1, (-1, 2), (-1, 1));
    let shape = SbShape {
        max_terms: 2,
        radius: (-1, 1),
        freq_ord: (-1, 1),
        center_ord: -1,
        ..SbShape::new(1)
    };
    for _ in 0..4 {
        let phi = random::sb(&k, &mut rng, &shape).unwrap();
        let psi = random::sb(&k, &mut rng, &shape).unwrap();
        let w = diagonal_product(
            &k,
            &Distribution::from_sb(&phi),
            &Distribution::from_sb(&psi),
            PullbackData::default(),
            2,
            5,
        )
        .unwrap();
        let want = Distribution::from_sb(&phi.multiply(&k, &psi).unwrap()).scale(&l(&k, -1));
        for q in &qs {
            assert!(same_at_q(&k, &w.query(&k, q).unwrap(), &want.query(&k, q).unwrap()).unwrap());
        }
    }
    let d = Distribution::dirac(&k, vec![FieldElement::zero()]);
    let u = Distribution::from_sb(&SbFunction::ball(&k, 1, 0));
    let w = diagonal_product(&k, &d, &u, PullbackData::default(), 2, 5).unwrap();
    let want = d.scale(&l(&k, -1));
    for q in &qs {
        let (a, b) = (w.query(&k, q).unwrap(), want.query(&k, q).unwrap());
        assert!(same_at_q(&k, &a, &b).unwrap(), "{}", q.format(&k));
    }
    assert!(matches!(
        diagonal_product(&k, &d, &d, PullbackData::default(), 2, 5),
        Err(Error::Precondition(_))
    ));
    let forced = PullbackData {
        xi_bound: Some(-1),
        ..PullbackData::default()
    };
    assert!(matches!(
        diagonal_product(&k, &d, &d, forced, 2, 5),
        Err(Error::DataViolation { .. })
    ));
}

#[test]
fn parameter_families() {
    let k = LocalField::with_q(2).unwrap();
    let z = FieldElement::zero();
    let a = Distribution::dirac(&k, vec![z.clone()]);
    let b = Distribution::from_sb(&SbFunction::ball(&k, 1, 0));
    let fam = ParamFamily::new(vec![a.clone(), b.clone()]).unwrap();
    let q = BallQuery::untwisted(vec![z.clone()], 1);

    let same = param_pullback(&[0, 1], &fam).unwrap();
    let swapped = param_pullback(&[1, 0], &fam).unwrap();
    let back = param_pullback(&[1, 0], &swapped).unwrap();
    for i in 0..2 {
        let v = fam.members[i].query(&k, &q).unwrap();
        assert_eq!(same.members[i].query(&k, &q).unwrap(), v);
        assert_eq!(back.members[i].query(&k, &q).unwrap(), v);
    }
    let pushed = param_pushforward(&[0, 0], 1, &fam).unwrap();
    assert_eq!(
        pushed.members[0].query(&k, &q).unwrap(),
        a.query(&k, &q).unwrap().add(&b.query(&k, &q).unwrap())
    );
    let bij = param_pushforward(&[1, 0], 2, &swapped).unwrap();
    for i in 0..2 {
        assert_eq!(bij.members[i].query(&k, &q).unwrap(), fam.members[i].query(&k, &q).unwrap());
    }
    assert!(param_pullback(&[2], &fam).is_err());
}
