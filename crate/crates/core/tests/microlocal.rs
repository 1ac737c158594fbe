use mwf_core::distribution::Distribution;
use mwf_core::expr::{constant, poly_map};
use mwf_core::microlocal::{
    lambda_reps, oscillatory_bound, oscillatory_integral, projection_property_check, ss_test, wf_test, LambdaGroup,
    PhaseData, SsParams, SsVerdict, Verdict, WfParams, DEFAULT_N_R_CAP,
};
use mwf_core::random::{self, SbShape};
use mwf_core::schwartz::SbFunction;
use mwf_core::{oracle, Error, FieldElement, LocalField};

fn fe(k: &LocalField, s: &str) -> FieldElement {
    constant(k, s).unwrap()
}

fn fes(k: &LocalField, s: &[&str]) -> Vec<FieldElement> {
    s.iter().map(|x| fe(k, x)).collect()
}

#[test]
fn lambda_representatives() {
    let k = LocalField::with_q(3).unwrap();
    let g1 = LambdaGroup::new(1).unwrap();
    assert_eq!(lambda_reps(&k, g1, 0, 1).unwrap(), vec![fe(&k, "1")]);
    let mut two = lambda_reps(&k, g1, 0, 2).unwrap();
    two.sort_by_key(|x| k.format(x));
    assert_eq!(two, fes(&k, &["1", "1 + t", "1 + 2*t"]));

    let g2 = LambdaGroup::new(2).unwrap();
    let reps = lambda_reps(&k, g2, -1, 0).unwrap();
    assert_eq!(reps.len(), 3);
    for x in &reps {
        assert_eq!(x.ord().unwrap(), Some(-2));
        assert!(g2.contains(&k, x).unwrap());
    }
    assert!(!g2.contains(&k, &fe(&k, "t^-1")).unwrap());
    assert!(!g1.contains(&k, &fe(&k, "2")).unwrap());
    assert!(matches!(lambda_reps(&k, g1, 0, 0), Err(Error::Precondition(_))));
    assert!(LambdaGroup::new(0).is_err());
}

#[test]
fn oscillatory_examples() {
    let k = LocalField::with_q(3).unwrap();
    let b0 = SbFunction::ball(&k, 1, 0);
    let x = poly_map(&k, &["x"], &["x"]).unwrap().remove(0);

    let pd = PhaseData::estimate(&k, &x, &b0, DEFAULT_N_R_CAP, 8).unwrap();
    assert_eq!((pd.n_grad, pd.n_r, pd.n_r_capped), (0, DEFAULT_N_R_CAP, true));
    assert_eq!(oscillatory_bound(&pd, &b0), 0);
    assert!(oscillatory_integral(&k, &b0, &pd, &fe(&k, "1"), &[]).unwrap().is_zero());
    let b1 = SbFunction::ball(&k, 1, 1);
    assert_eq!(
        oscillatory_integral(&k, &b1, &pd, &fe(&k, "1"), &[]).unwrap(),
        mwf_core::MotivicScalar::l_pow(3, -1)
    );
    for e in 1..4 {
        let lam = FieldElement::t_pow(-e);
        assert!(oscillatory_integral(&k, &b0, &pd, &lam, &[]).unwrap().is_zero());
    }

    // x² on B_0: the gradient vanishes at 0, so no N_grad exists
    let sq = poly_map(&k, &["x^2"], &["x"]).unwrap().remove(0);
    assert!(matches!(
        PhaseData::estimate(&k, &sq, &b0, DEFAULT_N_R_CAP, 8),
        Err(Error::DataViolation { .. })
    ));
    // but the integral itself is still exact
    let raw = PhaseData {
        phase: sq.clone(),
        n_grad: 0,
        n_r: 0,
        n_r_capped: false,
        remainder: sq.taylor_remainder(&k),
    };
    for lam in ["t^-1", "2*t^-1", "t^-1 + 1", "t^-2"] {
        let l = fe(&k, lam);
        let got = oscillatory_integral(&k, &b0, &raw, &l, &[]).unwrap().eval_at_q(3).unwrap();
        let h = sq.scale(&k, &l);
        let d = 1 - l.ord().unwrap().unwrap();
        let a = oracle::phase_integral(&k, &h, &[FieldElement::zero()], 0, d).unwrap();
        let b = oracle::phase_integral(&k, &h, &[FieldElement::zero()], 0, d + 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(got, a, "{lam}");
    }
}

#[test]
fn oscillatory_vanishing_below_the_bound() {
    let k = LocalField::with_q(3).unwrap();
    let cases: Vec<(Vec<&str>, &str, usize, Vec<&str>, i64)> = vec![
        (vec!["x^2"], "1", 1, vec![], 1),
        (vec!["x^2 + t*x"], "2", 1, vec![], 1),
        (vec!["x"], "0", 1, vec![], 0),
    ];
    for (g, c, m, v, r) in cases {
        let phase = poly_map(&k, &g, &["x"]).unwrap().remove(0);
        let phi = SbFunction::indicator(&k, vec![fe(&k, c)], r).unwrap();
        let pd = PhaseData::estimate_on(&k, &phase, &[fe(&k, c)], r, r, DEFAULT_N_R_CAP, 8).unwrap();
        let th = oscillatory_bound(&pd, &phi);
        assert_eq!(m, 1);
        for o in (th - 6)..th {
            for lam in lambda_reps(&k, LambdaGroup::new(1).unwrap(), o, o + 2).unwrap() {
                assert!(
                    oscillatory_integral(&k, &phi, &pd, &lam, &v.iter().map(|s| fe(&k, s)).collect::<Vec<_>>())
                        .unwrap()
                        .is_zero(),
                    "{g:?} at {}",
                    k.format(&lam)
                );
            }
        }
    }

    let full = poly_map(&k, &["x1*v1 + x2*v2 + x1*x2"], &["x1", "x2", "v1", "v2"]).unwrap().remove(0);
    let v = fes(&k, &["t^-1", "t^-1"]);
    let zero = vec![FieldElement::zero(); 2];
    let local = full.substitute_tail(&k, &v).unwrap();
    let pd = PhaseData::estimate_on(&k, &local, &zero, 0, 0, DEFAULT_N_R_CAP, 8).unwrap();
    assert_eq!((pd.n_grad, pd.n_r), (-1, 0));
    let pd = PhaseData { phase: full, ..pd };
    let phi = SbFunction::indicator(&k, zero.clone(), 0).unwrap();
    let th = oscillatory_bound(&pd, &phi);
    assert_eq!(th, 1);
    for o in (th - 6)..th {
        for lam in lambda_reps(&k, LambdaGroup::new(1).unwrap(), o, o + 1).unwrap() {
            assert!(oscillatory_integral(&k, &phi, &pd, &lam, &v).unwrap().is_zero());
        }
    }
}

#[test]
fn dirac_wave_front() {
    let k = LocalField::with_q(3).unwrap();
    let d = Distribution::dirac(&k, vec![FieldElement::zero()]);
    for (n, xis) in [(1, vec!["1", "2"]), (2, vec!["1", "t", "2 + t"])] {
        let pr = WfParams::new(0, LambdaGroup::new(n).unwrap());
        for xi in xis {
            let c = wf_test(&k, &d, &[FieldElement::zero()], &[fe(&k, xi)], &pr).unwrap();
            assert_eq!(c.verdict, Verdict::NotSmooth);
            let w = c.witness.unwrap();
            assert_eq!(w.value_at_q, "1");
            assert_eq!(w.ord_lambda, -6 * n as i64);
        }
    }
    let pr = WfParams::new(0, LambdaGroup::new(1).unwrap());
    let away = wf_test(&k, &d, &[fe(&k, "t^-1")], &[fe(&k, "1")], &pr).unwrap();
    assert_eq!(away.verdict, Verdict::SmoothObserved);
    assert!(matches!(
        wf_test(&k, &d, &[FieldElement::zero()], &[fe(&k, "t")], &pr),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn schwartz_functions_are_microlocally_smooth() {
    let k = LocalField::with_q(3).unwrap();
    let mut rng = random::rng(17);
    let pr = WfParams::new(0, LambdaGroup::new(1).unwrap());
    for _ in 0..5 {
        let phi = random::sb(&k, &mut rng, &SbShape::new(1)).unwrap();
        let u = Distribution::from_sb(&phi);
        for x in ["0", "t^-1", "1 + t"] {
            for xi in ["1", "2"] {
                let c = wf_test(&k, &u, &[fe(&k, x)], &[fe(&k, xi)], &pr).unwrap();
                assert_eq!(c.verdict, Verdict::SmoothCertified);
                assert_eq!(c.threshold, Some(1 - phi.constancy_bound().max(0)));
            }
        }
    }
}

#[test]
fn conormal_dichotomy_for_a_parabola() {
    let k = LocalField::with_q(3).unwrap();
    let g = poly_map(&k, &["x^2"], &["x"]).unwrap();
    let u = Distribution::graph(&k, g.clone()).unwrap();
    let z = vec![FieldElement::zero(); 2];
    let pr = WfParams::new(0, LambdaGroup::new(1).unwrap());

    let c = wf_test(&k, &u, &z, &fes(&k, &["1", "0"]), &pr).unwrap();
    assert_eq!(c.verdict, Verdict::SmoothCertified);
    assert!(c.threshold.is_some());

    let c = wf_test(&k, &u, &z, &fes(&k, &["0", "1"]), &pr).unwrap();
    assert_eq!(c.verdict, Verdict::NotSmooth);
    let w = c.witness.unwrap();
    assert!((-6..=0).contains(&w.ord_lambda));
    let lam = k.parse(&w.lambda).unwrap();
    let freq = vec![FieldElement::zero(), lam.clone()];
    let depth = 1 - w.ord_lambda;
    let brute = oracle::graph_query(&k, &g, &z, 0, &freq, depth).unwrap();
    assert!(!brute.is_zero());
    assert_eq!(brute.to_string(), w.value_at_q);

    // off the graph the localizing ball misses it
    let off = fes(&k, &["0", "t^-1"]);
    let c = wf_test(&k, &u, &off, &fes(&k, &["0", "1"]), &pr).unwrap();
    assert_eq!(c.verdict, Verdict::SmoothCertified);
    assert_eq!(c.threshold, None);
}

#[test]
fn conicity_and_monotonicity() {
    let k = LocalField::with_q(3).unwrap();
    let g = poly_map(&k, &["x^2"], &["x"]).unwrap();
    let u = Distribution::graph(&k, g).unwrap();
    let z = vec![FieldElement::zero(); 2];
    let shallow = WfParams {
        depth: 3,
        ..WfParams::new(0, LambdaGroup::new(1).unwrap())
    };
    let deep = WfParams::new(0, LambdaGroup::new(1).unwrap());
    for (xi, scaled) in [(["1", "0"], ["1 + t", "0"]), (["0", "1"], ["0", "1 + 2*t"]), (["1", "1"], ["1 + t", "1 + t"])] {
        let a = wf_test(&k, &u, &z, &fes(&k, &xi), &deep).unwrap();
        let b = wf_test(&k, &u, &z, &fes(&k, &scaled), &deep).unwrap();
        assert_eq!(a.verdict, b.verdict, "{xi:?}");
        let s = wf_test(&k, &u, &z, &fes(&k, &xi), &shallow).unwrap();
        match s.verdict {
            Verdict::SmoothCertified => assert_eq!(a.verdict, Verdict::SmoothCertified),
            Verdict::SmoothObserved => assert_ne!(a.verdict, Verdict::SmoothCertified),
            Verdict::NotSmooth => assert_eq!(a.verdict, Verdict::NotSmooth),
        }
    }
}

#[test]
fn singular_support() {
    let k = LocalField::with_q(3).unwrap();
    let d = Distribution::dirac(&k, vec![FieldElement::zero()]);
    let pr = SsParams::new(0);
    let at0 = ss_test(&k, &d, &[FieldElement::zero()], &pr).unwrap();
    assert_eq!(at0.verdict, SsVerdict::NonSmoothObserved);
    assert!(at0.witness.is_some());
    let away = ss_test(&k, &d, &[fe(&k, "t^-1")], &pr).unwrap();
    assert_eq!(away.verdict, SsVerdict::Smooth);
    assert!(away.reconstruction.unwrap().is_zero());

    let mut rng = random::rng(2);
    for _ in 0..4 {
        let phi = random::sb(&k, &mut rng, &SbShape::new(1)).unwrap();
        let u = Distribution::from_sb(&phi);
        for x in ["0", "t^-1", "2"] {
            let r = ss_test(&k, &u, &[fe(&k, x)], &pr).unwrap();
            assert_eq!(r.verdict, SsVerdict::Smooth, "{phi:?} at {x}");
            let loc = SbFunction::indicator(&k, vec![fe(&k, x).head(0).unwrap()], 0).unwrap();
            // the reconstruction is the Fourier transform of the localization
            let want = phi.multiply(&k, &loc).unwrap().fourier(&k).unwrap();
            let rec = r.reconstruction.unwrap();
            for xi in ["0", "1", "t^-1", "2*t^-2 + t", "t^-3"] {
                let y = [fe(&k, xi)];
                assert_eq!(
                    rec.evaluate(&k, &y).unwrap().eval_at_q(3).unwrap(),
                    want.evaluate(&k, &y).unwrap().eval_at_q(3).unwrap()
                );
            }
        }
    }
}

#[test]
fn projection_property() {
    let k = LocalField::with_q(3).unwrap();
    let wp = WfParams::new(0, LambdaGroup::new(1).unwrap());
    let sp = SsParams::new(0);

    let d = Distribution::dirac(&k, vec![FieldElement::zero()]);
    let pts: Vec<Vec<FieldElement>> = ["0", "1", "t^-1"].iter().map(|s| vec![fe(&k, s)]).collect();
    let certs: Vec<_> = pts
        .iter()
        .map(|x| wf_test(&k, &d, x, &[fe(&k, "1")], &wp).unwrap())
        .collect();
    let rep = projection_property_check(&k, &d, &certs, &pts, &sp).unwrap();
    assert!(rep.violations.is_empty(), "{:?}", rep.violations);
    assert_eq!(certs[0].verdict, Verdict::NotSmooth);
    assert_ne!(certs[2].verdict, Verdict::NotSmooth);

    let g = poly_map(&k, &["x^2"], &["x"]).unwrap();
    let u = Distribution::graph(&k, g).unwrap();
    let pts: Vec<Vec<FieldElement>> = [["0", "0"], ["0", "t^-1"], ["t^-1", "0"]]
        .iter()
        .map(|p| fes(&k, p))
        .collect();
    let mut certs = Vec::new();
    for x in &pts {
        for xi in [["1", "0"], ["0", "1"]] {
            certs.push(wf_test(&k, &u, x, &fes(&k, &xi), &wp).unwrap());
        }
    }
    let rep = projection_property_check(&k, &u, &certs, &pts, &sp).unwrap();
    assert!(rep.violations.is_empty(), "{:?}", rep.violations);
    let on = ss_test(&k, &u, &pts[0], &sp).unwrap();
    assert_eq!(on.verdict, SsVerdict::NonSmoothObserved);
    for x in &pts[1..] {
        assert_eq!(ss_test(&k, &u, x, &sp).unwrap().verdict, SsVerdict::Smooth);
    }
}
