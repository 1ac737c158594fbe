use mwf_core::cyclotomic::{CycRational, CyclotomicInteger};
use mwf_core::expr::{grad, parse, taylor_remainder, Poly, Term};
use mwf_core::scalar::{char_sum_over_residue_line, parse_scalar};
use mwf_core::schwartz::SbFunction;
use mwf_core::{FieldElement, LocalField, MotivicScalar};

fn k3() -> LocalField {
    LocalField::with_q(3).unwrap()
}

fn s(p: u32, text: &str) -> MotivicScalar {
    parse_scalar(p, text).unwrap()
}

fn x(k: &LocalField, text: &str) -> FieldElement {
    mwf_core::expr::constant(k, text).unwrap()
}

#[test]
fn cyclotomic_integers() {
    for p in [2, 3, 5, 7] {
        let mut acc = CyclotomicInteger::zero(p);
        for e in 0..p as i64 {
            acc.add_assign(&CyclotomicInteger::zeta_pow(p, e));
        }
        assert!(acc.is_zero());
        assert_eq!(CyclotomicInteger::one(p).coords().len(), p as usize - 1);
        let z = CyclotomicInteger::zeta_pow(p, 1);
        assert!(z.mul(&CyclotomicInteger::zeta_pow(p, p as i64 - 1)).is_one());
    }
}

#[test]
fn motivic_arithmetic() {
    assert!(s(3, "L^2").add(&s(3, "-L^2")).is_zero());
    let g = MotivicScalar::geometric(3, 1);
    assert_eq!(g.add(&MotivicScalar::zero(3)), g);
    assert_eq!(s(3, "L^-1").add(&s(3, "L^-1")), s(3, "2*L^-1"));
    assert_eq!(s(3, "1 - L^-1").mul(&g), MotivicScalar::one(3));
    assert_eq!(MotivicScalar::l_pow(3, -4).mul(&MotivicScalar::l_pow(3, 4)), MotivicScalar::one(3));
    assert_eq!(MotivicScalar::zeta_pow(5, 1).mul(&MotivicScalar::zeta_pow(5, 4)), MotivicScalar::one(5));
}

#[test]
fn specialization_at_q() {
    assert_eq!(MotivicScalar::l_pow(3, -2).eval_at_q(3).unwrap(), CycRational::from_fraction(3, 1, 9));
    assert_eq!(MotivicScalar::geometric(2, 1).eval_at_q(2).unwrap(), CycRational::from_fraction(2, 2, 1));
    assert_eq!(s(5, "L - 1").eval_at_q(5).unwrap(), CycRational::from_fraction(5, 4, 1));
}

#[test]
fn residue_line_sums() {
    let k = k3();
    let f = k.residue();
    assert_eq!(char_sum_over_residue_line(f, f.zero()), MotivicScalar::from_int(3, 3));
    assert!(char_sum_over_residue_line(f, f.one()).is_zero());
    for q in [2, 3, 4, 5, 7, 8, 9] {
        let k = LocalField::with_q(q).unwrap();
        let f = k.residue();
        for r in f.elements().filter(|r| *r != f.zero()) {
            assert!(char_sum_over_residue_line(f, r).is_zero(), "q = {q}");
        }
    }
}

#[test]
fn field_operations() {
    let k = k3();
    assert_eq!(k.add(&x(&k, "t^-1 + 1"), &x(&k, "-t^-1")), k.from_int(1));
    assert_eq!(k.mul(&x(&k, "t^2"), &x(&k, "t^-2")), k.from_int(1));
    assert_eq!(x(&k, "t^3 + t^5").ord().unwrap(), Some(3));
    assert_eq!(FieldElement::zero().ord().unwrap(), None);
    assert_eq!(FieldElement::zero().ac().unwrap(), k.residue().zero());
    assert_eq!(x(&k, "2*t^-1 + 1").ac().unwrap(), k.residue().from_int(2));
    assert_eq!(k.character_exponent(&x(&k, "t")).unwrap(), 0);
    assert_eq!(k.character_exponent(&k.from_int(1)).unwrap(), 1);
    assert_eq!(k.character_exponent(&x(&k, "2 + t^-1")).unwrap(), 2);
    let (one, zero) = (k.from_int(1), FieldElement::zero());
    assert!(k.inner_product(&[one.clone(), zero.clone()], &[zero.clone(), one.clone()]).unwrap().is_zero());
    assert_eq!(k.inner_product(&[x(&k, "t")], &[x(&k, "t^-1")]).unwrap(), one);
    assert!(k.inner_product(&[one.clone(), one.clone()], &[one.clone(), k.from_int(2)]).unwrap().is_zero());
}

#[test]
fn coset_representatives() {
    let k = k3();
    let z = [FieldElement::zero()];
    assert_eq!(k.enumerate_coset_reps(&z, 0, 1).unwrap().len(), 3);
    assert_eq!(k.enumerate_coset_reps(&z, 0, 2).unwrap().len(), 9);
    let k2 = LocalField::with_q(2).unwrap();
    let reps = k2.enumerate_coset_reps(&[FieldElement::zero(), FieldElement::zero()], -1, 0).unwrap();
    assert_eq!(reps.len(), 4);
    let c = [x(&k, "t^-1 + 2")];
    let reps = k.enumerate_coset_reps(&c, -1, 1).unwrap();
    for (i, a) in reps.iter().enumerate() {
        assert!(k.sub(&a[0], &c[0]).ord_or_max().unwrap() >= -1);
        for b in &reps[i + 1..] {
            assert!(k.sub(&a[0], &b[0]).ord_or_max().unwrap() < 1);
        }
    }
}

#[test]
fn schwartz_bruhat_values() {
    let k = k3();
    let ball = SbFunction::ball(&k, 1, 0);
    assert_eq!(ball.evaluate(&k, &[x(&k, "t")]).unwrap(), MotivicScalar::one(3));
    assert!(ball.evaluate(&k, &[x(&k, "t^-1")]).unwrap().is_zero());
    let tw = SbFunction::twisted(&k, vec![FieldElement::zero()], 0, vec![k.from_int(1)]).unwrap();
    assert_eq!(tw.evaluate(&k, &[k.from_int(1)]).unwrap(), MotivicScalar::zeta_pow(3, 1));
    let tw2 = SbFunction::twisted(&k, vec![FieldElement::zero()], 0, vec![x(&k, "t^-2")]).unwrap();
    assert_eq!(tw2.constancy_bound(), 3);

    assert!(ball.fourier(&k).unwrap().same_function(&k, &SbFunction::ball(&k, 1, 1)).unwrap());
    let narrow = SbFunction::ball(&k, 1, 2).fourier(&k).unwrap();
    let want = SbFunction::ball(&k, 1, -1).scale(&k, &MotivicScalar::l_pow(3, -2)).unwrap();
    assert!(narrow.same_function(&k, &want).unwrap());
    let ft = SbFunction::twisted(&k, vec![FieldElement::zero()], 0, vec![x(&k, "t^-1")]).unwrap().fourier(&k).unwrap();
    assert!(ft
        .same_function(&k, &SbFunction::indicator(&k, vec![x(&k, "-t^-1")], 1).unwrap())
        .unwrap());
    let ff = ball.fourier(&k).unwrap().fourier(&k).unwrap();
    assert!(ff.same_function(&k, &ball.scale(&k, &MotivicScalar::l_pow(3, -1)).unwrap()).unwrap());

    assert_eq!(SbFunction::ball(&LocalField::with_q(2).unwrap(), 2, 1).integrate(), MotivicScalar::l_pow(2, -2));
    assert!(tw.integrate().is_zero());
    assert!(ball.convolve(&k, &ball).unwrap().same_function(&k, &ball).unwrap());
}

#[test]
fn expression_examples() {
    let e = parse("ac(x) = 1 and ord(x) mod 2 = 0").unwrap();
    assert!(matches!(e.term, Term::And(..)));
    let k = LocalField::with_q(5).unwrap();
    let cube = parse("x^3").unwrap();
    let g = grad(&k, &cube, &["x"]).unwrap();
    assert_eq!(g[0].to_string(), "3*x^2");
    let r = taylor_remainder(&k, &cube, &["x"], &["y"]).unwrap();
    let got = Poly::from_term(&k, &r[0][0], &["x", "y"]).unwrap();
    let want = Poly::from_expr(&k, &parse("3*x + y").unwrap()).unwrap().0;
    assert_eq!(got, want);
    assert!(parse("ord(x) + x").is_err());
    assert_eq!(grad(&k3(), &cube, &["x"]).unwrap()[0].to_string(), "0");
}
