use super::*;
use crate::norms::norm;
use crate::tail::TailSpec;

#[test]
fn supercritical_cases() {
    assert!(supercritical_check(&SpaceSpec::lebesgue(5.0), 3, 1).unwrap());
    assert!(!supercritical_check(&SpaceSpec::lebesgue(2.0), 3, 1).unwrap());
    assert!(!supercritical_check(&SpaceSpec::lebesgue(3.0), 3, 1).unwrap());
    assert!(supercritical_check(&SpaceSpec::lebesgue(1.0), 2, 2).unwrap());
    assert!(supercritical_check(&SpaceSpec::lorentz(3.0, 1.0), 3, 1).unwrap());
    assert!(!supercritical_check(&SpaceSpec::lorentz(3.0, 2.0), 3, 1).unwrap());
    let cubic = YoungFn::power(4.0).unwrap();
    assert!(supercritical_check(&SpaceSpec::orlicz(cubic), 3, 1).unwrap());
    assert!(!supercritical_check(&SpaceSpec::orlicz(YoungFn::power(3.0).unwrap()), 3, 1).unwrap());
}

#[test]
fn classical_lebesgue_target() {
    let t = optimal_target(&SpaceSpec::lebesgue(2.0), 3, 1).unwrap();
    assert_eq!(t.space, SpaceSpec::intersect(SpaceSpec::lorentz(6.0, 2.0), SpaceSpec::lebesgue(2.0)));
    assert_eq!(t.construction, Construction::LorentzClosedForm);
    let t = optimal_target(&SpaceSpec::lebesgue(5.0), 3, 1).unwrap();
    assert_eq!(t.space, SpaceSpec::intersect(SpaceSpec::linf(), SpaceSpec::lebesgue(5.0)));
    assert_eq!(t.construction, Construction::Supercritical);
}

#[test]
fn lorentz_targets() {
    let t = optimal_target(&SpaceSpec::lorentz(3.0, 2.0), 3, 1).unwrap();
    let SpaceSpec::LambdaQ { q, weight } = &t.space else { panic!("{:?}", t.space) };
    assert_eq!(*q, 2.0);
    let s: f64 = 0.01;
    let want = s.powf(-0.5) / (1.0 + (1.0 / s).ln());
    assert!((weight.eval(s) - want).abs() < 1e-12 * want);
    assert!((weight.eval(100.0) - 100f64.powf(1.0 / 3.0 - 0.5)).abs() < 1e-12);

    let t = optimal_target(&SpaceSpec::lorentz(4.0, 2.0), 3, 1).unwrap();
    let SpaceSpec::LambdaA { young, weight } = &t.space else { panic!("{:?}", t.space) };
    assert_eq!(young.cap(), Some(1.0));
    assert!((young.eval(0.5) - 0.25).abs() < 1e-12);
    assert_eq!(weight.eval(0.5), 1.0);
    assert!((weight.eval(16.0) - 16f64.powf(0.25 - 0.5)).abs() < 1e-12);
}

#[test]
fn orlicz_target_for_square() {
    let t = optimal_target(&SpaceSpec::orlicz(YoungFn::power(2.0).unwrap()), 3, 1).unwrap();
    assert_eq!(t.construction, Construction::OrliczRiTarget);
    let SpaceSpec::LambdaA { young, .. } = &t.space else { panic!() };
    match young.near_infinity() {
        Regime::PowerLog { p, .. } => assert!((p - 2.0).abs() < 0.05, "{p}"),
        r => panic!("{r:?}"),
    }
    let g = optimal_orlicz_target(&YoungFn::power(2.0).unwrap(), 3, 1).unwrap();
    match g.near_infinity() {
        Regime::PowerLog { p, .. } => assert!((p - 6.0).abs() < 0.02, "{p}"),
        r => panic!("{r:?}"),
    }
}

#[test]
fn z_closed_forms() {
    let f = GridFn::indicator(1.0, 1.0);
    let z = z_norm(&SpaceSpec::lebesgue(2.0), 3, 1, &f).unwrap();
    assert_eq!(z.method, ZMethod::LorentzSubcritical);
    assert!((z.value - 3f64.sqrt()).abs() < 1e-12, "{}", z.value);
    let g = GridFn::steps(vec![0.2, 0.5, 0.9], vec![1.0, 4.0]).unwrap();
    let z = z_norm(&SpaceSpec::lebesgue(5.0), 3, 1, &g).unwrap();
    assert_eq!(z.method, ZMethod::Supercritical);
    assert_eq!(z.value, 4.0);
    let x = xm_norm(&SpaceSpec::lebesgue(2.0), 3, 1, &GridFn::steps(vec![2.0, 3.0], vec![1.0]).unwrap()).unwrap();
    assert!((x.value - 3f64.sqrt()).abs() < 1e-12);
}

#[test]
fn generic_lower_bound_is_below_closed_form() {
    let fs = [
        GridFn::indicator(1.0, 1.0),
        GridFn::indicator(0.01, 1.0),
        GridFn::steps(vec![0.001, 0.1, 0.6], vec![5.0, 1.0]).unwrap(),
        GridFn::build(vec![1.0], vec![], Some(TailSpec::power(1.0, -0.1)), None, false).unwrap(),
    ];
    for f in &fs {
        let closed = z_norm(&SpaceSpec::lebesgue(2.0), 3, 1, f).unwrap().value;
        let g = z_norm_generic(&SpaceSpec::lebesgue(2.0), 3, 1, f, TrialBudget::default()).unwrap();
        assert!(g.lower_bound);
        assert!(g.value <= closed * (1.0 + 1e-9), "{} > {}", g.value, closed);
        assert!(g.value > 0.1 * closed, "{} vs {}", g.value, closed);
    }
}

#[test]
fn indicator_z_norm_against_duality_oracle() {
    // For χ_(0,b), X = L², n = 3, m = 1 the duality supremum is
    // b^{1/6} / sqrt(3.6 - 3 b^{1/3}).
    for b in [1.0f64, 0.1, 1e-3] {
        let want = b.powf(1.0 / 6.0) / (3.6 - 3.0 * b.powf(1.0 / 3.0)).sqrt();
        let g = z_norm_generic(&SpaceSpec::lebesgue(2.0), 3, 1, &GridFn::indicator(b, 1.0), TrialBudget::default()).unwrap();
        assert!((g.value - want).abs() < 1e-6 * want, "b={b}: {} vs {want}", g.value);
    }
}

#[test]
fn zygmund_rows() {
    let r = zygmund_table(2.0, 1.0, 3, 1).unwrap();
    assert_eq!(r.g.near_infinity(), Regime::power_log(6.0, 3.0));
    let r = zygmund_table(3.0, 0.5, 3, 1).unwrap();
    assert_eq!(r.g.near_infinity(), Regime::ExpPower { beta: 3.0 / 1.5 });
    let ZygmundE::Young { young } = &r.e else { panic!() };
    assert_eq!(young.near_infinity(), Regime::power_log(3.0, -2.5));
    let r = zygmund_table(3.0, 2.0, 3, 1).unwrap();
    assert_eq!(r.g.near_infinity(), Regime::DoubleExpPower { beta: 1.5 });
    let ZygmundE::Young { young } = &r.e else { panic!() };
    assert_eq!(young.near_infinity(), Regime::PowerLog { p: 3.0, alpha: -1.0, gamma: -3.0 });
    let r = zygmund_table(3.0, 2.5, 3, 1).unwrap();
    assert!(matches!(r.e, ZygmundE::Supercritical { .. }));
    assert!(matches!(r.g.near_infinity(), Regime::InfiniteCap { .. }));
    assert!(zygmund_table(0.5, 0.0, 3, 1).is_err());
    assert!(zygmund_table(1.0, -1.0, 3, 1).is_err());
}

#[test]
fn nonhomogeneous_specializes() {
    let x = SpaceSpec::lebesgue(2.0);
    let a = nonhomogeneous_first_order_target(&x, &x, 3).unwrap();
    let b = optimal_target(&x, 3, 1).unwrap();
    assert_eq!(a.space, b.space);
    let c = nonhomogeneous_first_order_target(&SpaceSpec::lebesgue(1.0), &x, 3).unwrap();
    assert_eq!(c.space, SpaceSpec::intersect(SpaceSpec::lorentz(6.0, 2.0), SpaceSpec::lebesgue(1.0)));
}

#[test]
fn generic_target_evaluates() {
    let x = SpaceSpec::intersect(SpaceSpec::lebesgue(2.0), SpaceSpec::lebesgue(1.5));
    let t = optimal_target(&x, 3, 1).unwrap();
    assert_eq!(t.construction, Construction::Generic);
    let v = norm(&t.space, &GridFn::indicator(0.5, 1.0)).unwrap();
    assert!(v.is_finite() && v > 0.0);
}
