use super::*;
use crate::tail::TailSpec;
use crate::young::Regime;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1e-300)
}

#[test]
fn lebesgue_indicator() {
    let v = norm(&SpaceSpec::lebesgue(2.0), &GridFn::indicator(16.0, 1.0)).unwrap();
    assert!(close(v, 4.0, 1e-14), "{v}");
    let v = norm(&SpaceSpec::linf(), &GridFn::steps(vec![1.0, 2.0, 5.0], vec![3.0, 7.0]).unwrap()).unwrap();
    assert_eq!(v, 7.0);
}

#[test]
fn lorentz_indicator_closed_form() {
    for (p, q) in [(6.0, 2.0), (2.0, 1.0), (3.0, 3.0), (1.5, 4.0), (1.0, 1.0)] {
        let v = norm(&SpaceSpec::lorentz(p, q), &GridFn::indicator(1.0, 1.0)).unwrap();
        let want: f64 = (p / q as f64).powf(1.0 / q);
        assert!(close(v, want, 1e-13), "p={p} q={q}: {v} vs {want}");
    }
    let v = norm(&SpaceSpec::lorentz(2.0, f64::INFINITY), &GridFn::indicator(4.0, 1.0)).unwrap();
    assert!(close(v, 2.0, 1e-12));
}

#[test]
fn lorentz_inadmissible_pairs_are_refused() {
    let f = GridFn::indicator(1.0, 1.0);
    for (p, q) in [(1.0, 2.0), (0.5, 1.0), (f64::INFINITY, 2.0)] {
        assert!(matches!(norm(&SpaceSpec::lorentz(p, q), &f), Err(Error::Inadmissible(_))));
    }
}

#[test]
fn tails_match_power_integrals() {
    // s^{-1/4} on (0,1): L² norm² = ∫ s^{-1/2} = 2.
    let f = GridFn::build(vec![1.0], vec![], Some(TailSpec::power(1.0, -0.25)), None, false).unwrap();
    let v = norm(&SpaceSpec::lebesgue(2.0), &f).unwrap();
    assert!(close(v, 2f64.sqrt(), 1e-12), "{v}");
    // s^{-1/2}(1+|ln s|)^{-1} on (0,e^{-2}): L² norm² = ∫ s^{-1} ℓ^{-2} = 1/3.
    let b = (-2f64).exp();
    let f = GridFn::build(vec![b], vec![], Some(TailSpec::power_log(1.0, -0.5, -1.0)), None, false).unwrap();
    let v = norm(&SpaceSpec::lebesgue(2.0), &f).unwrap();
    assert!(close(v, (1.0f64 / 3.0).sqrt(), 1e-7), "{v}");
    // Divergent: s^{-1/2} in L².
    let f = GridFn::build(vec![1.0], vec![], Some(TailSpec::power(1.0, -0.5)), None, false).unwrap();
    assert!(norm(&SpaceSpec::lebesgue(2.0), &f).unwrap().is_infinite());
    // Right tail s^{-1} on (1, inf): L² norm = 1, L¹ diverges.
    let f = GridFn::build(vec![1.0], vec![], None, Some(TailSpec::power(1.0, -1.0)), false).unwrap();
    assert!(close(norm(&SpaceSpec::lebesgue(2.0), &f).unwrap(), 1.0, 1e-12));
    assert!(norm(&SpaceSpec::lebesgue(1.0), &f).unwrap().is_infinite());
}

#[test]
fn shifted_log_weight() {
    // ∫_0^1 s^{-1}(ln 2 + ln 1/s)^{-2} ds = 1/ln 2.
    let seg = WeightSegment { log_offset: 2f64.ln(), ..WeightSegment::new(0.0, 1.0, 1.0, -0.5, -1.0) };
    let sp = SpaceSpec::LambdaQ { q: 2.0, weight: Weight::new(vec![seg]).unwrap() };
    let v = norm_on(&sp, &GridFn::indicator(1.0, 1.0), Interval::Unit).unwrap();
    assert!(close(v, (1.0 / 2f64.ln()).sqrt(), 1e-8), "{v}");
}

fn young_kinds() -> Vec<YoungFn> {
    vec![
        YoungFn::power(2.0).unwrap(),
        YoungFn::power(1.0).unwrap(),
        YoungFn::new(Regime::power(2.0), Regime::power_log(2.0, 1.5)).unwrap(),
        YoungFn::new(Regime::power(3.0), Regime::ExpPower { beta: 2.0 }).unwrap(),
        YoungFn::new(Regime::power(2.0), Regime::DoubleExpPower { beta: 1.0 }).unwrap(),
        YoungFn::new(Regime::power(1.5), Regime::InfiniteCap { t0: 3.0 }).unwrap(),
    ]
}

#[test]
fn luxemburg_indicators() {
    for a in young_kinds() {
        for len in [1e-3, 0.2, 1.0, 7.0, 1e4] {
            let v = norm(&SpaceSpec::orlicz(a.clone()), &GridFn::indicator(len, 1.0)).unwrap();
            let want = 1.0 / a.generalized_inverse(1.0 / len).unwrap();
            assert!(close(v, want, 1e-8), "{}: len={len} {v} vs {want}", a.describe());
        }
    }
    let v = norm(&SpaceSpec::orlicz(YoungFn::power(3.0).unwrap()), &GridFn::indicator(8.0, 1.0)).unwrap();
    assert!(close(v, 2.0, 1e-10));
}

#[test]
fn luxemburg_modular_certificate() {
    let a = YoungFn::new(Regime::power(2.0), Regime::power_log(2.0, 1.0)).unwrap();
    let f = GridFn::steps(vec![0.5, 1.0, 3.0, 10.0], vec![4.0, 1.0, 0.25]).unwrap();
    let fs = rearrange(&f).unwrap();
    let lam = luxemburg(&fs, &Weight::unit(), &a, f64::INFINITY).unwrap();
    let ps = eval::products(&fs, &Weight::unit(), f64::INFINITY);
    let m = eval::modular(&ps, &a, lam);
    assert!((m - 1.0).abs() < 1e-8, "{m}");
}

#[test]
fn capped_orlicz_behaves_like_sup() {
    // A = t near 0, +inf beyond 1: ‖f‖ = max(‖f‖_∞, ‖f‖_1) for this splice.
    let a = YoungFn::new(Regime::power(1.0), Regime::InfiniteCap { t0: 1.0 }).unwrap();
    let f = GridFn::steps(vec![0.1, 0.2], vec![5.0]).unwrap();
    let v = norm(&SpaceSpec::orlicz(a), &f).unwrap();
    assert!(close(v, 5.0, 1e-9), "{v}");
}

#[test]
fn localized_and_fundamental() {
    let f = GridFn::indicator(0.5, 1.0);
    let sp = SpaceSpec::lorentz(6.0, 2.0);
    assert_eq!(localized_norm(&sp, &f).unwrap(), norm(&sp, &f).unwrap());
    let bad = GridFn::steps(vec![0.5, 2.0], vec![1.0]).unwrap();
    assert!(matches!(localized_norm(&sp, &bad), Err(Error::SupportViolation)));
    let s: f64 = 0.3;
    assert!(close(fundamental_function(&SpaceSpec::lebesgue(3.0), s).unwrap(), s.powf(1.0 / 3.0), 1e-13));
    assert!(close(fundamental_function(&sp, s).unwrap(), 3f64.sqrt() * s.powf(1.0 / 6.0), 1e-13));
    let a = YoungFn::new(Regime::power(2.0), Regime::ExpPower { beta: 1.0 }).unwrap();
    let want = 1.0 / a.generalized_inverse(1.0 / s).unwrap();
    assert!(close(fundamental_function(&SpaceSpec::orlicz(a), s).unwrap(), want, 1e-8));
}

#[test]
fn associates() {
    let g = GridFn::steps(vec![0.5, 1.0, 4.0], vec![3.0, 2.0]).unwrap();
    let v = associate_norm(&SpaceSpec::lebesgue(1.0), &g, TrialBudget::default()).unwrap();
    assert_eq!(v.value, 3.0);
    assert!(!v.lower_bound);
    let one = GridFn::indicator(1.0, 1.0);
    let v = associate_norm(&SpaceSpec::lebesgue(2.0), &one, TrialBudget::default()).unwrap();
    assert!(close(v.value, 1.0, 1e-14));
    let h = hoelder_check(&SpaceSpec::lebesgue(2.0), &one, &one).unwrap();
    assert!(h.holds && close(h.ratio, 1.0, 1e-12));
    let h = hoelder_check(&SpaceSpec::lebesgue(2.0), &GridFn::zero(), &one).unwrap();
    assert!(h.holds && h.ratio == 0.0);
}

#[test]
fn orlicz_associate_lower_bound_is_exact_on_powers() {
    // For A = t², ‖g‖_{X'} = ‖g‖_{L²} up to the factor 1; trials reach it closely.
    let g = GridFn::steps(vec![0.25, 1.0, 2.0, 6.0], vec![4.0, 2.0, 0.5]).unwrap();
    let exact = norm(&SpaceSpec::lebesgue(2.0), &g).unwrap();
    let lb = associate_lower_bound(&SpaceSpec::orlicz(YoungFn::power(2.0).unwrap()), &g, TrialBudget::default()).unwrap();
    assert!(lb <= exact * (1.0 + 1e-9) && lb >= 0.98 * exact, "{lb} vs {exact}");
}

#[test]
fn lambda_q_admissibility_is_enforced() {
    let w = Weight::new(vec![WeightSegment::new(0.0, 1.0, 1.0, 3.0, 0.0)]).unwrap();
    let sp = SpaceSpec::LambdaQ { q: 2.0, weight: w };
    assert!(matches!(norm_on(&sp, &GridFn::indicator(0.5, 1.0), Interval::Unit), Err(Error::Inadmissible(_))));
    let inc = SpaceSpec::LambdaA { young: YoungFn::power(2.0).unwrap(), weight: Weight::power(0.5) };
    assert!(inc.check_admissible().is_err());
}

#[test]
fn spaces_roundtrip_through_json() {
    let sp = SpaceSpec::intersect(
        SpaceSpec::lorentz(6.0, 2.0),
        SpaceSpec::LambdaA { young: YoungFn::power(2.0).unwrap(), weight: Weight::power(-0.25) },
    );
    let s = serde_json::to_string(&sp).unwrap();
    let back: SpaceSpec = serde_json::from_str(&s).unwrap();
    assert_eq!(back, sp);
    let s = serde_json::to_string(&SpaceSpec::linf()).unwrap();
    assert_eq!(s, r#"{"kind":"Lebesgue","p":"inf"}"#);
}
