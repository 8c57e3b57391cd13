use proptest::prelude::*;
use riembed::funcrep::rearrange;
use riembed::norms::{norm, SpaceSpec};
use riembed::young::YoungFn;
use riembed::GridFn;

/// Cells of width `w[i]` starting at `start`, with values `v[i]`.
fn steps(start: f64, w: &[f64], v: &[f64]) -> GridFn {
    let mut br = vec![start];
    for x in w {
        br.push(br.last().unwrap() + x);
    }
    GridFn::steps(br, v[..w.len()].to_vec()).unwrap()
}

fn step_fn() -> impl Strategy<Value = GridFn> {
    (0.01f64..2.0, prop::collection::vec(0.05f64..4.0, 1..8), prop::collection::vec(0.0f64..5.0, 8))
        .prop_map(|(s, w, v)| steps(s, &w, &v))
}

fn space() -> impl Strategy<Value = SpaceSpec> {
    prop_oneof![
        (1.0f64..8.0).prop_map(SpaceSpec::lebesgue),
        Just(SpaceSpec::linf()),
        (1.1f64..8.0, 1.0f64..8.0).prop_map(|(p, q)| SpaceSpec::lorentz(p, q)),
        (1.0f64..5.0).prop_map(|p| SpaceSpec::orlicz(YoungFn::power(p).unwrap())),
        (1.0f64..4.0, 4.5f64..8.0).prop_map(|(p, r)| SpaceSpec::intersect(SpaceSpec::lebesgue(p), SpaceSpec::lorentz(r, p))),
    ]
    .prop_filter("admissible", |s| s.check_admissible().is_ok())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn positive_homogeneity(x in space(), f in step_fn(), lambda in 1e-3f64..1e3) {
        let a = norm(&x, &f.scaled(lambda)).unwrap();
        let b = lambda * norm(&x, &f).unwrap();
        prop_assert!(close(a, b, 1e-9), "{a} {b}");
    }

    #[test]
    fn triangle_inequality(x in space(), f in step_fn(), g in step_fn()) {
        let lhs = norm(&x, &f.add(&g).unwrap()).unwrap();
        let rhs = norm(&x, &f).unwrap() + norm(&x, &g).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-9), "{lhs} > {rhs}");
    }

    #[test]
    fn lattice_property(x in space(), f in step_fn(), h in step_fn()) {
        let small = norm(&x, &f).unwrap();
        let big = norm(&x, &f.add(&h).unwrap()).unwrap();
        prop_assert!(small <= big * (1.0 + 1e-9), "{small} > {big}");
    }

    #[test]
    fn rearrangement_invariance(x in space(), w in 0.05f64..3.0, v in prop::collection::vec(0.0f64..5.0, 6), start in 0.01f64..2.0) {
        // Cells of equal width in two orders are equimeasurable.
        let widths = vec![w; 6];
        let mut rev = v.clone();
        rev.reverse();
        let f = steps(start, &widths, &v);
        let g = steps(start + 1.0, &widths, &rev);
        let nf = norm(&x, &f).unwrap();
        prop_assert!(close(nf, norm(&x, &g).unwrap(), 1e-9));
        prop_assert!(close(nf, norm(&x, &rearrange(&f).unwrap()).unwrap(), 1e-9));
    }

    #[test]
    fn lorentz_diagonal_is_lebesgue(p in 1.0f64..8.0, f in step_fn()) {
        let a = norm(&SpaceSpec::lorentz(p, p), &f).unwrap();
        let b = norm(&SpaceSpec::lebesgue(p), &f).unwrap();
        prop_assert!(close(a, b, 1e-9), "{a} {b}");
    }

    #[test]
    fn power_orlicz_is_lebesgue(p in 1.0f64..6.0, f in step_fn()) {
        let a = norm(&SpaceSpec::orlicz(YoungFn::power(p).unwrap()), &f).unwrap();
        let b = norm(&SpaceSpec::lebesgue(p), &f).unwrap();
        prop_assert!(close(a, b, 1e-8), "{a} {b}");
    }

    #[test]
    fn lebesgue_matches_direct_sum(p in 1.0f64..8.0, s in 0.01f64..2.0, w in prop::collection::vec(0.05f64..4.0, 1..8), v in prop::collection::vec(0.0f64..5.0, 8)) {
        let f = steps(s, &w, &v);
        let direct: f64 = w.iter().zip(&v).map(|(w, v)| w * v.powf(p)).sum::<f64>().powf(1.0 / p);
        prop_assert!(close(norm(&SpaceSpec::lebesgue(p), &f).unwrap(), direct, 1e-10));
    }

    #[test]
    fn fatou_on_truncations(x in space(), f in step_fn()) {
        let full = norm(&x, &f).unwrap();
        let mut prev = 0.0;
        for k in 1..=8 {
            let t = k as f64 / 8.0;
            let fk = f.min_const(f.sup() * t).unwrap();
            let v = norm(&x, &fk).unwrap();
            prop_assert!(v >= prev * (1.0 - 1e-9));
            prev = v;
        }
        prop_assert!(close(prev, full, 1e-9));
    }
}
