use fracres_core::fraccalc::{self, TimeGrid, WeightedTrajectory};
use fracres_core::heat_example::{example_f, example_g, Variant};
use fracres_core::hypotheses::{
    check_krasnoselskii, contraction_constant, lq_norm, ContractionInput, KrasnoselskiiInput,
};
use fracres_core::spectral::StateVector;
use fracres_core::{
    condition_i, ml, power_inequality_margin, singular_conv_weights, weighted_sup_norm,
    HeatExampleParams,
};
use proptest::prelude::*;

fn traj(grid: TimeGrid<f64>, alpha: f64, modes: usize, data: &[f64]) -> WeightedTrajectory<f64> {
    let values = (0..=grid.steps())
        .map(|j| StateVector::new(data[j * modes..(j + 1) * modes].to_vec()).unwrap())
        .collect();
    WeightedTrajectory::new(grid, alpha, values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ml_recurrence(ai in 0usize..3, beta in 0.05f64..3.0, z in -100.0f64..1.0) {
        let alpha = [0.3, 0.5, 0.75][ai];
        let lhs = ml(alpha, beta, z).unwrap();
        let rhs = fracres_core::special::recip_gamma(beta) + z * ml(alpha, alpha + beta, z).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10, "{lhs} vs {rhs}");
    }

    #[test]
    fn ml_monotone_and_positive_on_negative_axis(
        alpha in 0.05f64..0.99,
        steps in proptest::collection::vec(0.01f64..1.0, 1..40),
    ) {
        let mut x = 0.0;
        let mut prev = ml(alpha, alpha, -x).unwrap();
        prop_assert!(prev > 0.0);
        for d in steps {
            x = (x * (1.0 + d) + d).min(1e5);
            let v = ml(alpha, alpha, -x).unwrap();
            prop_assert!(v > 0.0, "E({}) = {v}", -x);
            prop_assert!(v <= prev, "not monotone at x = {x}: {v} > {prev}");
            prev = v;
        }
    }

    #[test]
    fn conv_weights_reproduce_moments(alpha in 0.05f64..1.0, steps in 2usize..64, frac in 0.0f64..1.0) {
        let grid = TimeGrid::new(1.0, steps).unwrap();
        let j = 1 + ((steps - 1) as f64 * frac) as usize;
        let w = singular_conv_weights(&grid, alpha, j).unwrap();
        let t = grid.node(j);
        let m0: f64 = w.iter().sum();
        let m1: f64 = w.iter().enumerate().map(|(i, v)| v * grid.node(i)).sum();
        let e0 = t.powf(alpha) / alpha;
        let e1 = t.powf(alpha + 1.0) / (alpha * (alpha + 1.0));
        prop_assert!((m0 - e0).abs() <= 1e-13 * e0);
        prop_assert!((m1 - e1).abs() <= 1e-13 * e1);
    }

    #[test]
    fn sup_norm_is_a_norm(
        data in proptest::collection::vec(-5.0f64..5.0, 2 * 9 * 3),
        s in -4.0f64..4.0,
    ) {
        let grid = TimeGrid::new(1.0, 8).unwrap();
        let u = traj(grid, 0.5, 3, &data[..27]);
        let v = traj(grid, 0.5, 3, &data[27..]);
        let su = traj(grid, 0.5, 3, &data[..27].iter().map(|x| s * x).collect::<Vec<_>>());
        let nu = weighted_sup_norm(&u);
        prop_assert!((weighted_sup_norm(&su) - s.abs() * nu).abs() <= 1e-13 * (1.0 + nu));
        let sum = traj(grid, 0.5, 3, &data[..27].iter().zip(&data[27..]).map(|(a, b)| a + b).collect::<Vec<_>>());
        prop_assert!(weighted_sup_norm(&sum) <= nu + weighted_sup_norm(&v) + 1e-13);
    }

    #[test]
    fn omega_nondecreasing_along_rays(
        m in 0.0f64..2.0, b in 0.0f64..2.0, m1 in 0.0f64..2.0, m2 in 0.0f64..2.0, n in 0.0f64..3.0,
        t_end in 0.1f64..3.0, alpha in 0.2f64..1.0, f1 in 0.05f64..0.95, f2 in 0.05f64..0.95,
        which in 0usize..5, step in 0.0f64..2.0,
    ) {
        let p = ContractionInput { m, b, m1, m2, n, t_end, alpha, alpha1: f1 * alpha, alpha2: f2 * alpha };
        let mut q = p;
        match which {
            0 => q.b += step,
            1 => q.m1 += step,
            2 => q.m2 += step,
            3 => q.n += step,
            _ => q.t_end += step,
        }
        let a = contraction_constant(&p).unwrap();
        let c = contraction_constant(&q).unwrap();
        prop_assert!(c >= a * (1.0 - 1e-15), "{a} -> {c}");
    }

    #[test]
    fn lq_norm_homogeneous(cst in 0.0f64..10.0, alpha_i in 0.05f64..0.95, t_end in 0.1f64..4.0, k in 0.0f64..3.0) {
        let f = |t: f64| (k * t).sin().abs() + t * t;
        let base = lq_norm(f, alpha_i, t_end).unwrap();
        let scaled = lq_norm(|t| cst * f(t), alpha_i, t_end).unwrap();
        prop_assert!((scaled - cst * base).abs() <= 1e-10 * (1.0 + cst * base));
    }

    #[test]
    fn krasnoselskii_monotone_in_r(
        m in 0.0f64..2.0, b in 0.0f64..1.0, x_norm in 0.0f64..3.0, g_sup in 0.0f64..2.0, h in 0.0f64..2.0,
        alpha in 0.2f64..1.0, f3 in 0.05f64..0.95, r0 in 0.01f64..20.0, dr in 0.0f64..20.0,
    ) {
        let p = KrasnoselskiiInput { m, b, x_norm, g_sup, h, t_end: 1.0, alpha, alpha3: f3 * alpha };
        if check_krasnoselskii(&p, r0).unwrap() {
            prop_assert!(check_krasnoselskii(&p, r0 + dr).unwrap());
        }
    }

    #[test]
    fn forcing_lipschitz(
        t in 0.0f64..1.0, w1 in -50.0f64..50.0, w2 in -50.0f64..50.0, v1 in -50.0f64..50.0, v2 in -50.0f64..50.0,
        mu1 in 0.0f64..2.0, mu2 in 0.0f64..2.0,
    ) {
        let d = (example_f(t, w1, w2, mu1, mu2) - example_f(t, v1, v2, mu1, mu2)).abs();
        prop_assert!(d <= mu1 * (w1 - v1).abs() + mu2 * (w2 - v2).abs() + 1e-14);
        prop_assert!(example_f(t, w1, w2, mu1, mu2).abs() <= mu1 + mu2);
    }

    #[test]
    fn variant_one_lipschitz(
        data in proptest::collection::vec(-3.0f64..3.0, 2 * 17 * 4),
        a in proptest::collection::vec(0.0f64..1.0, 2),
        nodes in proptest::collection::vec(1usize..=16, 2),
    ) {
        let grid = TimeGrid::new(1.0, 16).unwrap();
        let alpha = 0.5;
        let u = traj(grid, alpha, 4, &data[..68]);
        let v = traj(grid, alpha, 4, &data[68..]);
        let t: Vec<f64> = nodes.iter().map(|&j| grid.node(j)).collect();
        let gu = example_g(&u, Variant::I, &a, &t).unwrap();
        let gv = example_g(&v, Variant::I, &a, &t).unwrap();
        let b: f64 = a.iter().zip(&t).map(|(ai, ti)| ai * ti.powf(alpha - 1.0)).sum();
        let d = weighted_sup_norm(&u.difference(&v).unwrap());
        prop_assert!((&gu - &gv).norm() <= b * d + 1e-12);
    }

    #[test]
    fn variant_two_bounded(
        data in proptest::collection::vec(-1e3f64..1e3, 17 * 6),
        a in proptest::collection::vec(0.0f64..10.0, 3),
        nodes in proptest::collection::vec(1usize..=16, 3),
    ) {
        let grid = TimeGrid::new(1.0, 16).unwrap();
        let u = traj(grid, 0.4, 6, &data);
        let t: Vec<f64> = nodes.iter().map(|&j| grid.node(j)).collect();
        let g = example_g(&u, Variant::II, &a, &t).unwrap();
        prop_assert!(g.norm() <= 1.0);
    }

    #[test]
    fn condition_one_is_contraction_constant(
        alpha in 0.1f64..0.99, f1 in 0.05f64..0.95, f2 in 0.05f64..0.95,
        mu1 in 0.0f64..1.0, mu2 in 0.0f64..1.0,
        a in proptest::collection::vec(0.0f64..1.0, 1..4), t in proptest::collection::vec(0.05f64..1.0, 4),
    ) {
        let params = HeatExampleParams {
            alpha,
            alpha1: f1 * alpha,
            alpha2: f2 * alpha,
            alpha3: 0.5 * alpha,
            mu1,
            mu2,
            t_points: t[..a.len()].to_vec(),
            a,
            ..HeatExampleParams::reference()
        };
        let cond = condition_i(&params).unwrap();
        let omega = contraction_constant(&ContractionInput {
            m: 1.0 / fracres_core::special::gamma(alpha),
            b: params.nonlocal_lipschitz(),
            m1: mu1,
            m2: mu2,
            n: std::f64::consts::E,
            t_end: 1.0,
            alpha,
            alpha1: params.alpha1,
            alpha2: params.alpha2,
        })
        .unwrap();
        prop_assert!((cond.value - omega).abs() <= 1e-12);
        prop_assert_eq!(cond.holds, cond.value < 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn power_inequality(x in 1e-12f64..=10.0, y in 1e-12f64..=10.0, gamma in 0.05f64..0.95) {
        prop_assert!(power_inequality_margin(x, y, gamma).unwrap() >= -1e-12);
    }
}

#[test]
fn semigroup_error_decreases_for_cosine() {
    let err = |steps: usize| {
        let grid = TimeGrid::new(1.0, steps).unwrap();
        let w: Vec<f64> = grid.nodes().iter().map(|t: &f64| t.cos()).collect();
        let u = WeightedTrajectory::scalar(grid, 1.0, &w).unwrap();
        let twice =
            fraccalc::frac_integral(&fraccalc::frac_integral(&u, 0.5).unwrap(), 0.5).unwrap();
        let once = fraccalc::frac_integral(&u, 1.0).unwrap();
        weighted_sup_norm(&twice.difference(&once).unwrap())
    };
    let e: Vec<f64> = [64, 128, 256].iter().map(|&n| err(n)).collect();
    assert!(e[0] > e[1] && e[1] > e[2], "{e:?}");
}
