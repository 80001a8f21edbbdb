mod common;

use common::{certified_corpus, constant_tube, example_system, half, order, unit};
use confract::{
    apply_n, membership, picard_solve, solve_linear_general, solve_linear_special, transform_oracle,
    truncated_transform_oracle, verify_tube, Interval, Ivp, IvpData, LinearIvp, QuadratureConfig, ScalarFn,
    SolutionSource, SolverConfig,
};
use proptest::prelude::*;

fn poly(coeffs: Vec<f64>) -> ScalarFn {
    ScalarFn::of_t(move |t| coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn special_and_general_linear_solvers_agree(
        alpha in 0.2f64..=1.0, a in 0.5f64..2.0, len in 0.5f64..2.0, x0 in -2.0f64..2.0,
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..=4),
    ) {
        let data = IvpData::new(order(alpha), Interval::new(a, a + len).unwrap(), x0).unwrap();
        let g = poly(coeffs);
        let cfg = QuadratureConfig::default();
        let special = solve_linear_special(&g, &data, 201, &cfg).unwrap();
        let general = solve_linear_general(&LinearIvp::special(data, g).unwrap(), 201, &cfg).unwrap();
        prop_assert_eq!(special.values()[0], x0);
        prop_assert_eq!(general.values()[0], x0);
        prop_assert!(special.sup_distance(&general).unwrap() <= 1e-8);
    }

    #[test]
    fn linear_solvers_match_transform_oracle(
        alpha in 0.2f64..=1.0, x0 in -2.0f64..2.0, k in -1.0f64..2.0, w in 0.5f64..3.0,
    ) {
        let data = IvpData::new(order(alpha), unit(), x0).unwrap();
        let ivp = LinearIvp::new(
            data,
            ScalarFn::of_t(move |t| k * t.powf(-alpha)),
            ScalarFn::of_t(move |t| (w * t).sin()),
        ).unwrap();
        let cfg = QuadratureConfig::default();
        let oracle = transform_oracle(&ivp.to_ivp(), 2001).unwrap();
        let general = solve_linear_general(&ivp, 2001, &cfg).unwrap();
        prop_assert!(general.sup_distance(&oracle).unwrap() <= 1e-6);

        let special_ivp = LinearIvp::special(data, ivp.g.clone()).unwrap();
        let special = solve_linear_special(&special_ivp.g, &data, 2001, &cfg).unwrap();
        let oracle = transform_oracle(&special_ivp.to_ivp(), 2001).unwrap();
        prop_assert!(special.sup_distance(&oracle).unwrap() <= 1e-6);
    }

    #[test]
    fn converged_picard_is_a_fixed_point(x0 in -0.95f64..0.95, c1 in -5.0f64..=0.0, c2 in -5.0f64..=0.0) {
        let ivp = example_system(c1, c2, 1.0, x0);
        let cert = constant_tube(0.0, 1.0);
        let scfg = SolverConfig { grid_n: 301, picard_tol: 1e-9, ..SolverConfig::default() };
        let qcfg = QuadratureConfig::default();
        let result = picard_solve(&ivp, &cert, &scfg, &qcfg).unwrap();
        if result.converged {
            prop_assert!(result.final_delta <= scfg.picard_tol);
            let image = apply_n(&result.trajectory, &ivp, &cert, &qcfg).unwrap();
            prop_assert!(image.sup_distance(&result.trajectory).unwrap() <= 2.0 * scfg.picard_tol);
        }
        prop_assert!(result.in_tube);
    }
}

#[test]
fn delivered_trajectories_stay_in_certified_tubes() {
    let scfg = SolverConfig::default();
    for case in certified_corpus() {
        let report = verify_tube(&case.cert, &case.ivp, 1001, 1e-9).unwrap();
        assert!(report.all_ok(), "{}: {report:?}", case.name);
        let result = picard_solve(&case.ivp, &case.cert, &scfg, &QuadratureConfig::default()).unwrap();
        let traj = &result.trajectory;
        let (inside, max_r) = membership(traj, &case.cert, 1e-6);
        assert!(inside, "{}: max r = {max_r}", case.name);
        let r_a = (traj.values()[0] - case.cert.v.at(1.0)).abs() - case.cert.m.at(1.0);
        assert!(r_a <= 0.0, "{}", case.name);
        if result.source == SolutionSource::OracleFallback {
            assert!(!result.converged);
        }
    }
}

#[test]
fn interior_picard_solution_agrees_with_plain_oracle() {
    for case in certified_corpus() {
        let result = picard_solve(
            &case.ivp,
            &case.cert,
            &SolverConfig::default(),
            &QuadratureConfig::default(),
        )
        .unwrap();
        let strictly_inside = result
            .trajectory
            .iter()
            .skip(1)
            .all(|(t, x)| (x - case.cert.v.at(t)).abs() < case.cert.m.at(t));
        if result.converged && strictly_inside {
            let oracle = transform_oracle(&case.ivp, 2001).unwrap();
            let d = result.trajectory.sup_distance(&oracle).unwrap();
            assert!(d <= 1e-4, "{}: {d}", case.name);
        }
    }
}

#[test]
fn order_one_regression() {
    let data = IvpData::new(order(1.0), unit(), 1.0).unwrap();
    let tr = transform_oracle(&Ivp::new(data, ScalarFn::of_tx(|_, x| x)), 2001).unwrap();
    let last = *tr.values().last().unwrap();
    assert!((last - std::f64::consts::E).abs() <= 1e-8);
}

fn convergence_ratios(ivp: &Ivp) -> Vec<f64> {
    let cert = constant_tube(0.0, 1.0);
    let distances: Vec<f64> = [251, 501, 1001, 2001]
        .iter()
        .map(|&n| {
            let scfg = SolverConfig {
                grid_n: n,
                picard_tol: 1e-14,
                ..SolverConfig::default()
            };
            let result = picard_solve(ivp, &cert, &scfg, &QuadratureConfig::default()).unwrap();
            assert!(result.converged);
            let oracle = truncated_transform_oracle(ivp, &cert, n).unwrap();
            result.trajectory.sup_distance(&oracle).unwrap()
        })
        .collect();
    distances.windows(2).map(|w| w[0] / w[1]).collect()
}

#[test]
fn picard_error_is_second_order_in_the_grid() {
    let ratios = convergence_ratios(&example_system(-1.0, -1.0, 1.0, 0.5));
    assert!(ratios.iter().all(|&r| r >= 4.0), "{ratios:?}");
    // the ratio tends to 4 and may sit a hair below it
    for x0 in [0.25, 0.9, -0.6] {
        let ratios = convergence_ratios(&example_system(-1.0, -1.0, 1.0, x0));
        assert!(ratios.iter().all(|&r| r >= 3.99), "x0 = {x0}: {ratios:?}");
    }
}

#[test]
fn truncated_oracle_output_lies_in_tube() {
    let ivp = example_system(-1.0, -1.0, 1.0, 0.9);
    let cert = constant_tube(0.0, 1.0);
    let tr = truncated_transform_oracle(&ivp, &cert, 2001).unwrap();
    let (inside, max_r) = membership(&tr, &cert, 0.0);
    assert!(inside);
    assert!(max_r <= 0.0);
    assert_eq!(tr.alpha(), half());
}
