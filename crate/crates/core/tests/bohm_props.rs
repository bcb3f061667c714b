use proptest::prelude::*;

use slitwave::bohm::{integrate, integrate_batch, integrate_with_planes, launch_grid, IntegratorConfig};
use slitwave::scenario::Scenario;
use slitwave::ScenarioParams;

fn grating() -> impl Strategy<Value = ScenarioParams> {
    (0.2f64..1.0, 2usize..6, 3.0f64..8.0, 0.1f64..0.4)
        .prop_map(|(lambda, n, d, frac)| ScenarioParams::new(lambda, n, d, d * frac).unwrap())
}

/// `n` equally spaced planes ending exactly at `z_end`.
fn planes(z_end: f64, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (1..n).map(|i| z_end * i as f64 / n as f64).collect();
    v.push(z_end);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trajectories_keep_their_order(p in grating(), per_slit in 2usize..6, span in 0.5f64..2.5) {
        let z_end = 2.0 * p.talbot_length();
        let cfg = IntegratorConfig::for_span(&p, 0.0, z_end);
        let planes = planes(z_end, 40);
        let launches = launch_grid(&p, per_slit, span);
        let ts = integrate_batch(&p, &cfg, &launches, 0.0, z_end, &planes).unwrap();
        for &z in &planes {
            let column: Vec<f64> = ts
                .iter()
                .filter(|t| t.is_completed())
                .map(|t| t.points.iter().find(|q| q[1] == z).unwrap()[0])
                .collect();
            for w in column.windows(2) {
                prop_assert!(w[0] < w[1], "crossing at z={z}: {} >= {}", w[0], w[1]);
            }
        }
    }

    #[test]
    fn mirrored_launches_mirror(p in grating(), u in 0.05f64..1.0) {
        let x = u * 0.5 * p.slit_count() as f64 * p.slit_pitch();
        let z_end = 2.0 * p.talbot_length();
        let cfg = IntegratorConfig::for_span(&p, 0.0, z_end);
        let planes = planes(z_end, 20);
        let a = integrate_with_planes(&p, &cfg, x, 0.0, z_end, &planes).unwrap();
        let b = integrate_with_planes(&p, &cfg, -x, 0.0, z_end, &planes).unwrap();
        prop_assume!(a.is_completed() && b.is_completed());
        for &z in &planes {
            let xa = a.position_at(z).unwrap();
            let xb = b.position_at(z).unwrap();
            let scale = p.sigma().max(xa.abs());
            prop_assert!((xa + xb).abs() <= 10.0 * cfg.rel_tol * scale, "z={z}: {xa} vs {xb}");
        }
    }

    #[test]
    fn trajectory_invariants(p in grating(), u in -1.0f64..1.0) {
        let x = u * 0.5 * p.slit_count() as f64 * p.slit_pitch();
        let z_end = p.talbot_length();
        let cfg = IntegratorConfig::for_span(&p, 0.0, z_end);
        let t = integrate(&p, &cfg, x, 0.0, z_end).unwrap();
        prop_assert_eq!(t.points[0], [x, 0.0]);
        prop_assert_eq!(t.launch_x, x);
        prop_assert!(t.points.windows(2).all(|w| w[0][1] < w[1][1]));
        prop_assert_eq!(t.is_completed(), t.last()[1] == z_end);
    }

    #[test]
    fn tighter_tolerance_moves_endpoint_less_than_error_estimate(p in grating(), u in -1.0f64..1.0) {
        let x = u * 0.5 * p.slit_count() as f64 * p.slit_pitch();
        let z_end = p.talbot_length();
        let cfg = IntegratorConfig::for_span(&p, 0.0, z_end).with_rel_tol(1e-8);
        let coarse = integrate(&p, &cfg, x, 0.0, z_end).unwrap();
        let fine = integrate(&p, &cfg.with_rel_tol(5e-9), x, 0.0, z_end).unwrap();
        prop_assume!(coarse.is_completed() && fine.is_completed());
        let moved = (coarse.last()[0] - fine.last()[0]).abs();
        prop_assert!(moved <= coarse.stats.error_estimate, "moved {moved:e}, estimate {:e}", coarse.stats.error_estimate);
    }
}

#[test]
fn far_field_trajectories_straighten() {
    let s = Scenario::preset("farfield7").unwrap();
    let p = s.params;
    let z_end = s.grid.z_min;
    let cfg = IntegratorConfig::for_span(&p, 0.0, z_end);
    // second difference over (0.8z, 0.9z, z) relative to the first difference
    let probes = [1e-6 * z_end, 1e-3 * z_end, z_end];
    let mut planes = Vec::new();
    for &z in &probes {
        planes.extend([0.8 * z, 0.9 * z, z]);
    }
    for &x0 in &s.trajectories.launches {
        let t = integrate_with_planes(&p, &cfg, x0, 0.0, z_end, &planes).unwrap();
        assert!(t.is_completed());
        let bend = |z: f64| {
            let x = |f: f64| t.position_at(f * z).unwrap();
            (x(1.0) - 2.0 * x(0.9) + x(0.8)).abs() / (x(1.0) - x(0.8)).abs()
        };
        let b: Vec<f64> = probes.iter().map(|&z| bend(z)).collect();
        assert!(b[2] < 1e-6 && b[2] < b[0], "x0={x0}: {b:?}");
    }
}
