use super::*;
use crate::model::testing::*;
use crate::model::{ActivationSet, NetworkInstance, PhysicsParams};
use crate::optimizer::{build_program, solve_lower_bound, solve_srp, DEFAULT_COLUMN_BUDGET, DEFAULT_TOLERANCE};
use crate::policy::*;
use crate::sim::{run_frame_synchronous, SimConfig, SimTrace};
use crate::Error;

fn dist(net: &NetworkInstance, entries: &[(&[usize], f64)]) -> ScheduleDistribution {
    let e = entries
        .iter()
        .map(|(m, p)| ScheduleEntry { members: ActivationSet::new(net, m.iter().copied()).unwrap(), prob: *p })
        .collect();
    ScheduleDistribution::new(net, e).unwrap()
}

fn user_with_tau(tau: u32) -> NetworkInstance {
    let net = single_user_at(5.0, PhysicsParams::default());
    let p = *net.physics();
    let per_slot = p.bits_per_slot(net.links().sinr(0, &[0]));
    let bits = (per_slot * (tau as f64 - 0.5)).round() as u64;
    net.with_physics(PhysicsParams { update_size_bits: bits, ..p }).unwrap()
}

#[test]
fn closed_form_examples() {
    let net = user_with_tau(1);
    assert_eq!(srp_expected_aoi(&net, &dist(&net, &[(&[0], 1.0)])).unwrap(), 1.0);
    let net = user_with_tau(2);
    assert_eq!(srp_expected_aoi(&net, &dist(&net, &[(&[0], 1.0)])).unwrap(), 2.5);

    let net = line_instance(&[2], 0.0);
    let starved = dist(&net, &[(&[0], 0.7)]);
    assert!(matches!(srp_expected_aoi(&net, &starved), Err(Error::StarvedUser(1))));
}

#[test]
fn renewal_estimate_exact_for_periodic_two_slot_updates() {
    let net = user_with_tau(2);
    let p = Stationary { dist: dist(&net, &[(&[0], 1.0)]) };
    let tr = run_frame_synchronous(&net, &p, &SimConfig::new(2000, 0));
    assert_eq!(renewal_aoi_estimate(&tr).unwrap(), 2.5);
}

#[test]
fn renewal_estimate_reduces_for_unit_service() {
    let net = line_instance(&[3], 0.0).with_physics(one_slot_physics()).unwrap();
    let p = Stationary { dist: dist(&net, &[(&[0], 0.5), (&[1], 0.3), (&[2], 0.2)]) };
    let tr = run_frame_synchronous(&net, &p, &SimConfig::new(5000, 4));
    let mut want = 0.0;
    for i in 0..3 {
        let s = tr.samples(i);
        assert!(s.service.iter().all(|&v| v == 1));
        let x: Vec<f64> = s.waiting.iter().map(|&w| w as f64 + 1.0).collect();
        let m1 = x.iter().sum::<f64>() / x.len() as f64;
        let m2 = x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
        want += m2 / (2.0 * m1) + 1.0 - 0.5;
    }
    assert!((renewal_aoi_estimate(&tr).unwrap() - want / 3.0).abs() < 1e-12);
}

#[test]
fn renewal_estimate_needs_two_deliveries() {
    let net = line_instance(&[2], 0.0);
    let p = Stationary { dist: dist(&net, &[(&[0], 1.0)]) };
    let tr = run_frame_synchronous(&net, &p, &SimConfig::new(100, 0));
    assert!(matches!(renewal_aoi_estimate(&tr), Err(Error::InsufficientDeliveries { user: 1, deliveries: 0 })));
}

fn discrepancy(tr: &SimTrace) -> f64 {
    (renewal_aoi_estimate(tr).unwrap() - tr.weighted_average_aoi()).abs()
}

#[test]
fn estimators_agree_and_converge() {
    let net = random_instance(2, 5, 0.5, 3);
    let tr = run_frame_synchronous(&net, &MaxWeight, &SimConfig::new(10_000, 0));
    let j = tr.weighted_average_aoi();
    assert!(discrepancy(&tr) <= 0.03 * j, "{} vs {j}", renewal_aoi_estimate(&tr).unwrap());

    let short = run_frame_synchronous(&net, &MaxWeight, &SimConfig::new(5_000, 0));
    let long = run_frame_synchronous(&net, &MaxWeight, &SimConfig::new(40_000, 0));
    assert!(discrepancy(&long) < discrepancy(&short));
}

#[test]
fn jensen_and_throughput_identity() {
    let net = random_instance(3, 3, 0.7, 6);
    for p in [&MaxWeight as &dyn Policy, &ApproxMaxWeight::default(), &PerApMaxWeight] {
        let tr = run_frame_synchronous(&net, p, &SimConfig::new(8000, 1));
        let summary = moment_summary(&tr);
        assert!(summary.mean_frame_sq >= summary.mean_frame * summary.mean_frame);
        for (i, m) in summary.users.iter().enumerate() {
            let m = m.as_ref().unwrap();
            assert!(jensen_holds(m));
            assert!(m.mean_waiting_sq >= m.mean_waiting * m.mean_waiting);
            assert!(m.mean_service_sq >= m.mean_service * m.mean_service);
            let s = tr.samples(i);
            let gap = (empirical_throughput(&tr, i) - renewal_throughput(m)).abs();
            assert!(gap <= (s.residual + 1) as f64 / tr.horizon as f64);
        }
    }
}

#[test]
fn unit_frames_give_trivial_constants() {
    let net = random_instance(2, 2, 0.5, 1).with_physics(one_slot_physics()).unwrap();
    let program = build_program(&net, DEFAULT_COLUMN_BUDGET).unwrap();
    let (srp, _) = solve_srp(&program, DEFAULT_TOLERANCE).unwrap();
    let (lb, _) = solve_lower_bound(&program, DEFAULT_TOLERANCE).unwrap();
    let tr = run_frame_synchronous(&net, &MaxWeight, &SimConfig::new(2000, 0));
    let r = ratio_report(&net, &srp, &lb, &[("mw", &tr)], 0.1).unwrap();
    assert!((r.psi_lb - 1.0).abs() < 1e-9);
    assert_eq!(r.psi_mw, Some(0.0));
}

#[test]
fn bounds_hold_on_two_cells() {
    for seed in 0..3 {
        let net = random_instance(2, 5, 0.3, seed);
        let program = build_program(&net, DEFAULT_COLUMN_BUDGET).unwrap();
        let (srp, rep) = solve_srp(&program, DEFAULT_TOLERANCE).unwrap();
        let (lb, _) = solve_lower_bound(&program, DEFAULT_TOLERANCE).unwrap();
        let cfg = SimConfig::new(10_000, seed);
        let mw = run_frame_synchronous(&net, &MaxWeight, &cfg);
        let amw = run_frame_synchronous(&net, &ApproxMaxWeight::default(), &cfg);
        let r = ratio_report(&net, &srp, &lb, &[("mw", &mw), ("amw", &amw)], 0.1).unwrap();
        assert!((r.srp_closed_form - rep.objective).abs() <= 1e-9 * rep.objective);
        assert!(r.mean_frame_srp >= 1.0);
        assert_eq!(r.srp.holds, Some(true));
        assert_eq!(r.mw.holds, Some(true));
        assert_eq!(r.amw.holds, Some(true));
        assert!(r.lower_bound <= r.srp_closed_form);
        assert!(r.lower_bound <= mw.weighted_average_aoi() && r.lower_bound <= amw.weighted_average_aoi());
    }
}

#[test]
fn zero_lower_bound_reports_not_applicable() {
    let net = user_with_tau(1);
    let program = build_program(&net, DEFAULT_COLUMN_BUDGET).unwrap();
    let (srp, _) = solve_srp(&program, DEFAULT_TOLERANCE).unwrap();
    let (mut lb, _) = solve_lower_bound(&program, DEFAULT_TOLERANCE).unwrap();
    lb.value = 0.0;
    let r = ratio_report(&net, &srp, &lb, &[], 0.1).unwrap();
    assert_eq!(r.srp.ratio, None);
    let json = serde_json::to_string(&r).unwrap();
    assert!(json.contains("\"n/a\""));
}

#[test]
fn sample_path_sum_by_hand() {
    // initial age 0, deliveries (start 1, done 3) and (start 3, done 4), T = 6:
    // ages 0 1 2 | 2 | 1 2  -> 8
    let s = crate::sim::DeliverySamples { initial_age: 0, waiting: vec![1, 0], service: vec![2, 1], residual: 2 };
    assert_eq!(sample_path_age_sum(&s), 8);
    assert_eq!(sample_path_horizon(&s), 6);
}
