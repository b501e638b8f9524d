//! Optimizer behaviour: the optimal-squeezing law, dominations between
//! families, and gain optimization against the alphabet prior.

use num_complex::Complex64;
use telefid::fidelity::{average_fidelity, classical_benchmark, fidelity_closed};
use telefid::optimize::search::golden_max;
use telefid::optimize::{
    affinity, one_shot_at, one_shot_fidelity, optimize_beta_independent, optimize_gain_average, r_max,
    OptimizerMethod, RMax,
};
use telefid::{AlphabetPrior, GainSetting, NoiseParams, ResourceFamily, ResourceSpec};

fn noise(tau: f64, r2: f64) -> NoiseParams {
    NoiseParams::new(tau, 0.0, r2).unwrap()
}

fn opt(family: ResourceFamily, r: f64, n: &NoiseParams) -> f64 {
    optimize_beta_independent(family, r, n).unwrap().value
}

#[test]
fn r_max_formula() {
    let v = r_max(0.3).unwrap().value().unwrap();
    assert!((v - 1.296).abs() < 1e-3, "{v}");
    assert_eq!(r_max(0.0).unwrap(), RMax::Unbounded);
    assert!(r_max(-0.1).is_err());
    let far = r_max(60.0).unwrap().value().unwrap();
    assert!(far > 0.0 && far < 1e-12);
    // printed form, evaluated directly
    for tau in [0.1f64, 0.2, 0.3, 1.0] {
        let ch = (tau / 2.0).cosh();
        let printed = 0.5 * ((ch + 1.0) / (ch - 1.0)).sqrt().ln();
        assert!((r_max(tau).unwrap().value().unwrap() - printed).abs() < 1e-10);
    }
}

#[test]
fn numeric_argmax_matches_r_max_and_maxima_are_shared() {
    for tau in [0.1, 0.2, 0.3] {
        let n = noise(tau, 0.0);
        let rm = r_max(tau).unwrap().value().unwrap();
        let mut peaks = Vec::new();
        for family in [ResourceFamily::TwinBeam, ResourceFamily::SqueezedBell, ResourceFamily::SqueezedCat] {
            let (r, v, _) = golden_max(|r| opt(family, r, &n), 0.5, 3.0, 1e-7);
            assert!((r - rm).abs() < 1e-3, "{family} tau={tau}: argmax {r} vs {rm}");
            peaks.push(v);
        }
        assert!(peaks.iter().all(|v| (v - peaks[0]).abs() < 1e-6), "tau={tau}: {peaks:?}");
    }
}

#[test]
fn dominations_hold_on_a_grid() {
    for tau in [0.0, 0.1, 0.3] {
        for r2 in [0.0, 0.05, 0.15] {
            let n = noise(tau, r2);
            for i in 0..=15 {
                let r = 0.1 * i as f64;
                let tw = opt(ResourceFamily::TwinBeam, r, &n);
                let ps = opt(ResourceFamily::PhotonSubtracted, r, &n);
                let sb = opt(ResourceFamily::SqueezedBell, r, &n);
                let sc = opt(ResourceFamily::SqueezedCat, r, &n);
                assert!(sb >= tw && sb >= ps, "r={r} tau={tau} r2={r2}: sb {sb} tw {tw} ps {ps}");
                assert!(sc >= tw, "r={r} tau={tau} r2={r2}: sc {sc} tw {tw}");
            }
        }
    }
}

#[test]
fn squeezed_bell_strictly_beats_twin_beam() {
    let v = opt(ResourceFamily::SqueezedBell, 0.8, &NoiseParams::ideal());
    assert!(v > 1.0 / (1.0 + (-1.6f64).exp()) + 1e-4, "{v}");
}

#[test]
fn photon_subtracted_crossing_exists() {
    let n = noise(0.3, 0.05);
    let gap = |r: f64| {
        let d = optimize_beta_independent(ResourceFamily::SqueezedBell, r, &n).unwrap().delta.unwrap();
        d - r.tanh().atan()
    };
    // scan for a sign change of delta_opt - arctan(tanh r), then bisect
    let mut lo = 0.05;
    let mut found = None;
    for i in 2..=30 {
        let hi = 0.05 * i as f64;
        if gap(lo).signum() != gap(hi).signum() {
            found = Some((lo, hi));
            break;
        }
        lo = hi;
    }
    let (mut a, mut b) = found.expect("no crossing in (0, 1.5]");
    for _ in 0..40 {
        let m = 0.5 * (a + b);
        if gap(a).signum() == gap(m).signum() {
            a = m;
        } else {
            b = m;
        }
    }
    let r_star = 0.5 * (a + b);
    assert!(r_star > 0.0 && r_star <= 1.5);
    assert!(gap(r_star).abs() < 1e-4, "r*={r_star}, gap {}", gap(r_star));
    let sb = opt(ResourceFamily::SqueezedBell, r_star, &n);
    let ps = opt(ResourceFamily::PhotonSubtracted, r_star, &n);
    assert!((sb - ps).abs() < 1e-8);
}

#[test]
fn buridan_optimum_is_squeezed_fock_pair() {
    for (tau, r2) in [(0.1, 0.0), (0.3, 0.05)] {
        for r in [0.3, 0.8, 1.3] {
            let res = optimize_beta_independent(ResourceFamily::BuridanDonkey, r, &noise(tau, r2)).unwrap();
            assert!(res.delta.unwrap().abs() < 1e-6, "r={r} tau={tau}: {:?}", res.delta);
        }
    }
}

#[test]
fn reported_values_recompute_exactly() {
    let n = noise(0.2, 0.05);
    let prior = AlphabetPrior::new(10.0).unwrap();
    for family in ResourceFamily::ALL {
        let res = optimize_beta_independent(family, 0.9, &n).unwrap();
        let f = fidelity_closed(&res.resource(), &n, &res.gain(), Complex64::new(0.0, 0.0)).unwrap().value;
        assert!((f - res.value).abs() <= 1e-12, "{family}");
        assert!(res.value > 0.0 && res.value <= 1.0);

        let avg = optimize_gain_average(family, 0.9, &n, &prior).unwrap();
        let f = average_fidelity(&avg.resource(), &n, &avg.gain(), &prior).unwrap().value;
        assert!((f - avg.value).abs() <= 1e-12, "{family}: {f} vs {}", avg.value);
        let gt = avg.gain_eff.unwrap();
        assert!(gt > 0.0 && gt <= 2.0);
        if let Some(d) = avg.delta {
            assert!(d.abs() <= std::f64::consts::FRAC_PI_2);
        }
        if let Some(g) = avg.gamma {
            assert!((0.0..=5.0).contains(&g));
        }
    }
}

#[test]
fn gain_averaged_optimum_dominates_unit_gain() {
    let n = noise(0.3, 0.05);
    for sigma in [1.0, 10.0, 100.0] {
        let prior = AlphabetPrior::new(sigma).unwrap();
        for family in ResourceFamily::ALL {
            let avg = optimize_gain_average(family, 0.8, &n, &prior).unwrap();
            let fixed = optimize_beta_independent(family, 0.8, &n).unwrap();
            assert!(avg.value >= fixed.value, "{family} sigma={sigma}");
            assert_ne!(avg.method, OptimizerMethod::Fixed);
        }
    }
}

#[test]
fn wide_alphabets_force_unit_gain() {
    let n = NoiseParams::ideal();
    let mut last = f64::INFINITY;
    for sigma in [10.0, 100.0, 1000.0] {
        let avg = optimize_gain_average(ResourceFamily::TwinBeam, 0.8, &n, &AlphabetPrior::new(sigma).unwrap()).unwrap();
        let dev = (avg.g() - 1.0 / n.t()).abs();
        assert!(dev < last, "sigma={sigma}: {dev}");
        last = dev;
    }
    assert!(last < 1e-2, "{last}");
}

#[test]
fn averaged_squeezed_bell_beats_classical_benchmark() {
    let prior = AlphabetPrior::new(10.0).unwrap();
    let avg = optimize_gain_average(ResourceFamily::SqueezedBell, 1.0, &noise(0.3, 0.05), &prior).unwrap();
    assert!(avg.value > classical_benchmark(&prior), "{}", avg.value);
}

#[test]
fn one_shot_at_unit_gain_is_beta_independent_value() {
    let n = noise(0.1, 0.05);
    let res = optimize_beta_independent(ResourceFamily::SqueezedBell, 0.7, &n).unwrap();
    for beta in [Complex64::new(0.0, 0.0), Complex64::new(2.0, -1.0)] {
        let f = one_shot_at(&res, beta).unwrap().value;
        assert!((f - res.value).abs() <= 1e-12);
    }
}

#[test]
fn one_shot_is_nearly_flat_for_wide_alphabets() {
    let n = noise(0.3, 0.05);
    let prior = AlphabetPrior::new(100.0).unwrap();
    let vals: Vec<f64> = [3.0, 5.0, 10.0]
        .iter()
        .map(|&b| one_shot_fidelity(ResourceFamily::SqueezedBell, 0.8, &n, &prior, Complex64::new(b, 0.0)).unwrap().value)
        .collect();
    let spread = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - vals.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread <= 0.02, "{vals:?}");
}

#[test]
fn affinity_examples() {
    let tw = affinity(&ResourceSpec::twin_beam(0.7)).unwrap();
    assert!((tw.value - 1.0).abs() < 1e-10 && (tw.r_prime - 0.7).abs() < 1e-4);
    let fock = affinity(&ResourceSpec::squeezed_bell(0.7, std::f64::consts::FRAC_PI_2)).unwrap();
    assert!(fock.value < 1.0 - 1e-3);
    let cat = affinity(&ResourceSpec::squeezed_cat(0.7, 0.5, 1e-6)).unwrap();
    assert!((cat.value - 1.0).abs() < 1e-9);
}

#[test]
fn unit_gain_rule_matches_fixed_one_over_t() {
    let n = noise(0.2, 0.1);
    let spec = ResourceSpec::squeezed_bell(0.9, 0.4);
    let beta = Complex64::new(1.5, -0.5);
    let a = fidelity_closed(&spec, &n, &GainSetting::UnityOverT, beta).unwrap().value;
    let b = fidelity_closed(&spec, &n, &GainSetting::Fixed { g: 1.0 / n.t() }, beta).unwrap().value;
    assert!((a - b).abs() < 1e-12);
}
