use ktoeplitz::disorder::{
    build_disordered_chain, decay_rate_stats, eigenvector_decay_fit, floquet_process, zero_mode, DisorderConfig,
};
use ktoeplitz::numerics::{eigs_dense, hausdorff_distance, TridiagonalMatrix};
use ktoeplitz::C64;
use proptest::prelude::*;

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn ssh(d: f64, m: usize, seed: u64, trials: usize) -> DisorderConfig {
    DisorderConfig::dimer(r(1.0), r(2.0), d, m, seed, trials).unwrap()
}

#[test]
fn config_validation() {
    assert!(DisorderConfig::new(vec![r(1.0)], vec![], 0.1, 3, 0, 1).is_err());
    assert!(DisorderConfig::new(vec![r(0.0)], vec![r(1.0)], 0.1, 3, 0, 1).is_err());
    assert!(DisorderConfig::dimer(r(1.0), r(2.0), 1.0, 3, 0, 1).is_err());
    assert!(DisorderConfig::dimer(r(1.0), r(2.0), -0.1, 3, 0, 1).is_err());
    assert!(DisorderConfig::dimer(r(1.0), r(2.0), 0.1, 0, 0, 1).is_err());
    assert!(DisorderConfig::dimer(r(1.0), r(2.0), 0.1, 3, 0, 0).is_err());
    assert_eq!(ssh(0.4, 24, 0, 1).n(), 99);
}

#[test]
fn clean_chain_is_the_periodic_interface() {
    let t = build_disordered_chain(&ssh(0.0, 2, 5, 1), 0);
    assert_eq!(t.n(), 11);
    // Outward from the centre: b, a, b, a, b on each side.
    let want: Vec<C64> = [2.0, 1.0, 2.0, 1.0, 2.0, 2.0, 1.0, 2.0, 1.0, 2.0].iter().map(|&x| r(x)).collect();
    assert_eq!(t.upper, want);
    assert_eq!(t.lower, want);
    assert!(t.diag.iter().all(|x| *x == r(0.0)));
}

#[test]
fn disorder_is_multiplicative_and_sign_preserving() {
    let cfg = DisorderConfig::dimer(C64::new(1.0, -0.3), C64::new(2.0, 1.0), 0.4, 10, 3, 1).unwrap();
    let t = build_disordered_chain(&cfg, 7);
    let c = t.n() / 2;
    for (j, &bond) in t.upper.iter().enumerate() {
        let p = if j >= c { j - c } else { c - 1 - j };
        let base = if p % 2 == 0 { C64::new(2.0, 1.0) } else { C64::new(1.0, -0.3) };
        let f = bond / base;
        assert!(f.im.abs() < 1e-15 && f.re > 0.6 - 1e-15 && f.re < 1.4 + 1e-15);
    }
    assert_eq!(t.upper, t.lower);
}

#[test]
fn chains_are_deterministic_per_seed_and_realization() {
    let cfg = ssh(0.4, 6, 11, 1);
    assert_eq!(build_disordered_chain(&cfg, 2), build_disordered_chain(&cfg, 2));
    assert_ne!(build_disordered_chain(&cfg, 2), build_disordered_chain(&cfg, 3));
    let other = ssh(0.4, 6, 12, 1);
    assert_ne!(build_disordered_chain(&cfg, 2), build_disordered_chain(&other, 2));
}

#[test]
fn three_site_zero_mode() {
    let t = TridiagonalMatrix::symmetric(vec![r(0.0); 3], vec![r(1.0), r(2.0)]).unwrap();
    let zm = zero_mode(&t).unwrap().unwrap();
    assert!(zm.lambda.norm() < 1e-15);
    // Null space of [[0,1,0],[1,0,2],[0,2,0]] is spanned by (2, 0, −1).
    let want = [r(2.0), r(0.0), r(-1.0)];
    let scale = zm.vector[0] / want[0];
    for (x, w) in zm.vector.iter().zip(&want) {
        assert!((x - scale * w).norm() < 1e-14);
    }
}

#[test]
fn zero_mode_preconditions() {
    let t = TridiagonalMatrix::symmetric(vec![r(1.0); 3], vec![r(1.0), r(2.0)]).unwrap();
    assert!(zero_mode(&t).is_err());
    // Even dimension: ±√(1 + 4) and ±1 style pairs, nothing at 0.
    let t = TridiagonalMatrix::symmetric(vec![r(0.0); 4], vec![r(1.0), r(2.0), r(1.0)]).unwrap();
    assert!(zero_mode(&t).unwrap().is_none());
}

#[test]
fn periodic_zero_mode_follows_the_geometric_law() {
    let t = build_disordered_chain(&ssh(0.0, 8, 0, 1), 0);
    let zm = zero_mode(&t).unwrap().unwrap();
    let c = t.n() / 2;
    let w = &zm.vector;
    for i in 0..8 {
        let ratio = w[c + 2 * i + 3] / w[c + 2 * i + 1];
        assert!((ratio - r(-0.5)).norm() < 1e-10, "{ratio}");
        assert!(w[c + 2 * i + 2].norm() < 1e-12);
    }
}

#[test]
fn floquet_examples() {
    let z = floquet_process(&ssh(0.0, 5, 0, 1), 0, 4);
    assert_eq!(z[0], r(1.0));
    assert!((z[3] - r(-0.125)).norm() < 1e-16);

    // Four-periodic clean process: every second step multiplies by ∏a/∏b up to sign.
    let a = vec![C64::new(2.0, 0.4), r(1.3)];
    let b = vec![C64::new(0.5, 0.3), C64::new(1.8, -0.2)];
    let cfg = DisorderConfig::new(a.clone(), b.clone(), 0.0, 5, 0, 1).unwrap();
    let z = floquet_process(&cfg, 0, 7);
    let block = (a[0] * a[1] / (b[0] * b[1])).norm();
    for j in 1..4 {
        assert!((z[2 * j].norm() - block.powi(j as i32)).abs() < 1e-12 * block.powi(j as i32));
    }
    assert!(floquet_process(&ssh(0.4, 5, 1, 1), 3, 1)[0] == r(1.0));
}

#[test]
fn floquet_process_is_the_zero_mode_of_the_same_realization() {
    let cfg = DisorderConfig::dimer(C64::new(1.0, -0.3), C64::new(2.0, 1.0), 0.4, 10, 17, 1).unwrap();
    let t = build_disordered_chain(&cfg, 5);
    let zm = zero_mode(&t).unwrap().unwrap();
    let c = t.n() / 2;
    let z = floquet_process(&cfg, 5, 11);
    let scale = zm.vector[c + 1];
    for (i, zi) in z.iter().enumerate() {
        assert!((zm.vector[c + 2 * i + 1] - scale * zi).norm() < 1e-10);
    }
}

#[test]
fn clean_rate_is_minus_ln_two() {
    let s = decay_rate_stats(&ssh(0.0, 24, 0, 3));
    for rate in &s.per_trial_rates {
        assert!((rate + 2f64.ln()).abs() < 1e-12);
    }
    assert!((s.theoretical + 2f64.ln()).abs() < 1e-15);
    assert!(s.std < 1e-12);
    assert_eq!(decay_rate_stats(&ssh(0.3, 24, 0, 1)).std, 0.0);
}

#[test]
fn disordered_mean_tracks_the_clean_rate() {
    let s = decay_rate_stats(&ssh(0.4, 24, 2024, 5000));
    assert!((s.mean + 2f64.ln()).abs() < 0.02, "mean {}", s.mean);
    assert!((s.stderr - s.std / (5000f64).sqrt()).abs() < 1e-15);

    let cfg = DisorderConfig::new(
        vec![C64::new(2.0, 0.4), r(1.3)],
        vec![C64::new(0.5, 0.3), C64::new(1.8, -0.2)],
        0.4,
        24,
        7,
        1000,
    )
    .unwrap();
    let s = decay_rate_stats(&cfg);
    assert!((s.mean - s.theoretical).abs() < 0.05, "{} vs {}", s.mean, s.theoretical);
}

#[test]
fn stderr_shrinks_like_one_over_root_trials() {
    let errs: Vec<f64> = [100, 400, 1600].iter().map(|&t| decay_rate_stats(&ssh(0.4, 24, 99, t)).stderr).collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2]);
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!((1.5..2.7).contains(&ratio), "{ratio}");
    }
}

#[test]
fn eigenvector_fit_examples() {
    let t = build_disordered_chain(&ssh(0.0, 12, 0, 1), 0);
    let v = zero_mode(&t).unwrap().unwrap().vector;
    let right = eigenvector_decay_fit(&v, 1).unwrap();
    assert!((right + 2f64.ln()).abs() < 1e-8, "{right}");
    let rev: Vec<C64> = v.iter().rev().copied().collect();
    let left = eigenvector_decay_fit(&rev, 1).unwrap();
    assert!((left - right).abs() < 1e-8);

    assert!(eigenvector_decay_fit(&v[1..], 1).is_err());
    assert!(eigenvector_decay_fit(&v, 0).is_err());
    assert!(eigenvector_decay_fit(&v[..11], 1).is_err());
}

#[test]
fn disordered_eigenvector_fit_averages_to_the_clean_rate() {
    let cfg = ssh(0.4, 24, 31, 200);
    let mean = (0..200u64)
        .map(|t| eigenvector_decay_fit(&zero_mode(&build_disordered_chain(&cfg, t)).unwrap().unwrap().vector, 1).unwrap())
        .sum::<f64>()
        / 200.0;
    assert!((mean + 2f64.ln()).abs() < 0.05, "{mean}");
}

#[test]
fn odd_period_zero_mode_is_not_localized() {
    // Outward bonds 1, 2, 3 repeating: a three-periodic chain, ∏a = ∏b.
    let cfg = DisorderConfig::new(vec![r(2.0), r(1.0), r(3.0)], vec![r(1.0), r(3.0), r(2.0)], 0.0, 8, 0, 1).unwrap();
    let t = build_disordered_chain(&cfg, 0);
    let bonds: Vec<f64> = t.upper[t.n() / 2..t.n() / 2 + 6].iter().map(|b| b.re).collect();
    assert_eq!(bonds, vec![1.0, 2.0, 3.0, 1.0, 2.0, 3.0]);
    let v = zero_mode(&t).unwrap().unwrap().vector;
    assert!(eigenvector_decay_fit(&v, 3).unwrap().abs() < 0.05);
    assert!(decay_rate_stats(&cfg).mean.abs() < 0.05);

    let uniform = DisorderConfig::dimer(r(1.0), r(1.0), 0.0, 10, 0, 1).unwrap();
    let v = zero_mode(&build_disordered_chain(&uniform, 0)).unwrap().unwrap().vector;
    assert!(eigenvector_decay_fit(&v, 1).unwrap().abs() < 0.05);
}

#[test]
fn zero_mode_is_exact_under_strong_disorder() {
    let cfg = ssh(0.4, 24, 1, 1);
    for t in 0..20 {
        let chain = build_disordered_chain(&cfg, t);
        let zm = zero_mode(&chain).unwrap().unwrap();
        assert!(zm.lambda.norm() <= 1e-12 * chain.frobenius_norm());
    }
}

#[test]
fn config_json() {
    let cfg = DisorderConfig::dimer(C64::new(1.0, -0.3), r(2.0), 0.4, 24, 5, 100).unwrap();
    let s = serde_json::to_string(&cfg).unwrap();
    let back: DisorderConfig = serde_json::from_str(&s).unwrap();
    assert_eq!(back, cfg);
    let v: DisorderConfig =
        serde_json::from_str(r#"{"base_a":[[1,0]],"base_b":[[2,0]],"d":0.4,"m":24,"seed":3}"#).unwrap();
    assert_eq!(v.trials(), 1);
    assert!(serde_json::from_str::<DisorderConfig>(r#"{"base_a":[[1,0]],"base_b":[[2,0]],"d":1.2,"m":24,"seed":3}"#).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn chiral_symmetry_and_exact_zero(
        re_a in 0.3f64..2.0, im_a in -1.0f64..1.0, re_b in 0.3f64..2.0, im_b in -1.0f64..1.0,
        d in 0.0f64..0.9, m in 1usize..8, seed in any::<u64>(), real in any::<bool>(),
    ) {
        let (a, b) = if real { (r(re_a), r(re_b)) } else { (C64::new(re_a, im_a), C64::new(re_b, im_b)) };
        let chain = build_disordered_chain(&DisorderConfig::dimer(a, b, d, m, seed, 1).unwrap(), 0);
        // D M D flips the sign of every bond; with a zero diagonal that is −M exactly.
        let n = chain.n();
        let dense = chain.to_dense();
        for i in 0..n {
            for j in 0..n {
                let s = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                prop_assert_eq!(dense[(i, j)] * s, -dense[(i, j)]);
            }
        }
        let vals = eigs_dense(&dense, false).unwrap().values;
        let neg: Vec<C64> = vals.iter().map(|v| -v).collect();
        prop_assert!(hausdorff_distance(&vals, &neg) < 1e-9 * (1.0 + chain.frobenius_norm()));
        let zm = zero_mode(&chain).unwrap().unwrap();
        prop_assert!(zm.relative <= 1e-12);
        // The zero mode vanishes at even distance from the centre.
        let c = n / 2;
        let vmax = zm.vector.iter().map(|x| x.norm()).fold(0.0, f64::max);
        for j in (0..=c).step_by(2) {
            prop_assert!(zm.vector[c + j].norm() <= 1e-8 * vmax);
            prop_assert!(zm.vector[c - j].norm() <= 1e-8 * vmax);
        }
    }
}
