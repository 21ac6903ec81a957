use ktoeplitz::edge::edge_spectrum;
use ktoeplitz::interface::{assemble_interface, Parity};
use ktoeplitz::numerics::{eigs_dense, eigs_tridiagonal, hausdorff_distance};
use ktoeplitz::resonators::{
    capacitance_matrix, capacitance_with_interface, gap_modes, generalized_capacitance, resonances,
    robustness_sweep, Perturbation, ResonatorChain,
};
use ktoeplitz::C64;
use proptest::prelude::*;

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn chain(s1: f64, s2: f64) -> ResonatorChain {
    ResonatorChain::new(10, s1, s2, C64::from_polar(1.0, -1.0), 1e-3).unwrap()
}

#[test]
fn validation() {
    assert!(ResonatorChain::new(0, 1.0, 2.0, r(1.0), 0.1).is_err());
    assert!(ResonatorChain::new(1, -1.0, 2.0, r(1.0), 0.1).is_err());
    assert!(ResonatorChain::new(1, 1.0, 2.0, r(1.0), 1.5).is_err());
    assert!(ResonatorChain::new(1, 1.0, 2.0, r(0.0), 0.1).is_err());
    assert_eq!(chain(1.0, 2.0).n(), 41);
}

#[test]
fn entries_for_unit_and_double_spacing() {
    let c = capacitance_matrix(&ResonatorChain::new(2, 1.0, 2.0, r(1.0), 0.1).unwrap()).unwrap();
    // Interior α, corners α̃, centre η, couplings β₂ next to the centre.
    assert_eq!(c.diag[1], r(1.5));
    assert_eq!(c.diag[0], r(1.0));
    assert_eq!(c.diag[8], r(1.0));
    assert_eq!(c.diag[4], r(1.0));
    assert_eq!(c.upper[4], r(-0.5));
    assert_eq!(c.upper[5], r(-1.0));
}

#[test]
fn five_resonator_hand_assembly() {
    let (s1, s2) = (1.0, 2.0);
    let (a, at, eta, b1, b2) = (1.0 / s1 + 1.0 / s2, 1.0 / s1, 2.0 / s2, -1.0 / s1, -1.0 / s2);
    let want = [
        [at, b1, 0.0, 0.0, 0.0],
        [b1, a, b2, 0.0, 0.0],
        [0.0, b2, eta, b2, 0.0],
        [0.0, 0.0, b2, a, b1],
        [0.0, 0.0, 0.0, b1, at],
    ];
    let got = capacitance_matrix(&ResonatorChain::new(1, s1, s2, r(1.0), 0.1).unwrap()).unwrap().to_dense();
    for i in 0..5 {
        for j in 0..5 {
            assert_eq!(got[(i, j)], r(want[i][j]));
        }
        // Conservation: every row of a path Laplacian sums to zero.
        assert!((0..5).map(|j| got[(i, j)]).sum::<C64>().norm() < 1e-15);
    }
}

#[test]
fn capacitance_matches_the_interface_assembly_except_corners() {
    for (s1, s2) in [(2.0, 1.0), (1.0, 2.0), (0.7, 1.3)] {
        let ch = ResonatorChain::new(3, s1, s2, C64::from_polar(1.3, 0.4), 0.1).unwrap();
        let gc = generalized_capacitance(&ch).unwrap();
        let mut asm = assemble_interface(&ch.interface_spec().unwrap(), ch.m).unwrap();
        let v2 = ch.v_b * ch.v_b;
        let n = asm.n();
        asm.diag[0] = v2 / s1;
        asm.diag[n - 1] = v2 / s1;
        assert_eq!(asm.n(), gc.n());
        for i in 0..n {
            assert!((asm.diag[i] - gc.diag[i]).norm() < 1e-14);
        }
        for i in 0..n - 1 {
            assert!((asm.upper[i] - gc.upper[i]).norm() < 1e-14);
            assert!((asm.lower[i] - gc.lower[i]).norm() < 1e-14);
        }
    }
}

#[test]
fn capacitance_is_mirror_symmetric() {
    let c = capacitance_matrix(&chain(2.0, 1.0)).unwrap().to_dense();
    let n = c.rows();
    for i in 0..n {
        for j in 0..n {
            assert_eq!(c[(i, j)], c[(n - 1 - i, n - 1 - j)]);
        }
    }
}

#[test]
fn generalized_capacitance_scaling() {
    let base = ResonatorChain::new(2, 1.0, 2.0, r(1.0), 0.1).unwrap();
    assert_eq!(generalized_capacitance(&base).unwrap(), capacitance_matrix(&base).unwrap());
    let rotated = ResonatorChain { v_b: C64::from_polar(1.0, -1.0), ..base };
    let g = generalized_capacitance(&rotated).unwrap();
    let c = capacitance_matrix(&base).unwrap();
    for (x, y) in g.diag.iter().zip(&c.diag) {
        assert!((x - y * C64::from_polar(1.0, -2.0)).norm() < 1e-15);
    }
}

#[test]
fn resonance_examples() {
    let ch = chain(2.0, 1.0);
    let res = resonances(&ch).unwrap();
    for (l, w) in res.lambda.iter().zip(&res.omega) {
        assert!((w * w - ch.delta * l).norm() < 1e-14);
        assert!(w.re >= 0.0);
    }
    assert!(res.is_simple());
    let tiny = ResonatorChain { delta: 1e-12, ..ch };
    assert!(resonances(&tiny).unwrap().omega.iter().all(|w| w.norm() < 1e-5));

    let real = ResonatorChain { v_b: r(1.0), ..ch };
    let res = resonances(&real).unwrap();
    assert!(res.lambda.iter().all(|l| l.im.abs() < 1e-12));
    let oracle = eigs_dense(&generalized_capacitance(&real).unwrap().to_dense(), false).unwrap().values;
    assert!(hausdorff_distance(&res.lambda, &oracle) < 1e-12);
}

#[test]
fn edge_mode_exists_iff_s1_exceeds_s2() {
    for (s1, s2, edge) in [(2.0, 1.0, true), (1.0, 2.0, false), (1.5, 1.2, true), (0.9, 1.1, false)] {
        let cell = chain(s1, s2).bulk_cell().unwrap();
        assert_eq!(edge_spectrum(&cell).unwrap()[0].is_edge, edge);
    }
}

#[test]
fn one_gap_mode_with_spacing_dependent_parity() {
    let dipole = gap_modes(&chain(2.0, 1.0), &capacitance_matrix(&chain(2.0, 1.0)).unwrap(), 1e-2).unwrap();
    assert_eq!(dipole.len(), 1);
    assert_eq!(dipole[0].parity, Parity::Dipole);
    // The edge-induced value sits at the band centre α, up to the O(|z|^{-2m})
    // pull of the open outer corners.
    assert!((dipole[0].mu - 1.5).abs() < 4.0 * 0.5f64.powi(20));

    let mono = gap_modes(&chain(1.0, 2.0), &capacitance_matrix(&chain(1.0, 2.0)).unwrap(), 1e-2).unwrap();
    assert_eq!(mono.len(), 1);
    assert_eq!(mono[0].parity, Parity::Monopole);
}

#[test]
fn interface_perturbation_keeps_the_dipole_and_removes_the_monopole() {
    for s_int in [0.3, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0] {
        let ch = chain(2.0, 1.0);
        let modes = gap_modes(&ch, &capacitance_with_interface(&ch, s_int).unwrap(), 1e-2).unwrap();
        assert!(modes.iter().any(|m| m.parity == Parity::Dipole && (m.mu - 1.5).abs() < 4.0 * 0.5f64.powi(20)), "s_int = {s_int}");
    }
    let ch = chain(1.0, 2.0);
    let gone = [3.0, 5.0, 10.0].iter().all(|&s| gap_modes(&ch, &capacitance_with_interface(&ch, s).unwrap(), 1e-2).unwrap().is_empty());
    assert!(gone);
}

#[test]
fn zero_perturbation_reproduces_the_baseline() {
    let ch = chain(1.0, 2.0);
    let base = eigs_tridiagonal(&generalized_capacitance(&ch).unwrap(), false).unwrap().values;
    let rows = robustness_sweep(&ch, &Perturbation::InterfaceSpacings(vec![ch.s2])).unwrap();
    let vals: Vec<C64> = rows.iter().map(|r| r.value).collect();
    assert!(hausdorff_distance(&vals, &base) < 1e-12);
    let rows = robustness_sweep(&ch, &Perturbation::AllSpacings { levels: vec![0.0], trials: 2, seed: 1 }).unwrap();
    assert_eq!(rows.len(), 2 * base.len());
    assert!(rows.iter().all(|r| base.iter().any(|b| (b - r.value).norm() < 1e-12)));
}

#[test]
fn noisy_sweep_is_reproducible() {
    let ch = chain(2.0, 1.0);
    let p = Perturbation::AllSpacings { levels: vec![0.1, 0.2], trials: 3, seed: 42 };
    let a = robustness_sweep(&ch, &p).unwrap();
    assert_eq!(a, robustness_sweep(&ch, &p).unwrap());
    assert_eq!(a.len(), 2 * 3 * 41);
    let other = robustness_sweep(&ch, &Perturbation::AllSpacings { levels: vec![0.1, 0.2], trials: 3, seed: 43 }).unwrap();
    assert_ne!(a, other);
}

#[test]
fn chain_json() {
    let ch = chain(2.0, 1.0);
    let json = serde_json::to_value(ch).unwrap();
    assert_eq!(json["m"], 10);
    assert!((json["v_im"].as_f64().unwrap() + 1f64.sin()).abs() < 1e-15);
    let back: ResonatorChain = serde_json::from_value(json).unwrap();
    assert_eq!(back, ch);
    assert!(serde_json::from_str::<ResonatorChain>(r#"{"m":1,"s1":-1,"s2":1,"v_re":1,"v_im":0,"delta":0.1}"#).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Weyl: spacing noise moves each real eigenvalue by at most ‖ΔC‖₂ ≤ ‖ΔC‖_F.
    #[test]
    fn noise_shifts_are_bounded(s1 in 0.5f64..3.0, s2 in 0.5f64..3.0, level in 0.0f64..0.3, seed in any::<u64>()) {
        let ch = ResonatorChain::new(3, s1, s2, r(1.0), 0.1).unwrap();
        let base = capacitance_matrix(&ch).unwrap();
        let rows = robustness_sweep(&ch, &Perturbation::AllSpacings { levels: vec![level], trials: 1, seed }).unwrap();
        let mut pert: Vec<f64> = rows.iter().map(|r| r.value.re).collect();
        let mut orig: Vec<f64> = eigs_tridiagonal(&base, false).unwrap().values.iter().map(|v| v.re).collect();
        pert.sort_by(f64::total_cmp);
        orig.sort_by(f64::total_cmp);
        let sp = ch.spacings();
        // |Δ(1/s)| ≤ level/(s(1−level)); each spacing touches four entries.
        let bound: f64 = sp.iter().map(|s| 4.0 * (level / (s * (1.0 - level))).powi(2)).sum::<f64>().sqrt();
        for (a, b) in pert.iter().zip(&orig) {
            prop_assert!((a - b).abs() <= bound + 1e-12);
        }
    }
}
