mod common;

use common::*;
use nalgebra::{Complex, DMatrix};
use parrep::{apply_channel, fidelity, kron, partial_trace, permute_systems, Operator, Operator32, SpaceList};
use proptest::prelude::*;

fn three_factor() -> SpaceList {
    SpaceList::new([("A", 2), ("B", 3), ("C", 2)]).unwrap()
}

/// `Tr_in[J (I_out ⊗ ρᵀ)]` with plain index loops.
fn choi_apply_oracle(j: &Operator, dout: usize, din: usize, rho: &DMatrix<Complex<f64>>) -> DMatrix<Complex<f64>> {
    let jm = j.matrix();
    DMatrix::from_fn(dout, dout, |y, yp| {
        let mut acc = Complex::new(0.0, 0.0);
        for i in 0..din {
            for ip in 0..din {
                // (J (I ⊗ ρᵀ))[(y,i),(y',i)] summed over i
                acc += jm[(y * din + i, yp * din + ip)] * rho[(i, ip)];
            }
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_preserves_trace(seed in any::<u64>(), mask in 0u8..8) {
        let mut r = rng(seed);
        let a = random_psd(&mut r, &three_factor()).scale(3.7);
        let traced: Vec<&str> = ["A", "B", "C"].iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, l)| *l).collect();
        let t = partial_trace(&a, &traced).unwrap();
        prop_assert!((t.trace() - a.trace()).abs() <= 1e-12);
    }

    #[test]
    fn partial_traces_commute(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_psd(&mut r, &three_factor());
        let one = a.partial_trace(&["A", "C"]).unwrap();
        let two = a.partial_trace(&["C"]).unwrap().partial_trace(&["A"]).unwrap();
        let three = a.partial_trace(&["A"]).unwrap().partial_trace(&["C"]).unwrap();
        prop_assert!(one.distance(&two).unwrap() <= 1e-14);
        prop_assert!(one.distance(&three).unwrap() <= 1e-14);
    }

    #[test]
    fn permutation_preserves_spectrum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_psd(&mut r, &three_factor());
        let p = permute_systems(&a, &["C", "A", "B"]).unwrap();
        let (ea, ep) = (a.eigenvalues().unwrap(), p.eigenvalues().unwrap());
        for (x, y) in ea.iter().zip(&ep) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
        prop_assert!(p.permute(&["A", "B", "C"]).unwrap().distance(&a).unwrap() == 0.0);
    }

    #[test]
    fn kron_is_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sa = SpaceList::single("A", 2).unwrap();
        let sc = SpaceList::single("C", 3).unwrap();
        let b = random_psd(&mut r, &sa);
        let a = b.add(&random_psd(&mut r, &sa)).unwrap();
        let d = random_psd(&mut r, &sc);
        let c = d.add(&random_psd(&mut r, &sc)).unwrap();
        let diff = kron(&a, &c).unwrap().sub(&kron(&b, &d).unwrap()).unwrap();
        prop_assert!(diff.min_eigenvalue().unwrap() >= -1e-10);
    }

    #[test]
    fn fidelity_monotone_under_partial_trace(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = SpaceList::new([("A", 2), ("B", 2)]).unwrap();
        let p = random_psd(&mut r, &s);
        let q = random_psd(&mut r, &s);
        let full = fidelity(&p, &q).unwrap();
        let reduced = fidelity(&p.partial_trace(&["B"]).unwrap(), &q.partial_trace(&["B"]).unwrap()).unwrap();
        prop_assert!(reduced >= full - 1e-8);
        prop_assert!((fidelity(&q, &p).unwrap() - full).abs() <= 1e-8);
        prop_assert!(full <= 1.0 + 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn choi_of_random_channel_is_psd_and_trace_preserving(seed in any::<u64>(), din in 1usize..=3, dout in 1usize..=3, k in 1usize..=4) {
        let mut r = rng(seed);
        let ch = random_channel(&mut r, &SpaceList::single("I", din).unwrap(), &SpaceList::single("O", dout).unwrap(), k);
        let j = ch.choi();
        prop_assert!(j.min_eigenvalue().unwrap() >= -1e-10);
        let id = j.partial_trace(&["O"]).unwrap();
        prop_assert!(id.distance(&Operator::identity(id.spaces().clone())).unwrap() <= 1e-10);
    }

    #[test]
    fn channel_application_matches_choi_contraction(seed in any::<u64>(), din in 1usize..=3, dout in 1usize..=3) {
        let mut r = rng(seed);
        let input = SpaceList::single("I", din).unwrap();
        let ch = random_channel(&mut r, &input, &SpaceList::single("O", dout).unwrap(), 2);
        let rho = random_density(&mut r, &input);
        let out = apply_channel(&ch, &rho, &["I"]).unwrap();
        let expected = choi_apply_oracle(&ch.choi(), dout, din, rho.matrix());
        prop_assert!((out.matrix() - expected).camax() <= 1e-12);
        prop_assert!((out.trace() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn channel_on_a_subsystem_commutes_with_the_rest(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = SpaceList::new([("A", 2), ("B", 3)]).unwrap();
        let rho = random_density(&mut r, &s);
        let ch = random_channel(&mut r, &SpaceList::single("B", 3).unwrap(), &SpaceList::single("B", 2).unwrap(), 3);
        let out = ch.apply(&rho, &["B"]).unwrap();
        // tracing the acted system out first or last gives the same marginal
        let marginal = out.partial_trace(&["B"]).unwrap();
        prop_assert!(marginal.distance(&rho.partial_trace(&["B"]).unwrap()).unwrap() <= 1e-12);
        prop_assert_eq!(out.spaces().labels(), vec!["A", "B"]);
    }
}

#[test]
fn fidelity_of_hedging_reductions() {
    let p = (std::f64::consts::PI / 8.0).cos().powi(2);
    let s = SpaceList::single("A", 2).unwrap();
    let q = Operator::from_diagonal(s.clone(), &[p, 1.0 - p]).unwrap();
    let half = Operator::from_diagonal(s.clone(), &[0.5, 0.5]).unwrap();
    // F(Q, I/2)² = (√(p/2) + √((1−p)/2))² = ½ + √(p(1−p)) = cos²(π/8)
    assert!((fidelity(&q, &half).unwrap().powi(2) - p).abs() < 1e-12);
    let e0 = Operator::from_diagonal(s.clone(), &[1.0, 0.0]).unwrap();
    let e1 = Operator::from_diagonal(s, &[0.0, 1.0]).unwrap();
    assert!(fidelity(&e0, &e1).unwrap().abs() < 1e-12);
}

#[test]
fn single_precision_operators() {
    let s = SpaceList::new([("A", 2), ("B", 2)]).unwrap();
    let a = Operator32::identity(s).scale(0.25);
    let t = a.partial_trace(&["B"]).unwrap();
    assert!((t.trace() - 1.0f32).abs() < 1e-6);
    assert!(t.is_psd(1e-6).unwrap());
    let back: Operator = t.cast();
    assert!((back.trace() - 1.0).abs() < 1e-6);
}

#[test]
fn dimension_cap_is_enforced() {
    let big = Operator::identity(SpaceList::single("A", 16).unwrap());
    let other = Operator::identity(SpaceList::single("B", 17).unwrap());
    assert!(matches!(kron(&big, &other), Err(parrep::Error::DimensionCap { dim: 272, cap: 256 })));
}
