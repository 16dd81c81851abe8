mod common;

use common::*;
use nalgebra::{Complex, DMatrix};
use parrep::certificates::*;
use parrep::game::{parallel_game, threshold_objective, value_objective, Round};
use parrep::sdp::{check_dual_feasibility, optimize, DualWitness, SolveStatus, SolverOptions, WitnessMeta};
use parrep::{hedging, Error, Game, Operator, SpaceList};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const FEAS: f64 = 1e-9;

fn single_witness(g: &Game, values: &[f64]) -> DualWitness<f64> {
    let obj = g.weighted_sum(values).unwrap();
    let opt = optimize(g, &obj, &SolverOptions::default(), WitnessMeta::new("solver", 1)).unwrap();
    assert_eq!(opt.report.status, SolveStatus::Optimal);
    opt.witness.unwrap()
}

/// `(a0, a1, r)` with `a0 − r ⪰ 0` by construction.
fn lemma_instance(rng: &mut ChaCha8Rng) -> (Operator, Operator, Operator) {
    let d = rng.random_range(1..=3);
    let s = SpaceList::single("A", d).unwrap();
    let a0 = random_psd(rng, &s);
    let a1 = random_psd(rng, &s).scale(rng.random_range(0.1..2.0));
    let r0 = random_psd(rng, &s);
    let scale = rng.random_range(0.05..0.95) * a0.min_eigenvalue().unwrap() / r0.max_eigenvalue().unwrap();
    (a0, a1, r0.scale(scale))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn monotone_inequality_on_thresholds(seed in any::<u64>(), n in 1usize..=3, k_raw in 0usize..=3) {
        let mut r = rng(seed);
        let k = k_raw.min(n);
        let (a0, a1, rr) = lemma_instance(&mut r);
        let check = verify_monotone_inequality(&a0, &a1, &rr, n, k).unwrap();
        prop_assert!(check.min_eigenvalue >= -1e-9, "min eigenvalue {}", check.min_eigenvalue);
        prop_assert!(check.holds);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn monotone_inequality_on_random_monotone_sets(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let (a0, a1, rr) = lemma_instance(&mut r);
        let set = random_monotone_set(&mut r, n);
        let check = verify_monotone_inequality_on(&a0, &a1, &rr, &set).unwrap();
        prop_assert!(check.min_eigenvalue >= -1e-9, "set {:?}: {}", set.words(), check.min_eigenvalue);
    }

    #[test]
    fn witness_value_ordering(p in 0.0f64..=1.0, n in 1usize..=12, k_raw in 1usize..=12) {
        let k = k_raw.min(n);
        let tail = binomial_tail(p, n, k);
        let snk = snk_value(p, n, k);
        let naive = naive_value(p, n, k);
        prop_assert!(tail <= snk + 1e-12);
        prop_assert!(snk <= naive + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn constructions_are_feasible_on_random_games(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = Dims { question: 2, memory: r.random_range(1..=2), answer: 2 };
        let g = random_game(&mut r, &d, 2);
        let w = single_witness(&g, &[0.0, 1.0]);
        let p = w.value();
        let g2 = parallel_game(&g, 2).unwrap();
        for k in 0..=2 {
            let obj = threshold_objective(&g, 2, k).unwrap();
            let s = witness_recursive_snk(&w, &g, 2, k).unwrap();
            prop_assert!(check_dual_feasibility(&g2, &obj, &s, FEAS).unwrap().feasible, "snk k={}", k);
            prop_assert!((s.value() - snk_value(p, 2, k)).abs() <= 1e-10);
            let nv = witness_naive(&w, &g, 2, k).unwrap();
            prop_assert!(check_dual_feasibility(&g2, &obj, &nv, FEAS).unwrap().feasible, "naive k={}", k);
            prop_assert!((nv.value() - naive_value(p, 2, k)).abs() <= 1e-10);
        }
        let t = witness_tensor_power(&w, &g, 2).unwrap();
        prop_assert!(check_dual_feasibility(&g2, &threshold_objective(&g, 2, 2).unwrap(), &t, FEAS).unwrap().feasible);
        prop_assert!((t.value() - p * p).abs() <= 1e-10);
        let values = [r.random_range(0.0..1.0), r.random_range(0.0..1.0)];
        let wv = single_witness(&g, &values);
        let a = witness_average(&wv, &g, &values, 2).unwrap();
        prop_assert!(check_dual_feasibility(&g2, &value_objective(&g, &values, 2).unwrap(), &a, FEAS).unwrap().feasible);
        prop_assert!((a.value() - wv.value()).abs() <= 1e-10);
    }

    #[test]
    fn classical_binomial_on_diagonal_games(seed in any::<u64>(), k in 0usize..=2) {
        let mut r = rng(seed);
        let d = Dims::random(&mut r);
        let g = random_diagonal_game(&mut r, &d);
        let w = single_witness(&g, &[0.0, 1.0]);
        let b = witness_classical_binomial(&w, &g, 2, k).unwrap();
        let g2 = parallel_game(&g, 2).unwrap();
        prop_assert!(check_dual_feasibility(&g2, &threshold_objective(&g, 2, k).unwrap(), &b, FEAS).unwrap().feasible);
        let clamped = clamp_to_consistency(&g, &w).unwrap();
        let pt = clamped.value();
        prop_assert!(pt <= w.value() + 1e-12);
        prop_assert!((b.value() - binomial_tail(pt, 2, k)).abs() <= 1e-10);
        // the clamp is idempotent and stays below the consistency operator
        let twice = clamp_to_consistency(&g, &clamped).unwrap();
        prop_assert!(twice.y().distance(clamped.y()).unwrap() == 0.0);
        for (y, rho) in clamped.y().diagonal().iter().zip(g.rho().diagonal()) {
            prop_assert!(*y <= rho);
        }
    }
}

#[test]
fn hedging_feasibility_suite() {
    let g = hedging::game();
    let w = single_witness(&g, &[0.0, 1.0]);
    let p = w.value();
    let g2 = hedging::two_copy_game();
    let obj = threshold_objective(&g, 2, 1).unwrap();
    let snk = witness_recursive_snk(&w, &g, 2, 1).unwrap();
    assert!(check_dual_feasibility(&g2, &obj, &snk, FEAS).unwrap().feasible);
    // 2·cos²(π/8), from an independent high-precision evaluation
    assert!((snk.value() - 1.707_106_781_186_547_5).abs() < 1e-7);
    let naive = witness_naive(&w, &g, 2, 1).unwrap();
    // 2p + p² at p = cos²(π/8)
    assert!((naive.value() - 2.435_660_171_779_821_3).abs() < 1e-7);
    assert!((witness_naive(&w, &g, 2, 0).unwrap().value() - (1.0 + p).powi(2)).abs() < 1e-10);
    assert!((witness_recursive_snk(&w, &g, 2, 0).unwrap().value() - 1.0).abs() < 1e-12);
    let t = witness_tensor_power(&w, &g, 2).unwrap();
    let s22 = witness_recursive_snk(&w, &g, 2, 2).unwrap();
    assert!(t.y().distance(s22.y()).unwrap() < 1e-15);
    // the binomial construction without dephasing is not a certificate here
    let raw = binomial_witness_unchecked(&g, &w, 2, 1).unwrap();
    assert!(!check_dual_feasibility(&g2, &obj, &raw, FEAS).unwrap().feasible);
    assert!(matches!(witness_classical_binomial(&w, &g, 2, 1), Err(Error::NonDiagonal(_))));
}

#[test]
fn infeasible_input_witness_is_rejected() {
    let g = hedging::game();
    let w = single_witness(&g, &[0.0, 1.0]);
    let shrunk = DualWitness::new(w.y().scale(0.5), Vec::new(), WitnessMeta::new("shrunk", 1)).unwrap();
    assert!(matches!(witness_recursive_snk(&shrunk, &g, 2, 1), Err(Error::InfeasibleWitness(_))));
    assert!(matches!(witness_tensor_power(&shrunk, &g, 2), Err(Error::InfeasibleWitness(_))));
}

#[test]
fn n_equal_one_returns_input() {
    let g = hedging::game();
    let w = single_witness(&g, &[0.0, 1.0]);
    assert_eq!(witness_tensor_power(&w, &g, 1).unwrap().y(), w.y());
    assert_eq!(witness_average(&w, &g, &[0.0, 1.0], 1).unwrap().y(), w.y());
}

fn unitary(theta: f64) -> DMatrix<Complex<f64>> {
    let (c, s) = (theta.cos(), theta.sin());
    DMatrix::from_row_slice(2, 2, &[Complex::new(c, 0.0), Complex::new(0.0, -s), Complex::new(0.0, -s), Complex::new(c, 0.0)])
}

/// Conjugates every question-side operator of a one-qubit-question game.
fn rotate(g: &Game, v: &DMatrix<Complex<f64>>) -> Game {
    let on_x = |op: &Operator| {
        let labels = op.spaces().labels();
        let dim_before: usize = labels.iter().take_while(|l| **l != "X").map(|l| op.spaces().dim_of(l).unwrap()).product();
        let dim_after = op.dim() / dim_before / 2;
        let u = DMatrix::identity(dim_before, dim_before).kronecker(v).kronecker(&DMatrix::identity(dim_after, dim_after));
        Operator::new(op.spaces().clone(), &u * op.matrix() * u.adjoint()).unwrap()
    };
    let rounds = vec![Round { questions: vec!["X".into()], answers: vec!["Y".into()] }];
    Game::new(rounds, g.outcomes().iter().map(on_x).collect(), on_x(g.rho()), Vec::new()).unwrap()
}

#[test]
fn clamp_uses_shared_eigenbasis_for_commuting_blocks() {
    let mut r = rng(7);
    let g = random_diagonal_game(&mut r, &Dims { question: 2, memory: 1, answer: 2 });
    let v = unitary(0.3);
    let gr = rotate(&g, &v);
    let y = Operator::from_diagonal(g.rho().spaces().clone(), &[0.9, 0.05]).unwrap();
    let w = DualWitness::new(y.clone(), Vec::new(), WitnessMeta::new("test", 1)).unwrap();
    let wr = DualWitness::new(
        Operator::new(y.spaces().clone(), &v * y.matrix() * v.adjoint()).unwrap(),
        Vec::new(),
        WitnessMeta::new("test", 1),
    )
    .unwrap();
    let plain = clamp_to_consistency(&g, &w).unwrap();
    let rotated = clamp_to_consistency(&gr, &wr).unwrap();
    let expected = &v * plain.y().matrix() * v.adjoint();
    assert!((rotated.y().matrix() - expected).camax() < 1e-10);

    // a witness block that does not commute with ρ is refused
    let skew = Operator::new(y.spaces().clone(), &unitary(0.2) * y.matrix() * unitary(0.2).adjoint()).unwrap();
    let bad = DualWitness::new(skew, Vec::new(), WitnessMeta::new("test", 1)).unwrap();
    if g.rho().diagonal()[0] != g.rho().diagonal()[1] {
        assert!(matches!(clamp_to_consistency(&g, &bad), Err(Error::NonCommuting(_))));
    }
}

#[test]
fn classical_optimum_trivial_games() {
    let xs = SpaceList::single("X", 2).unwrap();
    let ys = SpaceList::single("Y", 2).unwrap();
    let rho = Operator::from_diagonal(xs.clone(), &[0.5, 0.5]).unwrap();
    let rounds = vec![Round { questions: vec!["X".into()], answers: vec!["Y".into()] }];
    let diag = |v: [f64; 2]| Operator::from_diagonal(ys.clone(), &v).unwrap().kron(&rho).unwrap();
    // answer 0 always wins
    let g = Game::new(rounds.clone(), vec![diag([0.0, 1.0]), diag([1.0, 0.0])], rho.clone(), Vec::new()).unwrap();
    assert_eq!(classical_optimum(&g).unwrap(), 1.0);
    // nothing ever wins
    let g = Game::new(rounds, vec![diag([1.0, 1.0]), diag([0.0, 0.0])], rho, Vec::new()).unwrap();
    assert_eq!(classical_optimum(&g).unwrap(), 0.0);
    assert!(matches!(classical_optimum(&hedging::game()), Err(Error::NonDiagonal(_))));
}
