mod common;

use common::*;
use parrep::game::{dephase_game, outcome_probabilities, parallel_game, strategy_from_channel, StrategyChoi};
use parrep::io::{game_from_json, game_to_json, parse_game};
use parrep::spaces::copy_label;
use parrep::{hedging, Operator, SpaceList};
use proptest::prelude::*;

fn outcome_sum_matches(g: &parrep::Game) -> f64 {
    let answers: Vec<&str> = g.answer_labels(1);
    let ys = SpaceList::new(answers.iter().map(|l| (l.to_string(), g.spaces().dim_of(l).unwrap()))).unwrap();
    let expected = Operator::identity(ys).kron(g.rho()).unwrap();
    g.outcome_sum().unwrap().distance(&expected).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn outcomes_sum_to_identity_times_consistency(seed in any::<u64>(), t in 2usize..=3) {
        let mut r = rng(seed);
        let d = Dims::random(&mut r);
        let g = random_game(&mut r, &d, t);
        prop_assert!(outcome_sum_matches(&g) <= 1e-9);
        prop_assert!((g.rho().trace() - 1.0).abs() <= 1e-12);
        for p in g.outcomes() {
            prop_assert!(p.min_eigenvalue().unwrap() >= -1e-9);
        }
        let g2 = parallel_game(&g, 2).unwrap();
        prop_assert_eq!(g2.num_outcomes(), t * t);
        prop_assert!(outcome_sum_matches(&g2) <= 1e-9);
    }

    /// Probabilities from the Choi pairing agree with running the channel on
    /// the verifier's state and measuring.
    #[test]
    fn probabilities_match_direct_simulation(seed in any::<u64>(), t in 2usize..=3) {
        let mut r = rng(seed);
        let d = Dims::random(&mut r);
        let spec = random_spec(&mut r, &d, t);
        let g = parrep::game::outcome_operators_single_round(&spec).unwrap();
        let ch = random_channel(&mut r, &SpaceList::single("X", d.question).unwrap(), &SpaceList::single("Y", d.answer).unwrap(), 2);
        let probs = outcome_probabilities(&g, &strategy_from_channel(&ch).unwrap()).unwrap();
        let after = ch.apply(&spec.sigma, &["X"]).unwrap();
        let mut total = 0.0;
        for (q, p) in spec.measurement.iter().zip(&probs) {
            let direct = q.inner(&after).unwrap();
            prop_assert!((direct - p).abs() <= 1e-10, "direct {} vs pairing {}", direct, p);
            total += p;
        }
        prop_assert!((total - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn probabilities_are_affine_in_the_strategy(seed in any::<u64>(), lambda in 0.0f64..1.0) {
        let mut r = rng(seed);
        let d = Dims::random(&mut r);
        let g = random_game(&mut r, &d, 2);
        let (xi, yo) = (SpaceList::single("X", d.question).unwrap(), SpaceList::single("Y", d.answer).unwrap());
        let s1 = strategy_from_channel(&random_channel(&mut r, &xi, &yo, 1)).unwrap();
        let s2 = strategy_from_channel(&random_channel(&mut r, &xi, &yo, 3)).unwrap();
        let mixed_x = s1.x().scale(lambda).add(&s2.x().scale(1.0 - lambda)).unwrap();
        let mixed = StrategyChoi::new(s1.rounds().to_vec(), mixed_x, Vec::new()).unwrap();
        let (p1, p2, pm) = (
            outcome_probabilities(&g, &s1).unwrap(),
            outcome_probabilities(&g, &s2).unwrap(),
            outcome_probabilities(&g, &mixed).unwrap(),
        );
        for i in 0..2 {
            prop_assert!((pm[i] - (lambda * p1[i] + (1.0 - lambda) * p2[i])).abs() <= 1e-12);
        }
    }

    #[test]
    fn product_strategies_factorize(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = Dims { question: 2, memory: r.random_range(1..=2), answer: 2 };
        let g = random_game(&mut r, &d, 2);
        let g2 = parallel_game(&g, 2).unwrap();
        let single = |c: usize| {
            (
                SpaceList::single(copy_label("X", c, 2), d.question).unwrap(),
                SpaceList::single(copy_label("Y", c, 2), d.answer).unwrap(),
            )
        };
        let ch = random_channel(&mut r, &SpaceList::single("X", d.question).unwrap(), &SpaceList::single("Y", d.answer).unwrap(), 2);
        let copies: Vec<_> = (0..2).map(|c| {
            let (i, o) = single(c);
            parrep::Channel::new(i, o, ch.kraus().to_vec()).unwrap()
        }).collect();
        let both = copies[0].tensor(&copies[1]).unwrap();
        let p = outcome_probabilities(&g, &strategy_from_channel(&ch).unwrap()).unwrap();
        let p2 = outcome_probabilities(&g2, &strategy_from_channel(&both).unwrap()).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                prop_assert!((p2[a * 2 + b] - p[a] * p[b]).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn dephasing_is_idempotent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = Dims::random(&mut r);
        let g = random_game(&mut r, &d, 2);
        let once = dephase_game(&g);
        let twice = dephase_game(&once);
        for (a, b) in once.outcomes().iter().zip(twice.outcomes()) {
            prop_assert_eq!(a.distance(b).unwrap(), 0.0);
        }
        prop_assert!(once.is_diagonal(1e-15));
        // linearity: the dephased outcomes still sum to the dephased total
        let total = g.outcome_sum().unwrap().dephase();
        prop_assert!(once.outcome_sum().unwrap().distance(&total).unwrap() <= 1e-12);
    }

    #[test]
    fn game_json_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = Dims::random(&mut r);
        let g = random_game(&mut r, &d, 3);
        let text = serde_json::to_string(&game_to_json(&g, Some(vec![2]))).unwrap();
        let back = parse_game::<f64>(&text).unwrap();
        prop_assert_eq!(back.winning.clone(), Some(vec![2]));
        for (a, b) in g.outcomes().iter().zip(back.game.outcomes()) {
            prop_assert!(a.distance(b).unwrap() <= 1e-15);
        }
        let direct = game_from_json::<f64>(&game_to_json(&g, None)).unwrap();
        prop_assert_eq!(direct.game.num_outcomes(), 3);
    }
}

use rand::Rng;

#[test]
fn hedging_game_structure() {
    let g = hedging::game();
    assert_eq!(g.spaces().total_dim(), 4);
    assert!((g.rho().distance(&Operator::identity(g.rho().spaces().clone()).scale(0.5))).unwrap() < 1e-15);
    let p1 = &g.outcomes()[1];
    // rank one, eigenvalue ½ (the accepting projector paired with a
    // maximally entangled half)
    let ev = p1.eigenvalues().unwrap();
    assert!((ev[3] - 0.5).abs() < 1e-12 && ev[2].abs() < 1e-12);
    assert!(!g.is_diagonal(1e-12));
}

#[test]
fn malformed_game_files_are_rejected() {
    assert!(matches!(parse_game::<f64>("{"), Err(parrep::Error::Json(_))));
    let unknown = r#"{"type": "single_round", "sigma": {"spaces": [["X", 1]], "entries": [[1, 0]]}, "measurement": [], "extra": 1}"#;
    assert!(parse_game::<f64>(unknown).is_err());
    let nonpsd = r#"{"type": "single_round",
        "sigma": {"spaces": [["X", 2]], "entries": [[1.5, 0], [0, 0], [0, 0], [-0.5, 0]]},
        "measurement": [{"spaces": [["Y", 2]], "entries": [[1, 0], [0, 0], [0, 0], [1, 0]]}]}"#;
    assert!(matches!(parse_game::<f64>(nonpsd), Err(parrep::Error::NotPsd { .. })));
}
