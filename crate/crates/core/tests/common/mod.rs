//! Seeded random instances shared by the integration suites.
#![allow(dead_code)]

use nalgebra::{Complex, DMatrix};
use parrep::certificates::MonotoneSet;
use parrep::game::{outcome_operators_single_round, SingleRoundGameSpec};
use parrep::{CMatrix, Channel, Density, Game, Operator, SpaceList};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

/// `G G†` scaled to unit trace.
pub fn random_psd(rng: &mut ChaCha8Rng, spaces: &SpaceList) -> Operator {
    let d = spaces.total_dim();
    let g = gaussian(rng, d, d);
    let m = &g * g.adjoint();
    let t = m.trace().re;
    Operator::new(spaces.clone(), m / Complex::new(t, 0.0)).unwrap()
}

pub fn random_density(rng: &mut ChaCha8Rng, spaces: &SpaceList) -> Density {
    Density::new(random_psd(rng, spaces)).unwrap()
}

pub fn random_diagonal_psd(rng: &mut ChaCha8Rng, spaces: &SpaceList) -> Operator {
    let d: Vec<f64> = (0..spaces.total_dim()).map(|_| rng.random::<f64>()).collect();
    Operator::from_diagonal(spaces.clone(), &d).unwrap()
}

/// Kraus operators cut from a random isometry; `kraus` is raised to the
/// minimum an isometry needs.
pub fn random_channel(rng: &mut ChaCha8Rng, input: &SpaceList, output: &SpaceList, kraus: usize) -> Channel {
    let (din, dout) = (input.total_dim(), output.total_dim());
    let kraus = kraus.max(din.div_ceil(dout));
    let g = gaussian(rng, dout * kraus, din);
    let v = g.qr().q();
    let ks = (0..kraus).map(|k| v.rows(k * dout, dout).into_owned()).collect();
    Channel::new(input.clone(), output.clone(), ks).unwrap()
}

/// `S^{-1/2} A_i S^{-1/2}` with `S = Σ A_i`.
fn normalize_povm(parts: Vec<Operator>) -> Vec<Operator> {
    let mut s = Operator::zeros(parts[0].spaces().clone());
    for p in &parts {
        s = s.add(p).unwrap();
    }
    let inv_sqrt = s.map_spectrum(|x| 1.0 / x.sqrt()).unwrap();
    parts
        .iter()
        .map(|p| {
            let m = inv_sqrt.matrix() * p.matrix() * inv_sqrt.matrix();
            Operator::new(p.spaces().clone(), (&m + m.adjoint()) * Complex::new(0.5, 0.0)).unwrap()
        })
        .collect()
}

pub struct Dims {
    pub question: usize,
    pub memory: usize,
    pub answer: usize,
}

impl Dims {
    pub fn random(rng: &mut ChaCha8Rng) -> Self {
        Self {
            question: rng.random_range(2..=3),
            memory: rng.random_range(1..=3),
            answer: rng.random_range(2..=3),
        }
    }
}

pub fn spec_spaces(d: &Dims) -> (SpaceList, SpaceList) {
    let state = SpaceList::new([("X", d.question), ("Z", d.memory)]).unwrap();
    let meas = SpaceList::new([("Y", d.answer), ("Z", d.memory)]).unwrap();
    (state, meas)
}

/// Single-round game with a random state and a random `outcomes`-outcome
/// measurement.
pub fn random_spec(rng: &mut ChaCha8Rng, d: &Dims, outcomes: usize) -> SingleRoundGameSpec<f64> {
    let (state, meas) = spec_spaces(d);
    let sigma = random_density(rng, &state);
    let parts = (0..outcomes).map(|_| random_psd(rng, &meas)).collect();
    SingleRoundGameSpec::new(sigma, normalize_povm(parts), None).unwrap()
}

pub fn random_game(rng: &mut ChaCha8Rng, d: &Dims, outcomes: usize) -> Game {
    outcome_operators_single_round(&random_spec(rng, d, outcomes)).unwrap()
}

/// Classical game: diagonal state and diagonal measurement.
pub fn random_diagonal_game(rng: &mut ChaCha8Rng, d: &Dims) -> Game {
    let (state, meas) = spec_spaces(d);
    let sigma = random_diagonal_psd(rng, &state);
    let t = sigma.trace();
    let sigma = Density::new(sigma.scale(1.0 / t)).unwrap();
    let parts = (0..2).map(|_| random_diagonal_psd(rng, &meas).add(&Operator::identity(meas.clone()).scale(1e-3)).unwrap()).collect();
    let spec = SingleRoundGameSpec::new(sigma, normalize_povm(parts), None).unwrap();
    outcome_operators_single_round(&spec).unwrap()
}

/// Up-closure of one to three random words.
pub fn random_monotone_set(rng: &mut ChaCha8Rng, n: usize) -> MonotoneSet {
    let count = rng.random_range(1..=3);
    let gens: Vec<Vec<usize>> = (0..count)
        .map(|_| (0..n).map(|_| rng.random_range(0..2)).collect())
        .collect();
    MonotoneSet::generated_by(n, &gens).unwrap()
}
