//! The two-qubit hedging game.
//!
//! The verifier sends half of `(|00⟩+|11⟩)/√2` and accepts when the returned
//! qubit together with the kept one projects onto
//! `cos(π/8)|00⟩ + sin(π/8)|11⟩`. One round is won with probability at most
//! `cos²(π/8)`, yet two parallel rounds can be played so that exactly one is
//! always won.

use nalgebra::{Complex, DMatrix};

use crate::channel::KrausChannel;
use crate::game::{parallel_game, OutcomeOperators};
use crate::io::{parse_game, LoadedGame};
use crate::spaces::{copy_label, SpaceList};

/// Bundled game description.
pub const GAME_JSON: &str = include_str!("../data/hedging_game.json");

/// `cos²(π/8)`, the single-round optimum.
pub fn single_round_value() -> f64 {
    (std::f64::consts::PI / 8.0).cos().powi(2)
}

/// Probability of at least one win in two rounds when each round is played
/// optimally and independently: `1 − (1 − p)²`.
pub fn independent_tail(p: f64) -> f64 {
    1.0 - (1.0 - p).powi(2)
}

pub fn loaded() -> LoadedGame<f64> {
    parse_game(GAME_JSON).expect("bundled game is valid")
}

/// Two-outcome form (0 = lose, 1 = win).
pub fn game() -> OutcomeOperators<f64> {
    loaded().win_lose().expect("bundled game has a winning set")
}

pub fn two_copy_game() -> OutcomeOperators<f64> {
    parallel_game(&game(), 2).expect("two copies fit the cap")
}

/// The unitary `|00⟩ ↦ −|00⟩` on the two received qubits.
pub fn phase_flip() -> KrausChannel<f64> {
    let input = SpaceList::new([(copy_label("X", 0, 2), 2), (copy_label("X", 1, 2), 2)]).unwrap();
    let output = SpaceList::new([(copy_label("Y", 0, 2), 2), (copy_label("Y", 1, 2), 2)]).unwrap();
    let mut u = DMatrix::identity(4, 4);
    u[(0, 0)] = Complex::new(-1.0, 0.0);
    KrausChannel::unitary(input, output, u).unwrap()
}
