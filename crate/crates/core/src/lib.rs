//! Strategy semidefinite programs for quantum prover-verifier interactions.
//!
//! Games are represented by their outcome operators, compiled into Hermitian
//! SDPs and solved by a dense interior-point method. Dual witnesses for
//! parallel repetition are constructed explicitly and checked for
//! feasibility, and a small planner sizes threshold-repetition error
//! reduction.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the precision to `f64`.

pub mod certificates;
pub mod channel;
pub mod error;
pub mod error_reduction;
pub mod game;
pub mod hedging;
pub mod io;
pub mod operator;
pub mod scalar;
pub mod sdp;
pub mod spaces;

pub use channel::{apply_channel, choi, KrausChannel};
pub use error::{Error, Result};
pub use operator::{
    dephase, fidelity, is_psd, kron, min_eigenvalue, partial_trace, permute_systems, DensityOperator,
    HermitianOperator, DIM_CAP,
};
pub use scalar::{CMatrix, Cx, Real};
pub use spaces::{Space, SpaceList};

pub type Operator = operator::HermitianOperator<f64>;
pub type Operator32 = operator::HermitianOperator<f32>;
pub type Density = operator::DensityOperator<f64>;
pub type Channel = channel::KrausChannel<f64>;
pub type Game = game::OutcomeOperators<f64>;
pub type Strategy = game::StrategyChoi<f64>;
pub type Problem = sdp::SdpProblem<f64>;
pub type Report = sdp::SolveReport<f64>;
pub type Witness = sdp::DualWitness<f64>;
