//! Exact simulation of power-set-bit detector registers.
//!
//! Detectors are modelled by the four subsets of a bit (ground, signal,
//! faulty, empty). On top of that sit classical permutation dynamics over
//! physical registers and quantum labstates: superpositions of detector
//! configurations with amplitudes in Q(i, √2), evolved stage by stage and
//! measured with projectors. The bomb-tester and Hardy networks are built
//! in and reproduce their probability tables exactly.

pub mod amp;
pub mod bits;
pub mod classical;
mod error;
pub mod labstate;
pub mod network;
pub mod rat;
pub mod register;
pub mod scenario;
pub mod verify;

pub use amp::{Amp, RealQ2};
pub use bits::{BitOp, PBitState, Question};
pub use error::Error;
pub use labstate::{DensityState, Labstate, Monomial, Projector, StageMap};
pub use rat::Rat;
pub use register::{PhysicalRegister, RegisterState, Site};
