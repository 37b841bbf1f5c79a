//! Exact simulation of discrete-time quantum walks with two coins.
//!
//! The walker lives on `position ⊗ coin1 ⊗ coin2`; odd steps flip coin 1
//! and shift by it, even steps do the same with coin 2. On top of the
//! state-vector engine the crate provides perfect-state-transfer schedules
//! for cycles and complete graphs, a gate-level compiler with routing and
//! OpenQASM 2.0 export, and single-qubit tomography.
//!
//! Randomness is confined to [`tomography`]: every sampled experiment uses
//! `ChaCha8Rng::seed_from_u64(seed)` on stream `3 * run + basis` (Z = 0,
//! X = 1, Y = 2), so results do not depend on thread count or scheduling.
//!
//! The `parallel` feature (on by default) lets [`par::Exec::Parallel`] use
//! rayon; without it every [`par::Exec`] runs sequentially.

pub mod circuit;
pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod par;
pub mod protocols;
pub mod tomography;
pub mod walk;

pub use error::{Error, Result};
pub use hilbert::{CoinStateSpec, HilbertLayout, Register, WalkState};
pub use par::Exec;
pub use protocols::{
    complete_pst_schedule, cycle8_schedule, cycle_schedule, search_cycle_schedules, simplify,
    verify_transfer, Schedule, ScheduleStep, TransferReport,
};
pub use walk::{evolve, unitary_of, Coin, CoinOperator, ShiftKind};
