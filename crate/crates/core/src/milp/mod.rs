//! The makespan MILP: model building, LP and MPS writers, assignment
//! encoding and decoding, and the trip-count search.
//!
//! Variables are `x_k_f_i_j` (vehicle `k` drives arc `(i, j)` on trip `f`),
//! `y_k_f_d` (trip `f` ends at depot `d`), `z_k_f` (trip `f` is used) and the
//! makespan `beta`. All indices are 0-based.

mod codec;
mod driver;
mod lp;
mod model;
mod mps;

use thiserror::Error;

pub use codec::{
    check_assignment, decode_solution, encode_solution, restore_solution, DecodeError, EncodeError, RowViolation,
};
pub use driver::{iterative_f_driver, iterative_f_driver_with, DriverError, SolveStatus, DEFAULT_MAX_TRIPS};
pub use lp::write_lp;
pub use model::{build_model, expected_counts, Column, MilpModel, ModelCounts, Row, Sense, SubtourMode, VarIndex};
pub use mps::write_mps;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MilpError {
    #[error("the number of trips per vehicle must be at least 1")]
    ZeroTrips,
    #[error("subtour enumeration is capped at {cap} non-depot nodes, instance has {free}")]
    SubtourCap { cap: usize, free: usize },
}

/// Keeps `[A-Za-z0-9_.]`, replaces everything else and truncates to 255 bytes.
pub(crate) fn sanitize(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '.' { c } else { '_' })
        .collect();
    if s.is_empty() || s.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
        s.insert(0, '_');
    }
    s.truncate(255);
    s
}
