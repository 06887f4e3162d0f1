use thiserror::Error;

use super::model::{build_model, MilpModel, SubtourMode};
use super::MilpError;
use crate::instance::Instance;

pub const DEFAULT_MAX_TRIPS: usize = 8;

/// What a solver callback reports for one model.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveStatus {
    Optimal(Vec<f64>),
    Infeasible,
    /// The solver ran out of time or memory; the message is passed through.
    ResourceLimit(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DriverError {
    #[error("solver gave up at {trips} trips per vehicle: {message}")]
    ResourceLimit { trips: usize, message: String },
    #[error("no feasible model with up to {cap} trips per vehicle")]
    Capped { cap: usize },
    #[error(transparent)]
    Model(#[from] MilpError),
}

/// Tries 1, 2, ... trips per vehicle until the callback finds an optimum.
pub fn iterative_f_driver(
    inst: &Instance,
    solve: impl FnMut(&MilpModel) -> SolveStatus,
) -> Result<(usize, MilpModel, Vec<f64>), DriverError> {
    iterative_f_driver_with(inst, DEFAULT_MAX_TRIPS, SubtourMode::default(), solve)
}

pub fn iterative_f_driver_with(
    inst: &Instance,
    max_trips: usize,
    mode: SubtourMode,
    mut solve: impl FnMut(&MilpModel) -> SolveStatus,
) -> Result<(usize, MilpModel, Vec<f64>), DriverError> {
    for trips in 1..=max_trips {
        let model = build_model(inst, trips, mode)?;
        match solve(&model) {
            SolveStatus::Optimal(values) => return Ok((trips, model, values)),
            SolveStatus::Infeasible => continue,
            SolveStatus::ResourceLimit(message) => return Err(DriverError::ResourceLimit { trips, message }),
        }
    }
    Err(DriverError::Capped { cap: max_trips })
}
