//! Probes: finite computations whose outcomes are evidence about
//! geometric properties, reported with replayable witnesses and
//! without claiming more than the computation shows.

mod boundary;
mod contraction;
mod portwalk;
mod rushton;

pub use boundary::{boundary_pair_report, BaseCell, BoundaryReport, PersistentPair};
pub use contraction::{contraction_report, ContractionReport};
pub use portwalk::{
    find_non_winding, port_walk_graph, PortArc, PortCycle, PortNode, PortWalkGraph,
};
pub use rushton::{rushton_probe, RushtonReport, RushtonViolation};

use crate::engine::{BudgetExceeded, DegreeError};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProbeStatus {
    PassAtDepth,
    Violation,
    Certified,
    Witness,
    Unknown,
}

impl ProbeStatus {
    pub fn name(self) -> &'static str {
        match self {
            ProbeStatus::PassAtDepth => "PASS_AT_DEPTH",
            ProbeStatus::Violation => "VIOLATION",
            ProbeStatus::Certified => "CERTIFIED",
            ProbeStatus::Witness => "WITNESS",
            ProbeStatus::Unknown => "UNKNOWN",
        }
    }
}

impl std::fmt::Display for ProbeStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ProbeError {
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Degree(#[from] DegreeError),
}
