//! Spectral Galerkin solver for `u′ − u_xx + ∂j(x, t, u) ∋ f` on `(0, π)`
//! with homogeneous Dirichlet data, and the energy and flattening
//! certificates that go with it.
//!
//! States are sine coefficients `a_k` of `u = Σ a_k sin(kx)`.

mod certificates;
mod forcing;
mod galerkin;
mod nonlinearity;
mod process;
pub mod quadrature;

use thiserror::Error;

pub use certificates::{
    effective_constants, energy_certificate, energy_certificate_mollified, flattening_bound, flattening_certificate,
    gronwall_bound, EnergyCertificate, FlatteningCertificate, LAMBDA1,
};
pub use forcing::{vstar_norm_of_modes, Forcing, ForcingSpec};
pub use galerkin::{galerkin_step, h_norm, solve_trajectory, weak_form_residual, Galerkin, SolverConfig, Trajectory};
pub use nonlinearity::{mollified_h, Nonlinearity, NonlinearitySpec};
pub use process::{EnsembleDesign, InclusionProcess, TrajectoryCache};

use crate::process::ProcessError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("expected {expected} modes, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite value at t = {t}")]
    NonFinite { t: f64 },
    #[error("norm {norm} exceeded the cap at t = {t}")]
    BlowUp { t: f64, norm: f64 },
    #[error("start time {tau} is later than the absorption time {tau_bar}")]
    NotAbsorbed { tau: f64, tau_bar: f64 },
    #[error("trajectory cache: {0}")]
    Cache(String),
}

impl From<SolverError> for ProcessError {
    fn from(e: SolverError) -> Self {
        ProcessError::Solver(e.to_string())
    }
}
