//! Wildfire-risk-aware DC economic dispatch and locational marginal pricing.
//!
//! The pipeline is: a [`NetworkCase`] is validated, its PTDF matrix computed,
//! a dispatch LP built (plain EDC or the wildfire variant with FOC-scaled
//! limits and optional load shedding), solved with the built-in simplex, and
//! the duals turned into per-bus prices. The scenario module batches these
//! solves.
//!
//! Linear algebra, PTDF, the LP solver and risk functions are generic over
//! [`Real`] (`f32` or `f64`). Dispatch, pricing and scenarios work in `f64`
//! through the aliases below.

pub mod dispatch;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod lp;
pub mod network;
pub mod pricing;
pub mod ptdf;
pub mod risk;
pub mod scalar;
pub mod scenario;

pub use dispatch::{
    build_dispatch, build_edc, build_wrb_edc, solve_dispatch, DispatchConfig, DispatchDuals, DispatchMode,
    DispatchSolution, FocMode, ObjectiveForm, SolutionDocument,
};
pub use error::{CaseError, DispatchError, LpError, PtdfError, RiskError, ScenarioError};
pub use network::{apply_outage, load_case, save_case, validate_case, Bus, Generator, Line, NetworkCase};
pub use pricing::{decompose_lmp, lmps, verify_lmp_fd, FdCheck, LmpBreakdown};
pub use ptdf::{compute_ptdf, line_flows};
pub use risk::{BusRisk, LineRisk, RiskCategory, RiskProfile};
pub use scalar::Real;
pub use scenario::{
    emit_report, run_foc_sweep, run_load_perturbation, run_n_minus_1, run_scenario, ReportFormat, ScenarioReport,
    ScenarioSpec, ScenarioStatus,
};

pub type PtdfMatrix = ptdf::PtdfMatrix<f64>;
pub type PtdfMatrix32 = ptdf::PtdfMatrix<f32>;
pub type LpProblem = lp::LpProblem<f64>;
pub type LpProblem32 = lp::LpProblem<f32>;
pub type LpSolution = lp::LpSolution<f64>;
pub type RiskSegment = risk::RiskSegment<f64>;
pub type DenseMatrix = linalg::DenseMatrix<f64>;
pub use lp::{solve_lp, LpStatus};
