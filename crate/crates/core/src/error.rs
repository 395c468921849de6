use thiserror::Error;

use crate::network::Violation;

#[derive(Debug, Error)]
pub enum CaseError {
    #[error("case file is malformed: {0}")]
    Parse(String),
    #[error("case is invalid: {}", join(.0))]
    Validation(Vec<Violation>),
    #[error("case {0} is not connected")]
    Disconnected(String),
    #[error("unknown line {0}")]
    UnknownLine(String),
    #[error("unknown bus {0}")]
    UnknownBus(String),
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error, PartialEq)]
pub enum PtdfError {
    #[error("network is disconnected; reduced susceptance matrix is singular")]
    Disconnected,
    #[error("reduced susceptance matrix is singular")]
    Singular,
    #[error("unknown slack bus {0}")]
    UnknownSlack(String),
    #[error("line {0} has non-positive reactance")]
    BadReactance(String),
    #[error("expected {expected} injections, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("injections do not balance (sum = {0})")]
    Unbalanced(f64),
}

#[derive(Debug, Error, PartialEq)]
pub enum LpError {
    #[error("constraint {constraint} references undeclared variable {index}")]
    UnknownVariable { constraint: String, index: usize },
    #[error("variable {0} has lower bound above upper bound")]
    InvertedBounds(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum RiskError {
    #[error("wildfire risk {0} is outside [0, 1]")]
    WrOutOfRange(f64),
    #[error("risk segment list is empty")]
    EmptySegments,
    #[error("FOC {0} is outside [0, 1]")]
    FocOutOfRange(f64),
    #[error("risk profile is malformed: {0}")]
    Parse(String),
    #[error("unknown risk category {0}")]
    UnknownCategory(String),
    #[error("risk profile is inconsistent with the case: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Error)]
pub enum DispatchError {
    #[error(transparent)]
    Case(#[from] CaseError),
    #[error(transparent)]
    Ptdf(#[from] PtdfError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Risk(#[from] RiskError),
    #[error("invalid dispatch configuration: {0}")]
    Config(String),
    #[error("solution is not optimal; no prices available")]
    NotOptimal,
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Dispatch(#[from] DispatchError),
    #[error(transparent)]
    Case(#[from] CaseError),
    #[error("scenario spec is malformed: {0}")]
    Parse(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("unknown report format {0:?} (expected text, csv or json)")]
    UnknownFormat(String),
}
