use thiserror::Error;

/// Every failure the engine can report.
///
/// Variants marked "bug" can only fire if an internal invariant is broken;
/// they carry enough state to reproduce the failing computation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank {rank} is out of range for type {family}")]
    InvalidRank { family: char, rank: usize },

    #[error("denominator of the inverse deformed Cartan matrix has non-unit constant term {0}")]
    NonUnitConstant(i128),

    #[error("operands live over different Cartan data: {0}")]
    Mismatch(String),

    #[error("node {node} is not a node of {ty}")]
    InvalidNode { node: i64, ty: String },

    #[error("{monomial} is not {node}-dominant")]
    NotIDominant { monomial: String, node: u16 },

    #[error("{0} is not dominant")]
    NotDominant(String),

    #[error("element is not pointed: {0}")]
    NotPointed(String),

    #[error("closure exceeded cap of {0} monomials")]
    CapExceeded(usize),

    #[error("s_i disagree at {monomial}: {detail}")]
    WellDefinednessViolation { monomial: String, detail: String },

    #[error("no bar-invariant solution: {0}")]
    NoSolution(String),

    #[error("Q coefficient for {monomial} is not in t^-1 Z[t^-1]: {detail}")]
    NonPolynomialQ { monomial: String, detail: String },

    #[error("coefficient {coeff} of {monomial} is not positive")]
    NonPositiveCoefficient { monomial: String, coeff: i64 },

    #[error("coefficient of {0} depends on t")]
    NonConstantCoefficient(String),

    #[error("folding is only supported for (A,2) and (D,2), got {0}")]
    UnsupportedFolding(String),

    #[error("inclusion is not compatible with the diagram automorphisms: {0}")]
    IncompatibleInclusion(String),

    #[error("invalid inclusion: {0}")]
    InvalidInclusion(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Structured name printed by the command-line front end.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidRank { .. } => "InvalidRank",
            Error::NonUnitConstant(_) => "NonUnitConstant",
            Error::Mismatch(_) => "Mismatch",
            Error::InvalidNode { .. } => "InvalidNode",
            Error::NotIDominant { .. } => "NotIDominant",
            Error::NotDominant(_) => "NotDominant",
            Error::NotPointed(_) => "NotPointed",
            Error::CapExceeded(_) => "CapExceeded",
            Error::WellDefinednessViolation { .. } => "WellDefinednessViolation",
            Error::NoSolution(_) => "NoSolution",
            Error::NonPolynomialQ { .. } => "NonPolynomialQ",
            Error::NonPositiveCoefficient { .. } => "NonPositiveCoefficient",
            Error::NonConstantCoefficient(_) => "NonConstantCoefficient",
            Error::UnsupportedFolding(_) => "UnsupportedFolding",
            Error::IncompatibleInclusion(_) => "IncompatibleInclusion",
            Error::InvalidInclusion(_) => "InvalidInclusion",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
