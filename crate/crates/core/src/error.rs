use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },
    #[error("cannot parse weight {input:?}: {reason}")]
    ParseWeight { input: String, reason: String },
    #[error("root {0} is not even")]
    NotEvenRoot(String),
    #[error("root {0} is isotropic")]
    IsotropicRoot(String),
    #[error("root {0} is not simple in the given system")]
    NotSimpleRoot(String),
    #[error("operation needs p > 0 and q > 0 (got p = {p}, q = {q})")]
    RequiresNoncompactSplit { p: usize, q: usize },
    #[error("weight {0} is not a boundary candidate")]
    NotBoundary(String),
    #[error("recombination chain reached {weight}, where roots outside the two boundary roots vanish")]
    ChainLeftBoundaryCase { weight: String },
    #[error("weight {0} is not dominant integral for the compact roots")]
    NonDominant(String),
    #[error("weight {weight} violates the Harish-Chandra condition at root {root}")]
    NotDiscreteSeries { weight: String, root: String },
    #[error("weight {weight} is a limit of discrete series (pairing 0 at root {root})")]
    LimitOfDiscreteSeries { weight: String, root: String },
    #[error("invalid supercharge: {0}")]
    InvalidSupercharge(String),
    #[error("twist root {root} does not vanish on {weight}: pairing is {pairing}")]
    RootNotVanishing {
        root: String,
        weight: String,
        pairing: String,
    },
    #[error("weight {0} is not unitarizable")]
    NotUnitary(String),
    #[error("fugacity point is outside the positive chamber: {0}")]
    FugacityOutOfChamber(String),
    #[error("no character available: {0}")]
    NoCharacter(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("|r| = |t|: the family index is not defined on the marginal circle")]
    MarginalCircle,
    #[error("zero vector")]
    ZeroVector,
    #[error("supercharge parameters are both zero")]
    ZeroSupercharge,
    #[error("no sign makes the Xi eigenvalues non-negative on the module")]
    NoConsistentXiSign,
    #[error("base weights differ: {0} vs {1}")]
    BaseMismatch(String, String),
}

impl Error {
    /// Input problems (as opposed to failures of a well-posed computation).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidAlgebra(_)
                | Error::DimensionMismatch { .. }
                | Error::ParseWeight { .. }
                | Error::InvalidSupercharge(_)
                | Error::FugacityOutOfChamber(_)
                | Error::ZeroVector
                | Error::ZeroSupercharge
                | Error::RequiresNoncompactSplit { .. }
                | Error::NotEvenRoot(_)
                | Error::IsotropicRoot(_)
                | Error::NotSimpleRoot(_)
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidAlgebra(_) => "InvalidAlgebra",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ParseWeight { .. } => "ParseWeight",
            Error::NotEvenRoot(_) => "NotEvenRoot",
            Error::IsotropicRoot(_) => "IsotropicRoot",
            Error::NotSimpleRoot(_) => "NotSimpleRoot",
            Error::RequiresNoncompactSplit { .. } => "RequiresNoncompactSplit",
            Error::NotBoundary(_) => "NotBoundary",
            Error::ChainLeftBoundaryCase { .. } => "ChainLeftBoundaryCase",
            Error::NonDominant(_) => "NonDominant",
            Error::NotDiscreteSeries { .. } => "NotDiscreteSeries",
            Error::LimitOfDiscreteSeries { .. } => "LimitOfDiscreteSeries",
            Error::InvalidSupercharge(_) => "InvalidSupercharge",
            Error::RootNotVanishing { .. } => "RootNotVanishing",
            Error::NotUnitary(_) => "NotUnitary",
            Error::FugacityOutOfChamber(_) => "FugacityOutOfChamber",
            Error::NoCharacter(_) => "NoCharacter",
            Error::Unsupported(_) => "Unsupported",
            Error::MarginalCircle => "MarginalCircle",
            Error::ZeroVector => "ZeroVector",
            Error::ZeroSupercharge => "ZeroSupercharge",
            Error::NoConsistentXiSign => "NoConsistentXiSign",
            Error::BaseMismatch(..) => "BaseMismatch",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
