use std::fmt;

use crate::expr::SourceSpan;
use crate::limits::CounterExample;
use crate::starsets::NonHypernaturalReason;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse class of an error, which fixes the CLI exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input text or arguments (exit 1).
    Usage,
    /// A well-formed request the mathematics refuses (exit 2).
    Domain,
    /// A self-check failed; never expected (exit 3).
    Internal,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("syntax error at {span}: {message}")]
    Syntax { message: String, span: SourceSpan },
    #[error("case modulus must be at least 2, got {modulus} (at {span})")]
    ZeroModulus { modulus: u64, span: SourceSpan },
    #[error("case({modulus}; ...) needs {modulus} branches, got {found} (at {span})")]
    BranchCountMismatch {
        modulus: u64,
        found: usize,
        span: SourceSpan,
    },
    #[error("exponent {exponent} is out of the supported range (at {span})")]
    ExponentTooLarge { exponent: i64, span: SourceSpan },
    #[error("invalid set description: {0}")]
    InvalidSet(String),
    #[error("invalid fragment: {0}")]
    InvalidFragment(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("division by a germ that vanishes on a whole residue class")]
    DivisionByZeroGerm,
    #[error("germ is infinitely large; it has no standard part")]
    NotFinite,
    #[error("fragment constraints are not simultaneously satisfiable: {0}")]
    IncoherentConstraints(String),
    #[error("filter basis has empty intersection")]
    EmptyBasisIntersection,
    #[error("not a hypernatural: {0}")]
    NotHypernatural(NonHypernaturalReason),
    #[error("hypernatural never exceeds the germ threshold {threshold}")]
    DomainTooSmall { threshold: u64 },
    #[error("no witness: S_eps is not cofinite")]
    NoWitness(Box<CounterExample>),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("premise failed: {0}")]
    PremiseFailed(String),
    #[error("L is the limit of the sequence; there is no counterexample")]
    IsActuallyLimit,
    #[error("universe size {0} is outside 1..=4")]
    UniverseTooLarge(usize),
    #[error("family is not a filter")]
    NotAFilter,
    #[error("family is not an ultrafilter")]
    NotUltra,
    #[error("index set too large to materialize: {0}")]
    TooLarge(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            Syntax { .. }
            | ZeroModulus { .. }
            | BranchCountMismatch { .. }
            | ExponentTooLarge { .. }
            | InvalidSet(_)
            | InvalidFragment(_)
            | InvalidArgument(_) => ErrorKind::Usage,
            Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Domain,
        }
    }

    /// Stable machine-readable name.
    pub fn name(&self) -> &'static str {
        use Error::*;
        match self {
            Syntax { .. } => "SyntaxError",
            ZeroModulus { .. } => "ZeroModulus",
            BranchCountMismatch { .. } => "BranchCountMismatch",
            ExponentTooLarge { .. } => "ExponentTooLarge",
            InvalidSet(_) => "InvalidSet",
            InvalidFragment(_) => "InvalidFragment",
            InvalidArgument(_) => "InvalidArgument",
            DivisionByZeroGerm => "DivisionByZeroGerm",
            NotFinite => "NotFinite",
            IncoherentConstraints(_) => "IncoherentConstraints",
            EmptyBasisIntersection => "EmptyBasisIntersection",
            NotHypernatural(_) => "NotHypernatural",
            DomainTooSmall { .. } => "DomainTooSmall",
            NoWitness(_) => "NoWitness",
            HypothesisFailed(_) => "HypothesisFailed",
            PremiseFailed(_) => "PremiseFailed",
            IsActuallyLimit => "IsActuallyLimit",
            UniverseTooLarge(_) => "UniverseTooLarge",
            NotAFilter => "NotAFilter",
            NotUltra => "NotUltra",
            TooLarge(_) => "TooLarge",
            Internal(_) => "Internal",
        }
    }

    pub fn span(&self) -> Option<SourceSpan> {
        match self {
            Error::Syntax { span, .. }
            | Error::ZeroModulus { span, .. }
            | Error::BranchCountMismatch { span, .. }
            | Error::ExponentTooLarge { span, .. } => Some(*span),
            _ => None,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}
