use sft_core::hierarchy::HierarchyError;
use sft_core::hurwitz::HurwitzError;
use sft_core::poisson::PoissonError;

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or arguments: 2.
    Usage(String),
    /// A resource bound was hit: 3.
    Bound(String),
    /// Unreadable or malformed input file, or unwritable output: 4.
    Io(String),
    /// The computation ran but the checked property fails: 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Bound(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Bound(m) | CliError::Io(m) | CliError::Failed(m) => m,
        }
    }
}

fn hurwitz_class(e: &HurwitzError) -> fn(String) -> CliError {
    match e {
        HurwitzError::DegreeBound { .. } | HurwitzError::ClassTooLarge { .. } => CliError::Bound,
        HurwitzError::Inconsistent { .. } | HurwitzError::Underdetermined { .. } => CliError::Failed,
        _ => CliError::Usage,
    }
}

impl From<HurwitzError> for CliError {
    fn from(e: HurwitzError) -> Self {
        hurwitz_class(&e)(e.to_string())
    }
}

impl From<PoissonError> for CliError {
    fn from(e: PoissonError) -> Self {
        match &e {
            PoissonError::Hurwitz(h) => hurwitz_class(h)(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<HierarchyError> for CliError {
    fn from(e: HierarchyError) -> Self {
        match e {
            HierarchyError::SearchTooLarge { .. } => CliError::Bound(e.to_string()),
            HierarchyError::Poisson(p) => p.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

macro_rules! usage_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Usage(e.to_string())
            }
        }
    )*};
}

usage_from!(
    sft_core::orbits::ModelError,
    sft_core::algebra::AlgebraError,
    sft_core::weyl::WeylError
);
