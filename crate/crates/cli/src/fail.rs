use gldim_core::groups::GroupError;
use gldim_core::izext::IzError;
use gldim_core::mackeydim::MackeyError;
use gldim_core::oracle::OracleError;
use gldim_core::posets::PosetError;
use gldim_core::transfer::TransferError;

/// A failed run and the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
    Discrepancy(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 3,
            Failure::Discrepancy(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) | Failure::Discrepancy(m) => m,
        }
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::Parse(_) | GroupError::BadFactor(_) | GroupError::NotPrime(_) | GroupError::UnknownSubgroup(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Domain(e.to_string()),
        }
    }
}

impl From<PosetError> for Failure {
    fn from(e: PosetError) -> Self {
        match e {
            PosetError::Parse { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

impl From<TransferError> for Failure {
    fn from(e: TransferError) -> Self {
        match e {
            TransferError::Parse { .. } => Failure::Usage(e.to_string()),
            TransferError::Group(g) => g.into(),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

impl From<IzError> for Failure {
    fn from(e: IzError) -> Self {
        match e {
            IzError::Poset(p) => p.into(),
            IzError::Discrepancy(_) => Failure::Discrepancy(e.to_string()),
            IzError::EmptyPoset => Failure::Domain(e.to_string()),
        }
    }
}

impl From<MackeyError> for Failure {
    fn from(e: MackeyError) -> Self {
        match e {
            MackeyError::Transfer(t) => t.into(),
            MackeyError::Iz(i) => i.into(),
            MackeyError::Discrepancy(_) => Failure::Discrepancy(e.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            // a failed audit means the resolution code is wrong, not the input
            OracleError::NotExact { .. } | OracleError::NotMinimal { .. } | OracleError::NonTermination { .. } => {
                Failure::Discrepancy(e.to_string())
            }
            _ => Failure::Domain(e.to_string()),
        }
    }
}
