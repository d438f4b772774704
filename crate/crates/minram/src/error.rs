use std::fmt;

/// Unified error type for the whole crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A polycyclic presentation failed validation or consistency checks.
    Presentation(String),
    /// A precondition on an operation's arguments does not hold.
    Domain(String),
    /// A bounded prime scan ran out without finding a qualifying prime.
    SearchLimit { what: String, bound: u64 },
    /// Some prime l dividing the group order has a root of unity in K.
    TorsionClash { l: u64 },
    /// The residue field at q is quadratic (q inert in K).
    InertPrime { q: u64 },
    /// The Dedekind criterion could not decide ramification at p.
    Inconclusive(String),
    /// Certificate replay found a mismatch or a failed condition.
    Verification(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Presentation(msg) => write!(f, "presentation error: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::SearchLimit { what, bound } => {
                write!(f, "bounded search failed: no {what} found below {bound}")
            }
            Error::TorsionClash { l } => {
                write!(f, "torsion clash: zeta_{l} lies in K (l divides |mu_K|)")
            }
            Error::InertPrime { q } => {
                write!(f, "prime {q} is inert in K: residue field has {q}^2 elements")
            }
            Error::Inconclusive(msg) => write!(f, "inconclusive: {msg}"),
            Error::Verification(msg) => write!(f, "verification failed: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
