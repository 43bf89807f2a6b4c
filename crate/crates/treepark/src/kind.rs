use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// What is being counted on trees of size `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CountKind {
    /// Sequences in `[n]^n` that park everyone.
    Functions,
    /// Parking functions that use every edge.
    PrimeFunctions,
    /// Multisets of size `n` that park everyone.
    Distributions,
    PrimeDistributions,
    /// Sequences of `m ≤ n` drivers that all park.
    GeneralFunctions(usize),
    /// Multisets of `m ≤ n` drivers that all park.
    GeneralDistributions(usize),
}

impl CountKind {
    pub const BASIC: [CountKind; 4] = [
        CountKind::Functions,
        CountKind::PrimeFunctions,
        CountKind::Distributions,
        CountKind::PrimeDistributions,
    ];

    pub fn is_distribution(self) -> bool {
        matches!(
            self,
            CountKind::Distributions
                | CountKind::PrimeDistributions
                | CountKind::GeneralDistributions(_)
        )
    }

    pub fn is_prime(self) -> bool {
        matches!(
            self,
            CountKind::PrimeFunctions | CountKind::PrimeDistributions
        )
    }

    pub fn general_m(self) -> Option<usize> {
        match self {
            CountKind::GeneralFunctions(m) | CountKind::GeneralDistributions(m) => Some(m),
            _ => None,
        }
    }

    /// Number of drivers on a tree of size `n`.
    pub fn drivers(self, n: usize) -> usize {
        self.general_m().unwrap_or(n)
    }

    pub fn check(self, n: usize) -> Result<()> {
        match self.general_m() {
            Some(m) if m > n => Err(domain(format!("m = {m} exceeds n = {n}"))),
            _ => Ok(()),
        }
    }

    /// Generating-function symbol used in tables.
    pub fn symbol(self) -> &'static str {
        match self {
            CountKind::Functions => "G",
            CountKind::PrimeFunctions => "P",
            CountKind::Distributions => "G~",
            CountKind::PrimeDistributions => "P~",
            CountKind::GeneralFunctions(_) => "F",
            CountKind::GeneralDistributions(_) => "F~",
        }
    }
}

impl fmt::Display for CountKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountKind::Functions => write!(f, "functions"),
            CountKind::PrimeFunctions => write!(f, "prime-functions"),
            CountKind::Distributions => write!(f, "distributions"),
            CountKind::PrimeDistributions => write!(f, "prime-distributions"),
            CountKind::GeneralFunctions(m) => write!(f, "general-functions:{m}"),
            CountKind::GeneralDistributions(m) => write!(f, "general-distributions:{m}"),
        }
    }
}

impl FromStr for CountKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (head, m) = match s.split_once(':') {
            Some((h, m)) => (
                h.to_string(),
                Some(
                    m.parse::<usize>()
                        .map_err(|_| domain(format!("bad m in {s:?}")))?,
                ),
            ),
            None => (s.clone(), None),
        };
        Ok(match (head.as_str(), m) {
            ("functions" | "g", None) => CountKind::Functions,
            ("prime-functions" | "p", None) => CountKind::PrimeFunctions,
            ("distributions" | "g~", None) => CountKind::Distributions,
            ("prime-distributions" | "p~", None) => CountKind::PrimeDistributions,
            ("general-functions" | "f", Some(m)) => CountKind::GeneralFunctions(m),
            ("general-distributions" | "f~", Some(m)) => CountKind::GeneralDistributions(m),
            _ => return Err(domain(format!("unknown kind {s:?}"))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in [
            CountKind::Functions,
            CountKind::PrimeFunctions,
            CountKind::Distributions,
            CountKind::PrimeDistributions,
            CountKind::GeneralFunctions(2),
            CountKind::GeneralDistributions(0),
        ] {
            assert_eq!(k.to_string().parse::<CountKind>().unwrap(), k);
        }
        assert!("general-functions".parse::<CountKind>().is_err());
        assert!(CountKind::GeneralFunctions(4).check(3).is_err());
    }
}
