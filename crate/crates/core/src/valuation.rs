//! Discrete valuations with a genuine top element for the valuation of zero.

use core::cmp::Ordering;
use core::fmt;
use core::ops::Add;

/// Value of a discrete valuation: an integer, or `Infinite` exactly for zero.
///
/// `Infinite` is ordered above every finite value so the ultrametric
/// inequality can be stated without special cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(&self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::Infinite => None,
        }
    }

    /// Finite value, panicking on `Infinite`.
    pub fn expect_finite(&self) -> i64 {
        self.finite().expect("valuation is infinite")
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl From<i64> for Valuation {
    fn from(v: i64) -> Self {
        Valuation::Finite(v)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_is_top() {
        assert!(Valuation::Infinite > Valuation::Finite(i64::MAX));
        assert_eq!(Valuation::Infinite, Valuation::Infinite);
        assert!(Valuation::Finite(-3) < Valuation::Finite(0));
    }

    #[test]
    fn addition_absorbs_infinity() {
        assert_eq!(
            Valuation::Finite(2) + Valuation::Finite(3),
            Valuation::Finite(5)
        );
        assert_eq!(
            Valuation::Infinite + Valuation::Finite(1),
            Valuation::Infinite
        );
    }
}
