//! Exact dyadic rationals.
//!
//! Probabilities of events over `n` independent signs are rationals with
//! denominator `2^n`. Keeping them as `numerator / 2^k` makes equality and
//! comparison exact, which the concentration tests rely on.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Nonnegative dyadic rational `numerator / 2^log2_denominator`, stored in
/// normalized form (numerator odd, or zero with denominator 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dyadic {
    numerator: u128,
    log2_denominator: u32,
}

impl Dyadic {
    /// `numerator / 2^log2_denominator`, normalized.
    pub fn new(numerator: u128, log2_denominator: u32) -> Self {
        let mut d = Dyadic {
            numerator,
            log2_denominator,
        };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic {
            numerator: 0,
            log2_denominator: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            numerator: 1,
            log2_denominator: 0,
        }
    }

    pub fn numerator(&self) -> u128 {
        self.numerator
    }

    pub fn log2_denominator(&self) -> u32 {
        self.log2_denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator == 0
    }

    fn normalize(&mut self) {
        if self.numerator == 0 {
            self.log2_denominator = 0;
            return;
        }
        while self.numerator.is_multiple_of(2) && self.log2_denominator > 0 {
            self.numerator /= 2;
            self.log2_denominator -= 1;
        }
    }

    /// Exact sum. Panics if the common numerator overflows `u128`; with
    /// probabilities over at most 64 signs this cannot happen.
    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let k = self.log2_denominator.max(other.log2_denominator);
        let a = self
            .numerator
            .checked_shl(k - self.log2_denominator)
            .expect("dyadic add overflow");
        let b = other
            .numerator
            .checked_shl(k - other.log2_denominator)
            .expect("dyadic add overflow");
        Dyadic::new(a.checked_add(b).expect("dyadic add overflow"), k)
    }

    /// Exact product of two dyadics. Panics on numerator overflow.
    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(
            self.numerator
                .checked_mul(other.numerator)
                .expect("dyadic mul overflow"),
            self.log2_denominator + other.log2_denominator,
        )
    }

    /// Nearest `f64` (exact while the numerator fits in 53 bits).
    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / 2f64.powi(self.log2_denominator as i32)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        // Normalized numerators are odd (or zero), so the shifted compare
        // stays within u128 for every value arising from at most 64 signs.
        let k = self.log2_denominator.max(other.log2_denominator);
        let a = self
            .numerator
            .checked_shl(k - self.log2_denominator)
            .expect("dyadic compare overflow");
        let b = other
            .numerator
            .checked_shl(k - other.log2_denominator)
            .expect("dyadic compare overflow");
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.log2_denominator == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.log2_denominator)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_cancels_twos() {
        assert_eq!(Dyadic::new(4, 3), Dyadic::new(1, 1));
        assert_eq!(Dyadic::new(6, 4), Dyadic::new(3, 3));
        assert_eq!(Dyadic::new(0, 9), Dyadic::zero());
    }

    #[test]
    fn addition_is_exact() {
        // 1/2 + 1/4 + 1/4 = 1
        let sum = Dyadic::new(1, 1).add(&Dyadic::new(1, 2)).add(&Dyadic::new(1, 2));
        assert_eq!(sum, Dyadic::one());
        // 3/8 + 5/16 = 11/16
        assert_eq!(Dyadic::new(3, 3).add(&Dyadic::new(5, 4)), Dyadic::new(11, 4));
    }

    #[test]
    fn ordering_matches_rationals() {
        assert!(Dyadic::new(1, 2) < Dyadic::new(1, 1));
        assert!(Dyadic::new(3, 3) > Dyadic::new(5, 4));
        assert_eq!(Dyadic::new(2, 2).cmp(&Dyadic::new(1, 1)), Ordering::Equal);
    }

    #[test]
    fn multiplication_is_exact() {
        // (3/4) * (1/2) = 3/8
        assert_eq!(Dyadic::new(3, 2).mul(&Dyadic::new(1, 1)), Dyadic::new(3, 3));
    }

    #[test]
    fn f64_conversion_of_small_values_is_exact() {
        assert_eq!(Dyadic::new(3, 2).to_f64(), 0.75);
        assert_eq!(Dyadic::new(1, 20).to_f64(), 2f64.powi(-20));
    }
}
