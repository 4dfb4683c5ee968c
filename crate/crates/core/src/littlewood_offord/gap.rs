//! Generalized arithmetic progressions.
//!
//! A rank-`d` progression is the set `{ a0 + x_1 g_1 + .. + x_d g_d }` with
//! integer coefficients `x_i` ranging over boxes `[lower_i, upper_i]`. These
//! are the structured sets that explain abnormally large concentration of
//! signed sums: coefficient vectors drawn from a small progression produce
//! sums that collide far more often than generic vectors do.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rng::trial_rng;
use crate::Result;

/// Cap on the enumerable volume of a progression.
pub const GAP_VOLUME_CAP: u128 = 10_000_000;

/// Generalized arithmetic progression of rank `generators.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub a0: i64,
    pub generators: Vec<i64>,
    pub lower: Vec<i64>,
    pub upper: Vec<i64>,
}

impl Gap {
    pub fn new(a0: i64, generators: Vec<i64>, lower: Vec<i64>, upper: Vec<i64>) -> Result<Self> {
        let gap = Gap {
            a0,
            generators,
            lower,
            upper,
        };
        gap.validate()?;
        Ok(gap)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.generators.len() != self.lower.len() || self.generators.len() != self.upper.len() {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "gap rank mismatch: {} generators, {} lower bounds, {} upper bounds",
                    self.generators.len(),
                    self.lower.len(),
                    self.upper.len()
                ),
            });
        }
        for (lo, hi) in self.lower.iter().zip(&self.upper) {
            if lo > hi {
                return Err(Error::InvalidParameter(format!(
                    "gap coefficient box [{lo}, {hi}] is empty"
                )));
            }
        }
        Ok(())
    }

    /// Number of coefficient tuples, `prod(upper_i - lower_i + 1)`. The
    /// empty product makes a rank-0 progression have volume 1.
    pub fn volume(&self) -> Result<u128> {
        self.validate()?;
        let mut vol: u128 = 1;
        for (lo, hi) in self.lower.iter().zip(&self.upper) {
            let width = (*hi as i128 - *lo as i128 + 1) as u128;
            vol = vol
                .checked_mul(width)
                .ok_or(Error::BudgetExceeded {
                    what: "gap volume",
                    needed: u128::MAX,
                    cap: GAP_VOLUME_CAP,
                })?;
        }
        Ok(vol)
    }

    /// The distinct values of the progression, sorted ascending. Errors if
    /// the volume exceeds [`GAP_VOLUME_CAP`].
    pub fn elements(&self) -> Result<Vec<i64>> {
        let vol = self.volume()?;
        if vol > GAP_VOLUME_CAP {
            return Err(Error::BudgetExceeded {
                what: "gap enumeration",
                needed: vol,
                cap: GAP_VOLUME_CAP,
            });
        }
        let d = self.rank();
        let mut coeff: Vec<i64> = self.lower.clone();
        let mut out = Vec::with_capacity(vol as usize);
        loop {
            let mut value = self.a0 as i128;
            for (x, g) in coeff.iter().zip(&self.generators) {
                value += *x as i128 * *g as i128;
            }
            let value = i64::try_from(value).map_err(|_| {
                Error::InvalidParameter("gap element exceeds i64".to_string())
            })?;
            out.push(value);
            // Odometer increment over the coefficient box.
            let mut k = 0;
            loop {
                if k == d {
                    out.sort_unstable();
                    out.dedup();
                    return Ok(out);
                }
                if coeff[k] < self.upper[k] {
                    coeff[k] += 1;
                    break;
                }
                coeff[k] = self.lower[k];
                k += 1;
            }
        }
    }

    /// True when every coefficient tuple yields a distinct value.
    pub fn is_proper(&self) -> Result<bool> {
        let vol = self.volume()?;
        Ok(self.elements()?.len() as u128 == vol)
    }
}

/// Coefficient vector of length `n` drawn uniformly with replacement from
/// the progression's distinct elements, using the (seed, trial) stream.
pub fn gap_sample_vector(gap: &Gap, n: usize, seed: u64, trial: u64) -> Result<Vec<i64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample length must be positive".into()));
    }
    let elements = gap.elements()?;
    let mut rng = trial_rng(seed, trial);
    Ok((0..n)
        .map(|_| elements[rng.gen_range(0..elements.len())])
        .collect())
}

/// Collision lower bound on the concentration probability of a signed sum
/// whose coefficients all lie in `gap`: `1 / (n^(d/2) * volume)`, where `d`
/// is the rank. For a rank-0 progression this is 1.
pub fn pigeonhole_lower_bound(gap: &Gap, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let vol = gap.volume()? as f64;
    let d = gap.rank() as f64;
    Ok(1.0 / ((n as f64).powf(d / 2.0) * vol))
}
