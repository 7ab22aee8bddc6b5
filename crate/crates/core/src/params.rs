//! Group parameters for the Hecke group `Z2 * Zp = <i, g | i^2, g^p>`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of one Hecke group.
///
/// For even `p = 2r` the element `g^r` is an involution (written `g~` in
/// comments); `r` and `u = floor(r / 2)` are only defined in that case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupParams {
    p: u32,
}

impl GroupParams {
    pub fn new(p: i64) -> Result<Self> {
        if !(3..=i64::from(u32::MAX / 2)).contains(&p) {
            return Err(Error::InvalidOrder(p));
        }
        Ok(GroupParams { p: p as u32 })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn is_even(&self) -> bool {
        self.p % 2 == 0
    }

    /// `r = p / 2`, present only for even `p`.
    pub fn r(&self) -> Option<u32> {
        self.is_even().then_some(self.p / 2)
    }

    /// Parity witness with `r = 2u` or `r = 2u + 1`.
    pub fn u(&self) -> Option<u32> {
        self.r().map(|r| r / 2)
    }

    /// `r`, or an error for odd `p`.
    pub fn require_r(&self) -> Result<u32> {
        self.r().ok_or(Error::OddOrder(self.p))
    }

    /// `2 cos(pi / p)`. Informational; nothing in the crate computes with it.
    pub fn lambda(&self) -> f64 {
        2.0 * (std::f64::consts::PI / f64::from(self.p)).cos()
    }

    /// Largest absolute value of a canonical exponent.
    #[inline]
    pub fn max_abs_exponent(&self) -> i64 {
        i64::from(self.p / 2)
    }

    /// Reduces `k` modulo `p` into `(-p/2, p/2]`. Zero means the trivial syllable.
    #[inline]
    pub fn canonical_exponent(&self, k: i64) -> i64 {
        let p = i64::from(self.p);
        let m = k.rem_euclid(p);
        if 2 * m > p {
            m - p
        } else {
            m
        }
    }

    /// Nonzero canonical exponents in syllable order: `1, -1, 2, -2, ...`,
    /// ending in `r` alone when `p` is even.
    pub fn exponent_alphabet(&self) -> Vec<i64> {
        let half = self.max_abs_exponent();
        let mut out = Vec::with_capacity(self.p as usize - 1);
        for a in 1..=half {
            out.push(a);
            if !(self.is_even() && a == half) {
                out.push(-a);
            }
        }
        out
    }
}

/// Sort key realising the syllable order `i < g < g^-1 < g^2 < g^-2 < ...`.
/// `0` is reserved for `i`.
#[inline]
pub(crate) fn exponent_key(k: i64) -> u64 {
    let a = k.unsigned_abs();
    if k > 0 {
        2 * a - 1
    } else {
        2 * a
    }
}
