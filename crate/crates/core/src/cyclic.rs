//! Conjugacy-class keys.
//!
//! In a free product two cyclically reduced words are conjugate exactly when
//! one is a rotation of the other, so the lexicographically least rotation
//! (under the syllable order) is a complete class invariant.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::params::{exponent_key, GroupParams};
use crate::word::{Syllable, Word};

/// A cyclically reduced word in its canonical rotation.
///
/// With two or more syllables the canonical rotation always starts with
/// `i`, so the word is `i g^k1 i g^k2 ... i g^kn` and is determined by its
/// block exponents `(k1, ..., kn)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicWord {
    params: GroupParams,
    syllables: Vec<Syllable>,
    blocks: Vec<i64>,
}

impl CyclicWord {
    /// Canonical rotation of an already cyclically reduced syllable
    /// sequence; also returns the left-rotation amount applied.
    pub(crate) fn canonicalize(params: GroupParams, core: &[Syllable]) -> (CyclicWord, usize) {
        if core.len() <= 1 {
            let cw = CyclicWord { params, syllables: core.to_vec(), blocks: Vec::new() };
            return (cw, 0);
        }
        debug_assert!(core.len() % 2 == 0);
        let base = usize::from(!core[0].is_iota());
        let blocks: Vec<i64> = (0..core.len() / 2)
            .map(|i| match core[(base + 2 * i + 1) % core.len()] {
                Syllable::Gamma(k) => k,
                Syllable::Iota => unreachable!("syllables alternate"),
            })
            .collect();
        let t = least_rotation_by(&blocks, |&k| exponent_key(k));
        let mut rotated = blocks[t..].to_vec();
        rotated.extend_from_slice(&blocks[..t]);
        let shift = base + 2 * t;
        (Self::from_canonical_blocks(params, rotated), shift)
    }

    /// Wraps block exponents already known to be canonical, nonzero and in
    /// least rotation.
    pub(crate) fn from_canonical_blocks(params: GroupParams, blocks: Vec<i64>) -> CyclicWord {
        let syllables = blocks
            .iter()
            .flat_map(|&k| [Syllable::Iota, Syllable::Gamma(k)])
            .collect();
        CyclicWord { params, syllables, blocks }
    }

    /// Class key of `i g^k1 ... i g^kn`; exponents may be arbitrary.
    pub fn from_blocks(params: GroupParams, blocks: &[i64]) -> CyclicWord {
        Word::from_blocks(params, blocks).class_key()
    }

    #[inline]
    pub fn params(&self) -> GroupParams {
        self.params
    }

    #[inline]
    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    /// Block exponents; empty for torsion classes.
    #[inline]
    pub fn blocks(&self) -> &[i64] {
        &self.blocks
    }

    /// Number of blocks `n`; the word has `2n` syllables.
    #[inline]
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// At most one syllable: the class has finite order.
    pub fn is_torsion(&self) -> bool {
        self.syllables.len() <= 1
    }

    pub fn word_length(&self) -> u64 {
        self.syllables.iter().map(|s| s.length()).sum()
    }

    pub fn to_word(&self) -> Word {
        Word::from_reduced(self.params, self.syllables.clone())
    }

    /// Key of the inverse class.
    pub fn inverse(&self) -> CyclicWord {
        self.to_word().inverse().class_key()
    }

    /// Splits the class as `root^m` with `root` primitive, using the
    /// smallest rotation period of the block necklace.
    pub fn primitive_decomposition(&self) -> Result<(CyclicWord, usize)> {
        if self.is_torsion() {
            return Err(Error::Torsion);
        }
        let n = self.blocks.len();
        let period = (1..=n)
            .find(|&d| n % d == 0 && (0..n).all(|i| self.blocks[i] == self.blocks[(i + d) % n]))
            .unwrap_or(n);
        let root = Self::from_canonical_blocks(self.params, self.blocks[..period].to_vec());
        Ok((root, n / period))
    }
}

impl PartialOrd for CyclicWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CyclicWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.params
            .p()
            .cmp(&other.params.p())
            .then_with(|| self.syllables.cmp(&other.syllables))
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_word().fmt(f)
    }
}

/// Index of the lexicographically least rotation (smallest such index).
pub fn least_rotation_by<T, K: Ord>(s: &[T], key: impl Fn(&T) -> K) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        match key(&s[(i + k) % n]).cmp(&key(&s[(j + k) % n])) {
            Ordering::Equal => {
                k += 1;
                continue;
            }
            Ordering::Greater => i += k + 1,
            Ordering::Less => j += k + 1,
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// True when `keys` is its own least rotation.
pub fn is_necklace(keys: &[u64]) -> bool {
    let n = keys.len();
    let mut period = 1;
    for i in 1..n {
        match keys[i].cmp(&keys[i - period]) {
            Ordering::Less => return false,
            Ordering::Greater => period = i + 1,
            Ordering::Equal => {}
        }
    }
    n == 0 || n % period == 0
}
