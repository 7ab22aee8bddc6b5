//! Reduced words in the free product `Z2 * Zp`.
//!
//! A word is a sequence of syllables alternating between `i` and `g^k`, with
//! every exponent stored in the canonical range `(-p/2, p/2]`. The empty
//! word is the identity.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::cyclic::CyclicWord;
use crate::error::{Error as HeckeError, Result};
use crate::params::{exponent_key, GroupParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Syllable {
    /// The involution `i`.
    Iota,
    /// `g^k` for a nonzero canonical `k`.
    Gamma(i64),
}

impl Syllable {
    /// Position in the total order `i < g < g^-1 < g^2 < ... < g^r`.
    #[inline]
    pub fn key(self) -> u64 {
        match self {
            Syllable::Iota => 0,
            Syllable::Gamma(k) => exponent_key(k),
        }
    }

    #[inline]
    pub fn is_iota(self) -> bool {
        matches!(self, Syllable::Iota)
    }

    /// Contribution to word length: 1 for `i`, `|k|` for `g^k`.
    #[inline]
    pub fn length(self) -> u64 {
        match self {
            Syllable::Iota => 1,
            Syllable::Gamma(k) => k.unsigned_abs(),
        }
    }

    #[inline]
    fn same_kind(self, other: Syllable) -> bool {
        self.is_iota() == other.is_iota()
    }
}

impl PartialOrd for Syllable {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Syllable {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Syllable::Iota => f.write_str("i"),
            Syllable::Gamma(1) => f.write_str("g"),
            Syllable::Gamma(k) => write!(f, "g^{k}"),
        }
    }
}

/// Which conjugacy class of involutions an element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InvolutionType {
    /// Conjugate to `i`.
    IotaType,
    /// Conjugate to `g^r` (even `p` only).
    TildeGammaType,
    NotInvolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementOrder {
    Finite(u64),
    Infinite,
}

/// A fully reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    params: GroupParams,
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity(params: GroupParams) -> Self {
        Word { params, syllables: Vec::new() }
    }

    pub fn iota(params: GroupParams) -> Self {
        Word { params, syllables: vec![Syllable::Iota] }
    }

    pub fn gamma(params: GroupParams, k: i64) -> Self {
        Self::reduce(params, [Syllable::Gamma(k)])
    }

    /// Freely reduces an arbitrary syllable sequence. Exponents may be any
    /// integers; `g^0` syllables vanish.
    pub fn reduce<I>(params: GroupParams, seq: I) -> Self
    where
        I: IntoIterator<Item = Syllable>,
    {
        let mut out: Vec<Syllable> = Vec::new();
        for s in seq {
            let s = match s {
                Syllable::Iota => Syllable::Iota,
                Syllable::Gamma(k) => match params.canonical_exponent(k) {
                    0 => continue,
                    k => Syllable::Gamma(k),
                },
            };
            match (out.last().copied(), s) {
                (Some(Syllable::Iota), Syllable::Iota) => {
                    out.pop();
                }
                (Some(Syllable::Gamma(a)), Syllable::Gamma(b)) => {
                    out.pop();
                    // a + b cannot overflow: both are canonical.
                    let c = params.canonical_exponent(a + b);
                    if c != 0 {
                        out.push(Syllable::Gamma(c));
                    }
                }
                _ => out.push(s),
            }
        }
        Word { params, syllables: out }
    }

    /// Builds `i g^k1 i g^k2 ... i g^kn` from block exponents.
    pub fn from_blocks(params: GroupParams, blocks: &[i64]) -> Self {
        Self::reduce(
            params,
            blocks.iter().flat_map(|&k| [Syllable::Iota, Syllable::Gamma(k)]),
        )
    }

    pub(crate) fn from_reduced(params: GroupParams, syllables: Vec<Syllable>) -> Self {
        debug_assert!(syllables.windows(2).all(|w| !w[0].same_kind(w[1])));
        Word { params, syllables }
    }

    #[inline]
    pub fn params(&self) -> GroupParams {
        self.params
    }

    #[inline]
    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn word_length(&self) -> u64 {
        self.syllables.iter().map(|s| s.length()).sum()
    }

    fn check_params(&self, other: &Word) -> Result<()> {
        if self.params != other.params {
            return Err(HeckeError::MixedParams(self.params.p(), other.params.p()));
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.check_params(other)?;
        Ok(Self::reduce(
            self.params,
            self.syllables.iter().chain(other.syllables.iter()).copied(),
        ))
    }

    pub fn inverse(&self) -> Word {
        let params = self.params;
        let syllables = self
            .syllables
            .iter()
            .rev()
            .map(|&s| match s {
                Syllable::Iota => Syllable::Iota,
                Syllable::Gamma(k) => Syllable::Gamma(params.canonical_exponent(-k)),
            })
            .collect();
        Word { params, syllables }
    }

    /// `h * self * h^-1`.
    pub fn conjugate_by(&self, h: &Word) -> Result<Word> {
        h.multiply(self)?.multiply(&h.inverse())
    }

    pub fn pow(&self, n: u32) -> Word {
        let mut acc = Word::identity(self.params);
        for _ in 0..n {
            acc = Self::reduce(
                self.params,
                acc.syllables.iter().chain(self.syllables.iter()).copied(),
            );
        }
        acc
    }

    /// Strips matching ends until the word is cyclically reduced.
    ///
    /// Returns the cyclically reduced syllables `c` and a conjugator `h`
    /// with `self = h c h^-1`.
    pub fn cyclically_reduced_parts(&self) -> (Vec<Syllable>, Word) {
        let mut s = self.syllables.clone();
        let mut lo = 0;
        let mut hi = s.len();
        let mut conj = Vec::new();
        while hi - lo >= 2 && s[lo].same_kind(s[hi - 1]) {
            match (s[lo], s[hi - 1]) {
                (Syllable::Gamma(a), Syllable::Gamma(b)) => {
                    conj.push(Syllable::Gamma(a));
                    lo += 1;
                    match self.params.canonical_exponent(a + b) {
                        0 => hi -= 1,
                        c => s[hi - 1] = Syllable::Gamma(c),
                    }
                }
                _ => {
                    conj.push(Syllable::Iota);
                    lo += 1;
                    hi -= 1;
                }
            }
        }
        (s[lo..hi].to_vec(), Word::reduce(self.params, conj))
    }

    /// Cyclic reduction: `(c, h)` with `self = h c h^-1` and `c` of minimal
    /// length in the class. `c` is returned in canonical rotation, and `h`
    /// accounts for that rotation.
    pub fn cyclic_reduce(&self) -> (CyclicWord, Word) {
        let (core, h) = self.cyclically_reduced_parts();
        let (key, shift) = CyclicWord::canonicalize(self.params, &core);
        // Rotating `core` left by `shift` is conjugation by the inverse of
        // its first `shift` syllables.
        let prefix = Word::from_reduced(self.params, core[..shift].to_vec());
        let h = h.multiply(&prefix).expect("same params");
        (key, h)
    }

    /// Conjugacy class key.
    pub fn class_key(&self) -> CyclicWord {
        let (core, _) = self.cyclically_reduced_parts();
        CyclicWord::canonicalize(self.params, &core).0
    }

    pub fn element_order(&self) -> ElementOrder {
        let (core, _) = self.cyclically_reduced_parts();
        match core.as_slice() {
            [] => ElementOrder::Finite(1),
            [Syllable::Iota] => ElementOrder::Finite(2),
            [Syllable::Gamma(k)] => {
                let p = u64::from(self.params.p());
                ElementOrder::Finite(p / p.gcd(&k.unsigned_abs()))
            }
            _ => ElementOrder::Infinite,
        }
    }

    pub fn involution_type(&self) -> InvolutionType {
        let (core, _) = self.cyclically_reduced_parts();
        match core.as_slice() {
            [Syllable::Iota] => InvolutionType::IotaType,
            [Syllable::Gamma(k)] if self.params.r() == Some(k.unsigned_abs() as u32) => {
                InvolutionType::TildeGammaType
            }
            _ => InvolutionType::NotInvolution,
        }
    }

    /// Parses the plain-text word syntax (`i`, `g`, `g^k`, `1`), with tokens
    /// separated by whitespace, `*`, or nothing at all. The result is reduced.
    pub fn parse(params: GroupParams, text: &str) -> std::result::Result<Word, ParseError> {
        Ok(Self::reduce(params, parse_syllables(text)?))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

fn parse_error(position: usize, message: impl Into<String>) -> ParseError {
    ParseError { position, message: message.into() }
}

/// Tokenizes word syntax into raw, unreduced syllables.
pub fn parse_syllables(text: &str) -> std::result::Result<Vec<Syllable>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        match bytes[pos] {
            b' ' | b'\t' | b'\n' | b'\r' | b'*' => pos += 1,
            b'1' => pos += 1,
            b'i' => {
                out.push(Syllable::Iota);
                pos += 1;
            }
            b'g' => {
                pos += 1;
                if bytes.get(pos) != Some(&b'^') {
                    out.push(Syllable::Gamma(1));
                    continue;
                }
                pos += 1;
                let start = pos;
                if matches!(bytes.get(pos), Some(b'-') | Some(b'+')) {
                    pos += 1;
                }
                let digits = pos;
                while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
                    pos += 1;
                }
                if pos == digits {
                    return Err(parse_error(pos, "expected exponent digits after '^'"));
                }
                let k: i64 = text[start..pos]
                    .parse()
                    .map_err(|_| parse_error(start, "exponent out of range"))?;
                out.push(Syllable::Gamma(k));
            }
            _ => {
                let ch = text[pos..].chars().next().unwrap_or('?');
                return Err(parse_error(pos, format!("unexpected character {ch:?}")));
            }
        }
    }
    Ok(out)
}
