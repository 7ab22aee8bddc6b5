//! Closed-form class counts and the recurrence they obey.
//!
//! Every published expression is kept executable as written
//! ([`Mode::Verbatim`]). Where index bounds demonstrably disagree with a
//! direct count, [`Mode::Corrected`] applies the mechanical fix. Both modes
//! are compared against the census in the claims ledger.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::GroupParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Verbatim,
    Corrected,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Verbatim => "verbatim",
            Mode::Corrected => "corrected",
        }
    }
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Number of compositions of `x` into `n` positive parts, `C(x-1, n-1)`.
/// The empty composition gives `compositions(0, 0) = 1`.
pub fn compositions(n: u64, x: u64) -> BigUint {
    if n == 0 {
        return if x == 0 { BigUint::one() } else { BigUint::zero() };
    }
    binomial(x as i64 - 1, n as i64 - 1)
}

/// Compositions of `x` into `n` parts, each in `1..=r`, by dynamic programming.
pub fn bounded_compositions(n: u64, r: u64, x: u64) -> BigUint {
    if x < n || x > n.saturating_mul(r) {
        return if n == 0 && x == 0 { BigUint::one() } else { BigUint::zero() };
    }
    let x = x as usize;
    let mut row = vec![BigUint::zero(); x + 1];
    row[0] = BigUint::one();
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); x + 1];
        // Sliding window: next[s] = row[s-1] + ... + row[s-r].
        let mut window = BigUint::zero();
        for s in 1..=x {
            window += &row[s - 1];
            if s > r as usize {
                window -= &row[s - 1 - r as usize];
            }
            next[s] = window.clone();
        }
        row = next;
    }
    row.swap_remove(x)
}

/// The same count by inclusion-exclusion:
/// `sum_j (-1)^j C(n, j) C(x - j r - 1, n - 1)`.
pub fn bounded_compositions_inclusion_exclusion(n: u64, r: u64, x: u64) -> BigUint {
    if n == 0 {
        return if x == 0 { BigUint::one() } else { BigUint::zero() };
    }
    let (n, r, x) = (n as i64, r as i64, x as i64);
    let mut acc = BigInt::zero();
    for j in 0..=n {
        let term = BigInt::from(binomial(n, j) * binomial(x - j * r - 1, n - 1));
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_biguint().expect("inclusion-exclusion count is nonnegative")
}

/// Direct count of tuples `(n; k1..kn)`, `n > 0`, `-r < ki <= r`, `ki != 0`,
/// with `sum |ki| + n = x`.
pub fn signed_syllable_count(x: u64, r: u64) -> BigUint {
    if x == 0 || r == 0 {
        return BigUint::zero();
    }
    let x = x as usize;
    let r = r as usize;
    // f[y]: tuples (possibly empty) of total weight y; a part with |k| = a
    // weighs a + 1 and has 2 sign choices unless a = r.
    let mut f = vec![BigUint::zero(); x + 1];
    f[0] = BigUint::one();
    for y in 1..=x {
        let mut acc = BigUint::zero();
        for a in 1..=r {
            if a + 1 > y {
                break;
            }
            let mult: u32 = if a == r { 1 } else { 2 };
            acc += &f[y - a - 1] * mult;
        }
        f[y] = acc;
    }
    f.swap_remove(x)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    Integer::div_ceil(&a, &b)
}

fn floor_div(a: i64, b: i64) -> i64 {
    Integer::div_floor(&a, &b)
}

/// `Psi_m^{r-1}(y) * 2^(n-q) * C(n, q)`, zero whenever an argument leaves
/// its domain.
fn sum_term(parts: i64, r: i64, y: i64, n: i64, q: i64) -> BigUint {
    if parts < 0 || y < 0 || n < 0 || q < 0 || q > n {
        return BigUint::zero();
    }
    let psi = bounded_compositions(parts as u64, (r - 1) as u64, y as u64);
    if psi.is_zero() {
        return psi;
    }
    psi * (BigUint::one() << (n - q) as u64) * binomial(n, q)
}

/// Double sum over `q` (count of parts equal to `r`) and `n` (number of
/// parts) counting signed-syllable tuples of total `x`.
///
/// Verbatim: `q <= ceil(x/(r+1)) - 1`, inner count `Psi_n^{r-1}`.
/// Corrected: `q <= floor(x/(r+1))`, inner count `Psi_{n-q}^{r-1}`, which
/// agrees with [`signed_syllable_count`].
pub fn signed_syllable_sum(x: i64, r: u64, mode: Mode) -> BigUint {
    let r = r as i64;
    let q_max = match mode {
        Mode::Verbatim => ceil_div(x, r + 1) - 1,
        Mode::Corrected => floor_div(x, r + 1),
    };
    let mut acc = BigUint::zero();
    for q in 0..=q_max {
        let lo = ceil_div(x - q, r);
        let hi = floor_div(x - (r - 1) * q, 2);
        for n in lo.max(0)..=hi {
            let parts = match mode {
                Mode::Verbatim => n,
                Mode::Corrected => n - q,
            };
            acc += sum_term(parts, r, x - n - r * q, n, q);
        }
    }
    acc
}

/// `num / den` when exact, otherwise [`Error::NonIntegral`].
pub fn exact_div(num: BigInt, den: u32) -> Result<BigInt> {
    let (q, rem) = num.div_rem(&BigInt::from(den));
    if rem.is_zero() {
        Ok(q)
    } else {
        Err(Error::NonIntegral { numerator: num, denominator: den })
    }
}

fn even_r(params: &GroupParams) -> Result<i64> {
    Ok(i64::from(params.require_r()?))
}

/// Symmetric classes of word length `2l`: half the signed-syllable sum at `l`.
pub fn symmetric_count(l: u64, params: &GroupParams, mode: Mode) -> Result<BigInt> {
    let r = even_r(params)?;
    exact_div(signed_syllable_sum(l as i64, r as u64, mode).into(), 2)
}

/// `p`-reciprocal classes of word length `2l`.
pub fn p_reciprocal_count(l: u64, params: &GroupParams, mode: Mode) -> Result<BigInt> {
    let r = even_r(params)?;
    let l = l as i64;
    let total = match mode {
        Mode::Verbatim => {
            let mut acc = BigUint::zero();
            for q in 0..=ceil_div(l, r + 1) - 2 {
                let lo = ceil_div(l - (r + 1) - q, r);
                let hi = floor_div(l - 1 - (r + 1) * q - r, 2);
                for n in lo.max(0)..=hi {
                    acc += sum_term(n, r, l - (n + 1) - (q + 1) * r, n, q);
                }
            }
            acc
        }
        // Blocks (r, k1..kn, r, -kn..-k1) with n >= 1.
        Mode::Corrected if l - r - 1 >= 1 => signed_syllable_sum(l - r - 1, r as u64, mode),
        Mode::Corrected => BigUint::zero(),
    };
    exact_div(total.into(), 2)
}

/// Symmetric `p`-reciprocal classes of the given word length, including
/// the class `(i g^r)^m` when `word_len = m (r + 1)`.
///
/// The closed form addresses odd word lengths `2l + 1` when `r` is even and
/// even lengths `2l` when `r` is odd; other lengths are not applicable.
pub fn symmetric_p_count(word_len: u64, params: &GroupParams, mode: Mode) -> Result<BigInt> {
    let r = even_r(params)?;
    let u = r / 2;
    let len = word_len as i64;
    let r_even = r % 2 == 0;
    if (len % 2 == 1) != r_even {
        return Err(Error::NotApplicable(format!(
            "word length {word_len} has the wrong parity for r = {r}"
        )));
    }
    let l = len / 2;
    let x = match mode {
        Mode::Verbatim => l - u,
        Mode::Corrected => (len - r - 1) / 2,
    };
    let sum = match mode {
        Mode::Corrected if x < 1 => BigUint::zero(),
        _ => signed_syllable_sum(x, r as u64, mode),
    };
    let power = u32::from(len % (r + 1) == 0);
    Ok(exact_div(sum.into(), 2)? + power)
}

/// `(2^e + 2 (-1)^e)`, the numerator shared by the small-length closed forms.
fn jacobsthal_numerator(e: i64) -> BigInt {
    let sign = if e % 2 == 0 { 2 } else { -2 };
    (BigInt::one() << e as u64) + sign
}

/// Which branch of the piecewise count applies at half-length `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Small,
    Boundary,
    Recurrence,
}

pub fn even_branch(l: u64, r: u64) -> Branch {
    match l.cmp(&(r + 1)) {
        std::cmp::Ordering::Less => Branch::Small,
        std::cmp::Ordering::Equal => Branch::Boundary,
        std::cmp::Ordering::Greater => Branch::Recurrence,
    }
}

pub fn odd_branch(l: u64, r: u64) -> Branch {
    let u = r / 2;
    match l.cmp(&(r + u + 2)) {
        std::cmp::Ordering::Less => Branch::Small,
        std::cmp::Ordering::Equal => Branch::Boundary,
        std::cmp::Ordering::Greater => Branch::Recurrence,
    }
}

/// Total reciprocal classes of word length `2l` for odd `r`, evaluated
/// purely from the piecewise closed forms: `(2^l + 2(-1)^l)/6` for
/// `l <= r`, the boundary correction at `l = r + 1`, and the recurrence on
/// earlier values beyond.
pub fn total_count_even(l: u64, params: &GroupParams) -> Result<BigInt> {
    let r = even_r(params)? as u64;
    if r % 2 == 0 {
        return Err(Error::NotApplicable(format!("even-length closed form needs odd r, got r = {r}")));
    }
    if l == 0 {
        return Err(Error::NotApplicable("l must be positive".into()));
    }
    let u = (r / 2) as i64;
    match even_branch(l, r) {
        Branch::Small => exact_div(jacobsthal_numerator(l as i64), 6),
        Branch::Boundary => {
            let num = jacobsthal_numerator(l as i64) + jacobsthal_numerator(u + 1) - 6;
            exact_div(num, 6)
        }
        Branch::Recurrence => {
            let mut seq = Vec::with_capacity(l as usize);
            for i in 1..=(r + 1) {
                seq.push(total_count_even(i, params)?);
            }
            // seq[i - 1] holds the value at index i.
            while (seq.len() as u64) < l {
                let next = recurrence_next(&seq, r as usize);
                seq.push(next);
            }
            Ok(seq.pop().expect("nonempty"))
        }
    }
}

/// Total reciprocal classes of odd word length `2l - 1` for even `r`.
///
/// The recurrence branch is stated through even-length totals:
/// `|N(2l-1)| = |N(2(l-u-1))| = 2 sum_j |N(2(l-u-j-2))| + |N(2(l-u-r-2))|`;
/// `even_total(m)` must supply `|N(2m)|`.
pub fn total_count_odd(
    l: u64,
    params: &GroupParams,
    even_total: impl Fn(u64) -> Option<BigInt>,
) -> Result<BigInt> {
    let r = even_r(params)? as u64;
    if r % 2 == 1 {
        return Err(Error::NotApplicable(format!("odd-length closed form needs even r, got r = {r}")));
    }
    let u = r / 2;
    let e = l as i64 - u as i64 - 1;
    match odd_branch(l, r) {
        Branch::Small | Branch::Boundary if e < 0 => Err(Error::NotApplicable(format!(
            "exponent l - u - 1 = {e} is negative"
        ))),
        Branch::Small => exact_div(jacobsthal_numerator(e), 6),
        Branch::Boundary => {
            let num = jacobsthal_numerator(e) + jacobsthal_numerator(u as i64 + 1) - 6;
            exact_div(num, 6)
        }
        Branch::Recurrence => {
            let m = l - u - 1;
            let fetch = |i: u64| {
                even_total(i).ok_or_else(|| Error::Domain(format!("even-length total at index {i} unavailable")))
            };
            let mut acc = BigInt::zero();
            for j in 1..r {
                acc += fetch(m - j - 1)?;
            }
            acc *= 2;
            acc += fetch(m - r - 1)?;
            Ok(acc)
        }
    }
}

/// `(2^l + 2(-1)^l) / 3`: palindromic reciprocal words of length `2l` in
/// the free product of `Z2` with an odd cyclic group, for `l` below the
/// exponent bound.
pub fn marmolejo_word_count(l: u64) -> Result<BigInt> {
    exact_div(jacobsthal_numerator(l as i64), 3)
}

/// Next term of `a(l) = 2 sum_{j=1}^{r-1} a(l-j-1) + a(l-r-1)`.
fn recurrence_next(seq: &[BigInt], r: usize) -> BigInt {
    let n = seq.len();
    let mut acc = BigInt::zero();
    for j in 1..r {
        acc += &seq[n - 1 - j];
    }
    acc *= 2;
    acc += &seq[n - 1 - r];
    acc
}

/// Appends `count` terms of the recurrence to `seed`, returning the whole
/// sequence.
pub fn recurrence_extend(seed: &[BigInt], r: u64, count: usize) -> Result<Vec<BigInt>> {
    let r = r as usize;
    if r < 2 {
        return Err(Error::Domain(format!("recurrence needs r >= 2, got {r}")));
    }
    if seed.len() < r + 1 {
        return Err(Error::ShortSeed { got: seed.len(), needed: r + 1 });
    }
    let mut seq = seed.to_vec();
    seq.reserve(count);
    for _ in 0..count {
        let next = recurrence_next(&seq, r);
        seq.push(next);
    }
    Ok(seq)
}

/// Value of the recurrence right-hand side at index `l` from a lookup of
/// earlier terms (used to test whether observed data obeys it).
pub fn recurrence_rhs(l: u64, r: u64, term: impl Fn(u64) -> Option<BigInt>) -> Option<BigInt> {
    if l < r + 2 {
        return None;
    }
    let mut acc = BigInt::zero();
    for j in 1..r {
        acc += term(l - j - 1)?;
    }
    acc *= 2;
    acc += term(l - r - 1)?;
    Some(acc)
}

/// Renders a formula outcome for the ledger: the integer, or `num/den`.
pub fn render(value: &Result<BigInt>) -> String {
    match value {
        Ok(v) => v.to_string(),
        Err(Error::NonIntegral { numerator, denominator }) => {
            let g = numerator.gcd(&BigInt::from(*denominator));
            let (n, d) = (numerator / &g, BigInt::from(*denominator) / &g);
            if d.is_negative() {
                format!("{}/{}", -n, -d)
            } else {
                format!("{n}/{d}")
            }
        }
        Err(e) => format!("n/a ({e})"),
    }
}

/// Lossy view for diagnostics.
pub fn to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}
