//! Exact integer polynomials: evaluation, square-free structure and the
//! Eisenstein test.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer polynomial, constant term first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: impl IntoIterator<Item = impl Into<BigInt>>) -> Self {
        let mut coeffs: Vec<BigInt> = coeffs.into_iter().map(Into::into).collect();
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn coefficient(&self, degree: usize) -> BigInt {
        self.coeffs.get(degree).cloned().unwrap_or_default()
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// `p(sqrt 2)` as `a + b sqrt 2` with exact integers.
    pub fn eval_sqrt2(&self) -> Sqrt2Value {
        let mut a = BigInt::zero();
        let mut b = BigInt::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            let scale = BigInt::one() << (k / 2);
            if k % 2 == 0 {
                a += c * scale;
            } else {
                b += c * scale;
            }
        }
        Sqrt2Value { a, b }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.to_f64().iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| crate::formulas::to_f64(c)).collect()
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k))
    }

    /// `p(x + a)` by repeated synthetic division.
    pub fn shift(&self, a: &BigInt) -> IntPoly {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &c[j + 1] * a;
                c[j] += t;
            }
        }
        IntPoly::new(c)
    }

    /// `|a_n| x^n - sum |a_k| x^k`, whose positive root bounds all root moduli.
    pub fn cauchy_polynomial(&self) -> IntPoly {
        let n = self.degree();
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k == n { c.abs() } else { -c.abs() }),
        )
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}x^{k}")?,
            }
        }
        Ok(())
    }
}

/// `x^(r+1) - 2 sum_{j=1}^{r-1} x^(r-j) - 1`, the characteristic polynomial
/// of the class-count recurrence.
pub fn build_growth_poly(r: u64) -> Result<IntPoly> {
    if r < 2 {
        return Err(Error::Domain(format!("growth polynomial needs r >= 2, got {r}")));
    }
    let r = r as usize;
    let mut c = vec![BigInt::zero(); r + 2];
    c[0] = BigInt::from(-1);
    for d in 1..r {
        c[d] = BigInt::from(-2);
    }
    c[r + 1] = BigInt::one();
    Ok(IntPoly::new(c))
}

/// `a + b sqrt 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sqrt2Value {
    pub a: BigInt,
    pub b: BigInt,
}

impl Sqrt2Value {
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sa == 0 || sb == 0 || sa == sb {
            return if sa != 0 { sa } else { sb };
        }
        // Opposite signs: compare a^2 with 2 b^2.
        let a2 = &self.a * &self.a;
        let b2 = &self.b * &self.b * 2;
        match a2.cmp(&b2) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        crate::formulas::to_f64(&self.a) + std::f64::consts::SQRT_2 * crate::formulas::to_f64(&self.b)
    }
}

impl fmt::Display for Sqrt2Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{} - {}*sqrt2", self.a, -&self.b)
        } else {
            write!(f, "{} + {}*sqrt2", self.a, self.b)
        }
    }
}

fn sign_of(v: &BigInt) -> i32 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

type QPoly = Vec<BigRational>;

fn q_trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn q_rem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead = &b[db];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let factor = r.last().expect("nonempty") / lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &factor * c;
        }
        r = q_trim(r);
    }
    r
}

fn q_monic(p: QPoly) -> QPoly {
    let lead = p.last().expect("nonzero polynomial").clone();
    p.into_iter().map(|c| c / &lead).collect()
}

fn q_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = q_rem(&a, &b);
        a = b;
        b = r;
    }
    q_monic(a)
}

fn q_derivative(p: &QPoly) -> QPoly {
    q_trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
            .collect(),
    )
}

/// Exact greatest common divisor over the rationals, made monic.
pub fn rational_gcd(a: &IntPoly, b: &IntPoly) -> Vec<BigRational> {
    let lift = |p: &IntPoly| -> QPoly {
        p.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect()
    };
    if b.is_zero() {
        return q_monic(lift(a));
    }
    q_gcd(&lift(a), &lift(b))
}

/// Whether the polynomial is square-free, and the largest multiplicity of
/// any root: the number of steps `g -> gcd(g, g')` until `g` is constant.
pub fn squarefree_multiplicity(poly: &IntPoly) -> Result<(bool, u32)> {
    if poly.degree() == 0 {
        return Err(Error::Domain("multiplicity of a constant polynomial".into()));
    }
    let mut g: QPoly = poly.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let mut s = 0;
    while g.len() > 1 {
        g = q_gcd(&g, &q_derivative(&g));
        s += 1;
    }
    Ok((s == 1, s))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EisensteinStatus {
    Satisfied,
    NotSatisfied,
}

/// First coefficient breaking the criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisensteinViolation {
    pub degree: usize,
    pub coefficient: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisensteinReport {
    pub prime: u64,
    pub shift: i64,
    /// Coefficients of `p(x + shift)`, constant first, as decimal strings.
    pub shifted: Vec<String>,
    pub status: EisensteinStatus,
    pub violation: Option<EisensteinViolation>,
}

/// Eisenstein's criterion at `prime` for `p(x + shift)`. Coefficients are
/// scanned from the highest degree down and the first failure is reported.
pub fn eisenstein_check(poly: &IntPoly, prime: u64, shift: i64) -> Result<EisensteinReport> {
    if prime < 2 {
        return Err(Error::Domain(format!("prime must be at least 2, got {prime}")));
    }
    if poly.degree() == 0 {
        return Err(Error::Domain("criterion needs a nonconstant polynomial".into()));
    }
    let q = poly.shift(&BigInt::from(shift));
    let pr = BigInt::from(prime);
    let divides = |c: &BigInt| c.is_multiple_of(&pr);
    let n = q.degree();
    let violation = |degree: usize, reason: &str| EisensteinViolation {
        degree,
        coefficient: q.coefficient(degree).to_string(),
        reason: reason.to_string(),
    };
    let mut found = None;
    if divides(&q.coefficient(n)) {
        found = Some(violation(n, "leading coefficient divisible by the prime"));
    }
    if found.is_none() {
        found = (0..n)
            .rev()
            .find(|&d| !divides(&q.coefficient(d)))
            .map(|d| violation(d, "coefficient not divisible by the prime"));
    }
    if found.is_none() && divides(&(q.coefficient(0) / &pr)) {
        found = Some(violation(0, "constant term divisible by the square of the prime"));
    }
    Ok(EisensteinReport {
        prime,
        shift,
        shifted: q.coeffs.iter().map(ToString::to_string).collect(),
        status: if found.is_some() { EisensteinStatus::NotSatisfied } else { EisensteinStatus::Satisfied },
        violation: found,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: &IntPoly) -> Vec<i64> {
        p.coefficients().iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn growth_poly_examples() {
        assert_eq!(ints(&build_growth_poly(2).unwrap()), [-1, -2, 0, 1]);
        assert_eq!(ints(&build_growth_poly(3).unwrap()), [-1, -2, -2, 0, 1]);
        assert_eq!(ints(&build_growth_poly(4).unwrap()), [-1, -2, -2, -2, 0, 1]);
        assert_eq!(build_growth_poly(4).unwrap().to_string(), "x^5 - 2x^3 - 2x^2 - 2x - 1");
        assert!(matches!(build_growth_poly(1), Err(Error::Domain(_))));
    }

    #[test]
    fn exact_evaluation() {
        let p3 = build_growth_poly(3).unwrap();
        assert_eq!(p3.eval_int(&BigInt::from(2)), BigInt::from(3));
        assert_eq!(p3.eval_int(&BigInt::zero()), BigInt::from(-1));
        let v = p3.eval_sqrt2();
        assert_eq!((v.a.clone(), v.b.clone()), (BigInt::from(-1), BigInt::from(-2)));
        assert_eq!(v.signum(), -1);
        let half = BigRational::new(1.into(), 2.into());
        // 1/16 - 2/4 - 1 - 1 = -39/16
        assert_eq!(p3.eval_rational(&half), BigRational::new((-39).into(), 16.into()));
    }

    #[test]
    fn sqrt2_sign_cases() {
        let v = |a: i64, b: i64| Sqrt2Value { a: a.into(), b: b.into() }.signum();
        assert_eq!(v(3, -2), 1);
        assert_eq!(v(2, -2), -1);
        assert_eq!(v(-3, 2), -1);
        assert_eq!(v(0, 0), 0);
        assert_eq!(v(0, -1), -1);
    }

    #[test]
    fn shift_and_derivative() {
        let p2 = build_growth_poly(2).unwrap();
        assert_eq!(ints(&p2.shift(&BigInt::one())), [-2, 1, 3, 1]);
        assert_eq!(ints(&p2.derivative()), [-2, 0, 3]);
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(squarefree_multiplicity(&build_growth_poly(2).unwrap()).unwrap(), (true, 1));
        assert_eq!(squarefree_multiplicity(&build_growth_poly(3).unwrap()).unwrap(), (true, 1));
        assert_eq!(squarefree_multiplicity(&IntPoly::new([1, 2, 1])).unwrap(), (false, 2));
        assert_eq!(squarefree_multiplicity(&IntPoly::new([-1, 3, -3, 1])).unwrap(), (false, 3));
    }

    #[test]
    fn eisenstein_examples() {
        let r2 = eisenstein_check(&build_growth_poly(2).unwrap(), 2, 1).unwrap();
        assert_eq!(r2.status, EisensteinStatus::NotSatisfied);
        let v = r2.violation.unwrap();
        assert_eq!((v.degree, v.coefficient.as_str()), (2, "3"));

        let r4 = eisenstein_check(&build_growth_poly(4).unwrap(), 2, 1).unwrap();
        assert_eq!(r4.shifted[0], "-6");
        assert_eq!(r4.status, EisensteinStatus::NotSatisfied);
        assert_eq!(r4.violation.unwrap().degree, 4);

        let text = eisenstein_check(&IntPoly::new([2, 2, 1]), 2, 0).unwrap();
        assert_eq!(text.status, EisensteinStatus::Satisfied);
        assert!(text.violation.is_none());

        let square = eisenstein_check(&IntPoly::new([4, 2, 1]), 2, 0).unwrap();
        assert_eq!(square.violation.unwrap().degree, 0);
    }
}
