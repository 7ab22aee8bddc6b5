//! Real and complex roots of integer polynomials.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::IntPoly;
use crate::error::{Error, Result};

/// Rational interval `[lo, hi]` holding a single positive root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootEnclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootEnclosure {
    pub fn midpoint(&self) -> f64 {
        ratio_to_f64(&((&self.lo + &self.hi) / BigRational::from_integer(2.into())))
    }

    pub fn width(&self) -> f64 {
        ratio_to_f64(&(&self.hi - &self.lo))
    }

    pub fn contains_integer(&self) -> bool {
        self.lo.ceil() <= self.hi
    }
}

pub fn ratio_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn tol_to_rational(tol: f64) -> Result<BigRational> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive and finite, got {tol}")));
    }
    BigRational::from_float(tol).ok_or_else(|| Error::Domain(format!("bad tolerance {tol}")))
}

/// Bisects `[lo, hi]` with exact rational evaluation, assuming
/// `p(lo) < 0 < p(hi)`.
pub fn bisect(poly: &IntPoly, lo: BigRational, hi: BigRational, tol: f64) -> Result<RootEnclosure> {
    let tol = tol_to_rational(tol)?;
    let (mut lo, mut hi) = (lo, hi);
    if !poly.eval_rational(&lo).is_negative() || !poly.eval_rational(&hi).is_positive() {
        return Err(Error::Internal(format!(
            "no sign change on [{lo}, {hi}] for {poly}"
        )));
    }
    let two = BigRational::from_integer(2.into());
    while &hi - &lo > tol {
        let mid = (&lo + &hi) / &two;
        let v = poly.eval_rational(&mid);
        if v.is_zero() {
            return Ok(RootEnclosure { lo: mid.clone(), hi: mid });
        }
        if v.is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RootEnclosure { lo, hi })
}

/// Just below `sqrt 2`; used as the exact left end of the search interval.
fn below_sqrt2() -> BigRational {
    BigRational::new(BigInt::from(7071), BigInt::from(5000))
}

/// Encloses the positive root of a growth polynomial, which must change
/// sign between `sqrt 2` and `2`. Both end signs are established exactly.
pub fn dominant_root(poly: &IntPoly, tol: f64) -> Result<RootEnclosure> {
    if poly.eval_sqrt2().signum() >= 0 {
        return Err(Error::Internal(format!("p(sqrt2) is not negative for {poly}")));
    }
    let lo = below_sqrt2();
    if !poly.eval_rational(&lo).is_negative() {
        return Err(Error::Internal(format!("p(7071/5000) is not negative for {poly}")));
    }
    let hi = BigRational::from_integer(2.into());
    let enclosure = bisect(poly, lo, hi, tol)?;
    if enclosure.contains_integer() {
        return Err(Error::Internal("dominant root enclosure contains an integer".into()));
    }
    Ok(enclosure)
}

/// Positive root of the sign-normalised polynomial: every root has modulus
/// at most this value.
pub fn cauchy_bound(poly: &IntPoly, tol: f64) -> Result<RootEnclosure> {
    let q = poly.cauchy_polynomial();
    let bound = q.coefficients().iter().map(|c| c.abs()).max().unwrap_or_default() + 1u32;
    let mut lo = BigRational::zero();
    if q.eval_rational(&lo).is_zero() {
        // Zero constant term: x = 0 is a root; step just right of it.
        lo = BigRational::new(1.into(), (BigInt::from(1) << 64u32) * &bound);
    }
    bisect(&q, lo, BigRational::from_integer(bound), tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexRoot {
    pub re: f64,
    pub im: f64,
}

impl ComplexRoot {
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

const MAX_ITERATIONS: usize = 1000;

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// All complex roots by Aberth iteration, refined until every residual
/// `|p(z)|` is at most `tol`. Initial points sit on the circle of radius
/// `1 + max |a_k / a_n|` at fixed angles, so output is reproducible. Roots are
/// returned sorted by decreasing modulus, then by argument.
pub fn all_roots(poly: &IntPoly, tol: f64) -> Result<Vec<ComplexRoot>> {
    let n = poly.degree();
    if n == 0 {
        return Err(Error::Domain("all_roots needs degree at least 1".into()));
    }
    let raw = poly.to_f64();
    let lead = raw[n];
    let c: Vec<f64> = raw.iter().map(|a| a / lead).collect();
    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    let residual = |z: &[Complex64]| z.iter().map(|&w| horner(&c, w).0.norm()).fold(0.0f64, f64::max);
    for _ in 0..MAX_ITERATIONS {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner(&c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm());
            }
        }
        if residual(&z) <= tol || moved <= f64::EPSILON * radius {
            break;
        }
    }
    let worst = residual(&z);
    if worst > tol || z.iter().any(|w| !w.is_finite()) {
        return Err(Error::Numeric(format!(
            "roots of {poly} did not reach residual {tol:e} within {MAX_ITERATIONS} iterations (worst {worst:e})"
        )));
    }
    let mut roots: Vec<ComplexRoot> = z
        .into_iter()
        .map(|w| ComplexRoot { re: clean(w.re), im: clean(w.im) })
        .collect();
    roots.sort_by(|a, b| {
        b.modulus()
            .total_cmp(&a.modulus())
            .then(a.im.atan2(a.re).total_cmp(&b.im.atan2(b.re)))
    });
    Ok(roots)
}

/// Drops imaginary noise and negative zero so serialized roots are stable.
fn clean(v: f64) -> f64 {
    if v.abs() < 1e-14 {
        0.0
    } else {
        v
    }
}

/// Coefficients of `prod (x - z_k)`, constant first.
pub fn expand_roots(roots: &[ComplexRoot]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        let z = Complex64::new(r.re, r.im);
        let mut next = vec![Complex64::zero(); c.len() + 1];
        for (k, a) in c.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * z;
        }
        c = next;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::poly::build_growth_poly;

    #[test]
    fn dominant_root_examples() {
        let r2 = dominant_root(&build_growth_poly(2).unwrap(), 1e-12).unwrap();
        assert!((r2.midpoint() - 1.618_033_988_749_895).abs() < 1e-11);
        assert!(r2.width() <= 1e-12);
        let r3 = dominant_root(&build_growth_poly(3).unwrap(), 1e-12).unwrap();
        assert!((r3.midpoint() - 1.839_286_755_214_161).abs() < 1e-11);
        assert!(!r3.contains_integer());
    }

    #[test]
    fn missing_sign_change_is_internal() {
        let p = IntPoly::new([1, 0, 1]);
        assert!(matches!(dominant_root(&p, 1e-6), Err(Error::Internal(_))));
    }

    #[test]
    fn roots_of_r2() {
        let roots = all_roots(&build_growth_poly(2).unwrap(), 1e-10).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let expect = [golden, -1.0, 1.0 - golden];
        assert_eq!(roots.len(), 3);
        for e in expect {
            assert!(roots.iter().any(|z| (z.re - e).abs() < 1e-9 && z.im.abs() < 1e-9), "{e}");
        }
        assert!((roots[0].modulus() - golden).abs() < 1e-8);
    }

    #[test]
    fn reconstruction() {
        for r in 2..=6 {
            let p = build_growth_poly(r).unwrap();
            let roots = all_roots(&p, 1e-10).unwrap();
            let back = expand_roots(&roots);
            for (k, c) in p.to_f64().iter().enumerate() {
                assert!((back[k].re - c).abs() < 1e-6 && back[k].im.abs() < 1e-6);
            }
        }
    }

    #[test]
    fn double_root_converges() {
        let roots = all_roots(&IntPoly::new([1, 2, 1]), 1e-10).unwrap();
        assert!(roots.iter().all(|z| (z.re + 1.0).abs() < 1e-4));
    }

    #[test]
    fn cauchy_bound_matches_dominant_root() {
        let p = build_growth_poly(3).unwrap();
        let c = cauchy_bound(&p, 1e-12).unwrap();
        assert!((c.midpoint() - 1.839_286_755_214_161).abs() < 1e-10);
    }
}
