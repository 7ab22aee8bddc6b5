//! Growth diagnostics: ratio traces of class counts against the dominant root.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::poly::{build_growth_poly, eisenstein_check, squarefree_multiplicity, EisensteinReport};
use super::roots::{all_roots, dominant_root, ComplexRoot};
use crate::census::CensusTable;
use crate::error::{Error, Result};
use crate::formulas::recurrence_extend;

/// Ratio and normalised traces of a sequence indexed from `first_index`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthTrace {
    pub first_index: u64,
    /// `(l, a(l+1) / a(l))`.
    pub ratio_trace: Vec<(u64, f64)>,
    /// `(l, a(l) / (l^(s-1) rho^l))`.
    pub normalized_trace: Vec<(u64, f64)>,
    pub normalized_max: f64,
    pub final_ratio: f64,
    pub final_gap: f64,
    pub tol: f64,
    pub converged: bool,
}

fn ln_big(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits < 1000 {
        return v.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    (v >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Traces for `seq[base..]`; every term from `base` on must be positive.
/// `seq[i]` is the term of index `first_index + i`.
pub fn growth_estimate(
    seq: &[BigInt],
    first_index: u64,
    base: usize,
    rho: f64,
    s: u32,
    tol: f64,
) -> Result<GrowthTrace> {
    if let Some(pos) = (base..seq.len()).find(|&i| !seq[i].is_positive()) {
        return Err(Error::ZeroTerm(first_index as usize + pos));
    }
    if seq.len() < base + 2 {
        return Err(Error::Domain("growth trace needs at least two terms past the base".into()));
    }
    let index = |i: usize| first_index + i as u64;
    let ratio_trace: Vec<(u64, f64)> = (base..seq.len() - 1)
        .map(|i| {
            let q = BigRational::new(seq[i + 1].clone(), seq[i].clone());
            (index(i), q.to_f64().unwrap_or(f64::NAN))
        })
        .collect();
    let ln_rho = rho.ln();
    let normalized_trace: Vec<(u64, f64)> = (base..seq.len())
        .map(|i| {
            let l = index(i) as f64;
            let poly = if s > 1 { f64::from(s - 1) * l.ln() } else { 0.0 };
            (index(i), (ln_big(&seq[i]) - l * ln_rho - poly).exp())
        })
        .collect();
    let normalized_max = normalized_trace.iter().map(|t| t.1).fold(0.0, f64::max);
    let final_ratio = ratio_trace.last().expect("two terms").1;
    let final_gap = (final_ratio - rho).abs();
    Ok(GrowthTrace {
        first_index,
        ratio_trace,
        normalized_trace,
        normalized_max,
        final_ratio,
        final_gap,
        tol,
        converged: final_gap < tol,
    })
}

/// A census-observed count family extended by the recurrence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySeries {
    /// `even`: totals at word length `2l`; `odd`: totals at `2l - 1`.
    pub family: String,
    pub first_index: u64,
    /// Terms observed in the census, as decimal strings.
    pub observed: Vec<String>,
    pub extended_to: u64,
    pub final_term: String,
    pub trace: GrowthTrace,
}

/// Observed family terms `(first_index, values)` from a census table.
pub fn family_terms(table: &CensusTable, family: &str) -> Result<(u64, Vec<BigInt>)> {
    let (first, len_of): (u64, fn(u64) -> u64) = match family {
        "even" => (1, |l| 2 * l),
        "odd" => (2, |l| 2 * l - 1),
        other => return Err(Error::Domain(format!("unknown family {other}"))),
    };
    let mut terms = Vec::new();
    let mut l = first;
    while let Some(row) = table.row(len_of(l)) {
        terms.push(BigInt::from(row.reciprocal_total.clone()));
        l += 1;
    }
    Ok((first, terms))
}

/// Extends a census family by the recurrence up to index `extend_to` and
/// traces its growth against `rho`.
pub fn census_family(
    table: &CensusTable,
    family: &str,
    extend_to: u64,
    rho: f64,
    s: u32,
    tol: f64,
) -> Result<FamilySeries> {
    let r = u64::from(table.params.require_r()?);
    let (first, observed) = family_terms(table, family)?;
    if (observed.len() as u64) < r + 1 {
        return Err(Error::ShortSeed { got: observed.len(), needed: r as usize + 1 });
    }
    let last = first + observed.len() as u64 - 1;
    let extra = extend_to.saturating_sub(last) as usize;
    let seq = recurrence_extend(&observed, r, extra)?;
    let base = observed
        .iter()
        .rposition(|v| !v.is_positive())
        .map_or(0, |i| i + 1);
    if base >= observed.len() {
        return Err(Error::ZeroTerm((first + base as u64 - 1) as usize));
    }
    let trace = growth_estimate(&seq, first, base, rho, s, tol)?;
    Ok(FamilySeries {
        family: family.to_string(),
        first_index: first,
        observed: observed.iter().map(ToString::to_string).collect(),
        extended_to: first + seq.len() as u64 - 1,
        final_term: seq.last().expect("nonempty").to_string(),
        trace,
    })
}

/// Families whose counts are not identically zero: reciprocal classes of
/// odd word length exist only when `r` is even.
pub fn families_for(r: u64) -> &'static [&'static str] {
    if r % 2 == 0 {
        &["even", "odd"]
    } else {
        &["even"]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoEnclosure {
    pub lo: String,
    pub hi: String,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sqrt2Probe {
    pub a: String,
    pub b: String,
    pub sign: i32,
}

/// Everything known about the growth polynomial for one `r`, plus optional
/// census-driven families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub r: u64,
    pub p: Option<u32>,
    /// Coefficients, constant first, as decimal strings.
    pub coefficients: Vec<String>,
    pub polynomial: String,
    pub rho: f64,
    pub rho_enclosure: RhoEnclosure,
    pub p_at_2: String,
    pub p_at_sqrt2: Sqrt2Probe,
    pub roots: Vec<ComplexRoot>,
    pub max_modulus: f64,
    pub s: u32,
    pub squarefree: bool,
    pub eisenstein_at_2: EisensteinReport,
    pub tol: f64,
    pub families: Vec<FamilySeries>,
}

pub const ROOT_TOL: f64 = 1e-12;
pub const RESIDUAL_TOL: f64 = 1e-10;
pub const CONVERGENCE_TOL: f64 = 1e-6;

/// Spectral part of the report for `r`, with `tol` the root enclosure width.
pub fn growth_report(r: u64, tol: f64) -> Result<GrowthReport> {
    let poly = build_growth_poly(r)?;
    let enclosure = dominant_root(&poly, tol)?;
    let roots = all_roots(&poly, RESIDUAL_TOL)?;
    let (squarefree, s) = squarefree_multiplicity(&poly)?;
    let probe = poly.eval_sqrt2();
    Ok(GrowthReport {
        r,
        p: None,
        coefficients: poly.coefficients().iter().map(ToString::to_string).collect(),
        polynomial: poly.to_string(),
        rho: enclosure.midpoint(),
        rho_enclosure: RhoEnclosure {
            lo: enclosure.lo.to_string(),
            hi: enclosure.hi.to_string(),
            width: enclosure.width(),
        },
        p_at_2: poly.eval_int(&BigInt::from(2)).to_string(),
        p_at_sqrt2: Sqrt2Probe { a: probe.a.to_string(), b: probe.b.to_string(), sign: probe.signum() },
        max_modulus: roots.iter().map(ComplexRoot::modulus).fold(0.0, f64::max),
        roots,
        s,
        squarefree,
        eisenstein_at_2: eisenstein_check(&poly, 2, 1)?,
        tol,
        families: Vec::new(),
    })
}

impl GrowthReport {
    /// Adds the census families for `table` extended to `extend_to`.
    pub fn with_census(mut self, table: &CensusTable, extend_to: u64, tol: f64) -> Result<Self> {
        if u64::from(table.params.require_r()?) != self.r {
            return Err(Error::Domain("census and report disagree on r".into()));
        }
        self.p = Some(table.params.p());
        self.families = families_for(self.r)
            .iter()
            .map(|f| census_family(table, f, extend_to, self.rho, self.s, tol))
            .collect::<Result<_>>()?;
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
