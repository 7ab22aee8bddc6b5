//! Brute-force census of conjugacy classes.
//!
//! Every class of infinite order is a necklace of block exponents
//! `(k1, ..., kn)`, with word length `n + sum |ki|`. The enumeration walks
//! prenecklaces depth-first in syllable order (Fredricksen-Kessler-Maiorana
//! style), so each class is produced exactly once, in canonical rotation,
//! using memory proportional to the word length.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclic::CyclicWord;
use crate::error::{Error, Result};
use crate::params::GroupParams;
use crate::reciprocal::{classify_blocks, is_power_of_iota_tilde_gamma, Category};

/// Exact class counts for one word length.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CensusRow {
    pub symmetric: BigUint,
    pub p_reciprocal: BigUint,
    pub symmetric_p: BigUint,
    /// Classes `(i g^r)^m`; a subset of `symmetric_p`.
    pub power: BigUint,
    pub reciprocal_total: BigUint,
    pub all_classes: BigUint,
}

impl CensusRow {
    fn add_assign(&mut self, other: &CensusRow) {
        self.symmetric += &other.symmetric;
        self.p_reciprocal += &other.p_reciprocal;
        self.symmetric_p += &other.symmetric_p;
        self.power += &other.power;
        self.reciprocal_total += &other.reciprocal_total;
        self.all_classes += &other.all_classes;
    }

    pub fn category(&self, category: Category) -> &BigUint {
        match category {
            Category::Symmetric => &self.symmetric,
            Category::PReciprocal => &self.p_reciprocal,
            Category::SymmetricPReciprocal => &self.symmetric_p,
            Category::NotReciprocal => &self.all_classes,
        }
    }

    fn check(&self, len: u64) -> Result<()> {
        let sum = &self.symmetric + &self.p_reciprocal + &self.symmetric_p;
        if sum != self.reciprocal_total {
            return Err(Error::Decode(format!("row {len}: reciprocal_total is not the category sum")));
        }
        if self.power > self.symmetric_p {
            return Err(Error::Decode(format!("row {len}: power exceeds symmetric_p")));
        }
        if self.reciprocal_total > self.all_classes {
            return Err(Error::Decode(format!("row {len}: reciprocal_total exceeds all_classes")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusTable {
    pub params: GroupParams,
    pub max_len: u64,
    /// One row for every word length in `2..=max_len`.
    pub rows: BTreeMap<u64, CensusRow>,
}

impl CensusTable {
    fn empty(params: GroupParams, max_len: u64) -> Self {
        let rows = (2..=max_len).map(|l| (l, CensusRow::default())).collect();
        CensusTable { params, max_len, rows }
    }

    pub fn row(&self, len: u64) -> Option<&CensusRow> {
        self.rows.get(&len)
    }

    /// Componentwise sum of two partial tables over the same range.
    pub fn merge(mut self, other: &CensusTable) -> CensusTable {
        for (len, row) in &other.rows {
            self.rows.entry(*len).or_default().add_assign(row);
        }
        self
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("len,symmetric,p_reciprocal,symmetric_p,power,reciprocal_total,all_classes\n");
        for (len, r) in &self.rows {
            let _ = writeln!(
                out,
                "{len},{},{},{},{},{},{}",
                r.symmetric, r.p_reciprocal, r.symmetric_p, r.power, r.reciprocal_total, r.all_classes
            );
        }
        out
    }

    /// Parses the CSV form. Group parameters are not part of the CSV, so
    /// the caller supplies them; `max_len` is taken from the last row.
    pub fn from_csv(params: GroupParams, text: &str) -> Result<CensusTable> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let headers = reader.headers().map_err(|e| Error::Decode(e.to_string()))?;
        if headers.iter().collect::<Vec<_>>() != CSV_COLUMNS {
            return Err(Error::Decode("unexpected CSV header".into()));
        }
        let mut records = Vec::new();
        for rec in reader.deserialize::<RowRecord>() {
            records.push(rec.map_err(|e| Error::Decode(e.to_string()))?);
        }
        let max_len = records.last().map_or(0, |r| r.len);
        Self::from_records(params, max_len, records)
    }

    pub fn to_json(&self) -> String {
        let doc = TableRecord {
            p: self.params.p(),
            max_len: self.max_len,
            rows: self.rows.iter().map(|(&len, r)| RowRecord::from_row(len, r)).collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<CensusTable> {
        let doc: TableRecord = serde_json::from_str(text).map_err(|e| Error::Decode(e.to_string()))?;
        let params = GroupParams::new(i64::from(doc.p)).map_err(|e| Error::Decode(e.to_string()))?;
        Self::from_records(params, doc.max_len, doc.rows)
    }

    fn from_records(params: GroupParams, max_len: u64, records: Vec<RowRecord>) -> Result<CensusTable> {
        if max_len < 2 {
            return Err(Error::Decode(format!("max_len must be at least 2, got {max_len}")));
        }
        if records.len() as u64 != max_len - 1 {
            return Err(Error::Decode("rows must cover every length from 2 to max_len".into()));
        }
        let mut rows = BTreeMap::new();
        for (expected, rec) in (2..=max_len).zip(records) {
            if rec.len != expected {
                return Err(Error::Decode(format!("expected row {expected}, found {}", rec.len)));
            }
            let row = rec.to_row()?;
            row.check(expected)?;
            rows.insert(expected, row);
        }
        Ok(CensusTable { params, max_len, rows })
    }
}

const CSV_COLUMNS: [&str; 7] =
    ["len", "symmetric", "p_reciprocal", "symmetric_p", "power", "reciprocal_total", "all_classes"];

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableRecord {
    p: u32,
    max_len: u64,
    rows: Vec<RowRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowRecord {
    len: u64,
    symmetric: String,
    p_reciprocal: String,
    symmetric_p: String,
    power: String,
    reciprocal_total: String,
    all_classes: String,
}

impl RowRecord {
    fn from_row(len: u64, r: &CensusRow) -> Self {
        RowRecord {
            len,
            symmetric: r.symmetric.to_string(),
            p_reciprocal: r.p_reciprocal.to_string(),
            symmetric_p: r.symmetric_p.to_string(),
            power: r.power.to_string(),
            reciprocal_total: r.reciprocal_total.to_string(),
            all_classes: r.all_classes.to_string(),
        }
    }

    fn to_row(&self) -> Result<CensusRow> {
        let num = |s: &str| -> Result<BigUint> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Decode(format!("count {s:?} is not a decimal integer")));
            }
            s.parse().map_err(|_| Error::Decode(format!("bad count {s:?}")))
        };
        Ok(CensusRow {
            symmetric: num(&self.symmetric)?,
            p_reciprocal: num(&self.p_reciprocal)?,
            symmetric_p: num(&self.symmetric_p)?,
            power: num(&self.power)?,
            reciprocal_total: num(&self.reciprocal_total)?,
            all_classes: num(&self.all_classes)?,
        })
    }
}

/// Alphabet of block exponents in syllable order, with block weights.
struct Alphabet {
    exponents: Vec<i64>,
    weights: Vec<u64>,
}

impl Alphabet {
    fn new(params: GroupParams) -> Self {
        let exponents = params.exponent_alphabet();
        let weights = exponents.iter().map(|k| k.unsigned_abs() + 1).collect();
        Alphabet { exponents, weights }
    }
}

/// Depth-first walk over prenecklaces of total weight `<= budget`, calling
/// `visit` on each necklace. `idx` holds alphabet indices; the alphabet is
/// sorted by syllable order and weights are nondecreasing along it.
fn walk(
    alpha: &Alphabet,
    idx: &mut Vec<usize>,
    blocks: &mut Vec<i64>,
    weight: u64,
    period: usize,
    budget: u64,
    visit: &mut dyn FnMut(&[i64], u64) -> Result<()>,
) -> Result<()> {
    let depth = idx.len();
    if depth > 0 && depth % period == 0 {
        visit(blocks, weight)?;
    }
    let floor = if depth == 0 { 0 } else { idx[depth - period] };
    for a in floor..alpha.exponents.len() {
        let w = weight + alpha.weights[a];
        if w > budget {
            break;
        }
        let next_period = if depth == 0 || a > floor { depth + 1 } else { period };
        idx.push(a);
        blocks.push(alpha.exponents[a]);
        walk(alpha, idx, blocks, w, next_period, budget, visit)?;
        idx.pop();
        blocks.pop();
    }
    Ok(())
}

/// Census of the subtree whose necklaces start with alphabet entry `first`.
fn subtree_census(params: GroupParams, max_len: u64, alpha: &Alphabet, first: usize) -> Result<CensusTable> {
    const SYM: usize = 0;
    const PREC: usize = 1;
    const SYMP: usize = 2;
    const POW: usize = 3;
    const ALL: usize = 4;
    let mut counts = vec![[0u64; 5]; max_len as usize + 1];
    let w0 = alpha.weights[first];
    if w0 <= max_len {
        let mut idx = vec![first];
        let mut blocks = vec![alpha.exponents[first]];
        let mut visit = |b: &[i64], w: u64| -> Result<()> {
            let c = &mut counts[w as usize];
            c[ALL] += 1;
            match classify_blocks(params, b)?.category() {
                Category::NotReciprocal => {}
                Category::Symmetric => c[SYM] += 1,
                Category::PReciprocal => c[PREC] += 1,
                Category::SymmetricPReciprocal => {
                    c[SYMP] += 1;
                    if is_power_of_iota_tilde_gamma(params, b) {
                        c[POW] += 1;
                    }
                }
            }
            Ok(())
        };
        walk(alpha, &mut idx, &mut blocks, w0, 1, max_len, &mut visit)?;
    }
    let mut table = CensusTable::empty(params, max_len);
    for (len, row) in table.rows.iter_mut() {
        let c = counts[*len as usize];
        row.symmetric = c[SYM].into();
        row.p_reciprocal = c[PREC].into();
        row.symmetric_p = c[SYMP].into();
        row.power = c[POW].into();
        row.reciprocal_total = (c[SYM] + c[PREC] + c[SYMP]).into();
        row.all_classes = c[ALL].into();
    }
    Ok(table)
}

fn check_budget(max_len: u64) -> Result<()> {
    if max_len < 2 {
        return Err(Error::Domain(format!("max_len must be at least 2, got {max_len}")));
    }
    if max_len > 4096 {
        return Err(Error::Domain(format!("max_len {max_len} is beyond any feasible census")));
    }
    Ok(())
}

/// Counts every class of infinite order with word length `<= max_len`,
/// by category. Uses the ambient rayon pool.
pub fn census(params: GroupParams, max_len: u64) -> Result<CensusTable> {
    check_budget(max_len)?;
    let alpha = Alphabet::new(params);
    let parts: Vec<CensusTable> = (0..alpha.exponents.len())
        .into_par_iter()
        .map(|first| subtree_census(params, max_len, &alpha, first))
        .collect::<Result<_>>()?;
    Ok(fold_tables(params, max_len, parts))
}

/// As [`census`] with an explicit worker count: `0` for automatic, `1` runs
/// on the calling thread. The result does not depend on the worker count.
pub fn census_with_threads(params: GroupParams, max_len: u64, threads: usize) -> Result<CensusTable> {
    check_budget(max_len)?;
    if threads == 1 {
        let alpha = Alphabet::new(params);
        let parts = (0..alpha.exponents.len())
            .map(|first| subtree_census(params, max_len, &alpha, first))
            .collect::<Result<Vec<_>>>()?;
        return Ok(fold_tables(params, max_len, parts));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    pool.install(|| census(params, max_len))
}

fn fold_tables(params: GroupParams, max_len: u64, parts: Vec<CensusTable>) -> CensusTable {
    parts
        .iter()
        .fold(CensusTable::empty(params, max_len), |acc, t| acc.merge(t))
}

/// Stream of class keys of infinite order with word length `<= max_len`,
/// ordered by word length and then by class key.
pub fn enumerate_classes(params: GroupParams, max_len: u64) -> ClassIter {
    ClassIter {
        params,
        alpha: Alphabet::new(params),
        max_len,
        target: 2,
        path: Vec::new(),
        weight: 0,
        cursor: 0,
    }
}

pub struct ClassIter {
    params: GroupParams,
    alpha: Alphabet,
    max_len: u64,
    target: u64,
    /// `(alphabet index, prenecklace period)` per depth.
    path: Vec<(usize, usize)>,
    weight: u64,
    cursor: usize,
}

impl Iterator for ClassIter {
    type Item = CyclicWord;

    fn next(&mut self) -> Option<CyclicWord> {
        loop {
            if self.target > self.max_len {
                return None;
            }
            let depth = self.path.len();
            let period = self.path.last().map_or(1, |&(_, p)| p);
            let floor = if depth == 0 { 0 } else { self.path[depth - period].0 };
            let start = self.cursor.max(floor);
            let next = (start..self.alpha.exponents.len())
                .take_while(|&a| self.weight + self.alpha.weights[a] <= self.target)
                .next();
            if let Some(a) = next {
                let next_period = if depth == 0 || a > floor { depth + 1 } else { period };
                self.path.push((a, next_period));
                self.weight += self.alpha.weights[a];
                self.cursor = 0;
                if self.weight == self.target && (depth + 1) % next_period == 0 {
                    let blocks = self.path.iter().map(|&(a, _)| self.alpha.exponents[a]).collect();
                    return Some(CyclicWord::from_canonical_blocks(self.params, blocks));
                }
                continue;
            }
            match self.path.pop() {
                Some((a, _)) => {
                    self.weight -= self.alpha.weights[a];
                    self.cursor = a + 1;
                }
                None => {
                    self.target += 1;
                    self.cursor = 0;
                }
            }
        }
    }
}

impl CensusTable {
    /// Reciprocal totals indexed by word length, zero-filled.
    pub fn totals(&self) -> BTreeMap<u64, BigUint> {
        self.rows.iter().map(|(&l, r)| (l, r.reciprocal_total.clone())).collect()
    }

    pub fn is_zero_row(&self, len: u64) -> bool {
        self.rows.get(&len).is_none_or(|r| r.all_classes.is_zero())
    }
}
