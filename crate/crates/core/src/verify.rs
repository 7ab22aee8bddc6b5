//! The acceptance checks, runnable from the command line.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::census::{census, census_with_threads, enumerate_classes, CensusTable};
use crate::error::Result;
use crate::formulas::{bounded_compositions, compositions, signed_syllable_count, signed_syllable_sum, Mode};
use crate::ledger::{applicable_ids, claims_check, has_entry, observed_matches_census, ClaimLedger};
use crate::params::GroupParams;
use crate::reciprocal::{classify_blocks, is_reciprocal, normal_form_generate, witness_types, Category};
use crate::spectral::growth::{growth_report, CONVERGENCE_TOL, RESIDUAL_TOL, ROOT_TOL};
use crate::spectral::poly::{build_growth_poly, squarefree_multiplicity};
use crate::spectral::roots::{all_roots, dominant_root};
use crate::word::{Syllable, Word};

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub criterion: u32,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Random words per `p` in the group-law suite.
    pub words_per_p: usize,
    /// Census bound for the performance and growth checks.
    pub perf_len: u64,
    /// Census bound for the claims check.
    pub claims_len: u64,
    pub extend_to: u64,
    /// Worker counts compared for byte-identical output.
    pub thread_counts: Vec<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { words_per_p: 10_000, perf_len: 24, claims_len: 20, extend_to: 80, thread_counts: vec![1, 2, 8] }
    }
}

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn g(p: i64) -> GroupParams {
    GroupParams::new(p).expect("valid order")
}

pub fn random_word(rng: &mut impl Rng, params: GroupParams, max_syllables: usize) -> Word {
    let n = rng.gen_range(0..=max_syllables);
    let bound = i64::from(params.p());
    Word::reduce(
        params,
        (0..n).map(|_| {
            if rng.gen_bool(0.5) {
                Syllable::Iota
            } else {
                Syllable::Gamma(rng.gen_range(-bound..=bound))
            }
        }),
    )
}

fn group_law(cfg: &VerifyConfig) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for p in 3..=12 {
        let params = g(p);
        for _ in 0..cfg.words_per_p {
            let a = random_word(&mut rng, params, 12);
            let b = random_word(&mut rng, params, 12);
            let c = random_word(&mut rng, params, 12);
            let left = lift(lift(a.multiply(&b))?.multiply(&c))?;
            let right = lift(a.multiply(&lift(b.multiply(&c))?))?;
            ensure(left == right, || format!("associativity fails for p={p}: {a} | {b} | {c}"))?;
            ensure(lift(a.multiply(&a.inverse()))?.is_identity(), || format!("a a^-1 != 1 for {a}"))?;
            let again = Word::reduce(params, a.syllables().iter().copied());
            ensure(again == a, || format!("reduction not idempotent on {a}"))?;
            let conj = lift(a.conjugate_by(&b))?;
            ensure(conj.class_key() == a.class_key(), || format!("class key moved under conjugation: {a} by {b}"))?;
        }
    }
    Ok(format!("{} words per p, p = 3..12", cfg.words_per_p))
}

fn census_fixtures() -> Check {
    let t4 = lift(census(g(4), 10))?;
    let t6 = lift(census(g(6), 8))?;
    let cell = |t: &CensusTable, len: u64, cat: Option<Category>| -> BigUint {
        let row = t.row(len).expect("row");
        match cat {
            None => row.reciprocal_total.clone(),
            Some(c) => row.category(c).clone(),
        }
    };
    let fixtures: [(&CensusTable, u32, u64, Option<Category>, u32); 10] = [
        (&t4, 4, 3, None, 1),
        (&t4, 4, 4, None, 1),
        (&t4, 4, 7, None, 2),
        (&t6, 6, 4, None, 2),
        (&t6, 6, 6, None, 1),
        (&t4, 4, 4, Some(Category::Symmetric), 1),
        (&t6, 6, 6, Some(Category::Symmetric), 1),
        (&t6, 6, 8, Some(Category::Symmetric), 2),
        (&t4, 4, 10, Some(Category::PReciprocal), 1),
        (&t4, 4, 8, Some(Category::PReciprocal), 0),
    ];
    for (t, p, len, cat, want) in fixtures {
        let got = cell(t, len, cat);
        ensure(got == BigUint::from(want), || format!("p={p} len={len} {cat:?}: {got} != {want}"))?;
    }
    Ok(format!("{} fixtures", fixtures.len()))
}

fn classification_cross_check() -> Check {
    let mut checked = 0;
    for p in [4, 6] {
        for c in enumerate_classes(g(p), 16) {
            if !lift(is_reciprocal(&c))? {
                continue;
            }
            let a = lift(classify_blocks(c.params(), c.blocks()))?;
            let b = lift(witness_types(&c))?;
            ensure(a == b, || format!("p={p} class {c}: reflection {a:?} vs coset search {b:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} reciprocal classes"))
}

fn composition_layer() -> Check {
    for x in 1..=14u64 {
        // Compositions of x by number of parts and largest part.
        let mut by_shape: BTreeMap<(u64, u64), u64> = BTreeMap::new();
        for cuts in 0u32..(1 << (x - 1)) {
            let (mut parts, mut largest, mut run) = (0, 0, 1);
            for i in 0..x - 1 {
                if cuts >> i & 1 == 1 {
                    parts += 1;
                    largest = largest.max(run);
                    run = 1;
                } else {
                    run += 1;
                }
            }
            *by_shape.entry((parts + 1, largest.max(run))).or_default() += 1;
        }
        for n in 0..=x {
            let all: u64 = by_shape.iter().filter(|((k, _), _)| *k == n).map(|(_, v)| v).sum();
            ensure(compositions(n, x) == all.into(), || format!("compositions({n}, {x})"))?;
            for r in 1..=5 {
                let bounded: u64 = by_shape.iter().filter(|((k, m), _)| *k == n && *m <= r).map(|(_, v)| v).sum();
                ensure(bounded_compositions(n, r, x) == bounded.into(), || format!("bounded({n}, {r}, {x})"))?;
            }
        }
    }
    for x in 2..=14u64 {
        for r in 2..=5u64 {
            ensure(signed_syllable_sum(x as i64, r, Mode::Corrected) == signed_syllable_count(x, r), || {
                format!("corrected sum differs at x={x} r={r}")
            })?;
        }
    }
    Ok("x <= 14, r <= 5".into())
}

fn spectral() -> Check {
    let rho2 = lift(dominant_root(&lift(build_growth_poly(2))?, ROOT_TOL))?.midpoint();
    let rho3 = lift(dominant_root(&lift(build_growth_poly(3))?, ROOT_TOL))?.midpoint();
    ensure((rho2 - 1.618_033_988_7).abs() <= 1e-9, || format!("rho(2) = {rho2}"))?;
    ensure((rho3 - 1.839_286_755_2).abs() <= 1e-9, || format!("rho(3) = {rho3}"))?;
    for r in 2..=10 {
        let poly = lift(build_growth_poly(r))?;
        ensure(poly.eval_int(&2.into()) == 3.into(), || format!("p(2) != 3 for r={r}"))?;
        ensure(poly.eval_sqrt2().signum() < 0, || format!("p(sqrt2) >= 0 for r={r}"))?;
        let (_, s) = lift(squarefree_multiplicity(&poly))?;
        ensure(s == 1, || format!("s = {s} for r={r}"))?;
        if r <= 6 {
            let rho = lift(dominant_root(&poly, ROOT_TOL))?.midpoint();
            let top = lift(all_roots(&poly, RESIDUAL_TOL))?.iter().map(|z| z.modulus()).fold(0.0, f64::max);
            ensure(top <= rho + 1e-6, || format!("root modulus {top} exceeds rho {rho} for r={r}"))?;
        }
    }
    Ok(format!("rho(2) = {rho2:.10}, rho(3) = {rho3:.10}"))
}

fn growth(cfg: &VerifyConfig, threads: usize) -> Check {
    let mut notes = Vec::new();
    for (p, max_len) in [(6, cfg.perf_len), (4, cfg.perf_len.min(20))] {
        let table = lift(census_with_threads(g(p), max_len, threads))?;
        let r = u64::from(lift(table.params.require_r())?);
        let report = lift(lift(growth_report(r, ROOT_TOL))?.with_census(&table, cfg.extend_to, CONVERGENCE_TOL))?;
        for fam in &report.families {
            ensure(fam.trace.converged, || format!("p={p} {} family: gap {:e}", fam.family, fam.trace.final_gap))?;
            notes.push(format!("p={p} {} gap {:.1e}", fam.family, fam.trace.final_gap));
        }
    }
    Ok(notes.join(", "))
}

/// Builds the ledger the way the `claims` command does.
pub fn ledger_for(p: i64, max_len: u64, extend_to: u64, threads: usize) -> Result<(CensusTable, ClaimLedger)> {
    let table = census_with_threads(GroupParams::new(p)?, max_len, threads)?;
    let r = u64::from(table.params.require_r()?);
    let report = growth_report(r, ROOT_TOL)?.with_census(&table, extend_to, CONVERGENCE_TOL)?;
    let ledger = claims_check(&table, &report, extend_to)?;
    Ok((table, ledger))
}

fn claims(cfg: &VerifyConfig, threads: usize) -> Check {
    let mut total = 0;
    for p in [6, 4] {
        let (table, ledger) = lift(ledger_for(p, cfg.claims_len, cfg.extend_to, threads))?;
        let want = lift(applicable_ids(table.params, cfg.claims_len))?;
        let have = ledger.ids();
        ensure(want.iter().all(|id| have.contains(id)), || format!("p={p}: missing ids {:?}", want.difference(&have.iter().copied().collect()).collect::<Vec<_>>()))?;
        ensure(observed_matches_census(&ledger, &table), || format!("p={p}: observed value not from census"))?;
        ensure(lift(ClaimLedger::from_json(&ledger.to_json()))? == ledger, || "ledger JSON round trip".into())?;
        let required: &[(&str, &[(&str, i64)])] = if p == 6 {
            &[("L2.6", &[("x", 3), ("r", 3)]), ("L4.1.1", &[("l", 2)])]
        } else {
            &[("L2.6", &[("x", 3), ("r", 2)]), ("L4.7.1", &[("l", 4)])]
        };
        for (id, ps) in required {
            ensure(has_entry(&ledger, id, ps), || format!("p={p}: no {id} entry for {ps:?}"))?;
        }
        total += ledger.claims.len();
    }
    Ok(format!("{total} entries"))
}

fn performance(cfg: &VerifyConfig) -> Check {
    let start = Instant::now();
    let base = lift(census_with_threads(g(6), cfg.perf_len, 1))?;
    let single = start.elapsed().as_secs_f64();
    ensure(single < 60.0, || format!("single-threaded census took {single:.1}s"))?;
    let (json, csv) = (base.to_json(), base.to_csv());
    for &t in &cfg.thread_counts {
        let other = lift(census_with_threads(g(6), cfg.perf_len, t))?;
        ensure(other.to_json() == json && other.to_csv() == csv, || format!("output differs with {t} workers"))?;
    }
    Ok(format!("p=6 len<={} in {single:.2}s on one worker", cfg.perf_len))
}

fn normal_forms() -> Check {
    let mut findings = Vec::new();
    for p in [4, 6] {
        let params = g(p);
        for len in 2..=14 {
            let generated = lift(normal_form_generate(params, len))?;
            for c in &generated {
                ensure(lift(is_reciprocal(c))?, || format!("p={p}: generated class {c} is not reciprocal"))?;
            }
            let oracle = enumerate_classes(params, len)
                .filter(|c| c.word_length() == len && is_reciprocal(c).unwrap_or(false))
                .count();
            if oracle != generated.len() {
                findings.push(format!("p={p} len={len}: {} generated vs {oracle} classes", generated.len()));
            }
        }
    }
    if findings.is_empty() {
        Ok("sound and complete".into())
    } else {
        Ok(format!("sound; completeness findings: {}", findings.join("; ")))
    }
}

/// Runs every criterion; `threads` is passed to census runs (0 = auto).
pub fn run_all(cfg: &VerifyConfig, threads: usize) -> Vec<Outcome> {
    let checks: [(u32, &str, Box<dyn Fn() -> Check + '_>); 9] = [
        (1, "group-law properties", Box::new(|| group_law(cfg))),
        (2, "census fixtures", Box::new(census_fixtures)),
        (3, "classification cross-validation", Box::new(classification_cross_check)),
        (4, "composition layer", Box::new(composition_layer)),
        (5, "spectral", Box::new(spectral)),
        (6, "growth convergence", Box::new(|| growth(cfg, threads))),
        (7, "claims ledger", Box::new(|| claims(cfg, threads))),
        (8, "performance and determinism", Box::new(|| performance(cfg))),
        (9, "normal-form soundness", Box::new(normal_forms)),
    ];
    checks
        .into_iter()
        .map(|(criterion, title, f)| {
            let start = Instant::now();
            let res = f();
            let seconds = start.elapsed().as_secs_f64();
            let (passed, detail) = match res {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            Outcome { criterion, title: title.into(), passed, detail, seconds }
        })
        .collect()
}
