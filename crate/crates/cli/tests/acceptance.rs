//! Acceptance gate: one line per criterion, nonzero exit on any failure.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use hecke_core::census::census_with_threads;
use hecke_core::formulas::{
    bounded_compositions, compositions, recurrence_extend, signed_syllable_count, signed_syllable_sum, Mode,
};
use hecke_core::ledger::applicable_ids;
use hecke_core::reciprocal::{classify, normal_form_generate, reciprocator_witnesses};
use hecke_core::spectral::{all_roots, build_growth_poly, dominant_root, squarefree_multiplicity};
use hecke_core::{enumerate_classes, Category, GroupParams, InvolutionType, Syllable, Word};
use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde_json::Value;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn g(p: i64) -> GroupParams {
    GroupParams::new(p).unwrap()
}

fn hecke(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hecke")).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("hecke {args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn criterion_1() -> Check {
    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    let mut checked = 0;
    for p in 3..=12i64 {
        let params = g(p);
        let word = |rng: &mut ChaCha20Rng| {
            let n = rng.gen_range(0..16);
            let syl: Vec<Syllable> = (0..n)
                .map(|_| if rng.gen_bool(0.4) { Syllable::Iota } else { Syllable::Gamma(rng.gen_range(-2 * p..=2 * p)) })
                .collect();
            (syl.clone(), Word::reduce(params, syl))
        };
        for _ in 0..10_000 {
            let (raw, a) = word(&mut rng);
            let (_, b) = word(&mut rng);
            let (_, c) = word(&mut rng);
            let lhs = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let rhs = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            ensure!(lhs == rhs, "associativity, p={p}: ({a})({b})({c})");
            ensure!(a.multiply(&a.inverse()).unwrap().is_identity(), "inverse, p={p}: {a}");
            ensure!(b.inverse().multiply(&b).unwrap().is_identity(), "left inverse, p={p}: {b}");
            ensure!(Word::reduce(params, a.syllables().to_vec()) == a, "idempotence, p={p}: {a}");
            ensure!(Word::reduce(params, raw.iter().copied()) == a, "determinism, p={p}");
            let conj = b.multiply(&a).unwrap().multiply(&b.inverse()).unwrap();
            ensure!(conj.class_key() == a.class_key(), "class key under conjugation, p={p}: {a} by {b}");
            checked += 1;
        }
    }
    Ok(format!("{checked} random triples"))
}

fn reciprocal_listing(p: i64, len: u64) -> Vec<(String, Category)> {
    enumerate_classes(g(p), len)
        .filter(|c| c.word_length() == len)
        .filter_map(|c| {
            let info = classify(&c).unwrap();
            info.is_reciprocal.then(|| (c.to_string(), info.category))
        })
        .collect()
}

fn criterion_2() -> Check {
    use Category::*;
    // Every reciprocal class at each fixture length, by canonical rotation.
    let listings: [(i64, u64, &[(&str, Category)]); 8] = [
        (4, 3, &[("i g^2", SymmetricPReciprocal)]),
        (4, 4, &[("i g i g^-1", Symmetric)]),
        (4, 7, &[("i g i g^-1 i g^2", SymmetricPReciprocal), ("i g i g^2 i g^-1", SymmetricPReciprocal)]),
        (4, 8, &[("i g i g i g^-1 i g^-1", Symmetric), ("i g i g^-1 i g i g^-1", Symmetric)]),
        (
            4,
            10,
            &[
                ("i g i g^-1 i g^2 i g^2", Symmetric),
                ("i g i g^2 i g^-1 i g^2", PReciprocal),
                ("i g i g^2 i g^2 i g^-1", Symmetric),
            ],
        ),
        (6, 4, &[("i g i g^-1", Symmetric), ("i g^3", SymmetricPReciprocal)]),
        (6, 6, &[("i g^2 i g^-2", Symmetric)]),
        (
            6,
            8,
            &[
                ("i g i g i g^-1 i g^-1", Symmetric),
                ("i g i g^-1 i g i g^-1", Symmetric),
                ("i g i g^-1 i g^3", SymmetricPReciprocal),
                ("i g i g^3 i g^-1", SymmetricPReciprocal),
                ("i g^3 i g^3", SymmetricPReciprocal),
            ],
        ),
    ];
    for (p, len, want) in listings {
        let got = reciprocal_listing(p, len);
        let want: Vec<(String, Category)> = want.iter().map(|(s, c)| (s.to_string(), *c)).collect();
        ensure!(got == want, "p={p} len={len}: listing {got:?}");
    }
    let t4 = census_with_threads(g(4), 10, 1).unwrap();
    let t6 = census_with_threads(g(6), 8, 1).unwrap();
    let total = |t: &hecke_core::CensusTable, l: u64| t.row(l).unwrap().reciprocal_total.clone();
    let cat = |t: &hecke_core::CensusTable, l: u64, c: Category| t.row(l).unwrap().category(c).clone();
    let fixtures: Vec<(&str, BigUint, u32)> = vec![
        ("p=4 total len 3", total(&t4, 3), 1),
        ("p=4 total len 4", total(&t4, 4), 1),
        ("p=4 total len 7", total(&t4, 7), 2),
        ("p=6 total len 4", total(&t6, 4), 2),
        ("p=6 total len 6", total(&t6, 6), 1),
        ("p=4 symmetric len 4", cat(&t4, 4, Symmetric), 1),
        ("p=6 symmetric len 6", cat(&t6, 6, Symmetric), 1),
        ("p=6 symmetric len 8", cat(&t6, 8, Symmetric), 2),
        ("p=4 p-reciprocal len 10", cat(&t4, 10, PReciprocal), 1),
        ("p=4 p-reciprocal len 8", cat(&t4, 8, PReciprocal), 0),
    ];
    for (name, got, want) in &fixtures {
        ensure!(*got == BigUint::from(*want), "{name}: got {got}, want {want}");
    }
    Ok(format!("{} counts, {} listings", fixtures.len(), listings.len()))
}

fn criterion_3() -> Check {
    let mut n = 0;
    for p in [4, 6] {
        for c in enumerate_classes(g(p), 16) {
            let info = classify(&c).unwrap();
            if !info.is_reciprocal {
                continue;
            }
            let witnesses = reciprocator_witnesses(&c).map_err(|e| e.to_string())?;
            let inverse = c.to_word().inverse();
            for h in &witnesses {
                ensure!(h.multiply(h).unwrap().is_identity(), "p={p} {c}: witness {h} is not an involution");
                ensure!(c.to_word().conjugate_by(h).unwrap() == inverse, "p={p} {c}: witness {h} does not invert");
            }
            let types: BTreeSet<InvolutionType> = witnesses.iter().map(Word::involution_type).collect();
            ensure!(types == info.reciprocator_types, "p={p} {c}: {types:?} vs {:?}", info.reciprocator_types);
            n += 1;
        }
    }
    Ok(format!("{n} reciprocal classes agree"))
}

fn compositions_by_enumeration(x: u64, out: &mut BTreeMap<(u64, u64), u64>) {
    fn go(left: u64, parts: u64, largest: u64, out: &mut BTreeMap<(u64, u64), u64>) {
        if left == 0 {
            *out.entry((parts, largest)).or_default() += 1;
            return;
        }
        for a in 1..=left {
            go(left - a, parts + 1, largest.max(a), out);
        }
    }
    go(x, 0, 0, out);
}

fn criterion_4() -> Check {
    for x in 0..=14u64 {
        let mut shapes = BTreeMap::new();
        compositions_by_enumeration(x, &mut shapes);
        for n in 0..=x {
            let count = |r: u64| -> u64 { shapes.iter().filter(|((k, m), _)| *k == n && *m <= r).map(|(_, v)| v).sum() };
            ensure!(compositions(n, x) == BigUint::from(count(u64::MAX)), "compositions({n}, {x})");
            for r in 1..=5 {
                ensure!(bounded_compositions(n, r, x) == BigUint::from(count(r)), "bounded({n}, {r}, {x})");
            }
        }
    }
    for x in 2..=14u64 {
        for r in 2..=5 {
            ensure!(
                signed_syllable_sum(x as i64, r, Mode::Corrected) == signed_syllable_count(x, r),
                "corrected sum at x={x}, r={r}"
            );
        }
    }
    Ok("exhaustive for x <= 14".into())
}

fn criterion_5() -> Check {
    let rho = |r: u64| dominant_root(&build_growth_poly(r).unwrap(), 1e-12).map(|e| e.midpoint());
    let (r2, r3) = (rho(2).map_err(|e| e.to_string())?, rho(3).map_err(|e| e.to_string())?);
    ensure!((r2 - 1.618_033_988_7).abs() <= 1e-9, "rho(2) = {r2}");
    ensure!((r3 - 1.839_286_755_2).abs() <= 1e-9, "rho(3) = {r3}");
    for r in 2..=10 {
        let poly = build_growth_poly(r).unwrap();
        ensure!(poly.eval_int(&BigInt::from(2)) == BigInt::from(3), "p(2) for r={r}");
        ensure!(poly.eval_sqrt2().signum() < 0, "p(sqrt2) for r={r}");
        ensure!(squarefree_multiplicity(&poly).unwrap().1 == 1, "s for r={r}");
        if r <= 6 {
            let top = all_roots(&poly, 1e-10).unwrap().iter().map(|z| z.modulus()).fold(0.0, f64::max);
            let rho = rho(r).unwrap();
            ensure!(top <= rho + 1e-6, "max modulus {top} > rho {rho} for r={r}");
        }
    }
    Ok(format!("rho(2) = {r2:.10}, rho(3) = {r3:.10}"))
}

fn final_ratio(observed: Vec<BigInt>, r: u64, last_index: u64, extend_to: u64) -> f64 {
    let seq = recurrence_extend(&observed, r, (extend_to - last_index) as usize).unwrap();
    let n = seq.len();
    let (a, b) = (&seq[n - 1], &seq[n - 2]);
    // Both terms are far beyond f64 precision loss only in the low digits.
    a.to_string().parse::<f64>().unwrap() / b.to_string().parse::<f64>().unwrap()
}

fn criterion_6() -> Check {
    let mut notes = Vec::new();
    for (p, max_len) in [(6i64, 24u64), (4, 24)] {
        let table = census_with_threads(g(p), max_len, 0).unwrap();
        let r = (p / 2) as u64;
        let rho = dominant_root(&build_growth_poly(r).unwrap(), 1e-12).unwrap().midpoint();
        let mut families: Vec<(&str, Vec<u64>)> = vec![("even", (1..=max_len / 2).map(|l| 2 * l).collect())];
        if r % 2 == 0 {
            families.push(("odd", (2..=(max_len + 1) / 2).map(|l| 2 * l - 1).collect()));
        }
        for (name, lengths) in families {
            let observed: Vec<BigInt> =
                lengths.iter().map(|l| BigInt::from(table.row(*l).unwrap().reciprocal_total.clone())).collect();
            let first = if name == "even" { 1 } else { 2 };
            let last = first + observed.len() as u64 - 1;
            let ratio = final_ratio(observed, r, last, 80);
            ensure!((ratio - rho).abs() < 1e-6, "p={p} {name}: ratio {ratio} vs rho {rho}");
            notes.push(format!("p={p} {name} |ratio - rho| = {:.1e}", (ratio - rho).abs()));
        }
    }
    Ok(notes.join(", "))
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(name);
    let value: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&value).unwrap()
}

fn criterion_7() -> Check {
    let ledger_schema = schema("ledger.schema.json");
    let mut total = 0;
    for (p, required) in [(6i64, [("L2.6", "x", 3i64), ("L4.1.1", "l", 2)]), (4, [("L2.6", "x", 3), ("L4.7.1", "l", 4)])] {
        let ps = p.to_string();
        let text = hecke(&["claims", "--p", &ps, "--max-len", "20"])?;
        let ledger: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        ensure!(ledger_schema.is_valid(&ledger), "p={p}: ledger fails schema");
        let census: Value = serde_json::from_str(&hecke(&["census", "--p", &ps, "--max-len", "20"])?).unwrap();
        let row = |len: i64, col: &str| -> Option<String> {
            census["rows"].as_array()?.iter().find(|r| r["len"] == len).map(|r| r[col].as_str().unwrap().to_string())
        };
        let claims = ledger["claims"].as_array().unwrap();
        let ids: BTreeSet<&str> = claims.iter().map(|c| c["id"].as_str().unwrap()).collect();
        let want = applicable_ids(g(p), 20).unwrap();
        ensure!(want.iter().all(|id| ids.contains(id)), "p={p}: ids {ids:?} miss some of {want:?}");
        let mut keys = BTreeSet::new();
        for c in claims {
            ensure!(keys.insert((c["id"].to_string(), c["params"].to_string())), "p={p}: duplicate entry {c}");
            let col = match c["id"].as_str().unwrap() {
                "L3.3" => "symmetric",
                "L3.4" => "p_reciprocal",
                "L3.5" => "symmetric_p",
                "P3.6" | "L4.1.1" | "L4.1.2" | "L4.7.1" | "L4.7.2" | "L4.7.3" => "reciprocal_total",
                "L4.1.3" => match c["params"]["column"].as_str() {
                    Some("total") | None => "reciprocal_total",
                    Some(other) => other,
                },
                _ => continue,
            };
            if let Some(len) = c["params"]["len"].as_i64() {
                ensure!(row(len, col).as_deref() == c["observed"].as_str(), "p={p}: observed differs from census in {c}");
            }
        }
        for (id, key, value) in required {
            let hit = claims.iter().find(|c| c["id"] == id && c["params"][key] == value && c["params"]["mode"].as_str() != Some("corrected"));
            let c = hit.ok_or_else(|| format!("p={p}: no {id} entry with {key}={value}"))?;
            if id != "L2.6" {
                let len = c["params"]["len"].as_i64().unwrap();
                ensure!(row(len, "reciprocal_total").as_deref() == c["observed"].as_str(), "p={p}: {id} observed");
            }
        }
        total += claims.len();
    }
    Ok(format!("{total} entries, schema valid, observed values from census"))
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let single = hecke(&["census", "--p", "6", "--max-len", "24", "--threads", "1"])?;
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "single worker took {elapsed:?}");
    for t in ["2", "8"] {
        let other = hecke(&["census", "--p", "6", "--max-len", "24", "--threads", t])?;
        ensure!(other == single, "output with {t} workers differs");
    }
    let csv1 = hecke(&["census", "--p", "6", "--max-len", "24", "--threads", "1", "--format", "csv"])?;
    let csv8 = hecke(&["census", "--p", "6", "--max-len", "24", "--threads", "8", "--format", "csv"])?;
    ensure!(csv1 == csv8, "csv output differs across workers");
    Ok(format!("single worker in {:.2}s; 1/2/8 workers byte-identical", elapsed.as_secs_f64()))
}

fn criterion_9() -> Check {
    let mut findings = Vec::new();
    for p in [4, 6] {
        for len in 2..=14 {
            let generated = normal_form_generate(g(p), len).map_err(|e| e.to_string())?;
            for c in &generated {
                ensure!(c.inverse() == *c, "p={p} len={len}: {c} is not reciprocal");
            }
            let oracle: BTreeSet<_> = enumerate_classes(g(p), len)
                .filter(|c| c.word_length() == len && c.inverse() == *c)
                .collect();
            let missing = oracle.difference(&generated).count();
            if missing > 0 {
                findings.push(format!("p={p} len={len} missing {missing}"));
            }
        }
    }
    let note = if findings.is_empty() { "no completeness differences".to_string() } else { findings.join("; ") };
    Ok(format!("all generated classes reciprocal; {note}"))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Check, u64); 9] = [
        (1, "group-law property suite", criterion_1, 10),
        (2, "hand-verified census fixtures", criterion_2, 5),
        (3, "classification cross-validation", criterion_3, 30),
        (4, "composition layer", criterion_4, 5),
        (5, "spectral", criterion_5, 5),
        (6, "growth convergence", criterion_6, 5),
        (7, "claims ledger completeness", criterion_7, 120),
        (8, "performance and determinism", criterion_8, 300),
        (9, "normal-form soundness", criterion_9, 60),
    ];
    let mut failed = 0;
    for (n, title, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        let result = match result {
            Ok(d) if secs > budget as f64 => Err(format!("{d}; took {secs:.1}s, budget {budget}s")),
            other => other,
        };
        match result {
            Ok(detail) => println!("[PASS] criterion {n}: {title} ({secs:.2}s) {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {n}: {title} ({secs:.2}s) {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
