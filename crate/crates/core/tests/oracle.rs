//! Independent brute-force oracle: every reduced word up to a length bound is
//! generated, cyclically reduced and deduplicated by a rotation-minimal key
//! with plain integer ordering. Reciprocator types are found by trying
//! conjugators `u s u^-1` built from word prefixes and checking the
//! conjugation by direct arithmetic.

use std::collections::{BTreeMap, HashSet};

use hecke_core::{census, GroupParams};
use num_bigint::BigUint;

/// `0` is the involution `i`; any other value `k` is `g^k`.
type W = Vec<i64>;

fn canon(p: i64, k: i64) -> i64 {
    let m = k.rem_euclid(p);
    if 2 * m > p {
        m - p
    } else {
        m
    }
}

fn reduce(p: i64, seq: impl IntoIterator<Item = i64>) -> W {
    let mut out: W = Vec::new();
    for raw in seq {
        let s = if raw == 0 {
            0
        } else {
            match canon(p, raw) {
                0 => continue,
                c => c,
            }
        };
        match out.last().copied() {
            Some(0) if s == 0 => {
                out.pop();
            }
            Some(a) if a != 0 && s != 0 => {
                out.pop();
                let c = canon(p, a + s);
                if c != 0 {
                    out.push(c);
                }
            }
            _ => out.push(s),
        }
    }
    out
}

fn inv(p: i64, w: &[i64]) -> W {
    w.iter().rev().map(|&s| if s == 0 { 0 } else { canon(p, -s) }).collect()
}

fn mul(p: i64, parts: &[&[i64]]) -> W {
    reduce(p, parts.iter().flat_map(|w| w.iter().copied()))
}

fn len(w: &[i64]) -> u64 {
    w.iter().map(|&s| if s == 0 { 1 } else { s.unsigned_abs() }).sum()
}

fn cyclic_reduce(p: i64, w: &[i64]) -> W {
    let mut w = w.to_vec();
    loop {
        if w.len() < 2 {
            return w;
        }
        let (a, b) = (w[0], w[w.len() - 1]);
        if a == 0 && b == 0 {
            w = w[1..w.len() - 1].to_vec();
        } else if a != 0 && b != 0 {
            let mut inner = w[1..w.len() - 1].to_vec();
            let c = canon(p, a + b);
            if c != 0 {
                inner.push(c);
            }
            w = reduce(p, inner);
        } else {
            return w;
        }
    }
}

fn key(w: &[i64]) -> W {
    (0..w.len())
        .map(|i| w[i..].iter().chain(&w[..i]).copied().collect::<W>())
        .min()
        .unwrap_or_default()
}

/// Every reduced word with word length `<= max_len`.
fn all_words(p: i64, max_len: u64) -> Vec<W> {
    let exps: Vec<i64> = (1..p).map(|k| canon(p, k)).collect();
    let mut out = vec![Vec::new()];
    let mut stack: Vec<W> = vec![Vec::new()];
    while let Some(w) = stack.pop() {
        let mut grow = |s: i64| {
            let mut v = w.clone();
            v.push(s);
            if len(&v) <= max_len {
                out.push(v.clone());
                stack.push(v);
            }
        };
        match w.last() {
            Some(0) => exps.iter().for_each(|&k| grow(k)),
            Some(_) => grow(0),
            None => {
                grow(0);
                exps.iter().for_each(|&k| grow(k));
            }
        }
    }
    out
}

#[derive(Default, Debug, Clone, PartialEq, Eq)]
struct Row {
    symmetric: u64,
    p_reciprocal: u64,
    symmetric_p: u64,
    power: u64,
    total: u64,
    all: u64,
}

fn reciprocator_types(p: i64, w: &[i64]) -> (bool, bool) {
    let target = inv(p, w);
    let mut found = (false, false);
    let doubled: W = w.iter().chain(w).copied().collect();
    for cut in 0..=doubled.len() {
        let u = reduce(p, doubled[..cut].iter().copied());
        let ui = inv(p, &u);
        let mut kinds = vec![(0i64, 0usize)];
        if p % 2 == 0 {
            kinds.push((p / 2, 1));
        }
        for (s, slot) in kinds {
            let h = mul(p, &[&u, &[s], &ui]);
            if mul(p, &[&h, w, &h]) == target {
                if slot == 0 {
                    found.0 = true;
                } else {
                    found.1 = true;
                }
            }
        }
    }
    found
}

fn oracle(p: i64, max_len: u64) -> BTreeMap<u64, Row> {
    let mut seen: HashSet<W> = HashSet::new();
    let mut rows: BTreeMap<u64, Row> = (2..=max_len).map(|l| (l, Row::default())).collect();
    for w in all_words(p, max_len) {
        let c = cyclic_reduce(p, &w);
        if c.len() < 2 {
            continue;
        }
        let k = key(&c);
        if !seen.insert(k.clone()) {
            continue;
        }
        let row = rows.get_mut(&len(&k)).expect("length in range");
        row.all += 1;
        if key(&inv(p, &k)) != k {
            continue;
        }
        row.total += 1;
        match reciprocator_types(p, &k) {
            (true, false) => row.symmetric += 1,
            (false, true) => row.p_reciprocal += 1,
            (true, true) => row.symmetric_p += 1,
            (false, false) => panic!("reciprocal class {k:?} without a reciprocator"),
        }
        let r = p / 2;
        if p % 2 == 0 && k.chunks(2).all(|b| b == [0, r]) {
            row.power += 1;
        }
    }
    rows
}

fn check(p: i64, max_len: u64) {
    let table = census(GroupParams::new(p).unwrap(), max_len).unwrap();
    let expected = oracle(p, max_len);
    assert!(expected.values().map(|r| r.total).sum::<u64>() > 0);
    if p % 2 == 0 {
        assert!(expected.values().map(|r| r.p_reciprocal).sum::<u64>() > 0);
    }
    for (l, want) in expected {
        let got = table.row(l).unwrap();
        let n = |v: &BigUint| u64::try_from(v).unwrap();
        let have = Row {
            symmetric: n(&got.symmetric),
            p_reciprocal: n(&got.p_reciprocal),
            symmetric_p: n(&got.symmetric_p),
            power: n(&got.power),
            total: n(&got.reciprocal_total),
            all: n(&got.all_classes),
        };
        assert_eq!(have, want, "p={p} length {l}");
    }
}

#[test]
fn reducer_sanity() {
    assert_eq!(reduce(4, [0, 0]), W::new());
    assert_eq!(reduce(4, [1, 1]), vec![2]);
    assert_eq!(reduce(4, [3]), vec![-1]);
    assert_eq!(reduce(4, [1, 3]), W::new());
    assert_eq!(reduce(4, [0, 4, 0]), W::new());
    assert_eq!(cyclic_reduce(4, &[1, 0, 1]), vec![0, 2]);
    assert_eq!(key(&[2, 0, 1, 0]), vec![0, 1, 0, 2]);
}

#[test]
fn census_matches_oracle_p4() {
    check(4, 16);
}

#[test]
fn census_matches_oracle_p6() {
    check(6, 14);
}

#[test]
fn census_matches_oracle_odd_p() {
    check(3, 12);
    check(5, 11);
}

#[test]
fn census_matches_oracle_p8() {
    check(8, 14);
}
