//! Reciprocity of conjugacy classes and the type of their reciprocators.
//!
//! A class with blocks `(k1, ..., kn)` has inverse class with blocks
//! `(-kn, ..., -k1)`. It is reciprocal when that reversed, negated sequence
//! is a rotation of the original. Each such rotation is a reflection of the
//! `2n`-cycle of syllables and fixes exactly two antipodal syllables; the
//! fixed syllables are `i` or `g^r` and name the two reciprocator families.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cyclic::CyclicWord;
use crate::error::{Error, Result};
use crate::params::GroupParams;
use crate::word::{InvolutionType, Syllable, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    NotReciprocal,
    /// Reciprocators conjugate to `i` only.
    Symmetric,
    /// Reciprocators conjugate to `g^r` only.
    PReciprocal,
    /// Both kinds occur.
    SymmetricPReciprocal,
}

/// Which reciprocator types occur, as a two-bit set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct TypeSet {
    pub iota: bool,
    pub tilde_gamma: bool,
}

impl TypeSet {
    pub fn insert(&mut self, t: InvolutionType) {
        match t {
            InvolutionType::IotaType => self.iota = true,
            InvolutionType::TildeGammaType => self.tilde_gamma = true,
            InvolutionType::NotInvolution => {}
        }
    }

    pub fn category(self) -> Category {
        match (self.iota, self.tilde_gamma) {
            (false, false) => Category::NotReciprocal,
            (true, false) => Category::Symmetric,
            (false, true) => Category::PReciprocal,
            (true, true) => Category::SymmetricPReciprocal,
        }
    }

    pub fn to_set(self) -> BTreeSet<InvolutionType> {
        let mut out = BTreeSet::new();
        if self.iota {
            out.insert(InvolutionType::IotaType);
        }
        if self.tilde_gamma {
            out.insert(InvolutionType::TildeGammaType);
        }
        out
    }
}

impl FromIterator<InvolutionType> for TypeSet {
    fn from_iter<I: IntoIterator<Item = InvolutionType>>(iter: I) -> Self {
        let mut s = TypeSet::default();
        for t in iter {
            s.insert(t);
        }
        s
    }
}

/// A syllable fixed by a reversal, by position in the canonical word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedSyllable {
    pub position: usize,
    pub kind: InvolutionType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReciprocalInfo {
    pub is_reciprocal: bool,
    pub category: Category,
    pub is_power_of_iota_tilde_gamma: bool,
    /// `m` when the class is `(i g^r)^m`.
    pub power_exponent: Option<usize>,
    pub reciprocator_types: BTreeSet<InvolutionType>,
    /// One involution per reciprocator family, found by coset search.
    pub witnesses: Vec<Word>,
    pub reflection_offsets: Vec<usize>,
}

/// Reversal offsets `t` on raw blocks: rotating `(-kn, ..., -k1)` left by
/// `t` blocks gives back `(k1, ..., kn)`.
pub fn reversal_offsets_of_blocks(params: GroupParams, blocks: &[i64]) -> Vec<usize> {
    let n = blocks.len();
    let revneg: Vec<i64> = blocks.iter().rev().map(|&k| params.canonical_exponent(-k)).collect();
    (0..n)
        .filter(|&t| (0..n).all(|i| revneg[(i + t) % n] == blocks[i]))
        .collect()
}

/// The two syllable positions fixed by the reversal at offset `t`.
fn fixed_positions(n: usize, t: usize) -> [usize; 2] {
    let first = n - t;
    [first % (2 * n), (first + n) % (2 * n)]
}

fn fixed_kind(params: GroupParams, blocks: &[i64], position: usize) -> Result<InvolutionType> {
    if position % 2 == 0 {
        return Ok(InvolutionType::IotaType);
    }
    let k = blocks[position / 2];
    if params.r().map(i64::from) == Some(k) {
        Ok(InvolutionType::TildeGammaType)
    } else {
        Err(Error::Internal(format!(
            "reversal fixes g^{k} at position {position}, which is not an involution"
        )))
    }
}

/// Reciprocator types of a block necklace; the census hot path.
pub fn classify_blocks(params: GroupParams, blocks: &[i64]) -> Result<TypeSet> {
    let n = blocks.len();
    let mut types = TypeSet::default();
    for t in reversal_offsets_of_blocks(params, blocks) {
        for pos in fixed_positions(n, t) {
            types.insert(fixed_kind(params, blocks, pos)?);
        }
    }
    Ok(types)
}

/// True when every block exponent is `r`, i.e. the class is `(i g^r)^n`.
pub fn is_power_of_iota_tilde_gamma(params: GroupParams, blocks: &[i64]) -> bool {
    match params.r() {
        Some(r) => !blocks.is_empty() && blocks.iter().all(|&k| k == i64::from(r)),
        None => false,
    }
}

fn require_hyperbolic(c: &CyclicWord) -> Result<()> {
    if c.is_torsion() {
        Err(Error::Torsion)
    } else {
        Ok(())
    }
}

pub fn reversal_offsets(c: &CyclicWord) -> Result<Vec<usize>> {
    require_hyperbolic(c)?;
    Ok(reversal_offsets_of_blocks(c.params(), c.blocks()))
}

pub fn is_reciprocal(c: &CyclicWord) -> Result<bool> {
    Ok(!reversal_offsets(c)?.is_empty())
}

pub fn reflection_fixed_syllables(c: &CyclicWord, t: usize) -> Result<[FixedSyllable; 2]> {
    if !reversal_offsets(c)?.contains(&t) {
        return Err(Error::InvalidOffset(t));
    }
    let [a, b] = fixed_positions(c.block_count(), t);
    Ok([
        FixedSyllable { position: a, kind: fixed_kind(c.params(), c.blocks(), a)? },
        FixedSyllable { position: b, kind: fixed_kind(c.params(), c.blocks(), b)? },
    ])
}

pub fn classify(c: &CyclicWord) -> Result<ReciprocalInfo> {
    let offsets = reversal_offsets(c)?;
    let types = classify_blocks(c.params(), c.blocks())?;
    let power = is_power_of_iota_tilde_gamma(c.params(), c.blocks());
    let witnesses = if offsets.is_empty() { Vec::new() } else { reciprocator_witnesses(c)? };
    Ok(ReciprocalInfo {
        is_reciprocal: !offsets.is_empty(),
        category: types.category(),
        is_power_of_iota_tilde_gamma: power,
        power_exponent: power.then_some(c.block_count()),
        reciprocator_types: types.to_set(),
        witnesses,
        reflection_offsets: offsets,
    })
}

/// Finds involutions conjugating `c` to its inverse by word arithmetic alone.
///
/// A rotation of the inverse word that reproduces `c` yields a conjugator
/// `h0`; every reciprocator lies in the coset `h0 <c0>` for the primitive
/// root `c0`, and the parity of the exponent splits the coset into the two
/// reciprocator families. Returns the shortest involution from each family.
pub fn reciprocator_witnesses(c: &CyclicWord) -> Result<Vec<Word>> {
    require_hyperbolic(c)?;
    let params = c.params();
    let word = c.to_word();
    let inv = word.inverse();
    let target = word.syllables();
    let src = inv.syllables();
    let len = src.len();
    let q = (0..len)
        .find(|&q| (0..len).all(|i| src[(i + q) % len] == target[i]))
        .ok_or_else(|| Error::Domain(format!("class {c} is not reciprocal")))?;
    let h0 = Word::reduce(params, src[..q].iter().copied());
    if word.conjugate_by(&h0)? != inv {
        return Err(Error::Internal(format!("rotation conjugator fails for {c}")));
    }

    let (root, _) = c.primitive_decomposition()?;
    let root = root.to_word();
    let root_inv = root.inverse();
    let bound = 2 * c.block_count() as i64;
    let mut best: [Option<Word>; 2] = [None, None];
    for j in -bound..=bound {
        let step = if j >= 0 { &root } else { &root_inv };
        let h = h0.multiply(&step.pow(j.unsigned_abs() as u32))?;
        if !h.multiply(&h)?.is_identity() || word.conjugate_by(&h)? != inv {
            continue;
        }
        let slot = &mut best[j.rem_euclid(2) as usize];
        let better = match slot {
            None => true,
            Some(cur) => shortlex(&h, cur) == std::cmp::Ordering::Less,
        };
        if better {
            *slot = Some(h);
        }
    }
    let [even, odd] = best;
    let mut out = match (even, odd) {
        (Some(a), Some(b)) => vec![a, b],
        _ => {
            return Err(Error::Internal(format!(
                "coset search found no involution in one family for {c}"
            )))
        }
    };
    out.sort_by(shortlex);
    Ok(out)
}

fn shortlex(a: &Word, b: &Word) -> std::cmp::Ordering {
    a.word_length()
        .cmp(&b.word_length())
        .then_with(|| a.syllables().cmp(b.syllables()))
}

/// Reciprocator types as seen by the coset search.
pub fn witness_types(c: &CyclicWord) -> Result<TypeSet> {
    Ok(reciprocator_witnesses(c)?.iter().map(Word::involution_type).collect())
}

/// All classes of the given word length having one of the normal-form
/// shapes, deduplicated by class key:
///
/// * `i g^k1 ... i g^kn i g^-kn ... i g^-k1`
/// * `i g^r i g^k1 ... i g^kn i g^r i g^-kn ... i g^-k1`
/// * `i g^r i g^k1 ... i g^kn i g^-kn ... i g^-k1` and the variant with `g^r`
///   in the middle
/// * `(i g^r)^m`
pub fn normal_form_generate(params: GroupParams, length: u64) -> Result<BTreeSet<CyclicWord>> {
    let r = i64::from(params.require_r()?);
    if length < 2 {
        return Err(Error::Domain(format!("normal forms need length >= 2, got {length}")));
    }
    let alphabet = params.exponent_alphabet();
    let rw = (r + 1) as u64;
    let mut out = BTreeSet::new();
    let mut emit = |blocks: Vec<i64>| {
        out.insert(CyclicWord::from_blocks(params, &blocks));
    };
    let mirror = |ks: &[i64]| -> Vec<i64> { ks.iter().rev().map(|&k| -k).collect() };

    if length % 2 == 0 {
        for ks in tuples_of_weight(&alphabet, length / 2) {
            if ks.is_empty() {
                continue;
            }
            let mut b = ks.clone();
            b.extend(mirror(&ks));
            emit(b);
        }
        if length >= 2 * rw {
            for ks in tuples_of_weight(&alphabet, (length - 2 * rw) / 2) {
                let mut b = vec![r];
                b.extend_from_slice(&ks);
                b.push(r);
                b.extend(mirror(&ks));
                emit(b);
            }
        }
    }
    if length >= rw && (length - rw) % 2 == 0 {
        for ks in tuples_of_weight(&alphabet, (length - rw) / 2) {
            let mut a = vec![r];
            a.extend_from_slice(&ks);
            a.extend(mirror(&ks));
            emit(a);
            let mut b = ks.clone();
            b.push(r);
            b.extend(mirror(&ks));
            emit(b);
        }
    }
    if length % rw == 0 {
        emit(vec![r; (length / rw) as usize]);
    }
    Ok(out)
}

/// Exponent tuples with `sum(|k| + 1) == weight`, in alphabet order.
fn tuples_of_weight(alphabet: &[i64], weight: u64) -> Vec<Vec<i64>> {
    fn go(alphabet: &[i64], left: u64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for &k in alphabet {
            let w = k.unsigned_abs() + 1;
            if w <= left {
                cur.push(k);
                go(alphabet, left - w, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(alphabet, weight, &mut Vec::new(), &mut out);
    out
}

/// Syllable view of a fixed position, for diagnostics.
pub fn syllable_at(c: &CyclicWord, position: usize) -> Option<Syllable> {
    c.syllables().get(position).copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use InvolutionType::*;

    fn g(p: i64) -> GroupParams {
        GroupParams::new(p).unwrap()
    }

    fn key(p: i64, s: &str) -> CyclicWord {
        Word::parse(g(p), s).unwrap().class_key()
    }

    #[test]
    fn reversal_offset_examples() {
        assert!(reversal_offsets(&key(4, "i g i g^-1")).unwrap().contains(&0));
        assert!(reversal_offsets(&key(4, "i g")).unwrap().is_empty());
        assert!(!reversal_offsets(&key(6, "i g^3")).unwrap().is_empty());
        assert_eq!(reversal_offsets(&key(4, "g^2")), Err(Error::Torsion));
    }

    #[test]
    fn is_reciprocal_examples() {
        assert!(is_reciprocal(&key(4, "i g i g^-1")).unwrap());
        assert!(!is_reciprocal(&key(4, "i g i g")).unwrap());
        assert!(is_reciprocal(&key(4, "i g^2 i g^2")).unwrap());
    }

    #[test]
    fn fixed_syllable_examples() {
        let kinds = |p, s: &str| -> Vec<[InvolutionType; 2]> {
            let c = key(p, s);
            reversal_offsets(&c)
                .unwrap()
                .into_iter()
                .map(|t| reflection_fixed_syllables(&c, t).unwrap().map(|f| f.kind))
                .collect()
        };
        assert!(kinds(4, "i g i g^-1").iter().all(|k| k == &[IotaType, IotaType]));
        assert_eq!(kinds(4, "i g^2 i g i g^2 i g^-1"), vec![[TildeGammaType, TildeGammaType]]);

        // Canonical rotation is i g i g^-1 i g^2.
        let c = key(4, "i g^2 i g i g^-1");
        let t = reversal_offsets(&c).unwrap()[0];
        let mut fixed = reflection_fixed_syllables(&c, t).unwrap().to_vec();
        fixed.sort_by_key(|f| f.position);
        assert_eq!(fixed.iter().map(|f| f.position).collect::<Vec<_>>(), [2, 5]);
        assert_eq!(fixed.iter().map(|f| f.kind).collect::<Vec<_>>(), [IotaType, TildeGammaType]);
        assert_eq!(syllable_at(&c, 5), Some(Syllable::Gamma(2)));

        assert_eq!(reflection_fixed_syllables(&c, 7), Err(Error::InvalidOffset(7)));
        let plain = key(4, "i g i g");
        assert_eq!(reflection_fixed_syllables(&plain, 0), Err(Error::InvalidOffset(0)));
    }

    #[test]
    fn classify_examples() {
        let sym = classify(&key(4, "i g i g^-1")).unwrap();
        assert_eq!(sym.category, Category::Symmetric);
        assert_eq!(sym.reciprocator_types, [IotaType].into());

        let prec = classify(&key(4, "i g^2 i g i g^2 i g^-1")).unwrap();
        assert_eq!(prec.category, Category::PReciprocal);
        assert!(!prec.is_power_of_iota_tilde_gamma);

        let pow = classify(&key(4, "i g^2")).unwrap();
        assert_eq!(pow.category, Category::SymmetricPReciprocal);
        assert_eq!(pow.power_exponent, Some(1));
        assert_eq!(pow.reciprocator_types, [IotaType, TildeGammaType].into());

        let non = classify(&key(4, "i g i g")).unwrap();
        assert_eq!(non.category, Category::NotReciprocal);
        assert!(non.witnesses.is_empty());
        assert_eq!(classify(&key(4, "i")), Err(Error::Torsion));
    }

    #[test]
    fn witness_examples() {
        let p4 = g(4);
        let show = |s: &str| -> Vec<String> {
            reciprocator_witnesses(&key(4, s)).unwrap().iter().map(|w| w.to_string()).collect()
        };
        assert_eq!(show("i g i g^-1"), vec!["i", "g i g^-1"]);
        assert_eq!(show("i g^2"), vec!["i", "g^2"]);
        let ws = reciprocator_witnesses(&key(4, "i g^2 i g i g^-1")).unwrap();
        let types: BTreeSet<_> = ws.iter().map(Word::involution_type).collect();
        assert_eq!(types, [IotaType, TildeGammaType].into());
        for w in &ws {
            assert!(w.multiply(w).unwrap().is_identity());
            assert_eq!(w.params(), p4);
        }
        assert!(matches!(reciprocator_witnesses(&key(4, "i g i g")), Err(Error::Domain(_))));
    }

    #[test]
    fn normal_form_examples() {
        let show = |p, len| -> Vec<String> {
            normal_form_generate(g(p), len).unwrap().iter().map(|c| c.to_string()).collect()
        };
        assert_eq!(show(4, 4), vec!["i g i g^-1"]);
        assert_eq!(show(4, 3), vec!["i g^2"]);
        assert!(show(4, 10).contains(&key(4, "i g^2 i g i g^2 i g^-1").to_string()));
        assert_eq!(
            key(4, "i g^2 i g^-1 i g^2 i g"),
            key(4, "i g^2 i g i g^2 i g^-1")
        );
        assert_eq!(normal_form_generate(g(5), 4), Err(Error::OddOrder(5)));
    }
}
