//! Finite-prefix versions of the stammering conditions: `T` scales of
//! prefixes `V^w` (offset zero), or of prefixes `U V^w` with `|U| / |V|`
//! bounded by `w'`.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::detect::{detect_repetitions, Witness};
use crate::error::{Error, Result};
use crate::words::{Exponent, Letter, WordStream};

/// Number of witness scales required when none is given.
pub const DEFAULT_SCALES: usize = 5;

/// Smallest `w` a detected repetition needs when none is given.
pub const DEFAULT_MIN_W: (u64, u64) = (11, 10);

/// Periods below this carry no information about the infinite word: any
/// long word has short squares somewhere near its start. Defaults to
/// `floor(sqrt(prefix_len))`.
pub fn default_min_scale(prefix_len: usize) -> usize {
    prefix_len.isqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanParams {
    /// `T`, the number of distinct periods required.
    pub scales: usize,
    pub min_w: Exponent,
    /// Largest `|U| / |V|` considered by the `(w, w')` scan.
    pub max_wprime: Exponent,
    /// Witnesses with `s` below this are ignored by both conditions.
    pub min_scale: usize,
}

impl ScanParams {
    pub fn for_prefix(prefix_len: usize) -> Self {
        ScanParams {
            scales: DEFAULT_SCALES,
            min_w: Ratio::new(DEFAULT_MIN_W.0, DEFAULT_MIN_W.1),
            max_wprime: Ratio::from_integer(1),
            min_scale: default_min_scale(prefix_len),
        }
    }
}

/// A point `(w, w')`: `T` scales with exponent at least `w` and offset ratio
/// at most `w'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentPair {
    pub w: Exponent,
    pub w_prime: Exponent,
}

impl Serialize for ExponentPair {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ExponentPair", 4)?;
        st.serialize_field("w_num", self.w.numer())?;
        st.serialize_field("w_den", self.w.denom())?;
        st.serialize_field("w_prime_num", self.w_prime.numer())?;
        st.serialize_field("w_prime_den", self.w_prime.denom())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConditionReport {
    /// Witnesses behind the reported exponent, one per `s`, increasing `s`.
    pub witnesses: Vec<Witness>,
    pub star_w: Option<Exponent>,
    /// Preferred pair: largest `w`, then smallest `w'`.
    pub starstar: Option<ExponentPair>,
    /// Every pair not beaten in both coordinates, increasing in both.
    pub frontier: Vec<ExponentPair>,
    pub scales: usize,
    pub min_scale: usize,
    pub prefix_len: usize,
}

fn check_scan(prefix_len: usize, params: &ScanParams) -> Result<()> {
    let (scales, min_w) = (params.scales, params.min_w);
    if prefix_len < 10 {
        return Err(Error::InvalidParameter(format!(
            "prefix length must be >= 10, got {prefix_len}"
        )));
    }
    if scales < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 scales, got {scales}"
        )));
    }
    if min_w <= Ratio::from_integer(1) {
        return Err(Error::InvalidParameter(format!(
            "min_w must exceed 1, got {min_w}"
        )));
    }
    Ok(())
}

/// The `t`-th largest key of a multiset stored as value counts.
fn kth_largest(counts: &BTreeMap<Exponent, usize>, t: usize) -> Option<Exponent> {
    let mut seen = 0;
    for (&w, &c) in counts.iter().rev() {
        seen += c;
        if seen >= t {
            return Some(w);
        }
    }
    None
}

/// Offset-zero analysis of precomputed witnesses.
pub fn star_from_witnesses(
    witnesses: &[Witness],
    prefix_len: usize,
    scales: usize,
    min_scale: usize,
) -> ConditionReport {
    let zero: Vec<Witness> = witnesses
        .iter()
        .filter(|w| w.r == 0 && w.s >= min_scale)
        .copied()
        .collect();
    let mut counts = BTreeMap::new();
    for w in &zero {
        *counts.entry(w.w).or_insert(0) += 1;
    }
    let star_w = kth_largest(&counts, scales);
    let kept = match star_w {
        Some(sw) => zero.into_iter().filter(|w| w.w >= sw).collect(),
        None => Vec::new(),
    };
    ConditionReport {
        witnesses: kept,
        star_w,
        scales,
        min_scale,
        prefix_len,
        ..Default::default()
    }
}

/// `(w, w')` analysis of precomputed witnesses with `r / s <= max_wprime`.
pub fn star_star_from_witnesses(
    witnesses: &[Witness],
    prefix_len: usize,
    params: &ScanParams,
) -> ConditionReport {
    let (scales, min_scale) = (params.scales, params.min_scale);
    let witnesses: Vec<Witness> = witnesses
        .iter()
        .filter(|w| w.s >= min_scale && w.offset_ratio() <= params.max_wprime)
        .copied()
        .collect();
    let mut by_ratio: Vec<&Witness> = witnesses.iter().collect();
    by_ratio.sort_by_key(|w| w.offset_ratio());

    let mut best_at_s: BTreeMap<usize, Exponent> = BTreeMap::new();
    let mut counts: BTreeMap<Exponent, usize> = BTreeMap::new();
    let mut frontier: Vec<ExponentPair> = Vec::new();
    let mut i = 0;
    while i < by_ratio.len() {
        let ratio = by_ratio[i].offset_ratio();
        while i < by_ratio.len() && by_ratio[i].offset_ratio() == ratio {
            let wit = by_ratio[i];
            let old = best_at_s.get(&wit.s).copied();
            if old.is_none_or(|o| wit.w > o) {
                if let Some(o) = old {
                    let c = counts.get_mut(&o).expect("counted");
                    *c -= 1;
                    if *c == 0 {
                        counts.remove(&o);
                    }
                }
                best_at_s.insert(wit.s, wit.w);
                *counts.entry(wit.w).or_insert(0) += 1;
            }
            i += 1;
        }
        if let Some(w) = kth_largest(&counts, scales) {
            if frontier.last().is_none_or(|p| w > p.w) {
                frontier.push(ExponentPair { w, w_prime: ratio });
            }
        }
    }

    let starstar = frontier.last().copied();
    let kept = match starstar {
        Some(p) => witnesses_for(&witnesses, p),
        None => Vec::new(),
    };
    ConditionReport {
        witnesses: kept,
        starstar,
        frontier,
        scales,
        min_scale,
        prefix_len,
        ..Default::default()
    }
}

/// For each `s`, the largest-exponent witness meeting the pair.
pub fn witnesses_for(witnesses: &[Witness], pair: ExponentPair) -> Vec<Witness> {
    let mut per_s: BTreeMap<usize, Witness> = BTreeMap::new();
    for w in witnesses
        .iter()
        .filter(|w| w.w >= pair.w && w.offset_ratio() <= pair.w_prime)
    {
        per_s
            .entry(w.s)
            .and_modify(|cur| {
                if w.w > cur.w {
                    *cur = *w;
                }
            })
            .or_insert(*w);
    }
    per_s.into_values().collect()
}

fn read_prefix(word: &mut WordStream, prefix_len: usize) -> Result<Vec<Letter>> {
    Ok(word.take_prefix(prefix_len)?.into_vec())
}

/// Offset-zero condition on the first `prefix_len` letters of `word`, with
/// the default minimum scale.
pub fn condition_star(
    word: WordStream,
    prefix_len: usize,
    scales: usize,
    min_w: Exponent,
) -> Result<ConditionReport> {
    let params = ScanParams {
        scales,
        min_w,
        ..ScanParams::for_prefix(prefix_len)
    };
    condition_star_with(word, prefix_len, &params)
}

pub fn condition_star_with(
    mut word: WordStream,
    prefix_len: usize,
    params: &ScanParams,
) -> Result<ConditionReport> {
    check_scan(prefix_len, params)?;
    let prefix = read_prefix(&mut word, prefix_len)?;
    let found = detect_repetitions(&prefix, 0, params.min_w);
    Ok(star_from_witnesses(
        &found,
        prefix_len,
        params.scales,
        params.min_scale,
    ))
}

/// Largest offset worth scanning: `r <= w' s` and `r + min_w s <= n` give
/// `r <= w' n / (min_w + w')`.
pub fn offset_bound(prefix_len: usize, min_w: Exponent, max_wprime: Exponent) -> usize {
    let n = Ratio::from_integer(prefix_len as u64);
    let bound = (max_wprime * n / (min_w + max_wprime)).to_integer() as usize;
    bound.min(prefix_len.saturating_sub(1))
}

/// `(w, w')` condition on the first `prefix_len` letters of `word`, with the
/// default minimum scale.
pub fn condition_star_star(
    word: WordStream,
    prefix_len: usize,
    scales: usize,
    min_w: Exponent,
    max_wprime: Exponent,
) -> Result<ConditionReport> {
    let params = ScanParams {
        scales,
        min_w,
        max_wprime,
        ..ScanParams::for_prefix(prefix_len)
    };
    condition_star_star_with(word, prefix_len, &params)
}

pub fn condition_star_star_with(
    mut word: WordStream,
    prefix_len: usize,
    params: &ScanParams,
) -> Result<ConditionReport> {
    check_scan(prefix_len, params)?;
    let prefix = read_prefix(&mut word, prefix_len)?;
    let max_r = offset_bound(prefix_len, params.min_w, params.max_wprime);
    let found = detect_repetitions(&prefix, max_r, params.min_w);
    Ok(star_star_from_witnesses(&found, prefix_len, params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::FiniteWord;

    fn stream(v: Vec<Letter>) -> WordStream {
        WordStream::from_word(FiniteWord::new(v).unwrap())
    }

    #[test]
    fn periodic_word_has_huge_exponents() {
        let v: Vec<Letter> = (0..64).map(|i| 1 + (i % 2) as Letter).collect();
        let rep = condition_star(stream(v), 64, 3, Ratio::new(3, 2)).unwrap();
        assert!(rep.star_w.unwrap() >= Ratio::from_integer(5));
        assert!(rep.witnesses.iter().all(|w| w.r == 0));
        assert!(rep.witnesses.windows(2).all(|p| p[0].s < p[1].s));
    }

    #[test]
    fn too_few_scales_leaves_star_absent() {
        let rep = condition_star(
            stream(vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 1]),
            11,
            3,
            Ratio::new(11, 10),
        )
        .unwrap();
        assert_eq!(rep.star_w, None);
        assert!(rep.witnesses.is_empty());
    }

    #[test]
    fn offset_zero_pairs_have_zero_w_prime() {
        let v: Vec<Letter> = (0..40).map(|i| 1 + (i % 3) as Letter).collect();
        let rep =
            condition_star_star(stream(v), 40, 3, Ratio::new(3, 2), Ratio::new(1, 2)).unwrap();
        assert_eq!(rep.starstar.unwrap().w_prime, Ratio::from_integer(0));
    }

    #[test]
    fn frontier_is_increasing() {
        let ws = vec![
            Witness {
                r: 0,
                s: 1,
                w: Ratio::new(2, 1),
            },
            Witness {
                r: 0,
                s: 2,
                w: Ratio::new(3, 2),
            },
            Witness {
                r: 0,
                s: 3,
                w: Ratio::new(4, 3),
            },
            Witness {
                r: 1,
                s: 4,
                w: Ratio::new(3, 1),
            },
            Witness {
                r: 2,
                s: 5,
                w: Ratio::new(3, 1),
            },
            Witness {
                r: 1,
                s: 6,
                w: Ratio::new(2, 1),
            },
        ];
        let params = ScanParams {
            scales: 3,
            min_scale: 1,
            ..ScanParams::for_prefix(100)
        };
        let rep = star_star_from_witnesses(&ws, 100, &params);
        let pairs: Vec<(Exponent, Exponent)> =
            rep.frontier.iter().map(|p| (p.w, p.w_prime)).collect();
        assert_eq!(
            pairs,
            [
                (Ratio::new(4, 3), Ratio::from_integer(0)),
                (Ratio::new(3, 2), Ratio::new(1, 6)),
                (Ratio::from_integer(2), Ratio::new(1, 4)),
            ]
        );
        // s = 5 raises a third scale to w = 3 only together with a fourth.
        assert_eq!(
            rep.starstar,
            Some(ExponentPair {
                w: Ratio::from_integer(2),
                w_prime: Ratio::new(1, 4)
            })
        );
        assert_eq!(
            rep.witnesses.iter().map(|w| w.s).collect::<Vec<_>>(),
            [1, 4, 6]
        );
    }

    #[test]
    fn parameter_checks() {
        let v: Vec<Letter> = vec![1; 20];
        assert!(condition_star(stream(v.clone()), 9, 3, Ratio::new(3, 2)).is_err());
        assert!(condition_star(stream(v.clone()), 20, 2, Ratio::new(3, 2)).is_err());
        assert!(condition_star(stream(v), 20, 3, Ratio::from_integer(1)).is_err());
    }
}
