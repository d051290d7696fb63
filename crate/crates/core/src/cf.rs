//! Exact continued-fraction arithmetic: convergents, continuants, value
//! brackets and growth-rate estimates for `[0; a_1, a_2, ...]`.

use std::f64::consts::LN_2;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{FiniteWord, Letter, WordStream};

/// Words at least this long go through the product-tree continuant.
pub const PRODUCT_TREE_THRESHOLD: usize = 10_000;

/// Partial quotients of `[0; a_1, a_2, ...]`.
#[derive(Debug)]
pub struct CfExpansion {
    quotients: WordStream,
}

impl CfExpansion {
    pub fn new(quotients: WordStream) -> Self {
        CfExpansion { quotients }
    }

    /// `[0; pre, period, period, ...]`.
    pub fn periodic(preperiod: &[Letter], period: &[Letter]) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidParameter("period must be non-empty".into()));
        }
        if let Some(&z) = preperiod.iter().chain(period).find(|&&a| a == 0) {
            return Err(Error::ZeroLetter(z));
        }
        let pre = preperiod.to_vec();
        let per = period.to_vec();
        let mut i = 0usize;
        Ok(CfExpansion::new(WordStream::from_fn(move || {
            let a = if i < pre.len() {
                pre[i]
            } else {
                per[(i - pre.len()) % per.len()]
            };
            i += 1;
            Ok(Some(a))
        })))
    }

    /// `[0; 1, 1, 1, ...] = (sqrt(5) - 1) / 2`.
    pub fn golden() -> Self {
        CfExpansion::periodic(&[], &[1]).expect("valid pattern")
    }

    /// A finite (rational) expansion.
    pub fn from_word(word: FiniteWord) -> Self {
        CfExpansion::new(WordStream::from_word(word))
    }

    pub fn next_quotient(&mut self) -> Result<Letter> {
        match self.quotients.next_letter()? {
            0 => Err(Error::ZeroLetter(0)),
            a => Ok(a),
        }
    }

    /// Convergents `p_l / q_l` for `l = 0, 1, 2, ...`.
    pub fn convergent_iter(self) -> ConvergentIter {
        ConvergentIter::new(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub index: usize,
    pub p: BigUint,
    pub q: BigUint,
}

/// Walks the recurrence `p_l = a_l p_{l-1} + p_{l-2}` (same for `q`) seeded
/// with `(p_0, q_0) = (0, 1)` and `(p_{-1}, q_{-1}) = (1, 0)`.
#[derive(Debug)]
pub struct ConvergentIter {
    cf: CfExpansion,
    prev: (BigUint, BigUint),
    cur: (BigUint, BigUint),
    index: usize,
    started: bool,
}

impl ConvergentIter {
    pub fn new(cf: CfExpansion) -> Self {
        ConvergentIter {
            cf,
            prev: (BigUint::one(), BigUint::zero()),
            cur: (BigUint::zero(), BigUint::one()),
            index: 0,
            started: false,
        }
    }

    /// Next convergent, or the stream error (exhaustion means the expansion
    /// was rational and has ended).
    pub fn advance(&mut self) -> Result<Convergent> {
        if !self.started {
            self.started = true;
        } else {
            let a = BigUint::from(self.cf.next_quotient()?);
            let p = &a * &self.cur.0 + &self.prev.0;
            let q = &a * &self.cur.1 + &self.prev.1;
            self.prev = std::mem::replace(&mut self.cur, (p, q));
            self.index += 1;
        }
        Ok(Convergent {
            index: self.index,
            p: self.cur.0.clone(),
            q: self.cur.1.clone(),
        })
    }

    /// Index of the most recent convergent.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn current_q(&self) -> &BigUint {
        &self.cur.1
    }
}

/// Convergents `l = 0..=len`.
pub fn convergents(cf: CfExpansion, len: usize) -> Result<Vec<Convergent>> {
    if len == 0 {
        return Err(Error::InvalidParameter(
            "need at least one partial quotient".into(),
        ));
    }
    let mut iter = cf.convergent_iter();
    (0..=len).map(|_| iter.advance()).collect()
}

/// Lazily extended table of convergents of a fixed expansion; index `-1` is
/// available as `(1, 0)`.
#[derive(Debug)]
pub struct ConvergentTable {
    iter: ConvergentIter,
    quotients: Vec<Letter>,
    table: Vec<(BigUint, BigUint)>,
}

impl ConvergentTable {
    pub fn new(cf: CfExpansion) -> Self {
        ConvergentTable {
            iter: cf.convergent_iter(),
            quotients: Vec::new(),
            table: Vec::new(),
        }
    }

    fn fill(&mut self, index: usize) -> Result<()> {
        while self.table.len() <= index {
            let c = self.iter.advance()?;
            if c.index > 0 {
                // recover a_l from q_l = a_l q_{l-1} + q_{l-2}
                let q_prev = &self.table[c.index - 1].1;
                let q_prev2 = if c.index >= 2 {
                    self.table[c.index - 2].1.clone()
                } else {
                    BigUint::zero()
                };
                let a = (&c.q - q_prev2) / q_prev;
                self.quotients.push(letter_of(&a));
            }
            self.table.push((c.p, c.q));
        }
        Ok(())
    }

    /// `(p_l, q_l)`.
    pub fn get(&mut self, index: usize) -> Result<(&BigUint, &BigUint)> {
        self.fill(index)?;
        let (p, q) = &self.table[index];
        Ok((p, q))
    }

    /// `(p_l, q_l)` with `l = -1` allowed.
    pub fn get_signed(&mut self, index: isize) -> Result<(BigUint, BigUint)> {
        if index < 0 {
            return Ok((BigUint::one(), BigUint::zero()));
        }
        let (p, q) = self.get(index as usize)?;
        Ok((p.clone(), q.clone()))
    }

    /// Partial quotient `a_l`, `l >= 1`.
    pub fn quotient(&mut self, index: usize) -> Result<Letter> {
        assert!(index >= 1, "partial quotients are indexed from 1");
        self.fill(index)?;
        Ok(self.quotients[index - 1])
    }
}

fn letter_of(a: &BigUint) -> Letter {
    a.to_u64_digits().first().copied().unwrap_or(0)
}

/// `K(a_1, ..., a_m)`, the denominator of `[0; a_1, ..., a_m]`; `K() = 1`.
pub fn continuant(word: &[Letter]) -> Result<BigUint> {
    if let Some(&z) = word.iter().find(|&&a| a == 0) {
        return Err(Error::ZeroLetter(z));
    }
    if word.len() >= PRODUCT_TREE_THRESHOLD {
        Ok(continuant_product_tree(word))
    } else {
        Ok(continuant_linear(word))
    }
}

/// Continuant by the three-term recurrence. Letters must be positive.
pub fn continuant_linear(word: &[Letter]) -> BigUint {
    let mut prev = BigUint::zero();
    let mut cur = BigUint::one();
    for &a in word {
        let next = &cur * a + &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Continuant as the top-left entry of `prod [[a_i, 1], [1, 0]]`, multiplied
/// as a balanced tree so that large operands meet late.
pub fn continuant_product_tree(word: &[Letter]) -> BigUint {
    if word.is_empty() {
        return BigUint::one();
    }
    product_tree(word).0[0].clone()
}

#[derive(Clone)]
struct BigMat([BigUint; 4]);

impl BigMat {
    fn letter(a: Letter) -> Self {
        BigMat([
            BigUint::from(a),
            BigUint::one(),
            BigUint::one(),
            BigUint::zero(),
        ])
    }

    fn mul(&self, rhs: &BigMat) -> BigMat {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &rhs.0;
        BigMat([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

fn product_tree(word: &[Letter]) -> BigMat {
    if word.len() <= 32 {
        let mut m = BigMat::letter(word[0]);
        for &a in &word[1..] {
            m = m.mul(&BigMat::letter(a));
        }
        return m;
    }
    let (l, r) = word.split_at(word.len() / 2);
    product_tree(l).mul(&product_tree(r))
}

/// Natural logarithm of a positive big integer, to double precision.
pub fn ln_big(x: &BigUint) -> f64 {
    let mut digits = x.iter_u64_digits();
    let n = digits.len();
    match n {
        0 => f64::NEG_INFINITY,
        1 => (digits.next().unwrap() as f64).ln(),
        _ => {
            let hi = digits.next_back().unwrap() as f64;
            let lo = digits.next_back().unwrap() as f64;
            (hi * 18_446_744_073_709_551_616.0 + lo).ln() + (64 * (n - 2)) as f64 * LN_2
        }
    }
}

/// Number of decimal digits of a positive integer.
pub fn decimal_digits(x: &BigUint) -> usize {
    if x.is_zero() {
        return 1;
    }
    x.to_str_radix(10).len()
}

/// Closed rational interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RationalInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// The value lies between the convergents of index `len - 1` and `len`.
pub fn eval_interval(cf: CfExpansion, len: usize) -> Result<RationalInterval> {
    if len < 2 {
        return Err(Error::InvalidParameter("interval needs L >= 2".into()));
    }
    let mut iter = cf.convergent_iter();
    let mut last = iter.advance()?;
    let mut before = last.clone();
    while last.index < len {
        before = last;
        last = iter.advance()?;
    }
    let a = ratio(&before);
    let b = ratio(&last);
    Ok(if a < b {
        RationalInterval { lo: a, hi: b }
    } else {
        RationalInterval { lo: b, hi: a }
    })
}

fn ratio(c: &Convergent) -> BigRational {
    BigRational::new(c.p.clone().into(), c.q.clone().into())
}

/// Windowed estimates of `limsup` and `liminf` of `q_l^(1/l)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthEstimate {
    #[serde(rename = "M_hat")]
    pub upper: f64,
    #[serde(rename = "m_hat")]
    pub lower: f64,
    /// `log M_hat` and `log m_hat`, kept separately so comparisons do not
    /// round-trip through `exp`.
    pub log_upper: f64,
    pub log_lower: f64,
    pub window: (usize, usize),
    #[serde(skip)]
    pub samples: Vec<f64>,
    /// Set when the estimate was collapsed to a single limit value.
    #[serde(default)]
    pub assumed_convergent: bool,
}

impl GrowthEstimate {
    fn from_log_samples(window: (usize, usize), log_samples: &[f64]) -> Self {
        let log_upper = log_samples
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let log_lower = log_samples.iter().copied().fold(f64::INFINITY, f64::min);
        GrowthEstimate {
            upper: log_upper.exp(),
            lower: log_lower.exp(),
            log_upper,
            log_lower,
            window,
            samples: log_samples.iter().map(|l| l.exp()).collect(),
            assumed_convergent: false,
        }
    }

    /// Replaces both bounds with the last sample of the window, for words
    /// whose `q_l^(1/l)` is known to converge.
    pub fn assume_convergent(mut self) -> Self {
        let last = self.samples.last().copied().unwrap_or(self.upper);
        self.upper = last;
        self.lower = last;
        self.log_upper = last.ln();
        self.log_lower = self.log_upper;
        self.assumed_convergent = true;
        self
    }
}

fn window_bounds(len: usize, tail_fraction: f64) -> Result<(usize, usize)> {
    if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tail fraction must lie in (0, 1), got {tail_fraction}"
        )));
    }
    let count = ((tail_fraction * len as f64).floor() as usize).max(1);
    Ok((len + 1 - count, len))
}

/// Minimum number of convergents (indices `0..`) accepted by the estimators.
pub const MIN_CONVERGENTS: usize = 10;

/// Max and min of `q_l^(1/l)` over the trailing `tail_fraction` of the
/// indices `1..=L` present in `qs`.
pub fn growth_estimate(qs: &[Convergent], tail_fraction: f64) -> Result<GrowthEstimate> {
    if qs.len() < MIN_CONVERGENTS {
        return Err(Error::TooFewConvergents {
            needed: MIN_CONVERGENTS,
            got: qs.len(),
        });
    }
    let last = qs.last().expect("non-empty").index;
    let (start, end) = window_bounds(last, tail_fraction)?;
    let logs: Vec<f64> = qs
        .iter()
        .filter(|c| c.index >= start && c.index <= end)
        .map(|c| ln_big(&c.q) / c.index as f64)
        .collect();
    Ok(GrowthEstimate::from_log_samples((start, end), &logs))
}

/// Growth estimate of the first `len` partial quotients of `word`, computed
/// without retaining the convergents.
pub fn growth_of_word(word: &[Letter], len: usize, tail_fraction: f64) -> Result<GrowthEstimate> {
    if len + 1 < MIN_CONVERGENTS {
        return Err(Error::TooFewConvergents {
            needed: MIN_CONVERGENTS,
            got: len + 1,
        });
    }
    if word.len() < len {
        return Err(Error::StreamExhausted(word.len()));
    }
    if let Some(&z) = word[..len].iter().find(|&&a| a == 0) {
        return Err(Error::ZeroLetter(z));
    }
    let (start, end) = window_bounds(len, tail_fraction)?;
    let mut logs = Vec::with_capacity(end + 1 - start);
    let mut prev = BigUint::zero();
    let mut cur = BigUint::one();
    for (i, &a) in word[..len].iter().enumerate() {
        let next = &cur * a + &prev;
        prev = std::mem::replace(&mut cur, next);
        let l = i + 1;
        if l >= start {
            logs.push(ln_big(&cur) / l as f64);
        }
    }
    Ok(GrowthEstimate::from_log_samples((start, end), &logs))
}

/// `q_l = K(word[..l])` at each requested index, in one pass.
pub fn denominators_at(word: &[Letter], indices: &[usize]) -> Result<Vec<BigUint>> {
    let mut wanted: Vec<usize> = indices.to_vec();
    wanted.sort_unstable();
    wanted.dedup();
    let Some(&max) = wanted.last() else {
        return Ok(Vec::new());
    };
    if max > word.len() {
        return Err(Error::StreamExhausted(word.len()));
    }
    let mut found = std::collections::HashMap::with_capacity(wanted.len());
    let mut prev = BigUint::zero();
    let mut cur = BigUint::one();
    let mut next_wanted = wanted.iter().peekable();
    for l in 0..=max {
        if l > 0 {
            let a = word[l - 1];
            if a == 0 {
                return Err(Error::ZeroLetter(0));
            }
            let next = &cur * a + &prev;
            prev = std::mem::replace(&mut cur, next);
        }
        if next_wanted.peek() == Some(&&l) {
            found.insert(l, cur.clone());
            next_wanted.next();
        }
    }
    Ok(indices.iter().map(|i| found[i].clone()).collect())
}
