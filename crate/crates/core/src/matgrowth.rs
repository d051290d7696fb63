//! Growth of continuants through 2x2 letter matrices `B(b) = [[b, 1], [1, 0]]`:
//! spectral radii, the mean log-radius `X` of an alphabet, the upper and
//! lower continuant bounds for balanced words, and the analysis of the
//! squared-block family `W_1 W_2^2 W_3^2 ...`.

use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cf::{continuant, ln_big};
use crate::error::{Error, Result};
use crate::generators::concat::{is_balanced, ConcatFamily};
use crate::words::{Alphabet, FiniteWord, Letter};

/// The exponent in `rho(AB) > (rho(A) rho(B))^GAMMA`.
pub const GAMMA: f64 = 0.885;

/// Slack used by the bound checks.
pub const BOUND_SLACK: f64 = 1e-12;

/// Row-major `[[a, b], [c, d]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub entries: [BigInt; 4],
}

impl Mat2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Mat2 {
            entries: [a, b, c, d],
        }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Mat2::from_i64(1, 0, 0, 1)
    }

    pub fn trace(&self) -> BigInt {
        &self.entries[0] + &self.entries[3]
    }

    pub fn det(&self) -> BigInt {
        let [a, b, c, d] = &self.entries;
        a * d - b * c
    }

    pub fn transpose(&self) -> Mat2 {
        let [a, b, c, d] = self.entries.clone();
        Mat2::new(a, c, b, d)
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries[1] == self.entries[2]
    }

    pub fn pow(&self, mut e: u32) -> Mat2 {
        let mut base = self.clone();
        let mut acc = Mat2::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    fn mul(self, o: &Mat2) -> Mat2 {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &o.entries;
        Mat2::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }
}

/// `B(b) = [[b, 1], [1, 0]]`.
pub fn letter_matrix(b: Letter) -> Result<Mat2> {
    if b == 0 {
        return Err(Error::ZeroLetter(0));
    }
    Ok(Mat2::new(
        BigInt::from(b),
        BigInt::one(),
        BigInt::one(),
        BigInt::zero(),
    ))
}

/// `B(w_1) B(w_2) ... B(w_m)`; its top-left entry is `K(w)`.
pub fn word_matrix(word: &[Letter]) -> Result<Mat2> {
    word.iter()
        .try_fold(Mat2::identity(), |acc, &b| Ok(&acc * &letter_matrix(b)?))
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// `(|tr A| + sqrt(tr^2 A - 4 det A)) / 2`, the largest eigenvalue modulus
/// when both eigenvalues are real.
pub fn spectral_radius(a: &Mat2) -> Result<f64> {
    let tr = a.trace();
    let disc: BigInt = &tr * &tr - a.det() * 4;
    if disc.is_negative() {
        return Err(Error::ComplexEigenvalues);
    }
    Ok((big_to_f64(&tr.abs()) + big_to_f64(&disc).sqrt()) / 2.0)
}

/// `(b + sqrt(b^2 + 4)) / 2`.
pub fn letter_radius(b: Letter) -> f64 {
    let b = b as f64;
    (b + (b * b + 4.0).sqrt()) / 2.0
}

/// `rho(B(a) B(b)) - (rho(B(a)) rho(B(b)))^GAMMA`.
pub fn pair_product_margin(a: Letter, b: Letter) -> Result<f64> {
    if a == b {
        return Err(Error::InvalidParameter(format!(
            "letters must be distinct, both are {a}"
        )));
    }
    let ab = &letter_matrix(a)? * &letter_matrix(b)?;
    let lhs = spectral_radius(&ab)?;
    Ok(lhs - (letter_radius(a) * letter_radius(b)).powf(GAMMA))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub letters: Vec<Letter>,
    pub rho_per_letter: Vec<f64>,
    /// Mean of `log rho(B_j)`.
    #[serde(rename = "X")]
    pub x: f64,
    pub gamma: f64,
    /// `1 + 2 / gamma`.
    pub threshold: f64,
}

fn check_odd_alphabet(alphabet: &Alphabet) -> Result<()> {
    let k = alphabet.len();
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::InvalidAlphabet(format!(
            "need an odd alphabet size >= 3, got {k}"
        )));
    }
    Ok(())
}

pub fn alphabet_spectrum(alphabet: &Alphabet) -> Result<SpectrumReport> {
    check_odd_alphabet(alphabet)?;
    let rho: Vec<f64> = alphabet
        .letters()
        .iter()
        .map(|&b| letter_radius(b))
        .collect();
    let x = rho.iter().map(|r| r.ln()).sum::<f64>() / rho.len() as f64;
    Ok(SpectrumReport {
        letters: alphabet.letters().to_vec(),
        rho_per_letter: rho,
        x,
        gamma: GAMMA,
        threshold: 1.0 + 2.0 / GAMMA,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

fn log_k_per_letter(v: &[Letter]) -> Result<f64> {
    Ok(ln_big(&continuant(v)?) / v.len() as f64)
}

fn check_balanced(v: &FiniteWord, alphabet: &Alphabet) -> Result<()> {
    if !is_balanced(v, alphabet) {
        return Err(Error::InvalidParameter(format!(
            "{v} does not use every letter of the alphabet equally often"
        )));
    }
    Ok(())
}

/// `log K(V) / |V| <= X` for balanced `V`.
pub fn bound_check_upper(v: &FiniteWord, alphabet: &Alphabet) -> Result<BoundCheck> {
    check_balanced(v, alphabet)?;
    let x = alphabet_spectrum(alphabet)?.x;
    let lhs = log_k_per_letter(v)?;
    Ok(BoundCheck {
        lhs,
        rhs: x,
        pass: lhs <= x + BOUND_SLACK,
    })
}

/// `log K(V) / |V| > GAMMA X - log 4 / |V|` for balanced `V` of odd length.
pub fn bound_check_lower(v: &FiniteWord, alphabet: &Alphabet) -> Result<BoundCheck> {
    check_balanced(v, alphabet)?;
    if v.len().is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "|V| = {} must be odd",
            v.len()
        )));
    }
    let x = alphabet_spectrum(alphabet)?.x;
    let lhs = log_k_per_letter(v)?;
    let rhs = GAMMA * x - 4f64.ln() / v.len() as f64;
    Ok(BoundCheck {
        lhs,
        rhs,
        pass: lhs > rhs - BOUND_SLACK,
    })
}

/// `log K(V) <= sum_j h_j log ||B(b_j)||` for any word, `h_j` the letter
/// counts; the norm of a symmetric matrix is its spectral radius.
pub fn norm_product_check(v: &[Letter]) -> Result<BoundCheck> {
    let lhs = ln_big(&continuant(v)?);
    let rhs: f64 = v.iter().map(|&b| letter_radius(b).ln()).sum();
    Ok(BoundCheck {
        lhs,
        rhs,
        pass: lhs <= rhs * (1.0 + BOUND_SLACK) + BOUND_SLACK,
    })
}

/// `tr(W) >= rho(B(lo) B(hi))^l tr(W')` where `W` is the matrix of `word`,
/// `l` the number of occurrences of `lo` (and of `hi`), and `W'` drops both
/// letters.
pub fn trace_inequality(word: &[Letter], lo: Letter, hi: Letter) -> Result<BoundCheck> {
    let l = word.iter().filter(|&&b| b == lo).count();
    if l != word.iter().filter(|&&b| b == hi).count() || lo == hi {
        return Err(Error::InvalidParameter(format!(
            "letters {lo} and {hi} must be distinct and occur equally often"
        )));
    }
    let w = word_matrix(word)?;
    let rest: Vec<Letter> = word
        .iter()
        .copied()
        .filter(|&b| b != lo && b != hi)
        .collect();
    let w_rest = word_matrix(&rest)?;
    let rho = spectral_radius(&(&letter_matrix(lo)? * &letter_matrix(hi)?))?;
    let lhs = big_to_f64(&w.trace());
    let rhs = rho.powi(l as i32) * big_to_f64(&w_rest.trace());
    Ok(BoundCheck {
        lhs,
        rhs,
        pass: lhs > rhs * (1.0 - 1e-9),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockRow {
    pub n: usize,
    pub len_u: usize,
    pub len_v: usize,
    pub log_k_u: f64,
    pub log_k_v: f64,
    /// `log K(V_n) / log K(U_n) - 1`.
    pub epsilon: f64,
    /// `log K(U_n) / |V_n|` against its bound `2X/(lambda-1) + 2n/|V_n|`.
    pub u_per_v: f64,
    pub u_bound: f64,
    /// `log K(V_n) / |V_n|` against its bound `GAMMA X - log 4 / |V_n|`.
    pub v_per_v: f64,
    pub v_bound: f64,
    pub bounds_hold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockGrowthReport {
    pub lambda: f64,
    pub threshold: f64,
    pub threshold_pass: bool,
    pub spectrum: SpectrumReport,
    pub rows: Vec<BlockRow>,
    pub all_epsilon_positive: bool,
}

/// Exact continuants of `U_n = W_1 W_2^2 ... W_{n-1}^2` and `V_n = W_n` for
/// `2 <= n <= n_blocks`.
pub fn block_growth_analyze(fam: &ConcatFamily, n_blocks: usize) -> Result<BlockGrowthReport> {
    if n_blocks < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 blocks, got {n_blocks}"
        )));
    }
    let spectrum = alphabet_spectrum(fam.alphabet())?;
    let blocks = fam.first_blocks(n_blocks)?;
    let lambda = fam.lambda();
    let x = spectrum.x;
    let mut u: Vec<Letter> = blocks[0].to_vec();
    let mut rows = Vec::with_capacity(n_blocks - 1);
    for n in 2..=n_blocks {
        let v = &blocks[n - 1];
        let log_k_u = ln_big(&continuant(&u)?);
        let log_k_v = ln_big(&continuant(v)?);
        let len_v = v.len() as f64;
        let u_per_v = log_k_u / len_v;
        let u_bound = 2.0 * x / (lambda - 1.0) + 2.0 * n as f64 / len_v;
        let v_per_v = log_k_v / len_v;
        let v_bound = GAMMA * x - 4f64.ln() / len_v;
        rows.push(BlockRow {
            n,
            len_u: u.len(),
            len_v: v.len(),
            log_k_u,
            log_k_v,
            epsilon: log_k_v / log_k_u - 1.0,
            u_per_v,
            u_bound,
            v_per_v,
            v_bound,
            bounds_hold: u_per_v < u_bound && v_per_v > v_bound - BOUND_SLACK,
        });
        u.extend_from_slice(v);
        u.extend_from_slice(v);
    }
    let threshold = spectrum.threshold;
    Ok(BlockGrowthReport {
        lambda,
        threshold,
        threshold_pass: lambda > threshold,
        all_epsilon_positive: rows.iter().all(|r| r.epsilon > 0.0),
        spectrum,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::concat::BlockSource;

    #[test]
    fn letter_matrices() {
        assert_eq!(letter_matrix(1).unwrap(), Mat2::from_i64(1, 1, 1, 0));
        assert_eq!(letter_matrix(2).unwrap(), Mat2::from_i64(2, 1, 1, 0));
        for b in 1..20 {
            assert_eq!(letter_matrix(b).unwrap().det(), BigInt::from(-1));
        }
        assert!(letter_matrix(0).is_err());
    }

    #[test]
    fn radii() {
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((spectral_radius(&letter_matrix(1).unwrap()).unwrap() - golden).abs() < 1e-12);
        assert!(
            (spectral_radius(&letter_matrix(2).unwrap()).unwrap() - (1.0 + 2f64.sqrt())).abs()
                < 1e-12
        );
        assert_eq!(spectral_radius(&Mat2::identity()).unwrap(), 1.0);
        assert_eq!(
            spectral_radius(&Mat2::from_i64(0, -1, 1, 0)),
            Err(Error::ComplexEigenvalues)
        );
    }

    #[test]
    fn word_matrix_holds_continuant() {
        let w = [1, 2, 3, 1];
        let m = word_matrix(&w).unwrap();
        assert_eq!(m.entries[0], BigInt::from(continuant(&w).unwrap()));
    }

    #[test]
    fn pair_product_margin_examples() {
        let m = pair_product_margin(1, 2).unwrap();
        assert!((m - 0.392).abs() < 1e-3, "{m}");
        assert!(pair_product_margin(1, 3).unwrap() > 0.0);
        assert!(pair_product_margin(2, 2).is_err());
    }

    #[test]
    fn spectrum_of_one_two_three() {
        let s = alphabet_spectrum(&Alphabet::new(vec![1, 2, 3]).unwrap()).unwrap();
        let closed = [
            (1.0 + 5f64.sqrt()) / 2.0,
            1.0 + 2f64.sqrt(),
            (3.0 + 13f64.sqrt()) / 2.0,
        ];
        let x = closed.iter().map(|r: &f64| r.ln()).sum::<f64>() / 3.0;
        assert!((s.x - x).abs() < 1e-12);
        assert!((s.x - 0.8524495).abs() < 1e-7);
        assert!((s.threshold - 3.25988).abs() < 1e-4 && s.threshold < 3.26);
        assert!(alphabet_spectrum(&Alphabet::new(vec![1, 2]).unwrap()).is_err());
    }

    #[test]
    fn bound_examples() {
        let abc = Alphabet::new(vec![1, 2, 3]).unwrap();
        let v = FiniteWord::new(vec![1, 2, 3]).unwrap();
        let up = bound_check_upper(&v, &abc).unwrap();
        assert!((up.lhs - 10f64.ln() / 3.0).abs() < 1e-12 && up.pass);
        let mirrored = bound_check_upper(&v.mirror(), &abc).unwrap();
        assert_eq!(mirrored.lhs, up.lhs);
        let low = bound_check_lower(&v, &abc).unwrap();
        assert!((low.rhs - 0.2924).abs() < 1e-3 && low.pass);
        assert!(bound_check_upper(&FiniteWord::new(vec![1, 1, 2]).unwrap(), &abc).is_err());
        assert!(
            bound_check_lower(&FiniteWord::new(vec![1, 2, 3, 3, 2, 1]).unwrap(), &abc).is_err()
        );
    }

    #[test]
    fn symmetric_radius_is_norm() {
        for b in 1..30 {
            let m = letter_matrix(b).unwrap();
            let r = spectral_radius(&m).unwrap();
            let r2 = spectral_radius(&(&m.transpose() * &m)).unwrap();
            assert!((r * r - r2).abs() < 1e-9 * r2);
        }
    }

    #[test]
    fn block_growth_small_family() {
        let fam = ConcatFamily::new(
            Alphabet::new(vec![1, 2, 3]).unwrap(),
            BlockSource::Seeded(3),
            4.0,
        )
        .unwrap();
        let rep = block_growth_analyze(&fam, 4).unwrap();
        assert!(rep.threshold_pass);
        assert_eq!(rep.rows.len(), 3);
        assert!(rep.all_epsilon_positive);
        let slow = ConcatFamily::new(
            Alphabet::new(vec![1, 2, 3]).unwrap(),
            BlockSource::Seeded(3),
            3.0,
        )
        .unwrap();
        assert!(!block_growth_analyze(&slow, 3).unwrap().threshold_pass);
        assert!(block_growth_analyze(&fam, 2).is_err());
    }
}
