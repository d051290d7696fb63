//! Invariant suites run by `cfstammer verify`.

use num_bigint::BigUint;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cf::{continuant_linear, continuant_product_tree};
use crate::error::{Error, Result};
use crate::family::ThetaSpec;
use crate::generators::automatic::{
    baum_sweet_morphic_stream, baum_sweet_stream, rudin_shapiro_morphic_stream,
    rudin_shapiro_stream,
};
use crate::generators::folding::{
    paperfolding_stream, paperfolding_term, FoldingSystem, Instructions,
};
use crate::generators::theta::verify_floor_identities;
use crate::matgrowth::{
    bound_check_lower, bound_check_upper, letter_matrix, letter_radius, norm_product_check,
    pair_product_margin, spectral_radius, trace_inequality,
};
use crate::stammer::{detect_repetitions, naive_repetitions};
use crate::words::{Alphabet, FiniteWord, Letter, Sign, WordStream};

pub const SUITE_NAMES: [&str; 4] = [
    "floor-identities",
    "continuants",
    "matrix-growth",
    "cross-oracles",
];

/// One family of checks inside a suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl CaseResult {
    fn new(name: impl Into<String>) -> Self {
        CaseResult {
            name: name.into(),
            checked: 0,
            failed: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checked: usize,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    fn new(suite: &str, cases: Vec<CaseResult>) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            passed: cases.iter().all(CaseResult::passed),
            checked: cases.iter().map(|c| c.checked).sum(),
            cases,
        }
    }

    /// One `name checked failed` line per case plus a verdict line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            out.push_str(&format!(
                "{} checked={} failed={}\n",
                c.name, c.checked, c.failed
            ));
            if let Some(f) = &c.first_failure {
                out.push_str(&format!("  first failure: {f}\n"));
            }
        }
        out.push_str(&format!(
            "{} {}: {} checks\n",
            self.suite,
            if self.passed { "pass" } else { "FAIL" },
            self.checked
        ));
        out
    }
}

/// Shift, multiple-of-`q_n` and sum identities for `floor(n theta)`.
pub fn floor_identities(thetas: &[ThetaSpec], n_max: usize, cap: usize) -> Result<SuiteReport> {
    let mut cases = Vec::new();
    for theta in thetas {
        let report = verify_floor_identities(theta.expansion(), n_max, cap)?;
        for t in report.tallies() {
            let label = format!("{} theta=[0;{}]", t.name, theta_label(theta));
            cases.push(CaseResult {
                name: label,
                checked: t.checked,
                failed: usize::from(!t.passed()),
                first_failure: t.first_failure.as_ref().map(|f| {
                    format!(
                        "n={} extra={} r={}: {} != {}",
                        f.n, f.extra, f.r, f.lhs, f.rhs
                    )
                }),
            });
        }
    }
    Ok(SuiteReport::new("floor-identities", cases))
}

fn theta_label(t: &ThetaSpec) -> String {
    let join = |v: &[Letter]| {
        v.iter()
            .map(Letter::to_string)
            .collect::<Vec<_>>()
            .join(",")
    };
    if t.preperiod.is_empty() {
        format!("({})", join(&t.period))
    } else {
        format!("{},({})", join(&t.preperiod), join(&t.period))
    }
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize, max_letter: Letter) -> Vec<Letter> {
    let len = rng.random_range(1..=max_len);
    (0..len).map(|_| rng.random_range(1..=max_letter)).collect()
}

fn word_text(w: &[Letter]) -> String {
    crate::words::text::format_word(w)
}

/// Mirror invariance and the factor-2 splitting bounds of continuants on
/// random words of length at most 60 over letters at most 10.
pub fn continuants(trials: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mirror = CaseResult::new("mirror K(a_1..a_m) = K(a_m..a_1)");
    let mut split = CaseResult::new("split K(u) K(v) <= K(uv) <= 2 K(u) K(v)");
    for _ in 0..trials {
        let w = random_word(&mut rng, 60, 10);
        let k = continuant_linear(&w);
        let rev: Vec<Letter> = w.iter().rev().copied().collect();
        mirror.record(continuant_linear(&rev) == k, || word_text(&w));
        for cut in 1..w.len() {
            let prod = continuant_linear(&w[..cut]) * continuant_linear(&w[cut..]);
            let ok = prod <= k && k <= &prod * 2u32;
            split.record(ok, || format!("{} cut at {cut}", word_text(&w)));
        }
    }
    SuiteReport::new("continuants", vec![mirror, split])
}

/// Balanced word over `alphabet` with the same odd count of every letter,
/// so its length is odd, at most `max_len`.
fn random_balanced_odd(rng: &mut ChaCha8Rng, alphabet: &Alphabet, max_len: usize) -> FiniteWord {
    let k = alphabet.len();
    let max_count = (max_len / k).max(1);
    let odd_counts: Vec<usize> = (1..=max_count).step_by(2).collect();
    let c = odd_counts[rng.random_range(0..odd_counts.len())];
    let mut v: Vec<Letter> = alphabet
        .letters()
        .iter()
        .flat_map(|&l| std::iter::repeat_n(l, c))
        .collect();
    v.shuffle(rng);
    FiniteWord::new(v).expect("non-empty")
}

/// Spectral-radius bounds: the pairwise margin for distinct letters up to
/// `max_letter`, upper and lower per-letter bounds on random balanced
/// words, the norm-product bound, the trace inequality and the closed-form
/// radius.
pub fn matrix_growth(max_letter: Letter, trials: usize, seed: u64) -> Result<SuiteReport> {
    if max_letter < 2 {
        return Err(Error::InvalidParameter(format!(
            "max letter must be >= 2, got {max_letter}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = CaseResult::new(format!(
        "rho(AB) > (rho(A) rho(B))^0.885, 1 <= a < b <= {max_letter}"
    ));
    for a in 1..max_letter {
        for b in a + 1..=max_letter {
            let m = pair_product_margin(a, b)?;
            pairs.record(m > 0.0, || format!("a={a} b={b} margin={m}"));
        }
    }

    let mut cases = vec![pairs];
    for k in [3u64, 5] {
        let alphabet = Alphabet::new((1..=k).collect())?;
        let mut upper = CaseResult::new(format!("log K(V)/|V| <= X, k={k}"));
        let mut lower = CaseResult::new(format!("log K(V)/|V| > 0.885 X - log 4/|V|, k={k}"));
        let mut norm = CaseResult::new(format!("K(V) <= prod ||B(v_i)||, k={k}"));
        for _ in 0..trials {
            let v = random_balanced_odd(&mut rng, &alphabet, 45);
            let up = bound_check_upper(&v, &alphabet)?;
            upper.record(up.pass, || format!("{v}: {} > {}", up.lhs, up.rhs));
            let lo = bound_check_lower(&v, &alphabet)?;
            lower.record(lo.pass, || format!("{v}: {} <= {}", lo.lhs, lo.rhs));
            let nb = norm_product_check(&v)?;
            norm.record(nb.pass, || format!("{v}: {} > {}", nb.lhs, nb.rhs));
        }
        cases.extend([upper, lower, norm]);
    }

    let mut trace = CaseResult::new("tr(W) >= rho(B_1 B_3)^l tr(W')");
    let alphabet = Alphabet::new(vec![1, 2, 3])?;
    for _ in 0..trials {
        let v = random_balanced_odd(&mut rng, &alphabet, 9);
        let t = trace_inequality(&v, 1, 3)?;
        trace.record(t.pass, || format!("{v}: {} <= {}", t.lhs, t.rhs));
    }
    cases.push(trace);

    let mut radius = CaseResult::new("rho(B(b)) = (b + sqrt(b^2 + 4)) / 2, rho(B)^2 = rho(B^T B)");
    let mut bs: Vec<Letter> = (1..=1000).collect();
    bs.extend((0..trials).map(|_| rng.random_range(1..=1_000_000)));
    for b in bs {
        let m = letter_matrix(b)?;
        let quad = spectral_radius(&m)?;
        let closed = letter_radius(b);
        let gram = spectral_radius(&(&m.transpose() * &m))?;
        let ok = ((quad - closed) / closed).abs() <= 1e-12
            && ((closed * closed - gram) / gram).abs() <= 1e-12;
        radius.record(ok, || format!("b={b}: {quad} vs {closed}, gram {gram}"));
    }
    cases.push(radius);
    Ok(SuiteReport::new("matrix-growth", cases))
}

fn first_mismatch(a: &mut WordStream, b: &mut WordStream, n: usize) -> Result<Option<usize>> {
    for i in 0..n {
        if a.next_letter()? != b.next_letter()? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Independent computations of the same objects: morphic against binary
/// definitions, fold-built paperfolding against its closed form, product
/// tree against linear continuants, and the repetition scan against the
/// brute-force scanner.
pub fn cross_oracles(letters: usize, trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut morphic = CaseResult::new(format!("morphic = binary definition, {letters} letters"));
    for (name, mut a, mut b) in [
        (
            "baum-sweet",
            baum_sweet_morphic_stream(1, 2)?,
            baum_sweet_stream(1, 2)?,
        ),
        (
            "rudin-shapiro",
            rudin_shapiro_morphic_stream(1, 2)?,
            rudin_shapiro_stream(1, 2)?,
        ),
    ] {
        let bad = first_mismatch(&mut a, &mut b, letters)?;
        morphic.record(bad.is_none(), || {
            format!("{name} differs at index {}", bad.unwrap_or(0))
        });
    }

    let mut folding = CaseResult::new("paperfolding stream = closed form");
    let n = letters.min(1 << 14);
    let folds = (usize::BITS - n.leading_zeros()) as usize + 1;
    let systems = std::iter::once(Instructions::Constant(Sign::Plus))
        .chain((0..10).map(|_| Instructions::Seeded(rng.random())));
    for ins in systems {
        let e = ins.take(folds);
        let mut s = paperfolding_stream(FoldingSystem::new(ins.clone(), 1, 2)?);
        let ok = (0..n as u64).all(|m| {
            let expect = if paperfolding_term(&e, m) == Sign::Plus {
                1
            } else {
                2
            };
            s.next_letter().ok() == Some(expect)
        });
        folding.record(ok, || format!("{ins:?}"));
    }

    let mut tree = CaseResult::new("product-tree continuant = linear continuant");
    for _ in 0..trials.min(50) {
        let len = rng.random_range(1..=30_000);
        let w: Vec<Letter> = (0..len).map(|_| rng.random_range(1..=9)).collect();
        let (lin, pt): (BigUint, BigUint) = (continuant_linear(&w), continuant_product_tree(&w));
        tree.record(lin == pt, || format!("length {len}"));
    }

    let mut scan = CaseResult::new("repetition scan = brute force, length <= 200");
    for _ in 0..trials {
        let k = rng.random_range(2..=3);
        let w = random_word(&mut rng, 200, k);
        let max_r = rng.random_range(0..w.len());
        let min_w = Ratio::new(rng.random_range(11..=30), 10);
        let fast = detect_repetitions(&w, max_r, min_w);
        scan.record(fast == naive_repetitions(&w, max_r, min_w), || {
            format!("max_r={max_r} min_w={min_w} word {}", word_text(&w))
        });
    }
    Ok(SuiteReport::new(
        "cross-oracles",
        vec![morphic, folding, tree, scan],
    ))
}
