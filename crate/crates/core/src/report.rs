//! End-to-end analysis: prefix, convergent growth, repetition scan,
//! periodicity scan and verdict, assembled into one report document.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use num_rational::Ratio;
use serde::Serialize;

use crate::cf::{continuant, decimal_digits, growth_of_word, GrowthEstimate};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::stammer::condition::{
    offset_bound, star_from_witnesses, star_star_from_witnesses, witnesses_for, ExponentPair,
};
use crate::stammer::periodicity::periodicity_of;
use crate::stammer::verdict::RationalJson;
use crate::stammer::{
    continuant_consequence, criterion_verdict, detect_repetitions, ConditionReport,
    CriterionVerdict, Periodicity, Rule, ScanParams, Witness,
};
use crate::words::{Exponent, FiniteWord, Letter};

pub const SCHEMA_VERSION: u32 = 1;

/// Prefix length used when none is given for a generated family.
pub const DEFAULT_PREFIX_LEN: usize = 24_576;

pub const DEFAULT_TAIL_FRACTION: f64 = 0.5;

pub const DEFAULT_FIRST_LETTERS: usize = 32;

/// Environment variable holding the number of significant digits printed
/// for logarithmic quantities in text reports.
pub const LOG_DIGITS_VAR: &str = "CFSTAMMER_LOG_DIGITS";

const DEFAULT_LOG_DIGITS: usize = 30;

/// f64 carries no more than this many meaningful digits.
const MAX_LOG_DIGITS: usize = 17;

/// Where the analysed letters come from.
#[derive(Debug, Clone)]
pub enum Source {
    Family(Family),
    /// A word read from a file, with a label for the report.
    Word {
        label: String,
        word: FiniteWord,
    },
}

impl Source {
    fn name(&self) -> String {
        match self {
            Source::Family(f) => f.name().to_string(),
            Source::Word { .. } => "input".to_string(),
        }
    }

    fn params(&self) -> BTreeMap<String, String> {
        match self {
            Source::Family(f) => f.descriptor().params.clone(),
            Source::Word { label, .. } => BTreeMap::from([("input".to_string(), label.clone())]),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    /// Defaults to [`DEFAULT_PREFIX_LEN`] for families and to the whole word
    /// for input files.
    pub prefix_len: Option<usize>,
    pub scales: usize,
    pub min_w: Exponent,
    pub max_wprime: Exponent,
    /// Defaults to `floor(sqrt(prefix_len))`.
    pub min_scale: Option<usize>,
    /// Defaults to the largest offset the `(w, w')` scan can use.
    pub max_r: Option<usize>,
    pub tail_fraction: f64,
    /// `None` uses the family default.
    pub assume_convergent: Option<bool>,
    pub first_letters: usize,
    /// Default `min(1000, n / 4)`.
    pub max_period: Option<usize>,
    /// Default `min(1000, n / 2)`.
    pub max_preperiod: Option<usize>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        let scan = ScanParams::for_prefix(0);
        AnalysisConfig {
            prefix_len: None,
            scales: scan.scales,
            min_w: scan.min_w,
            max_wprime: scan.max_wprime,
            min_scale: None,
            max_r: None,
            tail_fraction: DEFAULT_TAIL_FRACTION,
            assume_convergent: None,
            first_letters: DEFAULT_FIRST_LETTERS,
            max_period: None,
            max_preperiod: None,
        }
    }
}

/// Configuration after defaults have been filled in.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub scales: usize,
    pub min_w: RationalJson,
    pub max_wprime: RationalJson,
    pub min_scale: usize,
    pub max_r: usize,
    pub tail_fraction: f64,
    pub assume_convergent: bool,
    pub max_period: usize,
    pub max_preperiod: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergentSummary {
    #[serde(rename = "L")]
    pub len: usize,
    pub q_len_digits: usize,
}

/// Both repetition conditions on one prefix.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionSummary {
    pub star_w: Option<RationalJson>,
    pub starstar: Option<ExponentPair>,
    pub frontier: Vec<ExponentPair>,
    pub scales: usize,
    pub min_scale: usize,
    /// Witnesses found by the scan before any condition was applied.
    pub detected: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuantCheck {
    pub checked: usize,
    pub passed: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Timing {
    pub prefix_ms: f64,
    pub growth_ms: f64,
    pub detect_ms: f64,
    pub verdict_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub prefix_len: usize,
    pub config: ResolvedConfig,
    pub first_letters: Vec<Letter>,
    pub convergents: ConvergentSummary,
    pub growth: GrowthEstimate,
    /// Witnesses behind the verdict's exponent pair, increasing `s`.
    pub witnesses: Vec<Witness>,
    pub condition: ConditionSummary,
    pub periodicity: Option<Periodicity>,
    pub verdict: CriterionVerdict,
    pub continuant_check: ContinuantCheck,
    pub timing: Timing,
    /// Full condition data, kept for callers that want the witnesses of
    /// each condition.
    #[serde(skip)]
    pub star: ConditionReport,
    #[serde(skip)]
    pub star_star: ConditionReport,
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

fn check_config(n: usize, cfg: &AnalysisConfig) -> Result<()> {
    if n < 100 {
        return Err(Error::InvalidParameter(format!(
            "prefix length must be >= 100, got {n}"
        )));
    }
    if cfg.scales < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 scales, got {}",
            cfg.scales
        )));
    }
    if cfg.min_w <= Ratio::from_integer(1) {
        return Err(Error::InvalidParameter(format!(
            "min_w must exceed 1, got {}",
            cfg.min_w
        )));
    }
    Ok(())
}

/// Runs the full pipeline. Deterministic apart from the timing block.
pub fn analyze(source: &Source, cfg: &AnalysisConfig) -> Result<ReportDocument> {
    let start = Instant::now();
    let (prefix, growth_converges) = match source {
        Source::Family(f) => {
            let n = cfg.prefix_len.unwrap_or(DEFAULT_PREFIX_LEN);
            check_config(n, cfg)?;
            (f.prefix(n)?, f.growth_converges())
        }
        Source::Word { word, .. } => {
            let n = cfg.prefix_len.unwrap_or(word.len());
            check_config(n, cfg)?;
            if n > word.len() {
                return Err(Error::StreamExhausted(word.len()));
            }
            (word.prefix(n), false)
        }
    };
    let n = prefix.len();
    let mut timing = Timing {
        prefix_ms: ms(start),
        ..Timing::default()
    };

    let params = ScanParams {
        scales: cfg.scales,
        min_w: cfg.min_w,
        max_wprime: cfg.max_wprime,
        min_scale: cfg
            .min_scale
            .unwrap_or_else(|| crate::stammer::default_min_scale(n)),
    };
    let max_r = cfg
        .max_r
        .unwrap_or_else(|| offset_bound(n, params.min_w, params.max_wprime))
        .min(n - 1);
    let max_period = cfg.max_period.unwrap_or((n / 4).min(1000));
    let max_preperiod = cfg.max_preperiod.unwrap_or((n / 2).min(1000));
    if max_period == 0 || max_preperiod + 2 * max_period > n {
        return Err(Error::InvalidParameter(format!(
            "periodicity bounds need 1 <= max_period and max_preperiod + 2 max_period <= {n}"
        )));
    }
    let assume = cfg.assume_convergent.unwrap_or(growth_converges);

    let t = Instant::now();
    let mut growth = growth_of_word(&prefix, n, cfg.tail_fraction)?;
    if assume {
        growth = growth.assume_convergent();
    }
    let q_len_digits = decimal_digits(&continuant(&prefix)?);
    timing.growth_ms = ms(t);

    let t = Instant::now();
    let found = detect_repetitions(&prefix, max_r, params.min_w);
    let star = star_from_witnesses(&found, n, params.scales, params.min_scale);
    let star_star = star_star_from_witnesses(&found, n, &params);
    timing.detect_ms = ms(t);

    let t = Instant::now();
    let periodicity = periodicity_of(&prefix, max_period, max_preperiod);
    let combined = ConditionReport {
        witnesses: Vec::new(),
        star_w: star.star_w,
        starstar: star_star.starstar,
        frontier: star_star.frontier.clone(),
        scales: params.scales,
        min_scale: params.min_scale,
        prefix_len: n,
    };
    // Every prefix has a finite alphabet, so the partial quotients are bounded.
    let verdict = criterion_verdict(&combined, &growth, periodicity, true)?;
    let witnesses = supporting_witnesses(&verdict, &star, &found, &params);
    let checks = continuant_consequence(&prefix, &witnesses)?;
    timing.verdict_ms = ms(t);
    timing.total_ms = ms(start);

    Ok(ReportDocument {
        schema_version: SCHEMA_VERSION,
        family: source.name(),
        params: source.params(),
        prefix_len: n,
        config: ResolvedConfig {
            scales: params.scales,
            min_w: RationalJson(params.min_w),
            max_wprime: RationalJson(params.max_wprime),
            min_scale: params.min_scale,
            max_r,
            tail_fraction: cfg.tail_fraction,
            assume_convergent: assume,
            max_period,
            max_preperiod,
        },
        first_letters: prefix[..cfg.first_letters.min(n)].to_vec(),
        convergents: ConvergentSummary {
            len: n,
            q_len_digits,
        },
        growth,
        witnesses,
        condition: ConditionSummary {
            star_w: star.star_w.map(RationalJson),
            starstar: star_star.starstar,
            frontier: star_star.frontier.clone(),
            scales: params.scales,
            min_scale: params.min_scale,
            detected: found.len(),
        },
        periodicity,
        verdict,
        continuant_check: ContinuantCheck {
            checked: checks.len(),
            passed: checks.iter().filter(|&&ok| ok).count(),
        },
        timing,
        star,
        star_star,
    })
}

/// Offset-zero rules report the offset-zero witnesses; the other rules
/// report the witnesses meeting the chosen `(w, w')`.
fn supporting_witnesses(
    verdict: &CriterionVerdict,
    star: &ConditionReport,
    found: &[Witness],
    params: &ScanParams,
) -> Vec<Witness> {
    match (verdict.rule, verdict.w, verdict.w_prime) {
        (Rule::OffsetZeroSquare | Rule::OffsetZeroBounded, _, _) => star.witnesses.clone(),
        (_, Some(w), Some(wp)) => {
            let usable: Vec<Witness> = found
                .iter()
                .filter(|x| x.s >= params.min_scale)
                .copied()
                .collect();
            witnesses_for(
                &usable,
                ExponentPair {
                    w: w.0,
                    w_prime: wp.0,
                },
            )
        }
        _ => Vec::new(),
    }
}

/// Significant digits for logarithmic quantities, from
/// [`LOG_DIGITS_VAR`], clamped to what an f64 holds.
pub fn log_digits() -> usize {
    std::env::var(LOG_DIGITS_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(DEFAULT_LOG_DIGITS)
        .clamp(1, MAX_LOG_DIGITS)
}

fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn ratio_text(r: &RationalJson) -> String {
    format!("{}/{}", r.0.numer(), r.0.denom())
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One `r s num/den` line per witness, then a `#`-prefixed summary.
    pub fn to_text(&self) -> String {
        let digits = log_digits();
        let mut out = String::new();
        for w in &self.witnesses {
            let _ = writeln!(out, "{w}");
        }
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "# {k}: {v}");
        };
        let mut family = self.family.clone();
        for (k, v) in &self.params {
            let _ = write!(family, " {k}={v}");
        }
        line("family", family);
        line("prefix_len", self.prefix_len.to_string());
        line("q_L digits", self.convergents.q_len_digits.to_string());
        line("M_hat", sig(self.growth.upper, digits));
        line("m_hat", sig(self.growth.lower, digits));
        line("log M_hat", sig(self.growth.log_upper, digits));
        line("log m_hat", sig(self.growth.log_lower, digits));
        line(
            "window",
            format!("{}..={}", self.growth.window.0, self.growth.window.1),
        );
        line(
            "star_w",
            self.condition
                .star_w
                .as_ref()
                .map_or("none".into(), ratio_text),
        );
        line(
            "starstar",
            self.condition.starstar.map_or("none".into(), |p| {
                format!(
                    "{}/{} {}/{}",
                    p.w.numer(),
                    p.w.denom(),
                    p.w_prime.numer(),
                    p.w_prime.denom()
                )
            }),
        );
        line(
            "periodicity",
            self.periodicity.map_or("none".into(), |p| {
                format!("preperiod {} period {}", p.preperiod, p.period)
            }),
        );
        line("rule", self.verdict.rule.name().to_string());
        if let (Some(w), Some(wp)) = (&self.verdict.w, &self.verdict.w_prime) {
            line("w", ratio_text(w));
            line("w_prime", ratio_text(wp));
        }
        line(
            "margin",
            self.verdict
                .margin
                .map_or("none".into(), |m| sig(m, digits.min(12))),
        );
        line("caveat", self.verdict.caveat.clone());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(desc: &str, cfg: AnalysisConfig) -> ReportDocument {
        analyze(&Source::Family(desc.parse().unwrap()), &cfg).unwrap()
    }

    #[test]
    fn periodic_word_is_inconclusive() {
        let word = FiniteWord::new((0..400).map(|i| [1, 2, 2][i % 3]).collect()).unwrap();
        let doc = analyze(
            &Source::Word {
                label: "x".into(),
                word,
            },
            &AnalysisConfig::default(),
        )
        .unwrap();
        assert_eq!(doc.verdict.rule, Rule::Inconclusive);
        assert_eq!(
            doc.periodicity,
            Some(Periodicity {
                preperiod: 0,
                period: 3
            })
        );
        assert_eq!(doc.family, "input");
    }

    #[test]
    fn small_davison_report() {
        let cfg = AnalysisConfig {
            prefix_len: Some(3000),
            ..Default::default()
        };
        let doc = run("davison theta=golden k=2", cfg);
        assert_eq!(doc.prefix_len, 3000);
        assert_eq!(doc.first_letters[..8], [1, 2, 2, 1, 2, 2, 1, 1]);
        assert_eq!(doc.continuant_check.passed, doc.continuant_check.checked);
        assert!(doc.periodicity.is_none());
        let json: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
        for key in [
            "schema_version",
            "family",
            "params",
            "prefix_len",
            "growth",
            "witnesses",
            "verdict",
        ] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert!(json["growth"]["M_hat"].is_f64());
        let text = doc.to_text();
        assert!(text.contains("# rule: "));
        for w in &doc.witnesses {
            assert!(text.contains(&w.to_string()));
        }
    }

    #[test]
    fn config_checks() {
        let short = AnalysisConfig {
            prefix_len: Some(50),
            ..Default::default()
        };
        assert!(analyze(&Source::Family("rudin-shapiro".parse().unwrap()), &short).is_err());
        let few = AnalysisConfig {
            prefix_len: Some(200),
            scales: 2,
            ..Default::default()
        };
        assert!(analyze(&Source::Family("rudin-shapiro".parse().unwrap()), &few).is_err());
        let word = FiniteWord::new(vec![1; 150]).unwrap();
        let long = AnalysisConfig {
            prefix_len: Some(151),
            ..Default::default()
        };
        assert!(matches!(
            analyze(
                &Source::Word {
                    label: "x".into(),
                    word
                },
                &long
            ),
            Err(Error::StreamExhausted(150))
        ));
    }

    #[test]
    fn significant_digits() {
        assert_eq!(sig(1.5, 3), "1.50");
        assert_eq!(sig(-0.000123456, 2), "-0.00012");
        assert_eq!(sig(1234.5, 2), "1234");
    }
}
