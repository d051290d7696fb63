//! Verdict rules combining repetition evidence with convergent growth.

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use super::condition::{ConditionReport, ExponentPair};
use super::periodicity::Periodicity;
use crate::cf::GrowthEstimate;
use crate::error::{Error, Result};
use crate::words::Exponent;

/// Outward rounding applied to `log M_hat` and `log m_hat`.
pub const LOG_SLACK: f64 = 1e-12;

/// Prefix of every caveat string.
pub const CAVEAT: &str = "finite-prefix evidence";

/// Serialized as [`Rule::name`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Offset-zero repetitions with `w >= 2`.
    OffsetZeroSquare,
    /// Offset-zero repetitions with `w > 1` and bounded growth.
    OffsetZeroBounded,
    /// `w > w' (2 log M / log m - 1) + 1`.
    SharpInequality,
    /// `w > w' (2 log M / log m - 1) + log M / log m`.
    GeneralInequality,
    Inconclusive,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::OffsetZeroSquare => "TheoremA_w2",
            Rule::OffsetZeroBounded => "TheoremA_bounded",
            Rule::SharpInequality => "Theorem31",
            Rule::GeneralInequality => "TheoremB",
            Rule::Inconclusive => "Inconclusive",
        }
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

/// Rational serialized as `{"num": .., "den": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalJson(pub Exponent);

impl Serialize for RationalJson {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Rational", 2)?;
        st.serialize_field("num", self.0.numer())?;
        st.serialize_field("den", self.0.denom())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionVerdict {
    pub rule: Rule,
    pub w: Option<RationalJson>,
    pub w_prime: Option<RationalJson>,
    #[serde(rename = "M_hat")]
    pub m_upper: f64,
    #[serde(rename = "m_hat")]
    pub m_lower: f64,
    /// Left side minus right side of the applied inequality, 12 significant
    /// digits; absent when no inequality could be evaluated.
    pub margin: Option<f64>,
    pub caveat: String,
}

/// Right side of `w > w' (2 rho - 1) + 1` with `rho = log M / log m`.
pub fn sharp_rhs(w_prime: f64, rho: f64) -> f64 {
    w_prime * (2.0 * rho - 1.0) + 1.0
}

/// Right side of `w > w' (2 rho - 1) + rho`.
pub fn general_rhs(w_prime: f64, rho: f64) -> f64 {
    w_prime * (2.0 * rho - 1.0) + rho
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn to_f64(x: Exponent) -> f64 {
    x.to_f64().expect("u64 ratio converts")
}

/// `(rho, rho_hi)`: point value and outward-rounded upper bound of
/// `log M / log m`.
fn log_ratio(growth: &GrowthEstimate) -> (f64, f64) {
    let (lu, ll) = (growth.log_upper, growth.log_lower);
    let du = LOG_SLACK * lu.abs().max(1.0);
    let dl = LOG_SLACK * ll.abs().max(1.0);
    (lu / ll, (lu + du) / (ll - dl))
}

struct Candidate {
    pair: ExponentPair,
    margin: f64,
    safe_margin: f64,
}

fn best_candidate(
    pairs: &[ExponentPair],
    rhs: impl Fn(f64, f64) -> f64,
    rho: f64,
    rho_hi: f64,
) -> Option<Candidate> {
    pairs
        .iter()
        .map(|&pair| {
            let (w, wp) = (to_f64(pair.w), to_f64(pair.w_prime));
            Candidate {
                pair,
                margin: w - rhs(wp, rho),
                safe_margin: w - rhs(wp, rho_hi),
            }
        })
        .max_by(|a, b| a.safe_margin.total_cmp(&b.safe_margin))
}

/// Applies, in order: periodicity (inconclusive), offset-zero `w >= 2`,
/// offset-zero `w > 1` with bounded growth, then the two `(w, w')`
/// inequalities over every frontier pair, keeping the pair with the largest
/// margin.
pub fn criterion_verdict(
    report: &ConditionReport,
    growth: &GrowthEstimate,
    periodic: Option<Periodicity>,
    bounded: bool,
) -> Result<CriterionVerdict> {
    if !(growth.upper > 1.0 && growth.lower > 1.0) {
        return Err(Error::DegenerateGrowth {
            upper: growth.upper,
            lower: growth.lower,
        });
    }
    let caveat = format!(
        "{CAVEAT}: {} witness scales within {} letters; M_hat and m_hat are {}estimates over convergent indices {}..={}",
        report.scales,
        report.prefix_len,
        if growth.assumed_convergent { "limit-assumed " } else { "windowed " },
        growth.window.0,
        growth.window.1,
    );
    let verdict =
        |rule, pair: Option<ExponentPair>, margin: Option<f64>, caveat: String| CriterionVerdict {
            rule,
            w: pair.map(|p| RationalJson(p.w)),
            w_prime: pair.map(|p| RationalJson(p.w_prime)),
            m_upper: growth.upper,
            m_lower: growth.lower,
            margin: margin.map(round12),
            caveat,
        };

    if let Some(p) = periodic {
        let caveat = format!(
            "{caveat}; prefix is eventually periodic (preperiod {}, period {}), so the expansion may be quadratic",
            p.preperiod, p.period
        );
        return Ok(verdict(Rule::Inconclusive, None, None, caveat));
    }

    let zero = Ratio::from_integer(0);
    if let Some(sw) = report.star_w {
        let pair = ExponentPair {
            w: sw,
            w_prime: zero,
        };
        if sw >= Ratio::from_integer(2) {
            return Ok(verdict(
                Rule::OffsetZeroSquare,
                Some(pair),
                Some(to_f64(sw) - 2.0),
                caveat,
            ));
        }
        if bounded && sw > Ratio::from_integer(1) {
            return Ok(verdict(
                Rule::OffsetZeroBounded,
                Some(pair),
                Some(to_f64(sw) - 1.0),
                caveat,
            ));
        }
    }

    let mut pairs: Vec<ExponentPair> = report.frontier.clone();
    if pairs.is_empty() {
        pairs.extend(report.starstar);
    }
    if let Some(sw) = report.star_w {
        pairs.push(ExponentPair {
            w: sw,
            w_prime: zero,
        });
    }
    let (rho, rho_hi) = log_ratio(growth);
    let sharp = best_candidate(&pairs, sharp_rhs, rho, rho_hi);
    if let Some(c) = sharp.as_ref().filter(|c| c.safe_margin > 0.0) {
        return Ok(verdict(
            Rule::SharpInequality,
            Some(c.pair),
            Some(c.margin),
            caveat,
        ));
    }
    if let Some(c) =
        best_candidate(&pairs, general_rhs, rho, rho_hi).filter(|c| c.safe_margin > 0.0)
    {
        return Ok(verdict(
            Rule::GeneralInequality,
            Some(c.pair),
            Some(c.margin),
            caveat,
        ));
    }
    Ok(match sharp {
        Some(c) => verdict(Rule::Inconclusive, Some(c.pair), Some(c.margin), caveat),
        None => verdict(Rule::Inconclusive, None, None, caveat),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn growth(upper: f64, lower: f64) -> GrowthEstimate {
        GrowthEstimate {
            upper,
            lower,
            log_upper: upper.ln(),
            log_lower: lower.ln(),
            window: (50, 100),
            samples: vec![],
            assumed_convergent: false,
        }
    }

    fn report(star_w: Option<Exponent>, frontier: Vec<ExponentPair>) -> ConditionReport {
        ConditionReport {
            star_w,
            starstar: frontier.last().copied(),
            frontier,
            scales: 5,
            prefix_len: 1000,
            ..Default::default()
        }
    }

    #[test]
    fn offset_zero_five_quarters_bounded() {
        let v = criterion_verdict(
            &report(Some(Ratio::new(5, 4)), vec![]),
            &growth(2.0, 1.5),
            None,
            true,
        )
        .unwrap();
        assert_eq!(v.rule, Rule::OffsetZeroBounded);
        assert!(v.margin.unwrap() > 0.0);
        assert!(v.caveat.starts_with(CAVEAT));
    }

    #[test]
    fn square_ignores_growth() {
        let v = criterion_verdict(
            &report(Some(Ratio::from_integer(2)), vec![]),
            &growth(50.0, 1.01),
            None,
            false,
        )
        .unwrap();
        assert_eq!(v.rule, Rule::OffsetZeroSquare);
    }

    #[test]
    fn three_halves_one_sixth() {
        let pair = ExponentPair {
            w: Ratio::new(3, 2),
            w_prime: Ratio::new(1, 6),
        };
        let v =
            criterion_verdict(&report(None, vec![pair]), &growth(2.0, 2.0), None, true).unwrap();
        assert_eq!(v.rule, Rule::SharpInequality);
        assert!((v.margin.unwrap() - 1.0 / 3.0).abs() < 1e-9);
        assert_eq!(v.w, Some(RationalJson(Ratio::new(3, 2))));
    }

    #[test]
    fn general_never_fires_when_sharp_fails_with_m_above_m() {
        let pair = ExponentPair {
            w: Ratio::new(3, 2),
            w_prime: Ratio::from_integer(1),
        };
        let v =
            criterion_verdict(&report(None, vec![pair]), &growth(3.0, 2.0), None, true).unwrap();
        assert_eq!(v.rule, Rule::Inconclusive);
        assert!(v.margin.unwrap() < 0.0);
    }

    #[test]
    fn periodic_is_inconclusive() {
        let p = Periodicity {
            preperiod: 0,
            period: 2,
        };
        let v = criterion_verdict(
            &report(Some(Ratio::from_integer(30)), vec![]),
            &growth(2.0, 2.0),
            Some(p),
            true,
        )
        .unwrap();
        assert_eq!(v.rule, Rule::Inconclusive);
        assert_eq!(v.margin, None);
    }

    #[test]
    fn degenerate_growth() {
        assert!(matches!(
            criterion_verdict(&report(None, vec![]), &growth(1.0, 1.0), None, true),
            Err(Error::DegenerateGrowth { .. })
        ));
    }

    #[test]
    fn rounding() {
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round12(0.0), 0.0);
    }

    #[test]
    fn serialized_rule_names() {
        assert_eq!(
            serde_json::to_string(&Rule::OffsetZeroSquare).unwrap(),
            "\"TheoremA_w2\""
        );
        for (rule, name) in [
            (Rule::OffsetZeroBounded, "TheoremA_bounded"),
            (Rule::SharpInequality, "Theorem31"),
            (Rule::GeneralInequality, "TheoremB"),
            (Rule::Inconclusive, "Inconclusive"),
        ] {
            assert_eq!(serde_json::to_value(rule).unwrap(), name);
        }
    }
}
