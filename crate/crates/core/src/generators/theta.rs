//! Floors of `n * theta` from the continued fraction of `theta`, Davison's
//! sequences `d_n = 1 + (floor(n theta) mod k)`, and exhaustive checks of the
//! convergent floor identities they rest on.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::cf::{CfExpansion, ConvergentTable};
use crate::error::{Error, Result};
use crate::words::WordStream;

/// Exact `floor(n theta)` evaluator for an irrational `theta in (0, 1)`.
#[derive(Debug)]
pub struct ThetaFloor {
    table: ConvergentTable,
}

impl ThetaFloor {
    pub fn new(theta: CfExpansion) -> Self {
        ThetaFloor {
            table: ConvergentTable::new(theta),
        }
    }

    pub fn table(&mut self) -> &mut ConvergentTable {
        &mut self.table
    }

    /// `floor(n theta)`: consecutive convergents bracket `theta`, so once
    /// `n p_j / q_j` and `n p_{j+1} / q_{j+1}` share a floor, so does
    /// `n theta`.
    pub fn floor_mul(&mut self, n: &BigUint) -> Result<BigUint> {
        let mut j = 0;
        loop {
            let lo = {
                let (p, q) = self.table.get(j)?;
                (n * p).div_floor(q)
            };
            let hi = {
                let (p, q) = self.table.get(j + 1)?;
                (n * p).div_floor(q)
            };
            if lo == hi {
                return Ok(lo);
            }
            j += 1;
        }
    }

    pub fn floor_mul_u64(&mut self, n: u64) -> Result<u64> {
        let f = self.floor_mul(&BigUint::from(n))?;
        f.to_u64()
            .ok_or_else(|| Error::InvalidParameter("floor exceeds 64 bits".into()))
    }
}

/// `floor(n theta)` for a single `n`.
pub fn floor_n_theta(theta: CfExpansion, n: u64) -> Result<u64> {
    ThetaFloor::new(theta).floor_mul_u64(n)
}

#[derive(Debug)]
pub struct DavisonParams {
    pub theta: CfExpansion,
    pub k: u64,
}

impl DavisonParams {
    pub fn new(theta: CfExpansion, k: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!(
                "Davison modulus k must be >= 2, got {k}"
            )));
        }
        Ok(DavisonParams { theta, k })
    }
}

/// `d_1, d_2, ...` with `d_n = 1 + (floor(n theta) mod k)`.
pub fn davison_stream(params: DavisonParams) -> WordStream {
    let DavisonParams { theta, k } = params;
    let mut floor = ThetaFloor::new(theta);
    let mut n = 0u64;
    WordStream::from_fn(move || {
        n += 1;
        Ok(Some(1 + floor.floor_mul_u64(n)? % k))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityFailure {
    pub n: usize,
    /// `s` for the multiple-of-`q_n` identity, `l` for the sum identity.
    pub extra: usize,
    pub r: u64,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityTally {
    pub name: &'static str,
    pub checked: usize,
    pub truncated: bool,
    pub first_failure: Option<IdentityFailure>,
}

impl IdentityTally {
    fn new(name: &'static str) -> Self {
        IdentityTally {
            name,
            checked: 0,
            truncated: false,
            first_failure: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FloorIdentityReport {
    pub shift: IdentityTally,
    pub multiple: IdentityTally,
    pub sum: IdentityTally,
}

impl FloorIdentityReport {
    pub fn passed(&self) -> bool {
        self.shift.passed() && self.multiple.passed() && self.sum.passed()
    }

    pub fn checked(&self) -> usize {
        self.shift.checked + self.multiple.checked + self.sum.checked
    }

    pub fn tallies(&self) -> [&IdentityTally; 3] {
        [&self.shift, &self.multiple, &self.sum]
    }
}

struct Checker<'a> {
    floor: &'a mut ThetaFloor,
    cap: usize,
}

impl Checker<'_> {
    /// Records one comparison; returns `false` once the tally is full.
    fn check(
        &mut self,
        tally: &mut IdentityTally,
        (n, extra, r): (usize, usize, u64),
        argument: &BigUint,
        offset: &BigUint,
    ) -> Result<bool> {
        if tally.checked >= self.cap {
            tally.truncated = true;
            return Ok(false);
        }
        let lhs = self.floor.floor_mul(argument)?;
        let rhs = offset + self.floor.floor_mul(&BigUint::from(r))?;
        tally.checked += 1;
        if lhs != rhs && tally.first_failure.is_none() {
            tally.first_failure = Some(IdentityFailure {
                n,
                extra,
                r,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
        Ok(true)
    }
}

fn small(x: &BigUint) -> u64 {
    x.to_u64().expect("range bound fits in 64 bits")
}

/// Checks, over their full index ranges with `n <= n_max` and at most `cap`
/// tuples each:
///
/// * `floor((q_n + r) theta) = p_n + floor(r theta)` for `1 <= r < q_{n+1}`;
/// * `floor((s q_n + r) theta) = s p_n + floor(r theta)` for `n >= 1`,
///   `0 <= s <= a_{n+1}`, `1 <= r < q_n + q_{n-1}`;
/// * `floor((q_{n+l} + ... + q_n + r) theta) = p_{n+l} + ... + p_n + floor(r theta)`
///   for `n >= 1`, `n + l <= n_max`, `1 <= r < q_{n+1}`.
pub fn verify_floor_identities(
    theta: CfExpansion,
    n_max: usize,
    cap: usize,
) -> Result<FloorIdentityReport> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be >= 1".into()));
    }
    let mut floor = ThetaFloor::new(theta);
    let mut shift = IdentityTally::new("shift by q_n");
    let mut multiple = IdentityTally::new("shift by s q_n");
    let mut sum = IdentityTally::new("shift by q_n + ... + q_{n+l}");

    let mut pq = Vec::with_capacity(n_max + 3);
    for i in 0..=n_max + 1 {
        let (p, q) = floor.table().get(i)?;
        pq.push((p.clone(), q.clone()));
    }
    let mut checker = Checker {
        floor: &mut floor,
        cap,
    };

    'shift: for n in 0..=n_max {
        let (p_n, q_n) = &pq[n];
        for r in 1..small(&pq[n + 1].1) {
            let arg = q_n + r;
            if !checker.check(&mut shift, (n, 0, r), &arg, p_n)? {
                break 'shift;
            }
        }
    }

    'multiple: for n in 1..=n_max {
        let a_next = checker.floor.table().quotient(n + 1)?;
        let (p_n, q_n) = &pq[n];
        let r_end = small(q_n) + small(&pq[n - 1].1);
        for s in 0..=a_next {
            let base = q_n * s;
            let offset = p_n * s;
            for r in 1..r_end {
                let arg = &base + r;
                if !checker.check(&mut multiple, (n, s as usize, r), &arg, &offset)? {
                    break 'multiple;
                }
            }
        }
    }

    'sum: for n in 1..=n_max {
        let r_end = small(&pq[n + 1].1);
        let mut q_sum = BigUint::zero();
        let mut p_sum = BigUint::zero();
        for l in 0..=(n_max - n) {
            q_sum += &pq[n + l].1;
            p_sum += &pq[n + l].0;
            for r in 1..r_end {
                let arg = &q_sum + r;
                if !checker.check(&mut sum, (n, l, r), &arg, &p_sum)? {
                    break 'sum;
                }
            }
        }
    }

    Ok(FloorIdentityReport {
        shift,
        multiple,
        sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::FiniteWord;

    const GOLDEN: f64 = 0.618_033_988_749_894_9;

    #[test]
    fn golden_floors() {
        assert_eq!(floor_n_theta(CfExpansion::golden(), 1).unwrap(), 0);
        assert_eq!(floor_n_theta(CfExpansion::golden(), 2).unwrap(), 1);
        assert_eq!(floor_n_theta(CfExpansion::golden(), 5).unwrap(), 3);
    }

    #[test]
    fn floors_match_decimal_oracle_away_from_integers() {
        let mut f = ThetaFloor::new(CfExpansion::golden());
        for n in 1..5000u64 {
            let x = n as f64 * GOLDEN;
            if (x - x.round()).abs() > 1e-9 {
                assert_eq!(f.floor_mul_u64(n).unwrap(), x.floor() as u64, "n = {n}");
            }
        }
    }

    #[test]
    fn rational_theta_exhausts() {
        // [0; 2] = 1/2: floor(2 * 1/2) = 1 is hit exactly, the brackets never separate
        let theta = CfExpansion::from_word(FiniteWord::new(vec![2]).unwrap());
        assert!(matches!(
            floor_n_theta(theta, 2),
            Err(Error::StreamExhausted(_))
        ));
    }

    #[test]
    fn davison_examples() {
        let mut d = davison_stream(DavisonParams::new(CfExpansion::golden(), 2).unwrap());
        assert_eq!(
            d.take_prefix(8).unwrap().as_slice(),
            &[1, 2, 2, 1, 2, 2, 1, 1]
        );
        let mut d = davison_stream(DavisonParams::new(CfExpansion::golden(), 3).unwrap());
        assert_eq!(d.take_prefix(5).unwrap().as_slice(), &[1, 2, 2, 3, 1]);
        assert!(DavisonParams::new(CfExpansion::golden(), 1).is_err());
    }

    #[test]
    fn davison_letters_in_range_and_first_letter_rule() {
        let theta = CfExpansion::periodic(&[2], &[1, 3]).unwrap();
        let mut floor = ThetaFloor::new(CfExpansion::periodic(&[2], &[1, 3]).unwrap());
        let mut d = davison_stream(DavisonParams::new(theta, 4).unwrap());
        for n in 1..=2000u64 {
            let letter = d.next_letter().unwrap();
            assert!((1..=4).contains(&letter));
            if floor.floor_mul_u64(n).unwrap().is_multiple_of(4) {
                assert_eq!(letter, 1);
            }
        }
    }

    #[test]
    fn identities_hold_for_golden_and_silver() {
        let report = verify_floor_identities(CfExpansion::golden(), 10, 100_000).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(!report.shift.truncated);
        let report =
            verify_floor_identities(CfExpansion::periodic(&[], &[2]).unwrap(), 8, 10_000).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn multiple_identity_at_s_zero_is_tautological() {
        // with cap = r-range of n = 1, only s = 0 tuples are visited
        let report = verify_floor_identities(CfExpansion::golden(), 1, 1).unwrap();
        assert!(report.multiple.passed());
        assert_eq!(report.multiple.checked, 1);
        assert!(report.multiple.truncated);
    }

    #[test]
    fn cap_truncates() {
        let report = verify_floor_identities(CfExpansion::golden(), 12, 50).unwrap();
        assert_eq!(report.shift.checked, 50);
        assert!(report.shift.truncated && report.sum.truncated);
    }
}
