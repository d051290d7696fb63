//! Eventual-periodicity scan over a finite prefix.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{Letter, WordStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Periodicity {
    pub preperiod: usize,
    pub period: usize,
}

/// Least period `p <= max_period` whose shortest preperiod within `prefix`
/// is at most `max_preperiod`, with that preperiod.
pub fn periodicity_of(
    prefix: &[Letter],
    max_period: usize,
    max_preperiod: usize,
) -> Option<Periodicity> {
    let n = prefix.len();
    (1..=max_period.min(n.saturating_sub(1))).find_map(|p| {
        let last_break = (0..n - p).rev().find(|&i| prefix[i] != prefix[i + p]);
        let preperiod = last_break.map_or(0, |i| i + 1);
        (preperiod <= max_preperiod).then_some(Periodicity {
            preperiod,
            period: p,
        })
    })
}

/// `None` only says that no period up to `max_period` with preperiod up to
/// `max_preperiod` fits the first `prefix_len` letters.
pub fn periodicity_scan(
    mut word: WordStream,
    prefix_len: usize,
    max_period: usize,
    max_preperiod: usize,
) -> Result<Option<Periodicity>> {
    if max_period == 0 || max_preperiod + 2 * max_period > prefix_len {
        return Err(Error::InvalidParameter(format!(
            "periodicity scan needs 1 <= max_period and max_preperiod + 2 max_period <= {prefix_len}"
        )));
    }
    let prefix = word.take_prefix(prefix_len)?;
    Ok(periodicity_of(&prefix, max_period, max_preperiod))
}
