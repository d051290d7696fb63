//! `U V^w` prefix repetitions.

use std::fmt;

use num_rational::Ratio;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cf::denominators_at;
use crate::error::Result;
use crate::words::{Exponent, Letter};

/// The scanned word begins with `U V^w` where `|U| = r` and `|V| = s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Witness {
    pub r: usize,
    pub s: usize,
    /// Maximal for `(r, s)` within the scanned prefix; `w * s` is an integer.
    pub w: Exponent,
}

impl Witness {
    /// `|U V^w| = r + w s`.
    pub fn end(&self) -> usize {
        self.r + (self.w * Ratio::from_integer(self.s as u64)).to_integer() as usize
    }

    /// `r / s`.
    pub fn offset_ratio(&self) -> Exponent {
        Ratio::new(self.r as u64, self.s as u64)
    }

    /// Letterwise check that `word` begins with `U V^w`.
    pub fn holds_in(&self, word: &[Letter]) -> bool {
        let end = self.end();
        end <= word.len() && (self.r + self.s..end).all(|i| word[i] == word[i - self.s])
    }

    /// `true` when `w` cannot be raised by `1/s` inside `word`.
    pub fn is_maximal_in(&self, word: &[Letter]) -> bool {
        let end = self.end();
        end >= word.len() || word[end] != word[end - self.s]
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}/{}",
            self.r,
            self.s,
            self.w.numer(),
            self.w.denom()
        )
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Witness", 4)?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("s", &self.s)?;
        st.serialize_field("w_num", self.w.numer())?;
        st.serialize_field("w_den", self.w.denom())?;
        st.end()
    }
}

/// `z[i]` = length of the longest common prefix of `t` and `t[i..]`;
/// `z[0] = t.len()`.
pub fn z_function(t: &[Letter]) -> Vec<usize> {
    let n = t.len();
    let mut z = vec![0; n];
    if n == 0 {
        return z;
    }
    z[0] = n;
    let (mut l, mut r) = (0, 0);
    for i in 1..n {
        if i < r {
            z[i] = z[i - l].min(r - i);
        }
        while i + z[i] < n && t[z[i]] == t[i + z[i]] {
            z[i] += 1;
        }
        if i + z[i] > r {
            l = i;
            r = i + z[i];
        }
    }
    z
}

/// All maximal repetitions `U V^w` with `|U| <= max_r` and `w >= min_w`,
/// dropping any witness beaten by one with smaller `r`, the same `s` and an
/// exponent at least as large. Sorted by `(s, r)`.
///
/// Each offset costs one Z-function pass, so the scan is
/// `O(|prefix| * max_r)`.
pub fn detect_repetitions(prefix: &[Letter], max_r: usize, min_w: Exponent) -> Vec<Witness> {
    let n = prefix.len();
    let mut best = vec![0usize; n + 1];
    let mut out = Vec::new();
    let (num, den) = (*min_w.numer() as u128, *min_w.denom() as u128);
    for r in 0..=max_r.min(n.saturating_sub(1)) {
        let z = z_function(&prefix[r..]);
        for s in 1..z.len() {
            let span = s + z[s];
            // span / s >= min_w
            if (span as u128) * den < num * s as u128 || span <= best[s] {
                continue;
            }
            best[s] = span;
            out.push(Witness {
                r,
                s,
                w: Ratio::new(span as u64, s as u64),
            });
        }
    }
    out.sort_by_key(|w| (w.s, w.r));
    out
}

/// Reference scanner for [`detect_repetitions`]: direct letter comparisons
/// for every `(r, s)`, cubic in the prefix length.
pub fn naive_repetitions(prefix: &[Letter], max_r: usize, min_w: Exponent) -> Vec<Witness> {
    let n = prefix.len();
    let mut out: Vec<Witness> = Vec::new();
    for r in 0..=max_r.min(n.saturating_sub(1)) {
        for s in 1..n - r {
            let mut len = 0;
            while r + s + len < n && prefix[r + s + len] == prefix[r + len] {
                len += 1;
            }
            let w = Ratio::new((s + len) as u64, s as u64);
            if w < min_w || out.iter().any(|o| o.s == s && o.w >= w) {
                continue;
            }
            out.push(Witness { r, s, w });
        }
    }
    out.sort_by_key(|w| (w.s, w.r));
    out
}

/// Checks `q_{r+s} q_{r+[(w-1)s]} <= 4 q_r q_{r+[ws]}` for each witness,
/// reading `word` as the partial quotients `[0; a_1, a_2, ...]`.
pub fn continuant_consequence(word: &[Letter], witnesses: &[Witness]) -> Result<Vec<bool>> {
    let mut indices = Vec::with_capacity(4 * witnesses.len());
    for w in witnesses {
        let (r, s) = (w.r, w.s);
        let ws = w.end() - r;
        indices.extend([r, r + s, r + ws - s, r + ws]);
    }
    let qs = denominators_at(word, &indices)?;
    Ok(qs
        .chunks_exact(4)
        .map(|q| &q[1] * &q[2] <= &q[0] * &q[3] * 4u32)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wit(r: usize, s: usize, n: u64, d: u64) -> Witness {
        Witness {
            r,
            s,
            w: Ratio::new(n, d),
        }
    }

    #[test]
    fn square_prefix() {
        let found = detect_repetitions(&[1, 1, 2, 1, 1, 2], 0, Ratio::new(3, 2));
        assert!(found.contains(&wit(0, 3, 2, 1)));
    }

    #[test]
    fn rudin_shapiro_nine() {
        let rs = [1, 1, 1, 2, 1, 1, 2, 1, 1];
        let found = detect_repetitions(&rs, 0, Ratio::new(9, 8));
        assert!(found.contains(&wit(0, 8, 9, 8)));
    }

    #[test]
    fn baum_sweet_ten() {
        let (a, b) = (1, 2);
        let bs = [b, b, a, b, b, a, a, b, a, b];
        let found = detect_repetitions(&bs, 1, Ratio::new(3, 2));
        assert!(found.contains(&wit(1, 6, 3, 2)));
        assert!(!found.iter().any(|w| w.r == 0 && w.s == 6));
    }

    #[test]
    fn domination() {
        // r = 1 gives the same exponent as r = 0 for s = 1, so it is dropped.
        let found = detect_repetitions(&[1, 1, 1, 2, 2, 2, 2], 6, Ratio::new(2, 1));
        assert_eq!(
            found,
            vec![wit(0, 1, 3, 1), wit(3, 1, 4, 1), wit(3, 2, 2, 1)]
        );
    }

    #[test]
    fn matches_reference_scanner() {
        let words: [&[Letter]; 3] = [
            &[1, 1, 1, 2, 2, 2, 2],
            &[1, 2, 1, 1, 2, 1, 2, 1, 1, 2],
            &[3, 3, 1, 3, 3, 1, 3],
        ];
        for word in words {
            for max_r in [0, 2, word.len()] {
                let min_w = Ratio::new(11, 10);
                assert_eq!(
                    detect_repetitions(word, max_r, min_w),
                    naive_repetitions(word, max_r, min_w)
                );
            }
        }
    }

    #[test]
    fn z_function_basic() {
        assert_eq!(z_function(&[1, 1, 2, 1, 1]), [5, 1, 0, 2, 1]);
        assert!(z_function(&[]).is_empty());
    }

    #[test]
    fn display_and_json() {
        let w = wit(1, 6, 3, 2);
        assert_eq!(w.to_string(), "1 6 3/2");
        assert_eq!(
            serde_json::to_string(&w).unwrap(),
            r#"{"r":1,"s":6,"w_num":3,"w_den":2}"#
        );
    }

    #[test]
    fn continuant_check_on_square() {
        let word = [1, 2, 1, 2, 1, 2, 3];
        let ws = detect_repetitions(&word, 2, Ratio::new(3, 2));
        assert!(!ws.is_empty());
        assert!(continuant_consequence(&word, &ws)
            .unwrap()
            .iter()
            .all(|&ok| ok));
    }
}
