//! Rudin-Shapiro and Baum-Sweet sequences over a two-letter alphabet
//! `{a, b}`, from their binary-digit definitions and as codings of morphic
//! fixed points.

use crate::error::{Error, Result};
use crate::words::{Letter, Morphism, WordStream};

fn check_distinct(a: Letter, b: Letter) -> Result<()> {
    if a == 0 || b == 0 {
        return Err(Error::ZeroLetter(0));
    }
    if a == b {
        return Err(Error::InvalidParameter(format!(
            "letters a and b must differ, both are {a}"
        )));
    }
    Ok(())
}

/// Number of (overlapping) occurrences of `11` in the binary expansion of `n`.
pub fn count_eleven(n: u64) -> u32 {
    (n & (n >> 1)).count_ones()
}

/// `true` when every maximal block of zeros in the binary expansion of `n`
/// has even length; `0` has no digits and counts as `true`.
pub fn even_zero_blocks(mut n: u64) -> bool {
    while n > 0 {
        if n & 1 == 0 {
            let run = n.trailing_zeros();
            if run % 2 == 1 {
                return false;
            }
            n >>= run;
        } else {
            n >>= 1;
        }
    }
    true
}

/// `r_n = a` when binary `n` has an even number of `11` patterns, else `b`.
pub fn rudin_shapiro_term(n: u64, a: Letter, b: Letter) -> Letter {
    if count_eleven(n).is_multiple_of(2) {
        a
    } else {
        b
    }
}

/// `s_n = b` (symbol 1) when all zero blocks of binary `n` are even, else `a`.
pub fn baum_sweet_term(n: u64, a: Letter, b: Letter) -> Letter {
    if even_zero_blocks(n) {
        b
    } else {
        a
    }
}

pub fn rudin_shapiro_stream(a: Letter, b: Letter) -> Result<WordStream> {
    check_distinct(a, b)?;
    let mut n = 0u64;
    Ok(WordStream::from_fn(move || {
        let letter = rudin_shapiro_term(n, a, b);
        n += 1;
        Ok(Some(letter))
    }))
}

pub fn baum_sweet_stream(a: Letter, b: Letter) -> Result<WordStream> {
    check_distinct(a, b)?;
    let mut n = 0u64;
    Ok(WordStream::from_fn(move || {
        let letter = baum_sweet_term(n, a, b);
        n += 1;
        Ok(Some(letter))
    }))
}

/// `sigma(1) = 12, sigma(2) = 32, sigma(3) = 24, sigma(4) = 44`.
pub fn baum_sweet_morphism() -> Morphism {
    Morphism::on_range(&[&[1, 2], &[3, 2], &[2, 4], &[4, 4]]).expect("valid morphism")
}

/// `1, 2 -> b` and `3, 4 -> a`.
pub fn baum_sweet_coding(a: Letter, b: Letter) -> Result<Morphism> {
    check_distinct(a, b)?;
    Morphism::on_range(&[&[b], &[b], &[a], &[a]])
}

/// `sigma(1) = 12, sigma(2) = 13, sigma(3) = 42, sigma(4) = 43`, the
/// standard four-letter presentation whose coding is Rudin-Shapiro.
pub fn rudin_shapiro_morphism() -> Morphism {
    Morphism::on_range(&[&[1, 2], &[1, 3], &[4, 2], &[4, 3]]).expect("valid morphism")
}

/// `sigma(1) = 12, sigma(2) = 42, sigma(3) = 13, sigma(4) = 43`; kept only to
/// show that it does not code Rudin-Shapiro.
pub fn rudin_shapiro_morphism_misprinted() -> Morphism {
    Morphism::on_range(&[&[1, 2], &[4, 2], &[1, 3], &[4, 3]]).expect("valid morphism")
}

/// `1, 2 -> a` and `3, 4 -> b`.
pub fn rudin_shapiro_coding(a: Letter, b: Letter) -> Result<Morphism> {
    check_distinct(a, b)?;
    Morphism::on_range(&[&[a], &[a], &[b], &[b]])
}

pub fn baum_sweet_morphic_stream(a: Letter, b: Letter) -> Result<WordStream> {
    baum_sweet_coding(a, b)?.coding_apply(baum_sweet_morphism().fixed_point_stream(1)?)
}

pub fn rudin_shapiro_morphic_stream(a: Letter, b: Letter) -> Result<WordStream> {
    rudin_shapiro_coding(a, b)?.coding_apply(rudin_shapiro_morphism().fixed_point_stream(1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prefix(mut s: WordStream, n: usize) -> Vec<Letter> {
        s.take_prefix(n).unwrap().into_vec()
    }

    #[test]
    fn rudin_shapiro_examples() {
        assert_eq!(
            prefix(rudin_shapiro_stream(1, 2).unwrap(), 8),
            [1, 1, 1, 2, 1, 1, 2, 1]
        );
        assert_eq!(rudin_shapiro_term(3, 1, 2), 2);
        assert_eq!(rudin_shapiro_term(7, 1, 2), 1);
        assert_eq!(count_eleven(7), 2);
    }

    #[test]
    fn baum_sweet_examples() {
        assert_eq!(
            prefix(baum_sweet_stream(1, 2).unwrap(), 6),
            [2, 2, 1, 2, 2, 1]
        );
        assert_eq!(baum_sweet_term(4, 1, 2), 2);
        assert!(even_zero_blocks(0));
        assert!(!even_zero_blocks(0b1000));
        assert!(even_zero_blocks(0b1001));
        assert!(!even_zero_blocks(0b10100));
    }

    #[test]
    fn baum_sweet_morphic_prefix() {
        let (a, b) = (1, 2);
        assert_eq!(
            prefix(baum_sweet_morphic_stream(a, b).unwrap(), 12),
            [b, b, a, b, b, a, a, b, a, b, a, a]
        );
    }

    #[test]
    fn routes_agree_on_a_short_prefix() {
        let n = 4096;
        assert_eq!(
            prefix(baum_sweet_morphic_stream(3, 7).unwrap(), n),
            prefix(baum_sweet_stream(3, 7).unwrap(), n)
        );
        assert_eq!(
            prefix(rudin_shapiro_morphic_stream(3, 7).unwrap(), n),
            prefix(rudin_shapiro_stream(3, 7).unwrap(), n)
        );
    }

    #[test]
    fn misprinted_morphism_disagrees() {
        let s = rudin_shapiro_coding(1, 2)
            .unwrap()
            .coding_apply(
                rudin_shapiro_morphism_misprinted()
                    .fixed_point_stream(1)
                    .unwrap(),
            )
            .unwrap();
        assert_ne!(
            prefix(s, 16),
            prefix(rudin_shapiro_stream(1, 2).unwrap(), 16)
        );
        let u = prefix(
            rudin_shapiro_morphism_misprinted()
                .fixed_point_stream(1)
                .unwrap(),
            10,
        );
        assert_eq!(u, [1, 2, 4, 2, 4, 3, 4, 2, 4, 3]);
    }

    #[test]
    fn letters_must_differ() {
        assert!(rudin_shapiro_stream(2, 2).is_err());
        assert!(baum_sweet_stream(0, 2).is_err());
    }
}
