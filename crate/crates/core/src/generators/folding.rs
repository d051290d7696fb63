//! Paperfolding sequences. The fold map `F_i(w) = w i (-mirror(w))` turns
//! the crease pattern of `n` folds into that of `n + 1`; the first
//! instruction acts innermost so that each pattern is a prefix of the next.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::words::{Letter, Sign, SignedWord, WordStream};

/// `F_i(w) = w i (-mirror(w))`.
pub fn fold(instruction: Sign, word: &SignedWord) -> SignedWord {
    let mut out = Vec::with_capacity(2 * word.len() + 1);
    out.extend_from_slice(&word.0);
    out.push(instruction);
    out.extend(word.0.iter().rev().map(|s| s.negate()));
    SignedWord(out)
}

/// A deterministic, never-ending sequence of folding instructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instructions {
    /// The same fold every time; `Constant(Sign::Plus)` is the regular
    /// paperfolding sequence.
    Constant(Sign),
    /// A finite pattern repeated forever.
    Periodic(Vec<Sign>),
    /// Pseudorandom signs from a seeded ChaCha8 generator.
    Seeded(u64),
}

impl Instructions {
    /// The first `n` instructions `e_0, ..., e_{n-1}`.
    pub fn take(&self, n: usize) -> Vec<Sign> {
        match self {
            Instructions::Constant(s) => vec![*s; n],
            Instructions::Periodic(p) => p.iter().copied().cycle().take(n).collect(),
            Instructions::Seeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..n)
                    .map(|_| {
                        if rng.random::<bool>() {
                            Sign::Plus
                        } else {
                            Sign::Minus
                        }
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldingSystem {
    pub instructions: Instructions,
    pub letter_plus: Letter,
    pub letter_minus: Letter,
}

impl FoldingSystem {
    pub fn new(
        instructions: Instructions,
        letter_plus: Letter,
        letter_minus: Letter,
    ) -> Result<Self> {
        if letter_plus == 0 || letter_minus == 0 {
            return Err(Error::ZeroLetter(0));
        }
        if letter_plus == letter_minus {
            return Err(Error::InvalidParameter("fold letters must differ".into()));
        }
        if let Instructions::Periodic(p) = &instructions {
            if p.is_empty() {
                return Err(Error::InvalidParameter(
                    "instruction pattern is empty".into(),
                ));
            }
        }
        Ok(FoldingSystem {
            instructions,
            letter_plus,
            letter_minus,
        })
    }

    /// Regular paperfolding over `{a, b}`.
    pub fn regular(a: Letter, b: Letter) -> Result<Self> {
        FoldingSystem::new(Instructions::Constant(Sign::Plus), a, b)
    }

    fn letter(&self, s: Sign) -> Letter {
        match s {
            Sign::Plus => self.letter_plus,
            Sign::Minus => self.letter_minus,
        }
    }
}

/// Crease pattern after `e.len()` folds, `e[0]` applied first; length
/// `2^len - 1`.
pub fn crease_pattern(e: &[Sign]) -> SignedWord {
    e.iter().fold(SignedWord::default(), |w, &s| fold(s, &w))
}

/// `f_m` directly: with `m + 1 = 2^v (2j + 1)`, `f_m = e_v (-1)^j`.
pub fn paperfolding_term(e: &[Sign], m: u64) -> Sign {
    let v = (m + 1).trailing_zeros() as usize;
    let j = (m + 1) >> (v + 1);
    if j.is_multiple_of(2) {
        e[v]
    } else {
        e[v].negate()
    }
}

pub fn paperfolding_stream(sys: FoldingSystem) -> WordStream {
    let mut pattern: Vec<Sign> = Vec::new();
    let mut folds = 0usize;
    let mut cache: Vec<Sign> = Vec::new();
    let mut pos = 0usize;
    WordStream::from_fn(move || {
        if pos >= pattern.len() {
            if folds >= cache.len() {
                cache = sys.instructions.take((2 * cache.len()).max(64));
            }
            pattern = fold(cache[folds], &SignedWord(std::mem::take(&mut pattern))).0;
            folds += 1;
        }
        let l = sys.letter(pattern[pos]);
        pos += 1;
        Ok(Some(l))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::{Minus as M, Plus as P};

    #[test]
    fn regular_prefix() {
        let mut s = paperfolding_stream(FoldingSystem::regular(1, 2).unwrap());
        assert_eq!(s.take_prefix(7).unwrap().as_slice(), &[1, 1, 2, 1, 1, 2, 2]);
    }

    #[test]
    fn first_letter_is_first_instruction() {
        for e0 in [P, M] {
            let sys = FoldingSystem::new(Instructions::Periodic(vec![e0, P, M]), 1, 2).unwrap();
            let first = paperfolding_stream(sys).next_letter().unwrap();
            assert_eq!(first, if e0 == P { 1 } else { 2 });
        }
    }

    #[test]
    fn alternating_instructions() {
        let sys = FoldingSystem::new(Instructions::Periodic(vec![P, M]), 1, 2).unwrap();
        let mut s = paperfolding_stream(sys);
        let expected: Vec<Letter> = crease_pattern(&[P, M, P])
            .0
            .iter()
            .map(|&x| if x == P { 1 } else { 2 })
            .collect();
        assert_eq!(s.take_prefix(7).unwrap().as_slice(), expected.as_slice());
        assert_eq!(&expected[..3], &[1, 2, 2]);
    }

    #[test]
    fn crease_lengths_and_prefixes() {
        let e = Instructions::Seeded(11).take(10);
        for n in 1..e.len() {
            let a = crease_pattern(&e[..n]);
            let b = crease_pattern(&e[..n + 1]);
            assert_eq!(a.len(), (1 << n) - 1);
            assert_eq!(&b.0[..a.len()], &a.0[..]);
        }
    }

    #[test]
    fn stream_matches_direct_formula() {
        for seed in 0..5 {
            let ins = Instructions::Seeded(seed);
            let e = ins.take(20);
            let mut s = paperfolding_stream(FoldingSystem::new(ins, 3, 5).unwrap());
            for m in 0..5000u64 {
                let expected = if paperfolding_term(&e, m) == P { 3 } else { 5 };
                assert_eq!(s.next_letter().unwrap(), expected);
            }
        }
    }

    #[test]
    fn double_fold_identity() {
        // F_{e0}(F_{e1}(V)) = (V e1 -mirror(V)) e0 V (-mirror(V e1))
        let v = SignedWord(vec![P, P, M, M, P]);
        for e0 in [P, M] {
            for e1 in [P, M] {
                let lhs = fold(e0, &fold(e1, &v));
                let mut ve1 = v.0.clone();
                ve1.push(e1);
                let mut rhs = ve1.clone();
                rhs.extend(v.mirror().negate().0);
                rhs.push(e0);
                rhs.extend(v.0.iter().copied());
                rhs.extend(SignedWord(ve1).mirror().negate().0);
                assert_eq!(lhs.0, rhs);
            }
        }
    }

    #[test]
    fn validation() {
        assert!(FoldingSystem::regular(1, 1).is_err());
        assert!(FoldingSystem::new(Instructions::Periodic(vec![]), 1, 2).is_err());
    }
}
