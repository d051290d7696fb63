//! Words `W_1 W_2^2 W_3^2 ...` built from balanced blocks (every letter of
//! the alphabet equally often) whose lengths grow by more than a factor
//! `lambda` at each step.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::words::{Alphabet, FiniteWord, Letter, WordStream};

/// `true` when every letter of `alphabet` occurs in `word` equally often and
/// no other letter occurs.
pub fn is_balanced(word: &[Letter], alphabet: &Alphabet) -> bool {
    if word.is_empty() {
        return false;
    }
    let mut counts = vec![0usize; alphabet.len()];
    for &l in word {
        match alphabet.index_of(l) {
            Some(i) => counts[i] += 1,
            None => return false,
        }
    }
    counts.iter().all(|&c| c == counts[0])
}

#[derive(Debug, Clone, PartialEq)]
pub enum BlockSource {
    /// User-supplied blocks; the word ends after the last one.
    Explicit(Vec<FiniteWord>),
    /// Shuffled balanced blocks with `h_1 = 1` copies of each letter and
    /// `h_{n+1}` the least odd integer above `lambda h_n`, so every block has
    /// odd length.
    Seeded(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcatFamily {
    alphabet: Alphabet,
    source: BlockSource,
    lambda: f64,
}

impl ConcatFamily {
    pub fn new(alphabet: Alphabet, source: BlockSource, lambda: f64) -> Result<Self> {
        let k = alphabet.len();
        if k < 3 || k.is_multiple_of(2) {
            return Err(Error::InvalidAlphabet(format!(
                "block alphabet must have odd size >= 3, got {k}"
            )));
        }
        if !lambda.is_finite() || lambda <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "lambda must exceed 1, got {lambda}"
            )));
        }
        Ok(ConcatFamily {
            alphabet,
            source,
            lambda,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Block stream; each block is checked when produced.
    pub fn blocks(&self) -> Blocks {
        let rng = match self.source {
            BlockSource::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            BlockSource::Explicit(_) => None,
        };
        Blocks {
            family: self.clone(),
            rng,
            index: 0,
            prev_len: None,
            copies: 0,
        }
    }

    /// `W_1, ..., W_n`.
    pub fn first_blocks(&self, n: usize) -> Result<Vec<FiniteWord>> {
        let mut blocks = self.blocks();
        (0..n)
            .map(|_| blocks.next_block()?.ok_or(Error::StreamExhausted(n)))
            .collect()
    }
}

pub struct Blocks {
    family: ConcatFamily,
    rng: Option<ChaCha8Rng>,
    index: usize,
    prev_len: Option<usize>,
    copies: usize,
}

impl Blocks {
    /// Next block, `Ok(None)` when an explicit list runs out.
    pub fn next_block(&mut self) -> Result<Option<FiniteWord>> {
        let block = match (&self.family.source, self.rng.as_mut()) {
            (BlockSource::Explicit(list), _) => match list.get(self.index) {
                Some(b) => b.clone(),
                None => return Ok(None),
            },
            (BlockSource::Seeded(_), Some(rng)) => {
                let h = next_odd_above(self.copies, self.family.lambda);
                self.copies = h;
                let mut letters: Vec<Letter> = self
                    .family
                    .alphabet
                    .letters()
                    .iter()
                    .flat_map(|&l| std::iter::repeat_n(l, h))
                    .collect();
                letters.shuffle(rng);
                FiniteWord::new(letters)?
            }
            (BlockSource::Seeded(_), None) => unreachable!("seeded source always has a generator"),
        };
        self.index += 1;
        if !is_balanced(&block, &self.family.alphabet) {
            return Err(Error::BlockInvariant {
                index: self.index,
                reason: "letters of the alphabet do not occur equally often".into(),
            });
        }
        if let Some(prev) = self.prev_len {
            if block.len() as f64 <= self.family.lambda * prev as f64 {
                return Err(Error::BlockInvariant {
                    index: self.index,
                    reason: format!(
                        "length {} does not exceed lambda * {} = {}",
                        block.len(),
                        prev,
                        self.family.lambda * prev as f64
                    ),
                });
            }
        }
        self.prev_len = Some(block.len());
        Ok(Some(block))
    }
}

/// Least odd `h` with `h > lambda * prev`; `1` when `prev == 0`.
fn next_odd_above(prev: usize, lambda: f64) -> usize {
    if prev == 0 {
        return 1;
    }
    let mut h = (lambda * prev as f64).floor() as usize + 1;
    if h.is_multiple_of(2) {
        h += 1;
    }
    h
}

/// `W_1 W_2 W_2 W_3 W_3 ...`.
pub fn concat_family_stream(fam: ConcatFamily) -> WordStream {
    let mut blocks = fam.blocks();
    let mut current: Vec<Letter> = Vec::new();
    let mut pos = 0usize;
    let mut first = true;
    WordStream::from_fn(move || {
        if pos >= current.len() {
            let Some(block) = blocks.next_block()? else {
                return Ok(None);
            };
            current = if first {
                block.to_vec()
            } else {
                block.concat(&block).into_vec()
            };
            first = false;
            pos = 0;
        }
        let l = current[pos];
        pos += 1;
        Ok(Some(l))
    })
}
