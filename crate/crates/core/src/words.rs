//! Finite words over positive-integer letters, lazily evaluated infinite
//! words, and the morphism machinery used by the sequence generators.
//!
//! Letters are plain positive integers so that a word can be read directly as
//! a list of partial quotients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Letter = u64;

/// Exact positive rational exponent, as used by fractional powers and
/// repetition witnesses.
pub type Exponent = Ratio<u64>;

/// An ordered set of distinct positive letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<Letter>,
}

impl Alphabet {
    /// Letters must be non-empty, strictly increasing and positive.
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        if letters[0] == 0 {
            return Err(Error::ZeroLetter(0));
        }
        if letters.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidAlphabet(format!(
                "letters must be distinct and strictly increasing: {letters:?}"
            )));
        }
        Ok(Alphabet { letters })
    }

    /// Sorted, deduplicated alphabet of the letters occurring in `word`.
    pub fn of_word(word: &[Letter]) -> Result<Self> {
        let mut letters = word.to_vec();
        letters.sort_unstable();
        letters.dedup();
        Alphabet::new(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, letter: Letter) -> bool {
        self.index_of(letter).is_some()
    }

    pub fn index_of(&self, letter: Letter) -> Option<usize> {
        self.letters.binary_search(&letter).ok()
    }
}

/// A finite word of positive letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FiniteWord(Vec<Letter>);

impl FiniteWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if let Some(&zero) = letters.iter().find(|&&l| l == 0) {
            return Err(Error::ZeroLetter(zero));
        }
        Ok(FiniteWord(letters))
    }

    pub fn empty() -> Self {
        FiniteWord(Vec::new())
    }

    pub fn as_slice(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Letter> {
        self.0
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        FiniteWord(letters)
    }

    pub fn prefix(&self, len: usize) -> FiniteWord {
        FiniteWord(self.0[..len.min(self.len())].to_vec())
    }

    /// Reversal `w_m ... w_1`.
    pub fn mirror(&self) -> FiniteWord {
        FiniteWord(self.0.iter().rev().copied().collect())
    }

    /// `W^x`: `W` repeated `floor(x)` times followed by the prefix of `W` of
    /// length `ceil(frac(x) * |W|)`.
    pub fn frac_power(&self, x: Exponent) -> Result<FiniteWord> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        if *x.numer() == 0 {
            return Err(Error::NonPositiveExponent(x.to_string()));
        }
        let whole = x.to_integer() as usize;
        let extra = frac_extra_len(x, self.len());
        let mut letters = Vec::with_capacity(whole * self.len() + extra);
        for _ in 0..whole {
            letters.extend_from_slice(&self.0);
        }
        letters.extend_from_slice(&self.0[..extra]);
        Ok(FiniteWord(letters))
    }

    /// Number of occurrences of each letter, keyed by letter.
    pub fn letter_counts(&self) -> BTreeMap<Letter, usize> {
        let mut counts = BTreeMap::new();
        for &l in &self.0 {
            *counts.entry(l).or_insert(0) += 1;
        }
        counts
    }
}

/// `ceil(frac(x) * len)`.
pub(crate) fn frac_extra_len(x: Exponent, len: usize) -> usize {
    let den = *x.denom() as u128;
    let rem = (*x.numer() as u128) % den;
    (rem * len as u128).div_ceil(den) as usize
}

/// Length of `W^x` for `|W| = len`.
pub fn frac_power_len(len: usize, x: Exponent) -> usize {
    x.to_integer() as usize * len + frac_extra_len(x, len)
}

impl Deref for FiniteWord {
    type Target = [Letter];

    fn deref(&self) -> &[Letter] {
        &self.0
    }
}

impl TryFrom<Vec<Letter>> for FiniteWord {
    type Error = Error;

    fn try_from(letters: Vec<Letter>) -> Result<Self> {
        FiniteWord::new(letters)
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn negate(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A word over `{+1, -1}`, e.g. folding instructions or crease patterns.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SignedWord(pub Vec<Sign>);

impl SignedWord {
    pub fn from_i8(values: &[i8]) -> Result<Self> {
        values
            .iter()
            .map(|&v| match v {
                1 => Ok(Sign::Plus),
                -1 => Ok(Sign::Minus),
                other => Err(Error::InvalidParameter(format!(
                    "sign must be +1 or -1, got {other}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SignedWord)
    }

    pub fn negate(&self) -> SignedWord {
        SignedWord(self.0.iter().map(|s| s.negate()).collect())
    }

    pub fn mirror(&self) -> SignedWord {
        SignedWord(self.0.iter().rev().copied().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A non-erasing morphism defined on an alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    domain: Alphabet,
    images: Vec<FiniteWord>,
    uniform_length: Option<usize>,
}

impl Morphism {
    /// `images[i]` is the image of the `i`-th letter of `domain`.
    pub fn new(domain: Alphabet, images: Vec<FiniteWord>) -> Result<Self> {
        if images.len() != domain.len() {
            return Err(Error::InvalidMorphism(format!(
                "{} images for {} letters",
                images.len(),
                domain.len()
            )));
        }
        if let Some(i) = images.iter().position(|w| w.is_empty()) {
            return Err(Error::InvalidMorphism(format!(
                "image of letter {} is empty",
                domain.letters()[i]
            )));
        }
        let first = images[0].len();
        let uniform_length = images.iter().all(|w| w.len() == first).then_some(first);
        Ok(Morphism {
            domain,
            images,
            uniform_length,
        })
    }

    /// Builds a morphism on `{1, ..., images.len()}`.
    pub fn on_range(images: &[&[Letter]]) -> Result<Self> {
        let domain = Alphabet::new((1..=images.len() as Letter).collect())?;
        let images = images
            .iter()
            .map(|w| FiniteWord::new(w.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(domain, images)
    }

    pub fn domain(&self) -> &Alphabet {
        &self.domain
    }

    pub fn uniform_length(&self) -> Option<usize> {
        self.uniform_length
    }

    pub fn is_coding(&self) -> bool {
        self.uniform_length == Some(1)
    }

    pub fn image(&self, letter: Letter) -> Result<&FiniteWord> {
        self.domain
            .index_of(letter)
            .map(|i| &self.images[i])
            .ok_or(Error::LetterOutsideAlphabet(letter))
    }

    pub fn apply(&self, word: &[Letter]) -> Result<FiniteWord> {
        let mut out = Vec::new();
        for &l in word {
            out.extend_from_slice(self.image(l)?);
        }
        Ok(FiniteWord(out))
    }

    /// The fixed point starting with `seed`, generated lazily.
    pub fn fixed_point_stream(&self, seed: Letter) -> Result<WordStream> {
        let first = self.image(seed)?;
        if first.len() < 2 || first[0] != seed {
            return Err(Error::NotProlongable(seed));
        }
        Ok(WordStream::new(FixedPointSource {
            morphism: self.clone(),
            buffer: first.to_vec(),
            expanded: 1,
            emitted: 0,
        }))
    }

    /// Letter-to-letter relabelling of `stream`; unknown letters surface as
    /// errors when pulled.
    pub fn coding_apply(&self, stream: WordStream) -> Result<WordStream> {
        if !self.is_coding() {
            return Err(Error::InvalidMorphism("a coding must be 1-uniform".into()));
        }
        let coding = self.clone();
        let mut inner = stream;
        Ok(WordStream::from_fn(move || {
            let letter = inner.next_letter()?;
            Ok(Some(coding.image(letter)?[0]))
        }))
    }
}

/// Produces letters one at a time; `Ok(None)` means the word is finite and
/// has ended.
pub trait LetterSource: Send {
    fn pull(&mut self) -> Result<Option<Letter>>;
}

struct FnSource<F>(F);

impl<F> LetterSource for FnSource<F>
where
    F: FnMut() -> Result<Option<Letter>> + Send,
{
    fn pull(&mut self) -> Result<Option<Letter>> {
        (self.0)()
    }
}

struct FixedPointSource {
    morphism: Morphism,
    buffer: Vec<Letter>,
    expanded: usize,
    emitted: usize,
}

impl LetterSource for FixedPointSource {
    fn pull(&mut self) -> Result<Option<Letter>> {
        // u = sigma(u_0) sigma(u_1) ...; the buffer always runs ahead of
        // `expanded` because sigma(seed) has length at least 2.
        while self.emitted >= self.buffer.len() {
            let letter = self.buffer[self.expanded];
            let image = self.morphism.image(letter)?;
            self.buffer.extend_from_slice(image);
            self.expanded += 1;
        }
        let l = self.buffer[self.emitted];
        self.emitted += 1;
        Ok(Some(l))
    }
}

/// Single-consumer, pull-based word. Streams for the families in this crate
/// never end; streams built from finite words report exhaustion as an error.
pub struct WordStream {
    source: Box<dyn LetterSource>,
    position: usize,
}

impl WordStream {
    pub fn new(source: impl LetterSource + 'static) -> Self {
        WordStream {
            source: Box::new(source),
            position: 0,
        }
    }

    pub fn from_fn<F>(f: F) -> Self
    where
        F: FnMut() -> Result<Option<Letter>> + Send + 'static,
    {
        WordStream::new(FnSource(f))
    }

    /// A finite stream over the letters of `word`.
    pub fn from_word(word: FiniteWord) -> Self {
        let mut letters = word.into_vec().into_iter();
        WordStream::from_fn(move || Ok(letters.next()))
    }

    /// Number of letters already yielded.
    pub fn position(&self) -> usize {
        self.position
    }

    pub fn next_letter(&mut self) -> Result<Letter> {
        match self.source.pull()? {
            Some(l) => {
                self.position += 1;
                Ok(l)
            }
            None => Err(Error::StreamExhausted(self.position)),
        }
    }

    /// Pulls the next `n` letters.
    pub fn take_prefix(&mut self, n: usize) -> Result<FiniteWord> {
        let mut letters = Vec::with_capacity(n);
        for _ in 0..n {
            letters.push(self.next_letter()?);
        }
        Ok(FiniteWord(letters))
    }
}

impl fmt::Debug for WordStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WordStream")
            .field("position", &self.position)
            .finish_non_exhaustive()
    }
}

impl Iterator for WordStream {
    type Item = Result<Letter>;

    fn next(&mut self) -> Option<Result<Letter>> {
        match self.next_letter() {
            Err(Error::StreamExhausted(_)) => None,
            other => Some(other),
        }
    }
}

/// Whitespace-separated word files, one word per line, with an optional
/// `#alphabet 1=a 2=b` header aliasing letters to symbols.
pub mod text {
    use std::collections::BTreeMap;

    use super::{FiniteWord, Letter};
    use crate::error::{Error, Result};

    /// Letter aliases from an `#alphabet` header.
    #[derive(Debug, Clone, Default, PartialEq, Eq)]
    pub struct Aliases {
        to_letter: BTreeMap<String, Letter>,
        to_symbol: BTreeMap<Letter, String>,
    }

    impl Aliases {
        pub fn insert(&mut self, letter: Letter, symbol: &str) {
            self.to_letter.insert(symbol.to_string(), letter);
            self.to_symbol.insert(letter, symbol.to_string());
        }

        pub fn letter(&self, symbol: &str) -> Option<Letter> {
            self.to_letter.get(symbol).copied()
        }

        pub fn symbol(&self, letter: Letter) -> Option<&str> {
            self.to_symbol.get(&letter).map(String::as_str)
        }

        pub fn is_empty(&self) -> bool {
            self.to_letter.is_empty()
        }

        pub fn header(&self) -> String {
            let mut line = String::from("#alphabet");
            for (l, s) in &self.to_symbol {
                line.push_str(&format!(" {l}={s}"));
            }
            line
        }
    }

    #[derive(Debug, Clone, Default, PartialEq, Eq)]
    pub struct WordFile {
        pub aliases: Aliases,
        pub words: Vec<FiniteWord>,
    }

    pub fn parse(input: &str) -> Result<WordFile> {
        let mut file = WordFile::default();
        for (idx, raw) in input.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("#alphabet") {
                for entry in rest.split_whitespace() {
                    let (l, s) = entry.split_once('=').ok_or_else(|| Error::Parse {
                        line: line_no,
                        message: format!("alias `{entry}` is not of the form letter=symbol"),
                    })?;
                    let letter = parse_letter(l, line_no)?;
                    if s.is_empty() || s.parse::<Letter>().is_ok() {
                        return Err(Error::Parse {
                            line: line_no,
                            message: format!("alias symbol `{s}` must be non-numeric"),
                        });
                    }
                    file.aliases.insert(letter, s);
                }
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            let letters = line
                .split_whitespace()
                .map(|tok| match file.aliases.letter(tok) {
                    Some(l) => Ok(l),
                    None => parse_letter(tok, line_no),
                })
                .collect::<Result<Vec<_>>>()?;
            file.words
                .push(FiniteWord::new(letters).map_err(|e| Error::Parse {
                    line: line_no,
                    message: e.to_string(),
                })?);
        }
        Ok(file)
    }

    fn parse_letter(tok: &str, line: usize) -> Result<Letter> {
        match tok.parse::<Letter>() {
            Ok(0) | Err(_) => Err(Error::Parse {
                line,
                message: format!("`{tok}` is not a positive integer letter"),
            }),
            Ok(l) => Ok(l),
        }
    }

    /// One line, letters separated by single spaces, no trailing newline.
    pub fn format_word(word: &[Letter]) -> String {
        let mut out = String::with_capacity(word.len() * 2);
        for (i, l) in word.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&l.to_string());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[Letter]) -> FiniteWord {
        FiniteWord::new(letters.to_vec()).unwrap()
    }

    fn baum_sweet_sigma() -> Morphism {
        Morphism::on_range(&[&[1, 2], &[3, 2], &[2, 4], &[4, 4]]).unwrap()
    }

    #[test]
    fn frac_power_examples() {
        assert_eq!(
            w(&[1, 2]).frac_power(Ratio::from_integer(2)).unwrap(),
            w(&[1, 2, 1, 2])
        );
        assert_eq!(
            w(&[1, 2, 4, 2, 4, 3, 4, 2])
                .frac_power(Ratio::new(9, 8))
                .unwrap(),
            w(&[1, 2, 4, 2, 4, 3, 4, 2, 1])
        );
        assert_eq!(
            w(&[2, 3, 2, 2, 4, 3]).frac_power(Ratio::new(3, 2)).unwrap(),
            w(&[2, 3, 2, 2, 4, 3, 2, 3, 2])
        );
    }

    #[test]
    fn frac_power_rounds_up() {
        // 1/3 of 4 letters is 4/3, rounded up to 2
        assert_eq!(
            w(&[1, 2, 3, 4]).frac_power(Ratio::new(4, 3)).unwrap(),
            w(&[1, 2, 3, 4, 1, 2])
        );
        assert_eq!(
            w(&[5, 6, 7]).frac_power(Ratio::new(1, 2)).unwrap(),
            w(&[5, 6])
        );
    }

    #[test]
    fn frac_power_errors() {
        assert_eq!(
            FiniteWord::empty().frac_power(Ratio::new(3, 2)),
            Err(Error::EmptyWord)
        );
        assert!(matches!(
            w(&[1]).frac_power(Ratio::from_integer(0)),
            Err(Error::NonPositiveExponent(_))
        ));
    }

    #[test]
    fn mirror_and_negate() {
        assert_eq!(w(&[1, 2, 3]).mirror(), w(&[3, 2, 1]));
        assert_eq!(FiniteWord::empty().mirror(), FiniteWord::empty());
        assert_eq!(w(&[4, 4, 2]).mirror().mirror(), w(&[4, 4, 2]));

        let s = SignedWord::from_i8(&[1, -1]).unwrap();
        assert_eq!(s.negate(), SignedWord::from_i8(&[-1, 1]).unwrap());
        assert_eq!(SignedWord::default().negate(), SignedWord::default());
        let t = SignedWord::from_i8(&[1, 1, -1]).unwrap();
        assert_eq!(t.negate().negate(), t);
        assert!(SignedWord::from_i8(&[0]).is_err());
    }

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::new(vec![1, 2, 3]).is_ok());
        assert!(Alphabet::new(vec![]).is_err());
        assert!(Alphabet::new(vec![1, 1, 2]).is_err());
        assert!(Alphabet::new(vec![2, 1]).is_err());
        assert_eq!(Alphabet::new(vec![0, 1]), Err(Error::ZeroLetter(0)));
        assert_eq!(FiniteWord::new(vec![1, 0]), Err(Error::ZeroLetter(0)));
    }

    #[test]
    fn morphism_apply_examples() {
        let sigma = baum_sweet_sigma();
        assert_eq!(sigma.uniform_length(), Some(2));
        assert_eq!(sigma.apply(&[1]).unwrap(), w(&[1, 2]));
        assert_eq!(
            sigma.apply(&[1, 2, 3, 2]).unwrap(),
            w(&[1, 2, 3, 2, 2, 4, 3, 2])
        );
        assert_eq!(sigma.apply(&[]).unwrap(), FiniteWord::empty());
        assert_eq!(sigma.apply(&[5]), Err(Error::LetterOutsideAlphabet(5)));
    }

    #[test]
    fn morphism_rejects_erasing_images() {
        let domain = Alphabet::new(vec![1, 2]).unwrap();
        assert!(Morphism::new(domain.clone(), vec![w(&[1]), FiniteWord::empty()]).is_err());
        assert!(Morphism::new(domain, vec![w(&[1])]).is_err());
    }

    #[test]
    fn fixed_point_examples() {
        let sigma = baum_sweet_sigma();
        let mut s = sigma.fixed_point_stream(1).unwrap();
        assert_eq!(
            s.take_prefix(12).unwrap(),
            w(&[1, 2, 3, 2, 2, 4, 3, 2, 3, 2, 4, 4])
        );
        assert_eq!(s.position(), 12);

        let mut s = sigma.fixed_point_stream(1).unwrap();
        let cubed = sigma
            .apply(&sigma.apply(&sigma.apply(&[1]).unwrap()).unwrap())
            .unwrap();
        assert_eq!(s.take_prefix(8).unwrap(), cubed);

        let ones = Morphism::on_range(&[&[1, 1]]).unwrap();
        let prefix = ones.fixed_point_stream(1).unwrap().take_prefix(50).unwrap();
        assert!(prefix.iter().all(|&l| l == 1));
    }

    #[test]
    fn fixed_point_requires_prolongable_seed() {
        let sigma = baum_sweet_sigma();
        assert_eq!(
            sigma.fixed_point_stream(2).unwrap_err(),
            Error::NotProlongable(2)
        );
        let short = Morphism::on_range(&[&[1], &[2, 1]]).unwrap();
        assert_eq!(
            short.fixed_point_stream(1).unwrap_err(),
            Error::NotProlongable(1)
        );
    }

    #[test]
    fn coding_examples() {
        // b = 2, a = 1
        let phi_bs = Morphism::on_range(&[&[2], &[2], &[1], &[1]]).unwrap();
        let out = phi_bs
            .coding_apply(WordStream::from_word(w(&[1, 2, 3, 2])))
            .unwrap()
            .take_prefix(4)
            .unwrap();
        assert_eq!(out, w(&[2, 2, 1, 2]));

        let phi_rs = Morphism::on_range(&[&[1], &[1], &[2], &[2]]).unwrap();
        let out = phi_rs
            .coding_apply(WordStream::from_word(w(&[1, 2, 1, 3])))
            .unwrap()
            .take_prefix(4)
            .unwrap();
        assert_eq!(out, w(&[1, 1, 1, 2]));

        let identity = Morphism::on_range(&[&[1], &[2], &[3]]).unwrap();
        let out = identity
            .coding_apply(WordStream::from_word(w(&[3, 1, 2])))
            .unwrap()
            .take_prefix(3)
            .unwrap();
        assert_eq!(out, w(&[3, 1, 2]));
    }

    #[test]
    fn coding_errors_at_pull_time() {
        let phi = Morphism::on_range(&[&[1], &[1]]).unwrap();
        let mut s = phi.coding_apply(WordStream::from_word(w(&[1, 7]))).unwrap();
        assert_eq!(s.next_letter().unwrap(), 1);
        assert_eq!(s.next_letter(), Err(Error::LetterOutsideAlphabet(7)));
        assert!(baum_sweet_sigma()
            .coding_apply(WordStream::from_word(w(&[1])))
            .is_err());
    }

    #[test]
    fn finite_stream_exhausts() {
        let mut s = WordStream::from_word(w(&[1, 2]));
        assert_eq!(s.take_prefix(2).unwrap(), w(&[1, 2]));
        assert_eq!(s.next_letter(), Err(Error::StreamExhausted(2)));
    }

    #[test]
    fn text_format_parses_aliases() {
        let file = text::parse("#alphabet 1=a 2=b\na b 1 2\n\n3 3\n").unwrap();
        assert_eq!(file.words, vec![w(&[1, 2, 1, 2]), w(&[3, 3])]);
        assert_eq!(file.aliases.symbol(2), Some("b"));
        assert_eq!(file.aliases.header(), "#alphabet 1=a 2=b");
        assert_eq!(text::format_word(&[1, 22, 3]), "1 22 3");
    }

    #[test]
    fn text_format_rejects_bad_tokens() {
        assert!(matches!(
            text::parse("1 0 2"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            text::parse("1 2\nx"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            text::parse("#alphabet 1a"),
            Err(Error::Parse { .. })
        ));
    }
}
