//! Generalized perturbed symmetry systems: iterate maps of the form
//! `S(W) = W X_1 W^{e_1} X_2 W^{e_2} ... X_k W^{e_k}` with `W^E = W` and
//! `W^R = mirror(W)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::words::{Alphabet, FiniteWord, Letter, WordStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `W^E = W`
    E,
    /// `W^R = mirror(W)`
    R,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbedSymmetry {
    inserts: Vec<FiniteWord>,
    modes: Vec<Mode>,
}

impl PerturbedSymmetry {
    pub fn new(inserts: Vec<FiniteWord>, modes: Vec<Mode>) -> Result<Self> {
        if inserts.is_empty() || inserts.len() != modes.len() {
            return Err(Error::InvalidParameter(format!(
                "perturbed symmetry needs equally many inserts and modes (got {} and {})",
                inserts.len(),
                modes.len()
            )));
        }
        Ok(PerturbedSymmetry { inserts, modes })
    }

    /// `S_X(W) = W X mirror(W)`.
    pub fn mirror_insert(x: FiniteWord) -> Self {
        PerturbedSymmetry {
            inserts: vec![x],
            modes: vec![Mode::R],
        }
    }

    pub fn arity(&self) -> usize {
        self.inserts.len()
    }

    pub fn inserts(&self) -> &[FiniteWord] {
        &self.inserts
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn apply(&self, w: &[Letter]) -> Vec<Letter> {
        let extra: usize = self.inserts.iter().map(|x| x.len()).sum();
        let mut out = Vec::with_capacity((self.arity() + 1) * w.len() + extra);
        out.extend_from_slice(w);
        for (x, mode) in self.inserts.iter().zip(&self.modes) {
            out.extend_from_slice(x);
            match mode {
                Mode::E => out.extend_from_slice(w),
                Mode::R => out.extend(w.iter().rev()),
            }
        }
        out
    }
}

/// Which symmetry is applied at step `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schedule {
    /// `S_n = set[pattern[n mod len]]`.
    Periodic(Vec<usize>),
    /// Uniformly random indices from a seeded ChaCha8 generator.
    Seeded(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbedSystem {
    pub alphabet: Alphabet,
    pub seed: FiniteWord,
    pub symmetries: Vec<PerturbedSymmetry>,
    pub schedule: Schedule,
}

impl PerturbedSystem {
    pub fn new(
        alphabet: Alphabet,
        seed: FiniteWord,
        symmetries: Vec<PerturbedSymmetry>,
        schedule: Schedule,
    ) -> Result<Self> {
        if seed.is_empty() {
            return Err(Error::EmptyWord);
        }
        if symmetries.is_empty() {
            return Err(Error::InvalidParameter("symmetry set is empty".into()));
        }
        if let Schedule::Periodic(p) = &schedule {
            if p.is_empty() || p.iter().any(|&i| i >= symmetries.len()) {
                return Err(Error::InvalidParameter(format!(
                    "schedule {p:?} does not index a set of {} symmetries",
                    symmetries.len()
                )));
            }
        }
        let letters = seed.iter().chain(
            symmetries
                .iter()
                .flat_map(|s| s.inserts.iter().flat_map(|x| x.iter())),
        );
        for &l in letters {
            if !alphabet.contains(l) {
                return Err(Error::LetterOutsideAlphabet(l));
            }
        }
        Ok(PerturbedSystem {
            alphabet,
            seed,
            symmetries,
            schedule,
        })
    }

    /// Single-symmetry system `S_X^infinity(W)`, alphabet inferred.
    pub fn iterate(seed: FiniteWord, symmetry: PerturbedSymmetry) -> Result<Self> {
        let mut letters: Vec<Letter> = seed.to_vec();
        letters.extend(symmetry.inserts.iter().flat_map(|x| x.iter().copied()));
        let alphabet = Alphabet::of_word(&letters)?;
        PerturbedSystem::new(alphabet, seed, vec![symmetry], Schedule::Periodic(vec![0]))
    }

    /// Largest arity among the symmetries.
    pub fn max_arity(&self) -> usize {
        self.symmetries
            .iter()
            .map(PerturbedSymmetry::arity)
            .max()
            .unwrap_or(0)
    }
}

struct ScheduleIter {
    schedule: Schedule,
    rng: ChaCha8Rng,
    n: usize,
    choices: usize,
}

impl ScheduleIter {
    fn next_index(&mut self) -> usize {
        let i = match &self.schedule {
            Schedule::Periodic(p) => p[self.n % p.len()],
            Schedule::Seeded(_) => self.rng.random_range(0..self.choices),
        };
        self.n += 1;
        i
    }
}

/// `W_n = S_{n-1} ... S_0(W)` and the limit word, which every `W_n`
/// prefixes.
pub fn iterates(sys: &PerturbedSystem, steps: usize) -> Vec<FiniteWord> {
    let mut sched = schedule_iter(sys);
    let mut out = vec![sys.seed.clone()];
    for _ in 0..steps {
        let next = sys.symmetries[sched.next_index()].apply(out.last().expect("non-empty"));
        out.push(FiniteWord::new(next).expect("letters come from the alphabet"));
    }
    out
}

fn schedule_iter(sys: &PerturbedSystem) -> ScheduleIter {
    let seed = match sys.schedule {
        Schedule::Seeded(s) => s,
        Schedule::Periodic(_) => 0,
    };
    ScheduleIter {
        schedule: sys.schedule.clone(),
        rng: ChaCha8Rng::seed_from_u64(seed),
        n: 0,
        choices: sys.symmetries.len(),
    }
}

pub fn perturbed_symmetry_stream(sys: PerturbedSystem) -> WordStream {
    let mut sched = schedule_iter(&sys);
    let mut current: Vec<Letter> = sys.seed.to_vec();
    let mut pos = 0usize;
    WordStream::from_fn(move || {
        if pos >= current.len() {
            current = sys.symmetries[sched.next_index()].apply(&current);
        }
        let l = current[pos];
        pos += 1;
        Ok(Some(l))
    })
}
