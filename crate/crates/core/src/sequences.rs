//! Temporal words: which block is applied at each time step.
//!
//! A [`Word`] is a finite string over the two-letter alphabet `{A, B}`.
//! Letter order encodes **matrix-factor order**, not wall-clock order: the
//! leftmost letter is the latest-applied block, so the matrix product over a
//! word read left to right equals the operator product written in the block
//! recursions. This is the single most error-prone convention in the whole
//! construction and is fixed here once.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One of the two block labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn flipped(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'A',
            Letter::B => 'B',
        }
    }
}

/// A finite temporal word over `{A, B}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Letters in the order they are applied in physical time
    /// (rightmost/earliest first).
    pub fn time_ordered(&self) -> impl Iterator<Item = Letter> + '_ {
        self.0.iter().rev().copied()
    }

    /// Concatenation in operator order: `self` acts after `later` — i.e. the
    /// product matrix is (self)(later).
    pub fn concat(&self, right: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&right.0);
        Word(v)
    }

    /// The word repeated `n` times (Floquet cycles).
    pub fn repeated(&self, n: usize) -> Word {
        let mut v = Vec::with_capacity(self.len() * n);
        for _ in 0..n {
            v.extend_from_slice(&self.0);
        }
        Word(v)
    }

    pub fn flipped(&self) -> Word {
        Word(self.0.iter().map(|l| l.flipped()).collect())
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Word {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                'A' | 'a' => Ok(Letter::A),
                'B' | 'b' => Ok(Letter::B),
                other => Err(format!("invalid word letter {other:?} (expected A or B)")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

/// Which temporal sequence drives the circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceKind {
    /// Fixed period repeated `n` times (e.g. period "AB" is the two-block
    /// Floquet cycle).
    Floquet(Word),
    /// Fibonacci word of index `n` (length `F_n`).
    Fibonacci(u32),
    /// Thue–Morse word of index `n` (length `2^{n-1}`).
    ThueMorse(u32),
    /// I.i.d. uniform letters.
    Bernoulli { length: usize, seed: u64 },
    /// Random concatenation of the two order-`order` Thue–Morse building
    /// blocks (order 1: Bernoulli; order 2: dipoles `AB`/`BA`).
    Multipolar { order: u32, num_blocks: usize, seed: u64 },
}

impl SequenceKind {
    /// Generate the word; `cycles` is only used by `Floquet` (number of
    /// period repetitions).
    pub fn word(&self, cycles: usize) -> Word {
        match self {
            SequenceKind::Floquet(period) => period.repeated(cycles),
            SequenceKind::Fibonacci(n) => fibonacci_word(*n),
            SequenceKind::ThueMorse(n) => thue_morse_word(*n),
            SequenceKind::Bernoulli { length, seed } => bernoulli_word(*length, *seed),
            SequenceKind::Multipolar { order, num_blocks, seed } => {
                multipolar_word(*order, *num_blocks, *seed)
            }
        }
    }
}

/// Fibonacci word: `W_0 = A`, `W_1 = B`, `W_n = W_{n-2} ⧺ W_{n-1}`, so the
/// matrix product over `W_n` equals `M_n = M_{n-2} M_{n-1}`. `|W_n| = F_n`
/// with `F_0 = F_1 = 1`.
pub fn fibonacci_word(n: u32) -> Word {
    let mut prev = Word(vec![Letter::A]); // W_0
    let mut cur = Word(vec![Letter::B]); // W_1
    match n {
        0 => return prev,
        1 => return cur,
        _ => {}
    }
    for _ in 2..=n {
        let next = prev.concat(&cur);
        prev = cur;
        cur = next;
    }
    cur
}

/// Fibonacci number `F_n` with `F_0 = F_1 = 1` (the length of `W_n`).
pub fn fibonacci_number(n: u32) -> u64 {
    let (mut a, mut b) = (1u64, 1u64);
    for _ in 0..n {
        let next = a + b;
        a = b;
        b = next;
    }
    a
}

/// Thue–Morse word: `W_1 = A`, then substitute `A → AB`, `B → BA`.
/// `|W_n| = 2^{n-1}`; `W_0` is the empty word.
pub fn thue_morse_word(n: u32) -> Word {
    if n == 0 {
        return Word(Vec::new());
    }
    let mut w = vec![Letter::A];
    for _ in 1..n {
        let mut next = Vec::with_capacity(2 * w.len());
        for &l in &w {
            next.push(l);
            next.push(l.flipped());
        }
        w = next;
    }
    Word(w)
}

/// Mix a master seed with a stream index into an independent 64-bit seed
/// (SplitMix64 finalizer), so ensembles are reproducible and parallelizable.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// I.i.d. uniform word of the given length; identical `(length, seed)` give
/// identical words.
pub fn bernoulli_word(length: usize, seed: u64) -> Word {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Word((0..length)
        .map(|_| if rng.random::<bool>() { Letter::A } else { Letter::B })
        .collect())
}

/// Random multipolar word: `num_blocks` coin flips, each appending either the
/// order-`order` Thue–Morse block or its letter-flip. Order 1 reduces to
/// [`bernoulli_word`]; order 2 concatenates the dipoles `AB`/`BA`.
pub fn multipolar_word(order: u32, num_blocks: usize, seed: u64) -> Word {
    assert!(order >= 1, "multipolar order must be >= 1");
    let block_a = thue_morse_word(order);
    let block_b = block_a.flipped();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = Vec::with_capacity(num_blocks * block_a.len());
    for _ in 0..num_blocks {
        let block = if rng.random::<bool>() { &block_a } else { &block_b };
        v.extend_from_slice(&block.0);
    }
    Word(v)
}
