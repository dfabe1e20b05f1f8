//! Words over the weighted letters `X_1, X_2, ...`; letter `X_i` has weight `i`.

use std::cmp::Ordering;
use std::fmt;

/// A finite sequence of positive letter indices. The empty word is the unit monomial.
///
/// Words order first by weight, then lexicographically by indices, so a
/// sorted map of words lists homogeneous slices in increasing weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<u32>,
    weight: usize,
}

impl Word {
    /// Panics if any index is zero.
    pub fn new(letters: Vec<u32>) -> Self {
        assert!(letters.iter().all(|&i| i > 0), "letter indices must be positive");
        let weight = letters.iter().map(|&i| i as usize).sum();
        Word { letters, weight }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letter(i: u32) -> Self {
        Word::new(vec![i])
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word {
            letters,
            weight: self.weight + other.weight,
        }
    }

    pub fn reversed(&self) -> Word {
        let mut letters = self.letters.clone();
        letters.reverse();
        Word {
            letters,
            weight: self.weight,
        }
    }

    pub fn max_letter(&self) -> u32 {
        self.letters.iter().copied().max().unwrap_or(0)
    }
}

impl From<Vec<u32>> for Word {
    fn from(v: Vec<u32>) -> Self {
        Word::new(v)
    }
}

impl From<Word> for Vec<u32> {
    fn from(w: Word) -> Self {
        w.letters
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .cmp(&other.weight)
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "I");
        }
        for i in &self.letters {
            write!(f, "X[{i}]")?;
        }
        Ok(())
    }
}

/// All compositions of `n`, in lexicographic order of their index lists.
/// There are `2^(n-1)` of them for `n >= 1`, and `enumerate_words(0)` is `[()]`.
pub fn enumerate_words(n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    compositions(n, u32::MAX, &mut cur, &mut out);
    out
}

/// Compositions of `n` whose parts are all at most `max_part`.
pub fn enumerate_words_bounded(n: usize, max_part: u32) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    compositions(n, max_part, &mut cur, &mut out);
    out
}

fn compositions(rest: usize, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Word>) {
    if rest == 0 {
        out.push(Word::new(cur.clone()));
        return;
    }
    let top = (rest as u64).min(max_part as u64) as u32;
    for i in 1..=top {
        cur.push(i);
        compositions(rest - i as usize, max_part, cur, out);
        cur.pop();
    }
}

/// Every word over the given letters with weight in `1..=max_weight`, sorted.
pub fn words_over(alphabet: &[u32], max_weight: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    words_over_rec(alphabet, max_weight, &mut cur, &mut out);
    out.sort();
    out
}

fn words_over_rec(alphabet: &[u32], rest: usize, cur: &mut Vec<u32>, out: &mut Vec<Word>) {
    for &a in alphabet {
        if a as usize <= rest {
            cur.push(a);
            out.push(Word::new(cur.clone()));
            words_over_rec(alphabet, rest - a as usize, cur, out);
            cur.pop();
        }
    }
}
