//! Shuffles, group-like and Lie tests, brackets, Lyndon words and BCH.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::FreeSeries;
use crate::word::{enumerate_words_bounded, Word};

/// A series certified to be a Lie element up to `certified_order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieSeries {
    body: FreeSeries,
    certified_order: usize,
}

impl LieSeries {
    /// Runs both Lie tests on `body`.
    pub fn try_new(body: FreeSeries) -> Result<Self> {
        if is_lie_element(&body)? {
            let certified_order = body.order();
            Ok(LieSeries {
                body,
                certified_order,
            })
        } else {
            Err(Error::NotLie)
        }
    }

    /// Wraps a series that is Lie by construction (letters and brackets).
    pub(crate) fn trusted(body: FreeSeries) -> Self {
        let certified_order = body.order();
        LieSeries {
            body,
            certified_order,
        }
    }

    pub fn zero(order: usize) -> Self {
        Self::trusted(FreeSeries::zero(order))
    }

    /// `Σ c_i X_i`; always Lie.
    pub fn linear<I: IntoIterator<Item = (u32, Scalar)>>(order: usize, terms: I) -> Self {
        Self::trusted(FreeSeries::linear(order, terms))
    }

    pub fn body(&self) -> &FreeSeries {
        &self.body
    }

    pub fn into_body(self) -> FreeSeries {
        self.body
    }

    pub fn order(&self) -> usize {
        self.body.order()
    }

    pub fn certified_order(&self) -> usize {
        self.certified_order
    }

    pub fn neg(&self) -> LieSeries {
        LieSeries::trusted(-&self.body)
    }

    pub fn exp(&self) -> FreeSeries {
        self.body.exp().expect("Lie elements have zero constant term")
    }
}

/// Möbius function; `d = 0` is rejected.
pub fn mobius(d: u64) -> Result<i64> {
    if d == 0 {
        return Err(Error::OutOfRange("mobius needs d >= 1".into()));
    }
    let mut n = d;
    let mut sign = 1i64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return Ok(0);
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    Ok(sign)
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Dimension of the weight-`n` part of the free Lie algebra on the weighted letters.
pub fn free_lie_dim(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::OutOfRange("free_lie_dim needs n >= 1".into()));
    }
    let mut total: i128 = 0;
    for d in divisors(n) {
        let e = (n / d) as u32;
        total += ((1i128 << e) - 1) * mobius(d)? as i128;
    }
    Ok((total / n as i128) as u64)
}

/// Lucas numbers `λ₁ⁿ + λ₂ⁿ` with `λ₁λ₂ = −1`, `λ₁ + λ₂ = 1`: 1, 3, 4, 7, 11, ...
pub fn lucas(n: u64) -> i128 {
    let (mut a, mut b) = (2i128, 1i128);
    for _ in 0..n {
        let c = a + b;
        a = b;
        b = c;
    }
    a
}

/// Number of independent center generators of weight `n` for the two-letter case.
pub fn abel_gen_count(n: u64) -> Result<u64> {
    if n < 5 {
        return Err(Error::OutOfRange("abel_gen_count needs n >= 5".into()));
    }
    let mut total: i128 = 0;
    for d in divisors(n) {
        total += lucas(n / d) * mobius(d)? as i128;
    }
    Ok((total / n as i128 - 1) as u64)
}

/// Shuffle product as a multiset: word to multiplicity.
pub fn shuffle_product(u: &Word, v: &Word) -> BTreeMap<Word, u64> {
    let mut out = BTreeMap::new();
    let mut buf = Vec::with_capacity(u.len() + v.len());
    shuffle_rec(u.letters(), v.letters(), &mut buf, &mut |w| {
        *out.entry(Word::new(w.to_vec())).or_insert(0) += 1;
    });
    out
}

fn shuffle_rec(u: &[u32], v: &[u32], buf: &mut Vec<u32>, emit: &mut impl FnMut(&[u32])) {
    if u.is_empty() || v.is_empty() {
        let len = buf.len();
        buf.extend_from_slice(u);
        buf.extend_from_slice(v);
        emit(buf);
        buf.truncate(len);
        return;
    }
    buf.push(u[0]);
    shuffle_rec(&u[1..], v, buf, emit);
    buf.pop();
    buf.push(v[0]);
    shuffle_rec(u, &v[1..], buf, emit);
    buf.pop();
}

/// Sum of coefficients over `u ⧢ v`, without materializing the multiset.
fn shuffle_sum(g: &FreeSeries, u: &Word, v: &Word) -> Scalar {
    let mut acc = Scalar::zero();
    let mut buf = Vec::with_capacity(u.len() + v.len());
    shuffle_rec(u.letters(), v.letters(), &mut buf, &mut |w| {
        acc += &g.coeff(&Word::new(w.to_vec()));
    });
    acc
}

/// Lyndon words (strictly smaller than every proper rotation) over `{1..max_index}`
/// of total weight `weight`, in lexicographic order.
pub fn lyndon_basis(max_index: u32, weight: usize) -> Vec<Word> {
    if weight == 0 {
        return Vec::new();
    }
    let mut out: Vec<Word> = enumerate_words_bounded(weight, max_index)
        .into_iter()
        .filter(|w| is_lyndon(w.letters()))
        .collect();
    out.sort_by(|a, b| a.letters().cmp(b.letters()));
    out
}

pub fn is_lyndon(w: &[u32]) -> bool {
    if w.is_empty() {
        return false;
    }
    (1..w.len()).all(|k| {
        let rot: Vec<u32> = w[k..].iter().chain(&w[..k]).copied().collect();
        w < rot.as_slice()
    })
}

/// True iff `c_u c_v = Σ_{w ∈ u⧢v} c_w` whenever `weight(u) + weight(v) ≤ order`.
///
/// Only words over the support alphabet are tested: any other word has a
/// zero coefficient and so do all of its shuffles. The first factor ranges
/// over Lyndon words, which generate the shuffle algebra.
pub fn is_group_like(g: &FreeSeries) -> Result<bool> {
    if g.constant() != Scalar::one() {
        return Err(Error::Domain("group-like test needs constant term 1".into()));
    }
    let n = g.order();
    let alphabet = g.support_letters();
    let words = words_over(&alphabet, n);
    for u in words.iter().filter(|u| is_lyndon(u.letters())) {
        let cu = g.coeff(u);
        for v in &words {
            if u.weight() + v.weight() > n {
                break;
            }
            let lhs = &cu * &g.coeff(v);
            if lhs != shuffle_sum(g, u, v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn words_over(alphabet: &[u32], max_weight: usize) -> Vec<Word> {
    crate::word::words_over(alphabet, max_weight)
}

/// Left-normed bracketing `[..[[X_{i1}, X_{i2}], X_{i3}], .., X_{ik}]`, expanded.
fn dynkin_word(w: &Word) -> Vec<(Vec<u32>, i64)> {
    let letters = w.letters();
    let mut terms: Vec<(Vec<u32>, i64)> = vec![(vec![letters[0]], 1)];
    for &x in &letters[1..] {
        let mut next = Vec::with_capacity(terms.len() * 2);
        for (t, c) in &terms {
            let mut right = t.clone();
            right.push(x);
            next.push((right, *c));
            let mut left = Vec::with_capacity(t.len() + 1);
            left.push(x);
            left.extend_from_slice(t);
            next.push((left, -*c));
        }
        terms = next;
    }
    terms
}

/// The Dynkin map criterion: on the part made of words with `k` letters,
/// `θ(h_k) = k·h_k` for every `k`.
pub fn dynkin_is_lie(h: &FreeSeries) -> bool {
    let mut image: BTreeMap<Word, Scalar> = BTreeMap::new();
    for (w, c) in h.terms() {
        if w.is_empty() {
            return false;
        }
        for (t, sign) in dynkin_word(w) {
            let e = image.entry(Word::new(t)).or_insert_with(Scalar::zero);
            *e += &c.scale(&num_rational::BigRational::from_integer(sign.into()));
        }
    }
    image.retain(|_, c| !c.is_zero());
    let mut expected: BTreeMap<Word, Scalar> = BTreeMap::new();
    for (w, c) in h.terms() {
        expected.insert(w.clone(), c * &Scalar::from_int(w.len() as i64));
    }
    image == expected
}

/// Lie membership, decided by two independent tests that must agree:
/// `exp(h)` is group-like, and the Dynkin map criterion.
pub fn is_lie_element(h: &FreeSeries) -> Result<bool> {
    if !h.constant().is_zero() {
        return Err(Error::Domain("Lie test needs a zero constant term".into()));
    }
    let by_shuffle = is_group_like(&h.exp()?)?;
    let by_dynkin = dynkin_is_lie(h);
    if by_shuffle != by_dynkin {
        return Err(Error::Inconsistent(format!(
            "shuffle test says {by_shuffle}, Dynkin test says {by_dynkin}"
        )));
    }
    Ok(by_shuffle)
}

/// Right-nested bracket `[X_{i1}, [X_{i2}, [.., [X_{i(k-1)}, X_{ik}]..]]]` at order `weight(w)`.
pub fn expand_bracket(w: &Word) -> Result<FreeSeries> {
    expand_bracket_at(w, w.weight().max(1))
}

/// As [`expand_bracket`] but at a given truncation order.
pub fn expand_bracket_at(w: &Word, order: usize) -> Result<FreeSeries> {
    let letters = w.letters();
    let Some((&last, rest)) = letters.split_last() else {
        return Err(Error::EmptyWord);
    };
    let mut terms: Vec<(Vec<u32>, i64)> = vec![(vec![last], 1)];
    for &x in rest.iter().rev() {
        let mut next = Vec::with_capacity(terms.len() * 2);
        for (t, c) in &terms {
            let mut left = Vec::with_capacity(t.len() + 1);
            left.push(x);
            left.extend_from_slice(t);
            next.push((left, *c));
            let mut right = t.clone();
            right.push(x);
            next.push((right, -*c));
        }
        terms = next;
    }
    Ok(FreeSeries::from_terms(
        order,
        terms
            .into_iter()
            .map(|(t, c)| (Word::new(t), Scalar::from_int(c))),
    ))
}

/// `log(exp(a)·exp(b))`.
pub fn bch(a: &LieSeries, b: &LieSeries) -> Result<LieSeries> {
    if a.order() != b.order() {
        return Err(Error::OrderMismatch(a.order(), b.order()));
    }
    let prod = &a.exp() * &b.exp();
    LieSeries::try_new(prod.log()?)
}
