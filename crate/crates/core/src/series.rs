//! Truncated noncommutative series `c_0 I + Σ c_w X_w t^{weight(w)}`.
//!
//! The power of `t` always equals the weight of the word, so it is not stored.
//! Text form: `1 * I + 1/2 * X[1]X[2] + -1 * X[3] + O(t^4)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::word::{enumerate_words, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeSeries {
    order: usize,
    coeffs: BTreeMap<Word, Scalar>,
}

impl FreeSeries {
    pub fn zero(order: usize) -> Self {
        assert!(order >= 1, "truncation order must be at least 1");
        FreeSeries {
            order,
            coeffs: BTreeMap::new(),
        }
    }

    /// The unit series `I`.
    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs.insert(Word::empty(), Scalar::one());
        s
    }

    /// `c · X_w`; dropped if the word is heavier than the order.
    pub fn monomial(order: usize, w: Word, c: Scalar) -> Self {
        let mut s = Self::zero(order);
        s.add_term(w, c);
        s
    }

    pub fn letter(order: usize, i: u32) -> Self {
        Self::monomial(order, Word::letter(i), Scalar::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Scalar)>>(order: usize, terms: I) -> Self {
        let mut s = Self::zero(order);
        for (w, c) in terms {
            s.add_term(w, c);
        }
        s
    }

    /// `Σ c_i X_i` from a list of `(index, coefficient)` pairs.
    pub fn linear<I: IntoIterator<Item = (u32, Scalar)>>(order: usize, terms: I) -> Self {
        Self::from_terms(order, terms.into_iter().map(|(i, c)| (Word::letter(i), c)))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.coeffs.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant(&self) -> Scalar {
        self.coeff(&Word::empty())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Adds `c` to the coefficient of `w`, keeping the sparse invariant.
    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if w.weight() > self.order || c.is_zero() {
            return;
        }
        match self.coeffs.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Homogeneous part of weight `n`.
    pub fn slice(&self, n: usize) -> FreeSeries {
        FreeSeries {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(w, _)| w.weight() == n)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Letters occurring in some stored word.
    pub fn support_letters(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .coeffs
            .keys()
            .flat_map(|w| w.letters().iter().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Same coefficients at a different order; terms above the new order are dropped.
    pub fn with_order(&self, order: usize) -> FreeSeries {
        FreeSeries::from_terms(
            order,
            self.coeffs.iter().map(|(w, c)| (w.clone(), c.clone())),
        )
    }

    pub fn scale(&self, c: &Scalar) -> FreeSeries {
        FreeSeries::from_terms(
            self.order,
            self.coeffs.iter().map(|(w, x)| (w.clone(), x * c)),
        )
    }

    pub fn try_add(&self, other: &FreeSeries) -> Result<FreeSeries> {
        check_orders(self, other)?;
        let mut out = self.clone();
        for (w, c) in &other.coeffs {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &FreeSeries) -> Result<FreeSeries> {
        check_orders(self, other)?;
        let mut out = self.clone();
        for (w, c) in &other.coeffs {
            out.add_term(w.clone(), -c);
        }
        Ok(out)
    }

    /// Concatenation product, discarding weights above the order.
    pub fn try_mul(&self, other: &FreeSeries) -> Result<FreeSeries> {
        check_orders(self, other)?;
        let n = self.order;
        let mut acc: BTreeMap<Word, Scalar> = BTreeMap::new();
        for (u, a) in &self.coeffs {
            let room = n - u.weight();
            for (v, b) in &other.coeffs {
                if v.weight() > room {
                    break;
                }
                let c = a * b;
                let w = u.concat(v);
                match acc.get_mut(&w) {
                    Some(x) => *x += &c,
                    None => {
                        acc.insert(w, c);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(FreeSeries {
            order: n,
            coeffs: acc,
        })
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &FreeSeries) -> FreeSeries {
        &(self * other) - &(other * self)
    }

    /// `Σ fⁿ/n!`; requires a zero constant term.
    pub fn exp(&self) -> Result<FreeSeries> {
        if !self.constant().is_zero() {
            return Err(Error::Domain("exp needs a zero constant term".into()));
        }
        let mut out = FreeSeries::one(self.order);
        let mut term = FreeSeries::one(self.order);
        let mut k = 1i64;
        loop {
            term = (&term * self).scale(&Scalar::ratio(1, k));
            if term.is_zero() {
                break;
            }
            out = &out + &term;
            k += 1;
        }
        Ok(out)
    }

    /// `−Σ (I − g)ⁿ/n`; requires constant term 1.
    pub fn log(&self) -> Result<FreeSeries> {
        if self.constant() != Scalar::one() {
            return Err(Error::Domain("log needs constant term 1".into()));
        }
        let x = &FreeSeries::one(self.order) - self;
        let mut out = FreeSeries::zero(self.order);
        let mut power = FreeSeries::one(self.order);
        let mut k = 1i64;
        loop {
            power = &power * &x;
            if power.is_zero() {
                break;
            }
            out = &out - &power.scale(&Scalar::ratio(1, k));
            k += 1;
        }
        Ok(out)
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn inverse(&self) -> Result<FreeSeries> {
        let c0 = self.constant();
        let inv0 = c0
            .inv()
            .ok_or_else(|| Error::Domain("inverse needs a nonzero constant term".into()))?;
        let normalized = self.scale(&inv0);
        let x = &FreeSeries::one(self.order) - &normalized;
        let mut out = FreeSeries::one(self.order);
        let mut power = FreeSeries::one(self.order);
        loop {
            power = &power * &x;
            if power.is_zero() {
                break;
            }
            out = &out + &power;
        }
        Ok(out.scale(&inv0))
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, k: u32) -> FreeSeries {
        let mut out = FreeSeries::one(self.order);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// The quotient map `q_l`: keep the terms of weight `≤ l − 1`.
    pub fn truncate_q_l(&self, l: usize) -> Result<FreeSeries> {
        if l < 1 || l > self.order + 1 {
            return Err(Error::OutOfRange(format!(
                "q_l needs 1 <= l <= {}, got {l}",
                self.order + 1
            )));
        }
        Ok(FreeSeries {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(w, _)| w.weight() < l)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        })
    }

    /// Group commutator `g h g⁻¹ h⁻¹`.
    pub fn group_commutator(&self, other: &FreeSeries) -> Result<FreeSeries> {
        let gi = self.inverse()?;
        let hi = other.inverse()?;
        Ok(&(&(self * other) * &gi) * &hi)
    }

    /// Apply a map to every word, extended linearly.
    pub fn map_words(&self, f: impl Fn(&Word, &Scalar) -> FreeSeries) -> FreeSeries {
        let mut out = FreeSeries::zero(self.order);
        for (w, c) in &self.coeffs {
            for (v, d) in f(w, c).coeffs {
                out.add_term(v, d);
            }
        }
        out
    }
}

fn check_orders(a: &FreeSeries, b: &FreeSeries) -> Result<()> {
    if a.order != b.order {
        Err(Error::OrderMismatch(a.order, b.order))
    } else {
        Ok(())
    }
}

/// `exp(Σ b_i X_i)` for a combination of single letters, in closed form:
/// the coefficient of `X_{i_1}⋯X_{i_k}` is `b_{i_1}⋯b_{i_k}/k!`.
pub fn exp_letters(order: usize, b: &BTreeMap<u32, Scalar>) -> FreeSeries {
    let mut out = FreeSeries::one(order);
    let letters: Vec<(u32, Scalar)> = b
        .iter()
        .filter(|(i, c)| **i as usize <= order && !c.is_zero())
        .map(|(i, c)| (*i, c.clone()))
        .collect();
    let mut frontier: Vec<(Vec<u32>, usize, Scalar)> = vec![(Vec::new(), 0, Scalar::one())];
    let mut k = 0i64;
    while !frontier.is_empty() {
        k += 1;
        let mut next = Vec::new();
        for (w, weight, c) in &frontier {
            for (i, bi) in &letters {
                let nw = weight + *i as usize;
                if nw > order {
                    continue;
                }
                let mut letters_w = w.clone();
                letters_w.push(*i);
                let nc = (c * bi).scale(&num_rational::BigRational::new(1.into(), k.into()));
                out.add_term(Word::new(letters_w.clone()), nc.clone());
                next.push((letters_w, nw, nc));
            }
        }
        frontier = next;
    }
    out
}

impl<'a> Add<&'a FreeSeries> for &'a FreeSeries {
    type Output = FreeSeries;
    /// Panics on mismatched orders; use [`FreeSeries::try_add`] otherwise.
    fn add(self, rhs: &FreeSeries) -> FreeSeries {
        self.try_add(rhs).expect("series orders must match")
    }
}

impl<'a> Sub<&'a FreeSeries> for &'a FreeSeries {
    type Output = FreeSeries;
    fn sub(self, rhs: &FreeSeries) -> FreeSeries {
        self.try_sub(rhs).expect("series orders must match")
    }
}

impl<'a> Mul<&'a FreeSeries> for &'a FreeSeries {
    type Output = FreeSeries;
    fn mul(self, rhs: &FreeSeries) -> FreeSeries {
        self.try_mul(rhs).expect("series orders must match")
    }
}

impl Neg for &FreeSeries {
    type Output = FreeSeries;
    fn neg(self) -> FreeSeries {
        self.scale(&-Scalar::one())
    }
}

impl fmt::Display for FreeSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (k, (w, c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c} * {w}")?;
        }
        write!(f, " + O(t^{})", self.order + 1)
    }
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s.as_bytes()[self.pos] == b' ' {
            self.pos += 1;
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.s[self.pos..].starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{lit}'")))
        }
    }

    fn token(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.s.len() && self.s.as_bytes()[self.pos] != b' ' {
            self.pos += 1;
        }
        &self.s[start..self.pos]
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s.as_bytes()[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.s[start..self.pos]
            .parse()
            .map_err(|_| Error::parse(start, "expected a number"))
    }

    fn done(&self) -> bool {
        self.pos >= self.s.len()
    }
}

/// Parses the canonical text form; the trailing `O(t^{N+1})` term fixes the order.
impl FromStr for FreeSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor { s, pos: 0 };
        let mut terms = Vec::new();
        cur.skip_ws();
        cur.eat("0 + ");
        loop {
            if cur.eat("O(t^") {
                let at = cur.pos;
                let n = cur.number()?;
                if n < 2 {
                    return Err(Error::parse(at, "order term must be O(t^k) with k >= 2"));
                }
                cur.expect(")")?;
                cur.skip_ws();
                if !cur.done() {
                    return Err(Error::parse(cur.pos, "trailing input"));
                }
                let order = n - 1;
                for (at, w, _) in &terms {
                    let w: &Word = w;
                    if w.weight() > order {
                        return Err(Error::parse(*at, "term heavier than the stated order"));
                    }
                }
                return Ok(FreeSeries::from_terms(
                    order,
                    terms.into_iter().map(|(_, w, c)| (w, c)),
                ));
            }
            if cur.done() {
                return Err(Error::parse(cur.pos, "missing O(t^k) order term"));
            }
            let start = cur.pos;
            let c: Scalar = cur
                .token()
                .parse::<Scalar>()
                .map_err(|e| e.offset(start))?;
            cur.skip_ws();
            cur.expect("*")?;
            cur.skip_ws();
            let wstart = cur.pos;
            let w = if cur.eat("I") {
                Word::empty()
            } else {
                let mut letters = Vec::new();
                while cur.eat("X[") {
                    let at = cur.pos;
                    let i = cur.number()?;
                    if i == 0 {
                        return Err(Error::parse(at, "letter index must be positive"));
                    }
                    letters.push(i as u32);
                    cur.expect("]")?;
                }
                if letters.is_empty() {
                    return Err(Error::parse(wstart, "expected 'I' or 'X[i]'"));
                }
                Word::new(letters)
            };
            terms.push((start, w, c));
            cur.skip_ws();
            cur.expect("+")?;
            cur.skip_ws();
        }
    }
}

/// All words of weight `1..=order`, useful for dense checks.
pub fn all_words(order: usize) -> Vec<Word> {
    (1..=order).flat_map(enumerate_words).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[u32]) -> Word {
        Word::new(v.to_vec())
    }

    fn s(text: &str) -> FreeSeries {
        text.parse().unwrap()
    }

    #[test]
    fn product_single_cross_term() {
        let a = &FreeSeries::one(3) + &FreeSeries::letter(3, 1);
        let b = &FreeSeries::one(3) + &FreeSeries::letter(3, 2);
        assert_eq!(
            &a * &b,
            s("1 * I + 1 * X[1] + 1 * X[2] + 1 * X[1]X[2] + O(t^4)")
        );
        assert_eq!(&a * &FreeSeries::one(3), a);
    }

    #[test]
    fn product_square_at_order_two() {
        let a = &FreeSeries::one(2) + &FreeSeries::letter(2, 1);
        assert_eq!(&a * &a, s("1 * I + 2 * X[1] + 1 * X[1]X[1] + O(t^3)"));
    }

    #[test]
    fn mismatched_orders() {
        let a = FreeSeries::one(2);
        let b = FreeSeries::one(3);
        assert_eq!(a.try_mul(&b), Err(Error::OrderMismatch(2, 3)));
    }

    #[test]
    fn exp_examples() {
        assert_eq!(FreeSeries::zero(4).exp().unwrap(), FreeSeries::one(4));
        let e = FreeSeries::letter(2, 1).exp().unwrap();
        assert_eq!(e, s("1 * I + 1 * X[1] + 1/2 * X[1]X[1] + O(t^3)"));
        let h = &FreeSeries::letter(3, 1) + &FreeSeries::letter(3, 2);
        let expected = s("1 * I + 1 * X[1] + 1/2 * X[1]X[1] + 1 * X[2] + 1/6 * X[1]X[1]X[1] \
             + 1/2 * X[1]X[2] + 1/2 * X[2]X[1] + O(t^4)");
        assert_eq!(h.exp().unwrap(), expected);
        assert!(FreeSeries::one(3).exp().is_err());
    }

    #[test]
    fn log_examples() {
        assert!(FreeSeries::one(3).log().unwrap().is_zero());
        let g = &FreeSeries::one(2) + &FreeSeries::letter(2, 1);
        assert_eq!(
            g.log().unwrap(),
            s("1 * X[1] + -1/2 * X[1]X[1] + O(t^3)")
        );
        assert!(FreeSeries::zero(2).log().is_err());
    }

    #[test]
    fn exp_letters_matches_exp() {
        let mut b = BTreeMap::new();
        b.insert(1, Scalar::ratio(1, 2));
        b.insert(2, Scalar::ratio(-3, 4));
        b.insert(3, "1+1*i".parse().unwrap());
        let h = FreeSeries::linear(6, b.clone());
        assert_eq!(exp_letters(6, &b), h.exp().unwrap());
    }

    #[test]
    fn q_l_is_a_weight_filter() {
        let f = s("1 * I + 1 * X[1] + 1 * X[3] + O(t^4)");
        assert_eq!(
            f.truncate_q_l(3).unwrap(),
            s("1 * I + 1 * X[1] + O(t^4)")
        );
        assert_eq!(f.truncate_q_l(1).unwrap(), FreeSeries::one(3));
        assert_eq!(f.truncate_q_l(4).unwrap(), f);
        assert!(f.truncate_q_l(0).is_err());
        assert!(f.truncate_q_l(5).is_err());
    }

    #[test]
    fn inverse_of_group_element() {
        let g = FreeSeries::linear(5, [(1, Scalar::from_int(2)), (2, Scalar::ratio(1, 3))])
            .exp()
            .unwrap();
        let gi = g.inverse().unwrap();
        assert_eq!(&g * &gi, FreeSeries::one(5));
        assert_eq!(&gi * &g, FreeSeries::one(5));
    }

    #[test]
    fn text_round_trip() {
        let f = FreeSeries::from_terms(
            4,
            [
                (Word::empty(), Scalar::one()),
                (w(&[1, 2]), "1/2-3*i".parse().unwrap()),
                (w(&[4]), Scalar::from_int(-7)),
            ],
        );
        let text = f.to_string();
        assert_eq!(text, "1 * I + 1/2-3*i * X[1]X[2] + -7 * X[4] + O(t^5)");
        assert_eq!(text.parse::<FreeSeries>().unwrap(), f);
        assert_eq!(FreeSeries::zero(3).to_string(), "0 + O(t^4)");
        assert_eq!("0 + O(t^4)".parse::<FreeSeries>().unwrap(), FreeSeries::zero(3));
    }

    #[test]
    fn text_parse_errors() {
        let err = "1 * X[1] + 1/0 * X[2] + O(t^3)".parse::<FreeSeries>().unwrap_err();
        assert!(matches!(err, Error::Parse { position: 13, .. }), "{err:?}");
        let err = "1 * Y + O(t^3)".parse::<FreeSeries>().unwrap_err();
        assert!(matches!(err, Error::Parse { position: 4, .. }), "{err:?}");
        assert!("1 * X[3] + O(t^3)".parse::<FreeSeries>().is_err());
        assert!("1 * X[1]".parse::<FreeSeries>().is_err());
    }
}
