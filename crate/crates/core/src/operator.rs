//! The operator algebra generated by `D` (differentiation) and `L` (left shift)
//! on power series, with relation `LD = DL + L²`, and the representation
//! `Ψ(X_i) = DL^{i−1}`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lie::expand_bracket;
use crate::paths::PathSpec;
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::series::FreeSeries;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    D,
    L,
}

/// `Σ c·D^i L^j` in normal form (all `D` to the left). Key `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DLPoly {
    terms: BTreeMap<(u32, u32), Scalar>,
}

type IntForm = BTreeMap<(u32, u32), BigInt>;

thread_local! {
    static SWAP_CACHE: RefCell<HashMap<(u32, u32), Rc<IntForm>>> = RefCell::new(HashMap::new());
}

fn add_int(m: &mut IntForm, key: (u32, u32), c: &BigInt) {
    let e = m.entry(key).or_insert_with(BigInt::zero);
    *e += c;
    if e.is_zero() {
        m.remove(&key);
    }
}

/// Normal form of `L^b D^c`, with integer coefficients.
fn swap_form(b: u32, c: u32) -> Rc<IntForm> {
    if let Some(hit) = SWAP_CACHE.with(|m| m.borrow().get(&(b, c)).cloned()) {
        return hit;
    }
    let mut out = IntForm::new();
    if b == 0 || c == 0 {
        out.insert((c, b), BigInt::one());
    } else if b == 1 {
        // L D^c = D (L D^{c-1}) + L (L D^{c-1})
        let prev = swap_form(1, c - 1);
        for (&(x, y), k) in prev.iter() {
            add_int(&mut out, (x + 1, y), k);
            for (&(x2, y2), k2) in swap_form(1, x).iter() {
                add_int(&mut out, (x2, y2 + y), &(k * k2));
            }
        }
    } else {
        // L^b D^c = L^{b-1} (L D^c)
        for (&(x, y), k) in swap_form(1, c).iter() {
            for (&(x2, y2), k2) in swap_form(b - 1, x).iter() {
                add_int(&mut out, (x2, y2 + y), &(k * k2));
            }
        }
    }
    let rc = Rc::new(out);
    SWAP_CACHE.with(|m| m.borrow_mut().insert((b, c), rc.clone()));
    rc
}

/// Falling factorial `m (m−1) ⋯ (m−i+1)`.
fn falling(m: i64, i: u32) -> BigInt {
    (0..i as i64).fold(BigInt::one(), |acc, k| acc * BigInt::from(m - k))
}

impl DLPoly {
    pub fn zero() -> Self {
        DLPoly::default()
    }

    pub fn one() -> Self {
        DLPoly::monomial(0, 0, Scalar::one())
    }

    pub fn monomial(i: u32, j: u32, c: Scalar) -> Self {
        let mut p = DLPoly::zero();
        p.add_term((i, j), c);
        p
    }

    /// `DL^k`.
    pub fn dl(k: u32) -> Self {
        DLPoly::monomial(1, k, Scalar::one())
    }

    pub fn add_term(&mut self, key: (u32, u32), c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(Scalar::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coeff(&self, i: u32, j: u32) -> Scalar {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `i + j` over the terms; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn scale(&self, c: &Scalar) -> DLPoly {
        let mut out = DLPoly::zero();
        for (k, x) in &self.terms {
            out.add_term(*k, x * c);
        }
        out
    }

    pub fn add(&self, other: &DLPoly) -> DLPoly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DLPoly) -> DLPoly {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn mul(&self, other: &DLPoly) -> DLPoly {
        let mut out = DLPoly::zero();
        for (&(a, b), x) in &self.terms {
            for (&(c, d), y) in &other.terms {
                let xy = x * y;
                for (&(p, q), k) in swap_form(b, c).iter() {
                    let kk = Scalar::from_rational(BigRational::from_integer(k.clone()));
                    out.add_term((a + p, q + d), &xy * &kk);
                }
            }
        }
        out
    }

    /// If this is `c·DL^k`, returns `(c, k)`; `None` for zero or anything else.
    pub fn as_dl_multiple(&self) -> Option<(Scalar, u32)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&(i, j), c) = self.terms.iter().next()?;
        (i == 1).then(|| (c.clone(), j))
    }

    /// Image of `z^n`, as a polynomial in `z`.
    pub fn apply(&self, n: u32) -> Poly {
        let mut coeffs = vec![Scalar::zero(); n as usize + 1];
        for (&(i, j), c) in &self.terms {
            if j > n || i + j > n {
                continue;
            }
            let f = falling(n as i64 - j as i64, i);
            let r = Scalar::from_rational(BigRational::from_integer(f));
            coeffs[(n - i - j) as usize] += &(c * &r);
        }
        Poly::from_coeffs(coeffs)
    }
}

impl fmt::Display for DLPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (&(i, j), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if i == 0 && j == 0 {
                write!(f, "{c} * I")?;
            } else {
                write!(f, "{c} * D^{i} L^{j}")?;
            }
        }
        Ok(())
    }
}

/// Normal form of a word in `D`, `L` by repeatedly rewriting the leftmost
/// `LD` as `DL + L²`. Each step lowers the number of `L`s standing before a `D`.
pub fn dl_normalize(word: &[Op]) -> DLPoly {
    let mut pending: BTreeMap<Vec<Op>, BigInt> = BTreeMap::new();
    pending.insert(word.to_vec(), BigInt::one());
    let mut out = DLPoly::zero();
    while let Some((w, c)) = pending.pop_first() {
        match w.windows(2).position(|p| p == [Op::L, Op::D]) {
            None => {
                let i = w.iter().filter(|&&o| o == Op::D).count() as u32;
                let j = w.len() as u32 - i;
                out.add_term((i, j), Scalar::from_rational(BigRational::from_integer(c)));
            }
            Some(k) => {
                let mut a = w.clone();
                a[k] = Op::D;
                a[k + 1] = Op::L;
                let mut b = w;
                b[k] = Op::L;
                b[k + 1] = Op::L;
                for v in [a, b] {
                    let e = pending.entry(v).or_insert_with(BigInt::zero);
                    *e += &c;
                }
            }
        }
    }
    out
}

pub fn parse_ops(text: &str) -> Result<Vec<Op>> {
    text.chars()
        .enumerate()
        .map(|(k, ch)| match ch {
            'D' => Ok(Op::D),
            'L' => Ok(Op::L),
            _ => Err(Error::parse(k, format!("expected 'D' or 'L', found {ch:?}"))),
        })
        .collect()
}

/// Applies a word to `z^n` one letter at a time, rightmost first.
pub fn apply_ops(word: &[Op], n: u32) -> Poly {
    let mut coeffs = vec![Scalar::zero(); n as usize + 1];
    coeffs[n as usize] = Scalar::one();
    let mut p = Poly::from_coeffs(coeffs);
    for op in word.iter().rev() {
        let c = p.coeffs();
        let shifted: Vec<Scalar> = match op {
            Op::L => c.iter().skip(1).cloned().collect(),
            Op::D => c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, x)| x * &Scalar::from_int(k as i64))
                .collect(),
        };
        p = Poly::from_coeffs(shifted);
    }
    p
}

/// `[DL^i, DL^j]` in normal form; equals `(i − j)·DL^{i+j+1}`.
pub fn dl_bracket(i: u32, j: u32) -> DLPoly {
    let a = DLPoly::dl(i);
    let b = DLPoly::dl(j);
    a.mul(&b).sub(&b.mul(&a))
}

/// Truncated series `Σ f_n t^n` of operator polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DLSeries {
    order: usize,
    slices: Vec<DLPoly>,
}

impl DLSeries {
    pub fn zero(order: usize) -> Self {
        DLSeries {
            order,
            slices: vec![DLPoly::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = DLSeries::zero(order);
        s.slices[0] = DLPoly::one();
        s
    }

    /// `Σ g_n DL^{n−1} t^n` with `entries[n−1] = g_n`.
    pub fn diagonal(order: usize, entries: &[Scalar]) -> Self {
        let mut s = DLSeries::zero(order);
        for (k, g) in entries.iter().enumerate().take(order) {
            s.slices[k + 1] = DLPoly::monomial(1, k as u32, g.clone());
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn slice(&self, n: usize) -> &DLPoly {
        &self.slices[n]
    }

    pub fn slices(&self) -> &[DLPoly] {
        &self.slices
    }

    pub fn is_zero(&self) -> bool {
        self.slices.iter().all(DLPoly::is_zero)
    }

    pub fn is_one(&self) -> bool {
        *self == DLSeries::one(self.order)
    }

    /// Every slice has degree at most its index.
    pub fn respects_degree_bound(&self) -> bool {
        self.slices
            .iter()
            .enumerate()
            .all(|(n, p)| p.degree().map_or(true, |d| d as usize <= n))
    }

    /// For a "diagonal" series `Σ g_n DL^{n−1} t^n`, returns `g_1..g_N`.
    pub fn diagonal_entries(&self) -> Option<Vec<Scalar>> {
        if !self.slices[0].is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(self.order);
        for n in 1..=self.order {
            let p = &self.slices[n];
            if p.is_zero() {
                out.push(Scalar::zero());
                continue;
            }
            match p.as_dl_multiple() {
                Some((c, k)) if k as usize == n - 1 => out.push(c),
                _ => return None,
            }
        }
        Some(out)
    }

    pub fn try_mul(&self, other: &DLSeries) -> Result<DLSeries> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        let mut out = DLSeries::zero(self.order);
        for p in 0..=self.order {
            if self.slices[p].is_zero() {
                continue;
            }
            for q in 0..=self.order - p {
                if other.slices[q].is_zero() {
                    continue;
                }
                out.slices[p + q] = out.slices[p + q].add(&self.slices[p].mul(&other.slices[q]));
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &DLSeries) -> DLSeries {
        assert_eq!(self.order, other.order, "series orders must match");
        DLSeries {
            order: self.order,
            slices: self
                .slices
                .iter()
                .zip(&other.slices)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> DLSeries {
        DLSeries {
            order: self.order,
            slices: self.slices.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// `Σ hⁿ/n!`; requires a zero constant slice.
    pub fn exp(&self) -> Result<DLSeries> {
        if !self.slices[0].is_zero() {
            return Err(Error::Domain("exp needs a zero constant slice".into()));
        }
        let mut out = DLSeries::one(self.order);
        let mut term = DLSeries::one(self.order);
        for k in 1..=self.order as i64 {
            term = term.try_mul(self)?.scale(&Scalar::ratio(1, k));
            if term.is_zero() {
                break;
            }
            out = out.add(&term);
        }
        Ok(out)
    }
}

impl fmt::Display for DLSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, p) in self.slices.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            write!(f, "t^{n}: {p}")?;
        }
        Ok(())
    }
}

thread_local! {
    static WORD_CACHE: RefCell<HashMap<Vec<u32>, Rc<DLPoly>>> = RefCell::new(HashMap::new());
}

/// `Ψ(X_{i1}⋯X_{ik}) = DL^{i1−1} ⋯ DL^{ik−1}` in normal form.
pub fn psi_word(w: &Word) -> Rc<DLPoly> {
    let letters = w.letters();
    if let Some(hit) = WORD_CACHE.with(|m| m.borrow().get(letters).cloned()) {
        return hit;
    }
    let value = match letters.split_last() {
        None => DLPoly::one(),
        Some((&last, rest)) => {
            let prefix = psi_word(&Word::new(rest.to_vec()));
            prefix.mul(&DLPoly::dl(last - 1))
        }
    };
    let rc = Rc::new(value);
    WORD_CACHE.with(|m| m.borrow_mut().insert(letters.to_vec(), rc.clone()));
    rc
}

/// The representation `Ψ` applied wordwise.
pub fn psi(f: &FreeSeries) -> DLSeries {
    let mut out = DLSeries::zero(f.order());
    for (w, c) in f.terms() {
        let n = w.weight();
        out.slices[n] = out.slices[n].add(&psi_word(w).scale(c));
    }
    out
}

/// `H_a(T)`: product of `exp(len · Σ c_i DL^{i−1} t^i)` over segments, later on the left.
pub fn monodromy_h(a: &PathSpec, order: usize) -> DLSeries {
    let mut acc = DLSeries::one(order);
    for s in a.segments() {
        let mut h = DLSeries::zero(order);
        for (&i, c) in &s.coeffs {
            if i as usize <= order {
                h.slices[i as usize] = DLPoly::monomial(1, i - 1, c.scale(&s.len));
            }
        }
        let e = h.exp().expect("zero constant slice");
        acc = e.try_mul(&acc).expect("equal orders");
    }
    acc
}

/// The three values reported for `γ_w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaReport {
    /// From normal-form rewriting of `Ψ` of the expanded bracket.
    pub rewriting: Scalar,
    /// From repeated use of `[DL^i, DL^j] = (i − j) DL^{i+j+1}` on the nested bracket.
    pub recursion: Scalar,
    /// The closed product `(i_{k−1} − i_k)(i_{k−1} + i_k − i_{k−2})⋯(i_2 + ⋯ + i_k − i_1)`.
    pub printed: Scalar,
}

impl GammaReport {
    pub fn printed_agrees(&self) -> bool {
        self.printed == self.rewriting
    }
}

/// The scalar `γ_w` with `Ψ([X_{i1}, [.., X_{ik}]]) = γ_w · DL^{n−1}`, by rewriting.
pub fn gamma_of_bracket(w: &Word) -> Result<Scalar> {
    let bracket = expand_bracket(w)?;
    let n = w.weight();
    let image = psi(&bracket);
    let p = image.slice(n);
    if p.is_zero() {
        return Ok(Scalar::zero());
    }
    match p.as_dl_multiple() {
        Some((c, k)) if k as usize == n - 1 => Ok(c),
        _ => Err(Error::Inconsistent(format!(
            "image of the bracket {w} is not a multiple of DL^{}",
            n - 1
        ))),
    }
}

pub fn gamma_report(w: &Word) -> Result<GammaReport> {
    let rewriting = gamma_of_bracket(w)?;
    let idx: Vec<i64> = w.letters().iter().map(|&i| i as i64).collect();
    let k = idx.len();
    let suffix = |m: usize| idx[m..].iter().sum::<i64>();
    let mut recursion = 1i64;
    for m in 0..k.saturating_sub(1) {
        recursion *= idx[m] - suffix(m + 1);
    }
    let printed = if k < 2 {
        1
    } else {
        let mut p = idx[k - 2] - idx[k - 1];
        for m in 0..k - 2 {
            p *= suffix(m + 1) - idx[m];
        }
        p
    };
    Ok(GammaReport {
        rewriting,
        recursion: Scalar::from_int(recursion),
        printed: Scalar::from_int(printed),
    })
}
