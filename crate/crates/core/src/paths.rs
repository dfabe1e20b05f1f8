//! Piecewise-constant coefficient paths `a = (a_1, a_2, ...)` on `[0, T]`.
//!
//! Pairing convention: in `I_{i1..ik}(a) = ∫ a_{i1}(s_1)⋯a_{ik}(s_k)` over
//! `T ≥ s_1 ≥ s_2 ≥ ⋯ ≥ s_k ≥ 0`, the first index goes with the latest time.
//! The monodromy is the time-ordered product of segment exponentials with
//! later segments on the left, so that its coefficients are exactly these
//! integrals and `E(a∗b) = E(a)·E(b)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lie::is_group_like;
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::series::{exp_letters, FreeSeries};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub len: BigRational,
    pub coeffs: BTreeMap<u32, Scalar>,
}

impl Segment {
    pub fn new<I: IntoIterator<Item = (u32, Scalar)>>(len: BigRational, coeffs: I) -> Self {
        Segment {
            len,
            coeffs: coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn coeff(&self, i: u32) -> Scalar {
        self.coeffs.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSpec {
    t: BigRational,
    segments: Vec<Segment>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl PathSpec {
    /// Validates positive lengths summing to `t` and positive indices.
    pub fn new(t: BigRational, segments: Vec<Segment>) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::Precondition("total time must be positive".into()));
        }
        let mut total = BigRational::zero();
        let mut clean = Vec::with_capacity(segments.len());
        for (k, s) in segments.into_iter().enumerate() {
            if !s.len.is_positive() {
                return Err(Error::Precondition(format!(
                    "segment {k} has non-positive length"
                )));
            }
            if s.coeffs.contains_key(&0) {
                return Err(Error::Precondition(format!(
                    "segment {k} uses coefficient index 0"
                )));
            }
            total += &s.len;
            clean.push(Segment::new(s.len, s.coeffs));
        }
        if total != t {
            return Err(Error::Precondition(format!(
                "segment lengths sum to {total}, expected T = {t}"
            )));
        }
        Ok(PathSpec { t, segments: clean })
    }

    /// A single segment on `[0, 1]` with `a_i = c`.
    pub fn constant(i: u32, c: Scalar) -> Self {
        PathSpec::new(
            BigRational::one(),
            vec![Segment::new(BigRational::one(), [(i, c)])],
        )
        .expect("valid constant path")
    }

    pub fn t(&self) -> &BigRational {
        &self.t
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Union of segment supports.
    pub fn support(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .segments
            .iter()
            .flat_map(|s| s.coeffs.keys().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `a∗b`: `b` runs first on `[0, T/2]`, then `a`, both at doubled amplitude.
    pub fn star_concat(&self, other: &PathSpec) -> Result<PathSpec> {
        if self.t != other.t {
            return Err(Error::TimeMismatch(self.t.to_string(), other.t.to_string()));
        }
        let half = rat(1, 2);
        let two = Scalar::from_int(2);
        let squeeze = |s: &Segment| Segment {
            len: &s.len * &half,
            coeffs: s.coeffs.iter().map(|(i, c)| (*i, c * &two)).collect(),
        };
        let segments = other
            .segments
            .iter()
            .chain(&self.segments)
            .map(squeeze)
            .collect();
        Ok(PathSpec {
            t: self.t.clone(),
            segments,
        })
    }

    /// Plain concatenation on `[0, T_a + T_b]`, `b` first. Iterated integrals
    /// agree with those of `a∗b`, which is only a reparametrization of this.
    pub fn concat_plain(&self, other: &PathSpec) -> PathSpec {
        PathSpec {
            t: &self.t + &other.t,
            segments: other.segments.iter().chain(&self.segments).cloned().collect(),
        }
    }

    /// `a⁻¹(x) = −a(T − x)`.
    pub fn inverse(&self) -> PathSpec {
        PathSpec {
            t: self.t.clone(),
            segments: self
                .segments
                .iter()
                .rev()
                .map(|s| Segment {
                    len: s.len.clone(),
                    coeffs: s.coeffs.iter().map(|(i, c)| (*i, -c)).collect(),
                })
                .collect(),
        }
    }

    /// The group commutator `a∗b∗a⁻¹∗b⁻¹` built from `∗`.
    pub fn commutator(&self, other: &PathSpec) -> Result<PathSpec> {
        let ab = self.star_concat(other)?;
        let ai_bi = self.inverse().star_concat(&other.inverse())?;
        ab.star_concat(&ai_bi)
    }

    /// `∫_0^T a_s` for every index in the support vanishes.
    pub fn is_closed(&self) -> bool {
        self.support().into_iter().all(|i| {
            self.segments
                .iter()
                .map(|s| s.coeff(i).scale(&s.len))
                .sum::<Scalar>()
                .is_zero()
        })
    }

    /// Exact `I_w(a)` by segmentwise recursion on polynomial antiderivatives.
    pub fn iterated_integral(&self, w: &Word) -> Result<Scalar> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        let factors: Vec<u32> = w.letters().iter().rev().copied().collect();
        Ok(iterated_simplex(&self.segments, factors.len(), |seg, k, _| {
            Poly::constant(seg.coeff(factors[k]))
        }))
    }

    /// `E(a)` truncated at weight `order`.
    pub fn monodromy(&self, order: usize) -> FreeSeries {
        let mut acc = FreeSeries::one(order);
        for s in &self.segments {
            let b: BTreeMap<u32, Scalar> = s
                .coeffs
                .iter()
                .map(|(i, c)| (*i, c.scale(&s.len)))
                .collect();
            acc = &exp_letters(order, &b) * &acc;
        }
        acc
    }

    /// Largest `n ≤ order` with all integrals of weight `≤ n` zero; `order + 1`
    /// when the monodromy is trivial to the full order.
    pub fn triviality_order(&self, order: usize) -> usize {
        let e = self.monodromy(order);
        e.terms()
            .filter(|(w, _)| !w.is_empty())
            .map(|(w, _)| w.weight() - 1)
            .min()
            .unwrap_or(order + 1)
    }

    /// Exact value of a moment.
    pub fn moment(&self, m: &MomentSpec) -> Scalar {
        let mut starts: Vec<BTreeMap<u32, Scalar>> = Vec::with_capacity(self.segments.len());
        let mut prim: BTreeMap<u32, Scalar> = BTreeMap::new();
        for s in &self.segments {
            starts.push(prim.clone());
            for (i, c) in &s.coeffs {
                *prim.entry(*i).or_insert_with(Scalar::zero) += &c.scale(&s.len);
            }
        }
        iterated_simplex(&self.segments, m.factors.len(), |seg, k, idx| {
            let f = &m.factors[k];
            let mut p = Poly::constant(seg.coeff(f.coeff));
            for &(i, n) in &f.powers {
                let start = starts[idx].get(&i).cloned().unwrap_or_else(Scalar::zero);
                p = &p * &Poly::linear(seg.coeff(i), start).pow(n);
            }
            p
        })
    }
}

/// `∫_{0 ≤ s_1 ≤ ⋯ ≤ s_k ≤ T} f_1(s_1)⋯f_k(s_k)` where `f_j` restricted to a
/// segment is the polynomial `integrand(segment, j, segment_index)` in local time.
fn iterated_simplex(
    segments: &[Segment],
    k: usize,
    integrand: impl Fn(&Segment, usize, usize) -> Poly,
) -> Scalar {
    // value[j] = G_j at the start of the current segment, G_0 = 1
    let mut value = vec![Scalar::zero(); k + 1];
    value[0] = Scalar::one();
    for (idx, seg) in segments.iter().enumerate() {
        let len = Scalar::from_rational(seg.len.clone());
        let mut local = Poly::constant(Scalar::one());
        let mut end = vec![Scalar::one()];
        for j in 1..=k {
            let f = integrand(seg, j - 1, idx);
            local = &Poly::constant(value[j].clone()) + &(&f * &local).integral();
            end.push(local.eval(&len));
        }
        value = end;
    }
    value[k].clone()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentFactor {
    /// `(primitive index, exponent)` pairs.
    pub powers: Vec<(u32, u32)>,
    pub coeff: u32,
}

impl MomentFactor {
    pub fn degree(&self) -> u64 {
        self.powers
            .iter()
            .map(|&(i, n)| i as u64 * n as u64)
            .sum::<u64>()
            + self.coeff as u64
    }
}

/// `∫ f_1(s_1)⋯f_k(s_k)` over `0 ≤ s_1 ≤ ⋯ ≤ s_k ≤ T` with
/// `f_j = Π ã_i^{n} · a_{coeff}` and `ã_i(x) = ∫_0^x a_i`; `factors[0]` is `f_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentSpec {
    pub factors: Vec<MomentFactor>,
}

impl MomentSpec {
    pub fn new(factors: Vec<MomentFactor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Precondition("a moment needs at least one factor".into()));
        }
        if factors
            .iter()
            .any(|f| f.coeff == 0 || f.powers.iter().any(|&(i, _)| i == 0))
        {
            return Err(Error::Precondition("moment indices must be positive".into()));
        }
        Ok(MomentSpec { factors })
    }

    pub fn order(&self) -> usize {
        self.factors.len()
    }

    pub fn degree(&self) -> u64 {
        self.factors.iter().map(MomentFactor::degree).max().unwrap_or(0)
    }
}

/// Partial sum `Σ_{n ≤ N} 4^{−n} Σ_{|w| = n} |Δ_w| / (1 + |Δ_w|)`; the omitted
/// tail is at most `(1/2)^{N+1}`. Fails when some `|Δ_w|` is irrational.
pub fn metric_d(g: &FreeSeries, h: &FreeSeries) -> Result<BigRational> {
    if g.order() != h.order() {
        return Err(Error::OrderMismatch(g.order(), h.order()));
    }
    let diff = g.try_sub(h)?;
    let mut total = BigRational::zero();
    for (w, c) in diff.terms() {
        if w.is_empty() {
            continue;
        }
        let m = c
            .abs_rational()
            .ok_or_else(|| Error::IrrationalModulus(c.to_string()))?;
        let term = &m / (BigRational::one() + &m);
        let scale = BigRational::new(BigInt::one(), BigInt::from(4).pow(w.weight() as u32));
        total += term * scale;
    }
    Ok(total)
}

/// Tail bound for [`metric_d`] at truncation `order`.
pub fn metric_tail_bound(order: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2).pow(order as u32 + 1))
}

/// Largest `n` such that every word with at most `n` letters has coefficient 0,
/// capped at the order.
pub fn lcs_order(g: &FreeSeries) -> Result<usize> {
    if !is_group_like(g)? {
        return Err(Error::NotGroupLike);
    }
    Ok(g
        .terms()
        .filter(|(w, _)| !w.is_empty())
        .map(|(w, _)| w.len() - 1)
        .min()
        .unwrap_or(g.order())
        .min(g.order()))
}
