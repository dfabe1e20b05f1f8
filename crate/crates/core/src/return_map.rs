//! First-return maps `r ↦ v(T)` of `v' = Σ a_i(x) v^{i+1}` as elements of the
//! composition group of series `r + Σ d_i r^{i+1}`.
//!
//! In the pairing convention of [`crate::paths`], the operator attached to a
//! word acts with its first letter last, so the return map pairs each
//! coefficient `c_w` with the polynomial of the reversed word.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lie::is_group_like;
use crate::operator::dl_bracket;
use crate::paths::PathSpec;
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::series::FreeSeries;
use crate::word::{enumerate_words, Word};

/// `r + Σ_{i=1}^{N} d_i r^{i+1}`, with `d[0] = d_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnSeries {
    order: usize,
    d: Vec<Scalar>,
}

impl ReturnSeries {
    pub fn identity(order: usize) -> Self {
        ReturnSeries {
            order,
            d: vec![Scalar::zero(); order],
        }
    }

    /// Missing coefficients are zero; extra ones are an error.
    pub fn new(order: usize, mut d: Vec<Scalar>) -> Result<Self> {
        if d.len() > order {
            return Err(Error::OutOfRange(format!(
                "{} coefficients given for order {order}",
                d.len()
            )));
        }
        d.resize(order, Scalar::zero());
        Ok(ReturnSeries { order, d })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.d
    }

    /// `d_i` for `1 ≤ i ≤ N`.
    pub fn d(&self, i: usize) -> &Scalar {
        &self.d[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.d.iter().all(Zero::is_zero)
    }

    /// Coefficients of `r^0..=r^{N+1}`.
    fn dense(&self) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(), Scalar::one()];
        v.extend(self.d.iter().cloned());
        v
    }

    fn from_dense(order: usize, v: &[Scalar]) -> Self {
        ReturnSeries {
            order,
            d: (2..order + 2)
                .map(|k| v.get(k).cloned().unwrap_or_else(Scalar::zero))
                .collect(),
        }
    }
}

fn mul_trunc(a: &[Scalar], b: &[Scalar], len: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += &(x * y);
        }
    }
    out
}

/// `f ∘ g`, truncated after `r^{N+1}`.
pub fn rs_compose(f: &ReturnSeries, g: &ReturnSeries) -> Result<ReturnSeries> {
    if f.order != g.order {
        return Err(Error::OrderMismatch(f.order, g.order));
    }
    let len = f.order + 2;
    let fd = f.dense();
    let gd = g.dense();
    let mut out = vec![Scalar::zero(); len];
    let mut power = vec![Scalar::zero(); len];
    power[0] = Scalar::one();
    for c in fd.iter().take(len) {
        if !c.is_zero() {
            for (o, p) in out.iter_mut().zip(&power) {
                *o += &(c * p);
            }
        }
        power = mul_trunc(&power, &gd, len);
    }
    Ok(ReturnSeries::from_dense(f.order, &out))
}

/// Compositional inverse by solving for one coefficient at a time.
pub fn rs_invert(f: &ReturnSeries) -> ReturnSeries {
    let mut h = ReturnSeries::identity(f.order);
    for i in 1..=f.order {
        let err = rs_compose(f, &h).expect("equal orders").d(i).clone();
        h.d[i - 1] -= &err;
    }
    h
}

/// `(t − i_1 + 1)(t − i_1 − i_2 + 1)⋯(t − i + 1)`.
pub fn p_poly(w: &Word, t: &Scalar) -> Result<Scalar> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut acc = Scalar::one();
    let mut partial = 0i64;
    for &i in w.letters() {
        partial += i as i64;
        acc = &acc * &(t - &Scalar::from_int(partial - 1));
    }
    Ok(acc)
}

/// `d_i = Σ_{weight(w) = i} p_{rev(w)}(i) · c_w(g)`.
pub fn return_map_p(g: &FreeSeries) -> Result<ReturnSeries> {
    if !is_group_like(g)? {
        return Err(Error::NotGroupLike);
    }
    Ok(return_map_unchecked(g))
}

/// [`return_map_p`] without the group-like test.
pub fn return_map_unchecked(g: &FreeSeries) -> ReturnSeries {
    let n = g.order();
    let mut d = vec![Scalar::zero(); n];
    for (w, c) in g.terms() {
        if w.is_empty() {
            continue;
        }
        let i = w.weight();
        let p = p_poly(&w.reversed(), &Scalar::from_int(i as i64)).expect("nonempty");
        d[i - 1] += &(&p * c);
    }
    ReturnSeries { order: n, d }
}

/// Solves `v' = Σ a_i v^{i+1}`, `v(0) = r`, as `v = r(1 + Σ V_m r^m)` with each
/// `V_m` a polynomial on every segment, and returns `v(T)`.
pub fn ode_oracle_return_map(a: &PathSpec, order: usize) -> ReturnSeries {
    let n = order;
    // values of V_0..V_n at the current segment start
    let mut start = vec![Scalar::zero(); n + 1];
    start[0] = Scalar::one();
    for seg in a.segments() {
        let coeffs: Vec<(usize, Scalar)> = seg
            .coeffs
            .iter()
            .filter(|(i, _)| (**i as usize) <= n)
            .map(|(i, c)| (*i as usize, c.clone()))
            .collect();
        let max_e = coeffs.iter().map(|(i, _)| i + 1).max().unwrap_or(1);
        // pow[e][m] = [r^m] u^e as a polynomial in local time
        let mut pow: Vec<Vec<Poly>> = vec![Vec::with_capacity(n + 1); max_e + 1];
        let mut v: Vec<Poly> = Vec::with_capacity(n + 1);
        v.push(Poly::constant(Scalar::one()));
        pow[0].push(Poly::constant(Scalar::one()));
        for e in 1..=max_e {
            pow[e].push(Poly::constant(Scalar::one()));
        }
        for j in 1..=n {
            pow[0].push(Poly::zero());
            let mut rhs = Poly::zero();
            for (i, c) in &coeffs {
                if *i <= j {
                    rhs = &rhs + &pow[i + 1][j - i].scale(c);
                }
            }
            let vj = &Poly::constant(start[j].clone()) + &rhs.integral();
            v.push(vj);
            for e in 1..=max_e {
                let mut acc = Poly::zero();
                for k in 0..=j {
                    acc = &acc + &(&v[k] * &pow[e - 1][j - k]);
                }
                pow[e].push(acc);
            }
        }
        let len = Scalar::from_rational(seg.len.clone());
        start = v.iter().map(|p| p.eval(&len)).collect();
    }
    ReturnSeries {
        order: n,
        d: start[1..].to_vec(),
    }
}

/// Verdict of the center test at a finite order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterReport {
    pub order: usize,
    /// `d_1 = ⋯ = d_N = 0`.
    pub verdict: bool,
    pub first_failing_degree: Option<usize>,
    pub return_map: ReturnSeries,
}

/// Center to order `N`: the return map vanishes through `d_N`, and, checked
/// independently, each `Σ_{weight(w) = i} p_{rev(w)}(t) I_w(a)` is the zero
/// polynomial in `t`. Disagreement between the two is reported as an error.
pub fn is_center(a: &PathSpec, order: usize) -> Result<CenterReport> {
    let g = a.monodromy(order);
    let rm = return_map_unchecked(&g);
    let first_failing_degree = (1..=order).find(|&i| !rm.d(i).is_zero());
    let mut poly_first_fail = None;
    for i in 1..=order {
        let words = enumerate_words(i);
        let coeffs: Vec<Scalar> = words.iter().map(|w| g.coeff(w)).collect();
        // a degree-i polynomial vanishes identically iff it vanishes at i + 1 points
        let zero_poly = (0..=i as i64).all(|t| {
            let t = Scalar::from_int(t);
            words
                .iter()
                .zip(&coeffs)
                .filter(|(_, c)| !c.is_zero())
                .map(|(w, c)| &p_poly(&w.reversed(), &t).expect("nonempty") * c)
                .sum::<Scalar>()
                .is_zero()
        });
        if !zero_poly {
            poly_first_fail = Some(i);
            break;
        }
    }
    if first_failing_degree.is_none() != poly_first_fail.is_none() {
        return Err(Error::Inconsistent(format!(
            "return-map test fails at {first_failing_degree:?}, polynomial test at {poly_first_fail:?}"
        )));
    }
    Ok(CenterReport {
        order,
        verdict: first_failing_degree.is_none(),
        first_failing_degree,
        return_map: rm,
    })
}

/// `Σ_{weight(w) = i} p_w(i) s_{i1}⋯s_{ik} T^k/k!`, summed over compositions by
/// dynamic programming on (partial sum, number of parts).
fn phi_coefficient(s: &[Scalar], t: &BigRational, i: usize) -> Scalar {
    // a[m][k]: sum over compositions of m into k parts of Π s_j (i − partial + 1)
    let mut a = vec![vec![Scalar::zero(); i + 1]; i + 1];
    a[0][0] = Scalar::one();
    for m in 1..=i {
        let factor = Scalar::from_int(i as i64 - m as i64 + 1);
        for j in 1..=m.min(s.len()) {
            if s[j - 1].is_zero() {
                continue;
            }
            let sf = &s[j - 1] * &factor;
            for k in 1..=m {
                if a[m - j][k - 1].is_zero() {
                    continue;
                }
                let add = &a[m - j][k - 1] * &sf;
                a[m][k] += &add;
            }
        }
    }
    let mut total = Scalar::zero();
    for k in 1..=i {
        if a[i][k].is_zero() {
            continue;
        }
        let tk = t.pow(k as i32) / BigRational::from_integer(factorial(k as u32));
        total += &a[i][k].scale(&tk);
    }
    total
}

fn factorial(k: u32) -> num_bigint::BigInt {
    (1..=k).fold(num_bigint::BigInt::one(), |a, x| a * x)
}

/// `d_i = Σ p_w(i) s_{i1}⋯s_{ik} T^k/k!`, the return map of `exp(T Σ s_n X_n)`.
pub fn phi_forward(s: &[Scalar], t: &BigRational) -> ReturnSeries {
    let n = s.len();
    ReturnSeries {
        order: n,
        d: (1..=n).map(|i| phi_coefficient(s, t, i)).collect(),
    }
}

/// The unique `s` with `phi_forward(s, T) = f`, solved degree by degree.
pub fn phi_inverse(f: &ReturnSeries, t: &BigRational) -> Result<Vec<Scalar>> {
    if t.is_zero() {
        return Err(Error::Domain("phi_inverse needs T != 0".into()));
    }
    let n = f.order;
    let mut s = vec![Scalar::zero(); n];
    let t_inv = Scalar::from_rational(t.recip());
    for i in 1..=n {
        // s_i enters d_i only through the one-letter word, with weight T
        let rest = phi_coefficient(&s[..i], t, i);
        s[i - 1] = &(f.d(i) - &rest) * &t_inv;
    }
    Ok(s)
}

/// Checks `[DL^{i−1}, DL^{j−1}] = (i − j) DL^{i+j−1}` against the vector-field
/// bracket of `e_i = r^{i+1} d/dr` under `DL^{i−1} ↦ −e_i`, for `1 ≤ i, j ≤ max`.
pub fn witt_correspondence_holds(max: u32) -> bool {
    let field = |i: u32| {
        let mut c = vec![Scalar::zero(); i as usize + 2];
        c[i as usize + 1] = Scalar::one();
        Poly::from_coeffs(c)
    };
    let deriv = |p: &Poly| {
        Poly::from_coeffs(
            p.coeffs()
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Scalar::from_int(k as i64))
                .collect(),
        )
    };
    for i in 1..=max {
        for j in 1..=max {
            let br = dl_bracket(i - 1, j - 1);
            let Some((c, k)) = br.as_dl_multiple().or_else(|| {
                br.is_zero().then(|| (Scalar::zero(), i + j - 1))
            }) else {
                return false;
            };
            if k != i + j - 1 {
                return false;
            }
            // image of the left side: [−e_i, −e_j] = [e_i, e_j]
            let (f, g) = (field(i), field(j));
            let lhs = &(&f * &deriv(&g)) - &(&g * &deriv(&f));
            // image of the right side: c · (−e_{i+j})
            let rhs = field(i + j).scale(&-c);
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

impl fmt::Display for ReturnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r")?;
        for (k, c) in self.d.iter().enumerate() {
            if !c.is_zero() {
                write!(f, " + {c}*r^{}", k + 2)?;
            }
        }
        write!(f, " + O(r^{})", self.order + 2)
    }
}

/// Parses `r + d1*r^2 + ... + O(r^{N+2})`.
impl FromStr for ReturnSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut pos = 0usize;
        let mut terms: Vec<(usize, Scalar)> = Vec::new();
        let mut order = None;
        for (k, part) in s.split(" + ").enumerate() {
            if k == 0 {
                if part.trim() != "r" {
                    return Err(Error::parse(pos, "expected leading 'r'"));
                }
            } else if let Some(rest) = part.strip_prefix("O(r^").and_then(|r| r.strip_suffix(')')) {
                let e: usize = rest
                    .parse()
                    .ok()
                    .filter(|&e| e >= 3)
                    .ok_or_else(|| Error::parse(pos + 4, "expected an exponent >= 3"))?;
                order = Some(e - 2);
            } else {
                if order.is_some() {
                    return Err(Error::parse(pos, "term after the order term"));
                }
                let (c, e) = part
                    .rsplit_once("*r^")
                    .ok_or_else(|| Error::parse(pos, "expected 'c*r^k'"))?;
                let coeff: Scalar = c.parse().map_err(|err: Error| err.offset(pos))?;
                let e: usize = e
                    .parse()
                    .ok()
                    .filter(|&e| e >= 2)
                    .ok_or_else(|| Error::parse(pos + c.len() + 3, "expected an exponent >= 2"))?;
                terms.push((e, coeff));
            }
            pos += part.len() + 3;
        }
        let order = order.ok_or_else(|| Error::parse(s.len(), "missing O(r^k) order term"))?;
        let mut d = vec![Scalar::zero(); order];
        for (e, c) in terms {
            if e - 1 > order {
                return Err(Error::parse(0, format!("r^{e} exceeds the stated order")));
            }
            d[e - 2] += &c;
        }
        Ok(ReturnSeries { order, d })
    }
}
