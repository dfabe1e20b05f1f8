#![allow(dead_code)]

use std::collections::BTreeMap;

use center_algebra::lie::expand_bracket_at;
use center_algebra::{FreeSeries, LieSeries, PathSpec, Scalar, Segment, Word};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn w(v: &[u32]) -> Word {
    Word::new(v.to_vec())
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let n = rng.gen_range(-3i64..=3);
    let d = rng.gen_range(1i64..=3);
    rat(n, d)
}

/// Mostly real, occasionally Gaussian.
pub fn small_scalar(rng: &mut ChaCha8Rng, complex: bool) -> Scalar {
    let re = small_rational(rng);
    if complex && rng.gen_bool(0.25) {
        Scalar::new(re, small_rational(rng))
    } else {
        Scalar::from_rational(re)
    }
}

pub fn nonzero_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let s = small_scalar(rng, false);
        if !s.is_zero() {
            return s;
        }
    }
}

/// A path on [0, 1] with `min_seg..=max_seg` segments and indices in `1..=max_index`.
pub fn random_path_with(
    rng: &mut ChaCha8Rng,
    min_seg: usize,
    max_seg: usize,
    max_index: u32,
    complex: bool,
) -> PathSpec {
    let k = rng.gen_range(min_seg..=max_seg);
    let weights: Vec<i64> = (0..k).map(|_| rng.gen_range(1i64..=4)).collect();
    let total: i64 = weights.iter().sum();
    let segments = weights
        .iter()
        .map(|&wt| {
            let mut coeffs = BTreeMap::new();
            for i in 1..=max_index {
                if rng.gen_bool(0.6) {
                    coeffs.insert(i, small_scalar(rng, complex));
                }
            }
            Segment::new(rat(wt, total), coeffs)
        })
        .collect();
    PathSpec::new(BigRational::one(), segments).unwrap()
}

/// 2 to 4 segments, indices up to 3.
pub fn random_path(rng: &mut ChaCha8Rng) -> PathSpec {
    random_path_with(rng, 2, 4, 3, true)
}

pub fn random_real_path(rng: &mut ChaCha8Rng) -> PathSpec {
    random_path_with(rng, 2, 4, 3, false)
}

/// A closed path: random segments followed by one segment cancelling every first integral.
pub fn random_closed_path(rng: &mut ChaCha8Rng) -> PathSpec {
    let a = random_path_with(rng, 1, 3, 3, false);
    let mut segments: Vec<Segment> = a
        .segments()
        .iter()
        .map(|s| Segment::new(&s.len / rat(2, 1), s.coeffs.clone()))
        .collect();
    let half = rat(1, 2);
    let mut last = BTreeMap::new();
    for i in a.support() {
        let total: Scalar = a.segments().iter().map(|s| s.coeff(i).scale(&s.len)).sum();
        // the first half carries half of each integral
        last.insert(i, -&total);
    }
    segments.push(Segment::new(half, last));
    let p = PathSpec::new(BigRational::one(), segments).unwrap();
    assert!(p.is_closed());
    p
}

/// A random Lie element built from brackets of random words.
pub fn random_lie(rng: &mut ChaCha8Rng, order: usize, max_index: u32) -> LieSeries {
    let mut h = FreeSeries::zero(order);
    for _ in 0..rng.gen_range(2..=5) {
        let len = rng.gen_range(1..=3);
        let letters: Vec<u32> = (0..len).map(|_| rng.gen_range(1..=max_index)).collect();
        let word = Word::new(letters);
        if word.weight() > order {
            continue;
        }
        let b = expand_bracket_at(&word, order).unwrap();
        h = &h + &b.scale(&small_scalar(rng, false));
    }
    LieSeries::try_new(h).unwrap()
}

/// Iterated integral of a piecewise-constant path by summing over the ways of
/// distributing the (time-ordered) letters among segments:
/// `Π_s (Π coeffs in s) · len_s^{m_s} / m_s!`.
pub fn integral_by_assignment(a: &PathSpec, word: &Word) -> Scalar {
    let chrono: Vec<u32> = word.letters().iter().rev().copied().collect();
    fn rec(segs: &[Segment], letters: &[u32], seg: usize, acc: Scalar, total: &mut Scalar) {
        if letters.is_empty() {
            *total += &acc;
            return;
        }
        if seg == segs.len() {
            return;
        }
        // put the next m letters in this segment, then move on
        let mut prod = acc.clone();
        let mut fact = BigInt::one();
        let mut len_pow = BigRational::one();
        rec(segs, letters, seg + 1, acc, total);
        for m in 1..=letters.len() {
            prod = &prod * &segs[seg].coeff(letters[m - 1]);
            if prod.is_zero() {
                return;
            }
            fact *= BigInt::from(m as u64);
            len_pow *= &segs[seg].len;
            let weight = &len_pow / BigRational::from_integer(fact.clone());
            rec(segs, &letters[m..], seg + 1, prod.scale(&weight), total);
        }
    }
    let mut total = Scalar::zero();
    rec(a.segments(), &chrono, 0, Scalar::one(), &mut total);
    total
}

/// Dense truncated polynomial in `r`, coefficients of `r^0..=r^{deg}`.
pub type RPoly = Vec<Scalar>;

fn rmul(a: &RPoly, b: &RPoly, deg: usize) -> RPoly {
    let mut out = vec![Scalar::zero(); deg + 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j <= deg {
                out[i + j] += &(x * y);
            }
        }
    }
    out
}

fn rderiv(a: &RPoly) -> RPoly {
    let mut out: RPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * &Scalar::from_int(k as i64))
        .collect();
    out.push(Scalar::zero());
    out
}

fn rcompose(f: &RPoly, g: &RPoly, deg: usize) -> RPoly {
    let mut out = vec![Scalar::zero(); deg + 1];
    let mut power = vec![Scalar::zero(); deg + 1];
    power[0] = Scalar::one();
    for c in f {
        for k in 0..=deg {
            out[k] += &(c * &power[k]);
        }
        power = rmul(&power, g, deg);
    }
    out
}

/// Return map `d_1..d_N` by composing exact time-`len` flows of each
/// autonomous segment field `f(v) = Σ c_i v^{i+1}`, using the Lie series
/// `φ_τ(r) = Σ τ^k/k! (f d/dr)^k r`.
pub fn return_map_by_flows(a: &PathSpec, order: usize) -> Vec<Scalar> {
    let deg = order + 1;
    let mut total: RPoly = vec![Scalar::zero(); deg + 1];
    total[1] = Scalar::one();
    for seg in a.segments() {
        let mut field = vec![Scalar::zero(); deg + 1];
        for (&i, c) in &seg.coeffs {
            if (i as usize) < deg {
                field[i as usize + 1] = c.clone();
            }
        }
        let mut term: RPoly = vec![Scalar::zero(); deg + 1];
        term[1] = Scalar::one();
        let mut flow = term.clone();
        let len = Scalar::from_rational(seg.len.clone());
        let mut coef = Scalar::one();
        for k in 1..=deg {
            term = rmul(&field, &rderiv(&term), deg);
            coef = &(&coef * &len) * &Scalar::ratio(1, k as i64);
            for (x, t) in flow.iter_mut().zip(&term) {
                *x += &(&coef * t);
            }
        }
        // later flows act on the result of earlier ones
        total = rcompose(&flow, &total, deg);
    }
    total[2..].to_vec()
}

pub fn timed<T>(label: &str, limit_secs: f64, f: impl FnOnce() -> T) -> (T, bool) {
    let start = std::time::Instant::now();
    let out = f();
    let secs = start.elapsed().as_secs_f64();
    let ok = secs < limit_secs;
    if !ok {
        eprintln!("{label}: took {secs:.2}s, limit {limit_secs}s");
    }
    (out, ok)
}
