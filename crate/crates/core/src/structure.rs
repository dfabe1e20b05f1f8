//! Projections onto the diagonal part and onto two letters, the kernel/two-letter
//! decomposition, center generators, and centers built from piecewise-linear pieces.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lie::{bch, expand_bracket_at, is_group_like, LieSeries};
use crate::operator::{gamma_of_bracket, psi, DLSeries};
use crate::return_map::{phi_inverse, ReturnSeries};
use crate::scalar::Scalar;
use crate::series::FreeSeries;
use crate::word::Word;

/// `Σ g_n X_n t^n`, identified with `Σ g_n DL^{n−1} t^n`; `entries[n−1] = g_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalLieVector {
    order: usize,
    entries: Vec<Scalar>,
}

impl DiagonalLieVector {
    /// Missing entries are zero.
    pub fn new(order: usize, mut entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() > order {
            return Err(Error::OutOfRange(format!(
                "{} entries given for order {order}",
                entries.len()
            )));
        }
        entries.resize(order, Scalar::zero());
        Ok(DiagonalLieVector { order, entries })
    }

    pub fn zero(order: usize) -> Self {
        DiagonalLieVector {
            order,
            entries: vec![Scalar::zero(); order],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn to_lie(&self) -> LieSeries {
        LieSeries::linear(
            self.order,
            self.entries
                .iter()
                .enumerate()
                .map(|(k, c)| (k as u32 + 1, c.clone())),
        )
    }

    pub fn to_dl(&self) -> DLSeries {
        DLSeries::diagonal(self.order, &self.entries)
    }
}

/// `Π(h)`: the coefficients of `DL^{n−1}` in `Ψ(h)`.
pub fn projection_pi(h: &LieSeries) -> Result<DiagonalLieVector> {
    let image = psi(h.body());
    let entries = image.diagonal_entries().ok_or(Error::NotLie)?;
    Ok(DiagonalLieVector {
        order: h.order(),
        entries,
    })
}

/// `r_n`: `X_1`, `X_2`, and `((−1)^n/(n−2)!)[X_1, [X_1, .., [X_1, X_2]..]]`
/// with `n − 2` copies of `X_1` for `n ≥ 3`. Satisfies `Ψ(r_n) = DL^{n−1}`.
pub fn r_generator(n: u32, order: usize) -> Result<FreeSeries> {
    match n {
        0 => Err(Error::Precondition("r_n needs n >= 1".into())),
        1 | 2 => Ok(FreeSeries::letter(order, n)),
        _ => {
            let mut letters = vec![1u32; n as usize - 2];
            letters.push(2);
            let fact: BigInt = (1..=n as u64 - 2).map(BigInt::from).product();
            let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let c = Scalar::from_rational(BigRational::new(sign, fact));
            Ok(expand_bracket_at(&Word::new(letters), order)?.scale(&c))
        }
    }
}

/// The algebra endomorphism `π₂` with `X_i ↦ r_i`.
pub fn pi2_project(f: &FreeSeries) -> FreeSeries {
    let order = f.order();
    let mut letter_images: HashMap<u32, FreeSeries> = HashMap::new();
    let mut memo: HashMap<Vec<u32>, FreeSeries> = HashMap::new();
    let mut out = FreeSeries::zero(order);
    for (w, c) in f.terms() {
        let img = pi2_word(w.letters(), order, &mut letter_images, &mut memo);
        for (v, d) in img.terms() {
            out.add_term(v.clone(), d * c);
        }
    }
    out
}

fn pi2_word(
    letters: &[u32],
    order: usize,
    letter_images: &mut HashMap<u32, FreeSeries>,
    memo: &mut HashMap<Vec<u32>, FreeSeries>,
) -> FreeSeries {
    if let Some(hit) = memo.get(letters) {
        return hit.clone();
    }
    let value = match letters.split_last() {
        None => FreeSeries::one(order),
        Some((&last, rest)) => {
            let prefix = pi2_word(rest, order, letter_images, memo);
            let img = letter_images
                .entry(last)
                .or_insert_with(|| r_generator(last, order).expect("positive index"));
            &prefix * img
        }
    };
    memo.insert(letters.to_vec(), value.clone());
    value
}

/// `h = n_part + abel_part` with `abel_part = π₂(h)` and `π₂(n_part) = 0`.
pub fn lie_decompose(h: &LieSeries) -> (LieSeries, LieSeries) {
    let abel = pi2_project(h.body());
    let n_part = h.body() - &abel;
    (LieSeries::trusted(n_part), LieSeries::trusted(abel))
}

/// `g = c·b` with `b = π₂(g)` on two letters and `π₂(c) = I`.
pub fn group_factorize(g: &FreeSeries) -> Result<(FreeSeries, FreeSeries)> {
    if !is_group_like(g)? {
        return Err(Error::NotGroupLike);
    }
    let b = pi2_project(g);
    let c = g * &b.inverse()?;
    Ok((c, b))
}

/// Which center generator to build.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `[X_{i1}, [.., X_{ik}]] − γ_w X_n`, `k ≥ 2`.
    V(Word),
    /// `X_i − (1/(i−2))[X_{i−1}, X_1]`, `i ≥ 3`.
    S(u32),
    /// `r_n`, `n ≥ 1`.
    R(u32),
    /// `[X_{i1}, [.., X_{ik}]] − γ_w r_n` on letters `{1, 2}`, `k ≥ 2`, weight `≥ 5`.
    L(Word),
}

/// Builds a generator at truncation `order`, which must cover its weight.
pub fn center_generator(kind: &GeneratorKind, order: usize) -> Result<FreeSeries> {
    let weight = match kind {
        GeneratorKind::V(w) | GeneratorKind::L(w) => w.weight(),
        GeneratorKind::S(i) | GeneratorKind::R(i) => *i as usize,
    };
    if weight > order {
        return Err(Error::Precondition(format!(
            "generator of weight {weight} does not fit order {order}"
        )));
    }
    match kind {
        GeneratorKind::V(w) => {
            if w.len() < 2 {
                return Err(Error::Precondition("v_w needs at least two letters".into()));
            }
            let gamma = gamma_of_bracket(w)?;
            let x = FreeSeries::letter(order, weight as u32).scale(&gamma);
            Ok(&expand_bracket_at(w, order)? - &x)
        }
        GeneratorKind::S(i) => {
            if *i < 3 {
                return Err(Error::Precondition("s_i needs i >= 3".into()));
            }
            let br = FreeSeries::letter(order, i - 1).commutator(&FreeSeries::letter(order, 1));
            Ok(&FreeSeries::letter(order, *i) - &br.scale(&Scalar::ratio(1, *i as i64 - 2)))
        }
        GeneratorKind::R(n) => r_generator(*n, order),
        GeneratorKind::L(w) => {
            if w.len() < 2 || w.letters().iter().any(|&i| i > 2) || weight < 5 {
                return Err(Error::Precondition(
                    "l_w needs two or more letters from {1, 2} and weight >= 5".into(),
                ));
            }
            let gamma = gamma_of_bracket(w)?;
            let r = r_generator(weight as u32, order)?.scale(&gamma);
            Ok(&expand_bracket_at(w, order)? - &r)
        }
    }
}

/// `s(a, b) = Π(log(e^a e^b))`.
pub fn s_ab(a: &DiagonalLieVector, b: &DiagonalLieVector) -> Result<DiagonalLieVector> {
    if a.order != b.order {
        return Err(Error::OrderMismatch(a.order, b.order));
    }
    projection_pi(&bch(&a.to_lie(), &b.to_lie())?)
}

/// `e^a · e^b · e^{−s(a,b)}`, an element with `Ψ = I`.
pub fn pl_center_element(a: &DiagonalLieVector, b: &DiagonalLieVector) -> Result<FreeSeries> {
    let s = s_ab(a, b)?;
    let ea = a.to_lie().exp();
    let eb = b.to_lie().exp();
    let es = s.to_lie().neg().exp();
    Ok(&(&ea * &eb) * &es)
}

/// `Ψ(h) = 0` to the order of `h`.
pub fn lie_center_test(h: &LieSeries) -> bool {
    psi(h.body()).is_zero()
}

/// `exp(T Σ s_n X_n)` with `s = Φ⁻¹(f)`: a group element with return map `f`.
pub fn section_pl(f: &ReturnSeries, t: &BigRational) -> Result<FreeSeries> {
    let s = phi_inverse(f, t)?;
    let tt = Scalar::from_rational(t.clone());
    let h = FreeSeries::linear(
        f.order(),
        s.iter().enumerate().map(|(k, c)| (k as u32 + 1, c * &tt)),
    );
    h.exp()
}

/// `exp(T Σ s_n r_n)` with `s = Φ⁻¹(f)`: a two-letter group element with return map `f`.
pub fn section_abel(f: &ReturnSeries, t: &BigRational) -> Result<FreeSeries> {
    let s = phi_inverse(f, t)?;
    let tt = Scalar::from_rational(t.clone());
    let mut h = FreeSeries::zero(f.order());
    for (k, c) in s.iter().enumerate() {
        if !c.is_zero() {
            h = &h + &r_generator(k as u32 + 1, f.order())?.scale(&(c * &tt));
        }
    }
    h.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::expand_bracket;
    use crate::operator::DLPoly;
    use crate::return_map::{return_map_p, return_map_unchecked};

    fn w(v: &[u32]) -> Word {
        Word::new(v.to_vec())
    }

    #[test]
    fn pi_examples() {
        let h = LieSeries::linear(5, [(5, Scalar::one())]);
        let p = projection_pi(&h).unwrap();
        assert_eq!(p.entries()[4], Scalar::one());
        let br = LieSeries::try_new(expand_bracket(&w(&[1, 2])).unwrap()).unwrap();
        assert_eq!(projection_pi(&br).unwrap().entries()[2], Scalar::from_int(-1));
        let v = center_generator(&GeneratorKind::V(w(&[1, 4])), 5).unwrap();
        assert!(projection_pi(&LieSeries::try_new(v).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn r_generators() {
        for n in 1..=7u32 {
            let r = r_generator(n, 7).unwrap();
            let image = psi(&r);
            assert_eq!(image.slice(n as usize), &DLPoly::dl(n - 1), "n = {n}");
        }
        let x3 = pi2_project(&FreeSeries::letter(4, 3));
        assert_eq!(
            x3,
            FreeSeries::letter(4, 2).commutator(&FreeSeries::letter(4, 1))
        );
        let x4 = pi2_project(&FreeSeries::letter(4, 4));
        assert_eq!(x4, expand_bracket(&w(&[1, 1, 2])).unwrap().scale(&Scalar::ratio(1, 2)));
    }

    #[test]
    fn pi2_fixes_two_letter_series() {
        let f = FreeSeries::linear(5, [(1, Scalar::ratio(1, 2)), (2, Scalar::from_int(3))])
            .exp()
            .unwrap();
        assert_eq!(pi2_project(&f), f);
    }

    #[test]
    fn decompose_x3() {
        let h = LieSeries::linear(3, [(3, Scalar::one())]);
        let (n_part, abel) = lie_decompose(&h);
        let s3 = center_generator(&GeneratorKind::S(3), 3).unwrap();
        assert_eq!(n_part.body(), &s3);
        assert_eq!(
            abel.body(),
            &FreeSeries::letter(3, 2).commutator(&FreeSeries::letter(3, 1))
        );
        assert!(lie_center_test(&n_part));
        assert!(pi2_project(n_part.body()).is_zero());
    }

    #[test]
    fn factorize_exp_x3() {
        let g = FreeSeries::letter(5, 3).exp().unwrap();
        let (c, b) = group_factorize(&g).unwrap();
        let s3 = center_generator(&GeneratorKind::S(3), 5).unwrap();
        let br = FreeSeries::letter(5, 2).commutator(&FreeSeries::letter(5, 1));
        assert_eq!(c, s3.exp().unwrap());
        assert_eq!(b, br.exp().unwrap());
        assert_eq!(&c * &b, g);
    }

    #[test]
    fn generator_examples() {
        let v12 = center_generator(&GeneratorKind::V(w(&[1, 2])), 3).unwrap();
        let expected = &expand_bracket(&w(&[1, 2])).unwrap() + &FreeSeries::letter(3, 3);
        assert_eq!(v12, expected);
        assert_eq!(v12, center_generator(&GeneratorKind::S(3), 3).unwrap());
        let v14 = center_generator(&GeneratorKind::V(w(&[1, 4])), 5).unwrap();
        let expected = &expand_bracket(&w(&[1, 4])).unwrap()
            + &FreeSeries::letter(5, 5).scale(&Scalar::from_int(3));
        assert_eq!(v14, expected);
        let l221 = center_generator(&GeneratorKind::L(w(&[2, 2, 1])), 5).unwrap();
        let expected = &expand_bracket(&w(&[2, 2, 1])).unwrap() + &r_generator(5, 5).unwrap();
        assert_eq!(l221, expected);
        assert!(center_generator(&GeneratorKind::L(w(&[1, 2])), 5).is_err());
        assert!(center_generator(&GeneratorKind::S(2), 5).is_err());
        assert!(center_generator(&GeneratorKind::V(w(&[3])), 5).is_err());
    }

    #[test]
    fn s_ab_low_order() {
        let alpha = Scalar::ratio(3, 7);
        let beta = Scalar::ratio(-2, 5);
        let a = DiagonalLieVector::new(3, vec![alpha.clone()]).unwrap();
        let b = DiagonalLieVector::new(3, vec![Scalar::zero(), beta.clone()]).unwrap();
        let s = s_ab(&a, &b).unwrap();
        let third = -&(&(&alpha * &beta) * &Scalar::ratio(1, 2));
        assert_eq!(s.entries(), &[alpha.clone(), beta.clone(), third][..]);
        assert_eq!(s_ab(&a, &DiagonalLieVector::zero(3)).unwrap(), a);
        let g = pl_center_element(&a, &b).unwrap();
        let log = g.log().unwrap();
        let v12 = center_generator(&GeneratorKind::V(w(&[1, 2])), 3).unwrap();
        assert_eq!(log, v12.scale(&(&(&alpha * &beta) * &Scalar::ratio(1, 2))));
        assert!(pl_center_element(&a, &DiagonalLieVector::zero(3)).unwrap() == FreeSeries::one(3));
        assert!(psi(&g).is_one());
        assert!(return_map_p(&g).unwrap().is_identity());
    }

    #[test]
    fn sections_invert_the_return_map() {
        let f = ReturnSeries::new(5, vec![Scalar::one(), Scalar::ratio(-1, 2), Scalar::zero(), Scalar::from_int(2)]).unwrap();
        let t = BigRational::new(2.into(), 3.into());
        let g1 = section_pl(&f, &t).unwrap();
        assert_eq!(return_map_unchecked(&g1), f);
        let g2 = section_abel(&f, &t).unwrap();
        assert_eq!(g2.support_letters(), vec![1, 2]);
        assert_eq!(return_map_unchecked(&g2), f);
    }
}
