//! Exact rank of sets of series.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::Scalar;
use crate::series::FreeSeries;
use crate::word::Word;

fn lcm_of_denominators(row: &[Scalar]) -> BigInt {
    row.iter().fold(BigInt::one(), |acc, x| {
        acc.lcm(x.re().denom()).lcm(x.im().denom())
    })
}

/// Rank of a matrix over the Gaussian rationals by fraction-free (Bareiss)
/// elimination after clearing denominators row by row.
pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|r| {
            let l = Scalar::from_rational(BigRational::from_integer(lcm_of_denominators(r)));
            r.iter().map(|x| x * &l).collect()
        })
        .collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = Scalar::one();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for j in col + 1..ncols {
                let num = &(&m[r][col] * &m[i][j]) - &(&m[i][col] * &m[r][j]);
                m[i][j] = &num / &prev;
            }
            m[i][col] = Scalar::zero();
        }
        prev = m[r][col].clone();
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Rank of the coefficient vectors of the given series.
pub fn series_rank(items: &[FreeSeries]) -> usize {
    let mut cols: BTreeMap<Word, usize> = BTreeMap::new();
    for f in items {
        for (w, _) in f.terms() {
            let next = cols.len();
            cols.entry(w.clone()).or_insert(next);
        }
    }
    let rows: Vec<Vec<Scalar>> = items
        .iter()
        .map(|f| {
            let mut row = vec![Scalar::zero(); cols.len()];
            for (w, c) in f.terms() {
                row[cols[w]] = c.clone();
            }
            row
        })
        .collect();
    rank(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[&str]) -> Vec<Scalar> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(&[row(&["1", "2"]), row(&["2", "4"])]), 1);
        assert_eq!(rank(&[row(&["1/2", "1/3"]), row(&["1", "0"])]), 2);
        assert_eq!(rank(&[row(&["1+1*i", "2"]), row(&["2", "2-2*i"])]), 1);
        assert_eq!(rank(&[row(&["0", "0"])]), 0);
        assert_eq!(
            rank(&[row(&["1", "2", "3"]), row(&["4", "5", "6"]), row(&["7", "8", "9"])]),
            2
        );
        assert_eq!(rank(&[]), 0);
    }
}
