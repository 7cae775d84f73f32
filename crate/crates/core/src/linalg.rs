//! Exact linear solves by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Solves the square system `a · x = b` over the rationals.
///
/// Errors with `Internal` if the matrix is singular.
pub fn solve_bareiss(a: &[Vec<BigInt>], b: &[BigInt]) -> Result<Vec<BigRational>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidArgument("system must be square".into()));
    }
    let mut m: Vec<Vec<BigInt>> = a.iter().zip(b).map(|(row, v)| row.iter().cloned().chain([v.clone()]).collect()).collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !m[r][k].is_zero()).ok_or_else(|| Error::Internal("singular system".into()))?;
        m.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= BigRational::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / BigRational::from_integer(m[i][i].clone());
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn solves_small_systems() {
        let a = vec![ints(&[2, 1]), ints(&[1, 3])];
        let x = solve_bareiss(&a, &ints(&[3, 5])).unwrap();
        assert_eq!(x, vec![BigRational::new(4.into(), 5.into()), BigRational::new(7.into(), 5.into())]);
        let a = vec![ints(&[0, 1]), ints(&[1, 0])];
        assert_eq!(solve_bareiss(&a, &ints(&[7, 9])).unwrap(), vec![BigRational::from_integer(9.into()), BigRational::from_integer(7.into())]);
    }

    #[test]
    fn singular_is_reported() {
        let a = vec![ints(&[1, 2]), ints(&[2, 4])];
        assert!(matches!(solve_bareiss(&a, &ints(&[1, 2])), Err(Error::Internal(_))));
    }
}
