//! Fraction-free elimination over the integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::network::Rational;

/// Bareiss elimination of the leading `n x n` block of `m` (the remaining
/// columns are carried along). On success `m` is upper triangular in that
/// block and the return value is the sign of the row permutation used.
/// Returns `None` if the block is singular.
fn eliminate(m: &mut [Vec<BigInt>]) -> Option<i8> {
    let n = m.len();
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let pivot = (k + 1..n).find(|&i| !m[i][k].is_zero())?;
            m.swap(k, pivot);
            sign = -sign;
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            let factor = row[k].clone();
            for j in k + 1..row.len() {
                let v = &row[j] * &pivot_row[k] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    Some(sign)
}

/// Determinant of a square integer matrix.
pub fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    match eliminate(&mut m) {
        Some(sign) => {
            let d = m[n - 1][n - 1].clone();
            if sign < 0 {
                -d
            } else {
                d
            }
        }
        None => BigInt::zero(),
    }
}

/// Solves `a x = b` exactly for a nonsingular integer matrix `a`.
pub fn solve(a: Vec<Vec<BigInt>>, b: Vec<BigInt>) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigInt>> = a
        .into_iter()
        .zip(b)
        .map(|(mut row, rhs)| {
            row.push(rhs);
            row
        })
        .collect();
    eliminate(&mut m)?;
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= Rational::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rational::from_integer(m[i][i].clone());
    }
    Some(x)
}
