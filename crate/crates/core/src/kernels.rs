//! Permanent and determinant of square complex matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ONE, ZERO};

/// Largest order accepted by [`permanent`]; Ryser's sum has `2^n` terms.
pub const PERMANENT_MAX_ORDER: usize = 20;

fn require_square(a: &ComplexMatrix) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::InvalidDimension(format!(
            "expected a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(a.rows())
}

/// Permanent by Ryser's inclusion–exclusion formula, visiting column subsets
/// in Gray-code order so each step updates the row sums with one column.
/// `O(2^n · n)`.
pub fn permanent(a: &ComplexMatrix) -> Result<Complex64> {
    let n = require_square(a)?;
    if n > PERMANENT_MAX_ORDER {
        return Err(Error::SizeLimit {
            what: "permanent order",
            value: n,
            limit: PERMANENT_MAX_ORDER,
        });
    }
    if n == 0 {
        return Ok(ONE);
    }
    let mut row_sums = vec![ZERO; n];
    let mut in_subset = vec![false; n];
    let mut total = ZERO;
    let mut gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let bit = k.trailing_zeros() as usize;
        gray ^= 1 << bit;
        let sign = if in_subset[bit] { -1.0 } else { 1.0 };
        in_subset[bit] = !in_subset[bit];
        for (r, s) in row_sums.iter_mut().enumerate() {
            *s += a.get(r, bit) * sign;
        }
        let prod = row_sums.iter().fold(ONE, |acc, &s| acc * s);
        // (−1)^{n − |S|}
        if (n - gray.count_ones() as usize) % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(a: &ComplexMatrix) -> Result<Complex64> {
    let n = require_square(a)?;
    let mut m: Vec<Complex64> = a.as_slice().to_vec();
    let mut det = ONE;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i * n + col].norm().total_cmp(&m[j * n + col].norm()))
            .unwrap();
        if m[pivot * n + col] == ZERO {
            return Ok(ZERO);
        }
        if pivot != col {
            for c in 0..n {
                m.swap(pivot * n + c, col * n + c);
            }
            det = -det;
        }
        let p = m[col * n + col];
        det *= p;
        for r in col + 1..n {
            let f = m[r * n + col] / p;
            if f == ZERO {
                continue;
            }
            for c in col..n {
                let v = m[col * n + c];
                m[r * n + c] -= f * v;
            }
        }
    }
    Ok(det)
}
