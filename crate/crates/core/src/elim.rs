//! Resultants, discriminants, and fraction-free determinants of polynomial
//! matrices.

use crate::arena::VarId;
use crate::num::GaussianRational;
use crate::poly::Polynomial;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ElimError {
    #[error("input has degree zero in the elimination variable")]
    DegreeZero,
    #[error("discriminant of a polynomial with identically vanishing discriminant requested")]
    ZeroDiscriminant,
    #[error("internal error: exact division failed ({0})")]
    Internal(&'static str),
}

/// Determinant of a square matrix of polynomials, by fraction-free Bareiss
/// elimination (all divisions are exact in the polynomial ring).
pub fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n), "square matrix required");
    let arena = m[0][0].arena().clone();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut a: Vec<Vec<Polynomial>> = m.to_vec();
    let mut sign_flip = false;
    let mut prev = Polynomial::one(&arena);
    for k in 0..n - 1 {
        // Pivot: first row with nonzero entry in column k.
        let pivot = (k..n).find(|&r| !a[r][k].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => return Polynomial::zero(&arena),
        };
        if pivot != k {
            a.swap(pivot, k);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss division is exact over an integral domain");
            }
            a[i][k] = Polynomial::zero(&arena);
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign_flip {
        det.neg()
    } else {
        det
    }
}

/// Determinant of a square matrix of scalars.
pub fn determinant_scalar(m: &[Vec<GaussianRational>]) -> GaussianRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = GaussianRational::one();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !a[r][k].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => return GaussianRational::zero(),
        };
        if pivot != k {
            a.swap(pivot, k);
            det = -det;
        }
        det = &det * &a[k][k];
        let inv = a[k][k].inv().unwrap();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] * &inv;
            for j in k..n {
                let s = &a[k][j] * &f;
                a[i][j] = &a[i][j] - &s;
            }
        }
    }
    det
}

/// Sylvester matrix of `p` and `q` with respect to `v`.
///
/// Entries are polynomials in the remaining variables.
pub fn sylvester_matrix(
    p: &Polynomial,
    q: &Polynomial,
    v: VarId,
) -> Result<Vec<Vec<Polynomial>>, ElimError> {
    let dp = p.degree_in(v) as usize;
    let dq = q.degree_in(v) as usize;
    if dp == 0 || dq == 0 {
        return Err(ElimError::DegreeZero);
    }
    let arena = p.arena().clone();
    let pc = p.coeffs_in(v); // pc[k] multiplies v^k
    let qc = q.coeffs_in(v);
    let n = dp + dq;
    let mut m = vec![vec![Polynomial::zero(&arena); n]; n];
    for row in 0..dq {
        for k in 0..=dp {
            // coefficient of v^(dp-k) goes in column row+k
            m[row][row + k] = pc[dp - k].clone();
        }
    }
    for row in 0..dp {
        for k in 0..=dq {
            m[dq + row][row + k] = qc[dq - k].clone();
        }
    }
    Ok(m)
}

/// Resultant of `p` and `q` eliminating `v`: the Sylvester determinant.
///
/// Vanishes (for fixed values of the other variables) iff `p` and `q` share a
/// root in the algebraic closure.
pub fn resultant(p: &Polynomial, q: &Polynomial, v: VarId) -> Result<Polynomial, ElimError> {
    let m = sylvester_matrix(p, q, v)?;
    Ok(determinant(&m))
}

/// Discriminant of `p` with respect to `v`:
/// `(-1)^(J(J-1)/2) * Res_v(p, dp/dv) / lc_v(p)` for `J = deg_v p >= 2`,
/// and `1` for `J = 1` (linear convention). The division is exact.
pub fn discriminant(p: &Polynomial, v: VarId) -> Result<Polynomial, ElimError> {
    let j = p.degree_in(v);
    if j == 0 {
        return Err(ElimError::DegreeZero);
    }
    if j == 1 {
        return Ok(Polynomial::one(p.arena()));
    }
    let dp = p.partial(v);
    let res = resultant(p, &dp, v)?;
    let lead = p.coeffs_in(v).pop().unwrap();
    let q = res
        .exact_div(&lead)
        .ok_or(ElimError::Internal("leading coefficient must divide Res(p, p')"))?;
    if (j as u64 * (j as u64 - 1) / 2) % 2 == 1 {
        Ok(q.neg())
    } else {
        Ok(q)
    }
}
