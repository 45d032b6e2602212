use num::{One, Zero};

use super::{GaussianRational, Scalar};
use crate::error::{Error, Result};

/// Dense univariate polynomial in λ, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
struct LambdaPoly(Vec<GaussianRational>);

impl LambdaPoly {
    fn trimmed(mut c: Vec<GaussianRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Self(c)
    }

    fn one() -> Self {
        Self(vec![GaussianRational::one()])
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self(Vec::new());
        }
        let mut out = vec![GaussianRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::trimmed(out)
    }

    fn sub(&self, other: &Self) -> Self {
        let len = self.0.len().max(other.0.len());
        let zero = GaussianRational::zero();
        let out = (0..len)
            .map(|i| self.0.get(i).unwrap_or(&zero) - other.0.get(i).unwrap_or(&zero))
            .collect();
        Self::trimmed(out)
    }

    /// Exact quotient, or `None` when the division leaves a remainder.
    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let lead_inv = divisor.0.last()?.inv()?;
        let mut rem = self.0.clone();
        let dlen = divisor.0.len();
        if rem.len() < dlen {
            return rem.iter().all(Zero::is_zero).then(|| Self(Vec::new()));
        }
        let mut quot = vec![GaussianRational::zero(); rem.len() - dlen + 1];
        for shift in (0..quot.len()).rev() {
            let c = &rem[shift + dlen - 1] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.0.iter().enumerate() {
                rem[shift + j] = &rem[shift + j] - &(&c * d);
            }
            quot[shift] = c;
        }
        rem.iter().all(Zero::is_zero).then(|| Self::trimmed(quot))
    }
}

/// Rank of a matrix of λ-polynomials over the field of rational functions in λ.
///
/// Bareiss fraction-free elimination; the pivot is the first nonzero entry of
/// the current column. Entries involving `u` or any `a_k` are rejected.
pub fn rank_over_function_field(rows: &[Vec<Scalar>]) -> Result<usize> {
    let mut m: Vec<Vec<LambdaPoly>> = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (c, x) in row.iter().enumerate() {
            let coeffs = x.lambda_coefficients().ok_or_else(|| Error::NotLambdaPolynomial {
                row: r,
                col: c,
                value: x.to_string(),
            })?;
            out.push(LambdaPoly::trimmed(coeffs));
        }
        m.push(out);
    }
    let nrows = m.len();
    let ncols = m.iter().map(Vec::len).max().unwrap_or(0);
    for row in &mut m {
        row.resize(ncols, LambdaPoly(Vec::new()));
    }

    let mut prev = LambdaPoly::one();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for i in rank + 1..nrows {
            let factor = m[i][col].clone();
            for k in col + 1..ncols {
                let num = pivot.mul(&m[i][k]).sub(&factor.mul(&m[rank][k]));
                m[i][k] = num.div_exact(&prev).ok_or(Error::InexactDivision)?;
            }
            m[i][col] = LambdaPoly(Vec::new());
        }
        prev = pivot;
        rank += 1;
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam() -> Scalar {
        Scalar::lambda()
    }

    #[test]
    fn identity_has_full_rank() {
        let id: Vec<Vec<Scalar>> = (0..3)
            .map(|i| (0..3).map(|j| Scalar::int((i == j) as i64)).collect())
            .collect();
        assert_eq!(rank_over_function_field(&id).unwrap(), 3);
    }

    #[test]
    fn singular_polynomial_matrix() {
        let m = vec![vec![lam(), &lam() * &lam()], vec![Scalar::one(), lam()]];
        assert_eq!(rank_over_function_field(&m).unwrap(), 1);
    }

    #[test]
    fn generically_regular_matrix() {
        let m = vec![
            vec![&Scalar::one() - &(&lam() * &Scalar::ratio(1, 2)), Scalar::zero()],
            vec![Scalar::zero(), Scalar::one()],
        ];
        assert_eq!(rank_over_function_field(&m).unwrap(), 2);
    }

    #[test]
    fn rejects_group_parameters() {
        let m = vec![vec![Scalar::param(1)]];
        assert!(matches!(
            rank_over_function_field(&m),
            Err(Error::NotLambdaPolynomial { .. })
        ));
        let m = vec![vec![Scalar::unit_power(1)]];
        assert!(rank_over_function_field(&m).is_err());
    }

    #[test]
    fn empty_and_zero_matrices() {
        assert_eq!(rank_over_function_field(&[]).unwrap(), 0);
        let z = vec![vec![Scalar::zero(); 3]; 2];
        assert_eq!(rank_over_function_field(&z).unwrap(), 0);
    }
}
