//! Exact coefficient arithmetic.
//!
//! Every coefficient in the engine lives in `ℚ(i)[λ, a₁, ā₁, …][u, u⁻¹]`,
//! with a conjugation that fixes λ, swaps `a_k ↔ ā_k`, inverts the formal
//! unit `u` and sends `i ↦ -i`.

mod gaussian;
mod rank;
mod scalar;

use std::fmt;
use std::ops::Add;

use num::{BigInt, BigRational, One, Signed, Zero};

pub use gaussian::GaussianRational;
pub(crate) use gaussian::ratio_to_f64;
pub use rank::rank_over_function_field;
pub use scalar::{Monomial, Scalar};

/// An exponent `r + s·λ` with rational `r` and `s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineExponent {
    pub r: BigRational,
    pub s: BigRational,
}

impl AffineExponent {
    pub fn new(r: BigRational, s: BigRational) -> Self {
        Self { r, s }
    }

    /// `num/den + (lnum/lden)·λ`.
    pub fn from_ratios(num: i64, den: i64, lnum: i64, lden: i64) -> Self {
        Self::new(
            BigRational::new(num.into(), den.into()),
            BigRational::new(lnum.into(), lden.into()),
        )
    }

    pub fn constant(r: BigRational) -> Self {
        Self::new(r, BigRational::zero())
    }

    pub fn zero() -> Self {
        Self::constant(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }

    pub fn shift(&self, k: i64) -> Self {
        Self::new(&self.r + BigRational::from_integer(k.into()), self.s.clone())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(&self.r * c, &self.s * c)
    }

    /// `Some(m)` when the exponent is the constant nonnegative integer `m`.
    pub fn as_nonneg_integer(&self) -> Option<u32> {
        if !self.s.is_zero() || !self.r.is_integer() || self.r.is_negative() {
            return None;
        }
        u32::try_from(self.r.to_integer()).ok()
    }

    /// Replaces λ by a rational value.
    pub fn specialize(&self, lambda: &BigRational) -> Self {
        Self::constant(&self.r + &self.s * lambda)
    }

    pub fn to_scalar(&self) -> Scalar {
        &Scalar::rational(self.r.clone()) + &(&Scalar::rational(self.s.clone()) * &Scalar::lambda())
    }
}

impl Add for AffineExponent {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.r + rhs.r, self.s + rhs.s)
    }
}

impl<'a> Add<&'a AffineExponent> for &'a AffineExponent {
    type Output = AffineExponent;
    fn add(self, rhs: Self) -> AffineExponent {
        AffineExponent::new(&self.r + &rhs.r, &self.s + &rhs.s)
    }
}

impl fmt::Display for AffineExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.r.is_zero(), self.s.is_zero()) {
            (_, true) => write!(f, "{}", self.r),
            (true, false) => write!(f, "{}*lam", self.s),
            (false, false) => {
                if self.s.is_negative() {
                    write!(f, "{}-{}*lam", self.r, -&self.s)
                } else {
                    write!(f, "{}+{}*lam", self.r, self.s)
                }
            }
        }
    }
}

/// `σ(σ-1)…(σ-k+1)/k!` as a polynomial in λ.
pub fn generalized_binomial(sigma: &AffineExponent, k: u32) -> Scalar {
    let mut acc = Scalar::one();
    let mut factorial = BigInt::one();
    for j in 0..k {
        acc = &acc * &sigma.shift(-(j as i64)).to_scalar();
        factorial *= BigInt::from(j + 1);
    }
    acc.scale(&GaussianRational::real(BigRational::new(BigInt::one(), factorial)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma() -> AffineExponent {
        AffineExponent::from_ratios(1, 1, -1, 2)
    }

    #[test]
    fn binomial_small_orders() {
        assert_eq!(generalized_binomial(&sigma(), 0), Scalar::one());
        assert_eq!(generalized_binomial(&sigma(), 1), sigma().to_scalar());
        // λ²/8 − λ/4, expanded by hand
        let lam = Scalar::lambda();
        let expected = &(&(&lam * &lam) * &Scalar::ratio(1, 8)) - &(&lam * &Scalar::ratio(1, 4));
        assert_eq!(generalized_binomial(&sigma(), 2), expected);
    }

    #[test]
    fn binomial_recurrence() {
        let s = sigma();
        for k in 1..6u32 {
            let prev = generalized_binomial(&s, k - 1);
            let step = &s.shift(-(k as i64 - 1)).to_scalar() * &Scalar::ratio(1, k as i64);
            assert_eq!(generalized_binomial(&s, k), &prev * &step);
        }
    }

    #[test]
    fn binomial_matches_classical_at_integers() {
        fn classical(m: u64, k: u64) -> u64 {
            if k > m {
                return 0;
            }
            (0..k).fold(1, |acc, j| acc * (m - j) / (j + 1))
        }
        for m in 0..=8i64 {
            let s = AffineExponent::from_ratios(m, 1, 0, 1);
            for k in 0..=8u32 {
                assert_eq!(
                    generalized_binomial(&s, k),
                    Scalar::int(classical(m as u64, k as u64) as i64),
                    "m={m} k={k}"
                );
            }
        }
    }

    #[test]
    fn affine_exponent_integer_detection() {
        assert_eq!(AffineExponent::from_ratios(3, 1, 0, 1).as_nonneg_integer(), Some(3));
        assert_eq!(AffineExponent::from_ratios(-1, 1, 0, 1).as_nonneg_integer(), None);
        assert_eq!(AffineExponent::from_ratios(1, 2, 0, 1).as_nonneg_integer(), None);
        assert_eq!(sigma().as_nonneg_integer(), None);
        assert_eq!(sigma().to_string(), "1-1/2*lam");
    }
}
