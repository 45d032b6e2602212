use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Zero};

use super::GaussianRational;

/// Exponent data of one monomial in λ, the formal unit `u` and the formal
/// parameters `a_k`, `ā_k`.
///
/// `params[2(k-1)]` is the exponent of `a_k`, `params[2(k-1)+1]` that of
/// `ā_k`; trailing zeros are trimmed so derived `Ord` is lexicographic on
/// `(λ, u, a₁, ā₁, a₂, …)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub lambda: u32,
    pub unit: i32,
    params: Vec<u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn params(&self) -> &[u32] {
        &self.params
    }

    pub fn param_exp(&self, slot: usize) -> u32 {
        self.params.get(slot).copied().unwrap_or(0)
    }

    fn set_param(&mut self, slot: usize, exp: u32) {
        if self.params.len() <= slot {
            self.params.resize(slot + 1, 0);
        }
        self.params[slot] = exp;
        self.trim();
    }

    fn trim(&mut self) {
        while self.params.last() == Some(&0) {
            self.params.pop();
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let len = self.params.len().max(other.params.len());
        let mut params = vec![0; len];
        for (slot, p) in params.iter_mut().enumerate() {
            *p = self.param_exp(slot) + other.param_exp(slot);
        }
        let mut m = Self {
            lambda: self.lambda + other.lambda,
            unit: self.unit + other.unit,
            params,
        };
        m.trim();
        m
    }

    fn conj(&self) -> Self {
        let len = self.params.len().div_ceil(2) * 2;
        let mut params = vec![0; len];
        for (slot, p) in params.iter_mut().enumerate() {
            *p = self.param_exp(slot ^ 1);
        }
        let mut m = Self {
            lambda: self.lambda,
            unit: -self.unit,
            params,
        };
        m.trim();
        m
    }

    pub fn is_one(&self) -> bool {
        self.lambda == 0 && self.unit == 0 && self.params.is_empty()
    }

    /// True if only λ may occur.
    pub fn is_lambda_only(&self) -> bool {
        self.unit == 0 && self.params.is_empty()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.lambda > 0 {
            parts.push(power("lam", self.lambda as i64));
        }
        if self.unit != 0 {
            parts.push(power("u", self.unit as i64));
        }
        for (slot, &e) in self.params.iter().enumerate() {
            if e > 0 {
                let k = slot / 2 + 1;
                let name = if slot % 2 == 0 { format!("a{k}") } else { format!("ab{k}") };
                parts.push(power(&name, e as i64));
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

fn power(name: &str, e: i64) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

/// Element of ℚ(i)[λ, a₁, ā₁, …][u, u⁻¹] in canonical sparse form.
///
/// Zero coefficients are never stored, and `ū` is represented as `u⁻¹`, so
/// `u·ū = 1` holds structurally.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(GaussianRational::from_ints(n, 0))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::constant(GaussianRational::ratio(num, den))
    }

    pub fn rational(r: BigRational) -> Self {
        Self::constant(GaussianRational::real(r))
    }

    pub fn gauss(re: i64, im: i64) -> Self {
        Self::constant(GaussianRational::from_ints(re, im))
    }

    pub fn i() -> Self {
        Self::constant(GaussianRational::i())
    }

    pub fn lambda() -> Self {
        Self::term(
            GaussianRational::one(),
            Monomial {
                lambda: 1,
                ..Monomial::one()
            },
        )
    }

    /// `u^m`; negative powers stand for powers of `ū`.
    pub fn unit_power(m: i32) -> Self {
        Self::term(
            GaussianRational::one(),
            Monomial {
                unit: m,
                ..Monomial::one()
            },
        )
    }

    /// The formal parameter `a_k`, `k ≥ 1`.
    pub fn param(k: usize) -> Self {
        assert!(k >= 1, "parameters are numbered from 1");
        let mut m = Monomial::one();
        m.set_param(2 * (k - 1), 1);
        Self::term(GaussianRational::one(), m)
    }

    /// The formal parameter `ā_k`.
    pub fn param_conj(k: usize) -> Self {
        Self::param(k).conj()
    }

    pub fn term(c: GaussianRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if no symbol occurs.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// True if every monomial involves λ at most.
    pub fn is_lambda_polynomial(&self) -> bool {
        self.terms.keys().all(Monomial::is_lambda_only)
    }

    pub fn involves_lambda(&self) -> bool {
        self.terms.keys().any(|m| m.lambda > 0)
    }

    pub fn involves_params(&self) -> bool {
        self.terms.keys().any(|m| !m.params.is_empty())
    }

    /// Coefficients in λ (index = power), if the value is a polynomial in λ only.
    pub fn lambda_coefficients(&self) -> Option<Vec<GaussianRational>> {
        if !self.is_lambda_polynomial() {
            return None;
        }
        let deg = self.terms.keys().map(|m| m.lambda).max().unwrap_or(0) as usize;
        let mut out = vec![GaussianRational::zero(); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            out[m.lambda as usize] = c.clone();
        }
        Some(out)
    }

    /// Replaces λ by a rational value.
    pub fn substitute_lambda(&self, value: &BigRational) -> Self {
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            rest.lambda = 0;
            let scale = GaussianRational::real(num::pow(value.clone(), m.lambda as usize));
            out.add_term(rest, &scale * c);
        }
        out
    }

    /// Involution fixing λ, with `i ↦ -i`, `u ↦ u⁻¹`, `a_k ↔ ā_k`.
    pub fn conj(&self) -> Self {
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            out.add_term(m.conj(), c.conj());
        }
        out
    }

    /// `(x + x̄)/2`.
    pub fn real_part(&self) -> Self {
        &(self + &self.conj()) * &Scalar::ratio(1, 2)
    }

    /// `(x - x̄)/(2i)`.
    pub fn imag_part(&self) -> Self {
        let half_over_i = Scalar::constant(GaussianRational::new(
            BigRational::zero(),
            BigRational::new(BigInt::from(-1), BigInt::from(2)),
        ));
        &(self - &self.conj()) * &half_over_i
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Scalar::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Scalar) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl From<GaussianRational> for Scalar {
    fn from(c: GaussianRational) -> Self {
        Scalar::constant(c)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self.add_assign_ref(&rhs);
        self
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else if (-c).is_one() {
                write!(f, "-{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}
