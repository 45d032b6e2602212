//! Polynomial-coefficient differential operators in `z₁, z̄₁, …, z_n, z̄_n`.
//!
//! Symbol `2(j-1)` is `z_j` and symbol `2(j-1)+1` is `z̄_j`; flipping the low
//! bit conjugates a symbol.

use std::collections::BTreeMap;
use std::fmt;

use crate::clifford::{group_inverse, REpsMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, ScalarMatrix};
use crate::scalars::Scalar;

/// Symbol index of `z_j` (`j ≥ 1`).
pub fn z(j: usize) -> usize {
    2 * (j - 1)
}

/// Symbol index of `z̄_j`.
pub fn zbar(j: usize) -> usize {
    2 * (j - 1) + 1
}

fn symbol_name(s: usize) -> String {
    let j = s / 2 + 1;
    if s % 2 == 0 {
        format!("z{j}")
    } else {
        format!("zb{j}")
    }
}

fn falling(c: u32, k: u32) -> i64 {
    (0..k).map(|i| (c - i) as i64).product()
}

fn binom(n: u32, k: u32) -> i64 {
    falling(n, k) / falling(k, k)
}

/// Sparse polynomial in the `2n` symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    n: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; 2 * n], c);
        p
    }

    pub fn var(n: usize, s: usize) -> Self {
        let mut e = vec![0; 2 * n];
        e[s] = 1;
        let mut p = Self::zero(n);
        p.add_term(e, Scalar::one());
        p
    }

    pub fn monomial(n: usize, exps: Vec<u32>, c: Scalar) -> Self {
        assert_eq!(exps.len(), 2 * n);
        let mut p = Self::zero(n);
        p.add_term(exps, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_default();
        entry.add_assign_ref(&c);
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.n, Scalar::one()), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.n);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    /// `∂/∂(symbol s)` applied `k` times.
    pub fn derivative(&self, s: usize, k: u32) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            if e[s] < k {
                continue;
            }
            let mut e2 = e.clone();
            e2[s] -= k;
            out.add_term(e2, c * &Scalar::int(falling(e[s], k)));
        }
        out
    }

    /// Substitutes each symbol `t` by the linear form `Σ_r rows[t][r]·x_r`.
    pub fn substitute(&self, rows: &ScalarMatrix) -> Self {
        let images: Vec<Poly> = rows.iter().map(|row| linear_form(self.n, row)).collect();
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            let mut acc = Self::constant(self.n, c.clone());
            for (t, &k) in e.iter().enumerate() {
                if k > 0 {
                    acc = acc.mul(&images[t].pow(k));
                }
            }
            out = out.add(&acc);
        }
        out
    }
}

fn linear_form(n: usize, row: &[Scalar]) -> Poly {
    let mut p = Poly::zero(n);
    for (r, c) in row.iter().enumerate() {
        if !c.is_zero() {
            p = p.add(&Poly::var(n, r).scale(c));
        }
    }
    p
}

/// Key of a normal-ordered term `x^mono ∂^deriv`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeylKey {
    pub mono: Vec<u32>,
    pub deriv: Vec<u32>,
}

/// Finite sum of normal-ordered terms, multiplications left of derivatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylOp {
    n: usize,
    terms: BTreeMap<WeylKey, Scalar>,
}

impl WeylOp {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::term(n, Scalar::one(), vec![0; 2 * n], vec![0; 2 * n])
    }

    pub fn term(n: usize, c: Scalar, mono: Vec<u32>, deriv: Vec<u32>) -> Self {
        assert!(mono.len() == 2 * n && deriv.len() == 2 * n, "exponent length must be 2n");
        let mut op = Self::zero(n);
        op.add_term(WeylKey { mono, deriv }, c);
        op
    }

    /// Multiplication by symbol `s`.
    pub fn mul_by(n: usize, s: usize) -> Self {
        let mut mono = vec![0; 2 * n];
        mono[s] = 1;
        Self::term(n, Scalar::one(), mono, vec![0; 2 * n])
    }

    /// `∂/∂(symbol s)`.
    pub fn partial(n: usize, s: usize) -> Self {
        let mut deriv = vec![0; 2 * n];
        deriv[s] = 1;
        Self::term(n, Scalar::one(), vec![0; 2 * n], deriv)
    }

    /// `c · x_mul · ∂_d`, the building block of vector fields.
    pub fn vector_field_term(n: usize, c: Scalar, mul: usize, d: usize) -> Self {
        let mut mono = vec![0; 2 * n];
        mono[mul] = 1;
        let mut deriv = vec![0; 2 * n];
        deriv[d] = 1;
        Self::term(n, c, mono, deriv)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylKey, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: WeylKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_default();
        entry.add_assign_ref(&c);
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.n);
        for (k, x) in &self.terms {
            out.add_term(k.clone(), x * c);
        }
        out
    }

    pub fn pow(&self, l: u32) -> Self {
        (0..l).fold(Self::identity(self.n), |acc, _| compose(&acc, self))
    }

    /// Applies the operator to a polynomial.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut out = Poly::zero(self.n);
        for (key, c) in &self.terms {
            let mut g = f.clone();
            for (s, &k) in key.deriv.iter().enumerate() {
                if k > 0 {
                    g = g.derivative(s, k);
                }
            }
            let mult = Poly::monomial(self.n, key.mono.clone(), c.clone());
            out = out.add(&mult.mul(&g));
        }
        out
    }
}

/// Normal-ordered product `p ∘ q`.
pub fn compose(p: &WeylOp, q: &WeylOp) -> WeylOp {
    assert_eq!(p.n, q.n, "operators act in different dimensions");
    let mut out = WeylOp::zero(p.n);
    for (k1, c1) in &p.terms {
        for (k2, c2) in &q.terms {
            // ∂^b x^c = Σ_k Π C(b,k)·c!/(c-k)! x^{c-k} ∂^{b-k}
            let mut partial: Vec<(Scalar, Vec<u32>, Vec<u32>)> =
                vec![(c1 * c2, k1.mono.clone(), k2.deriv.clone())];
            for s in 0..2 * p.n {
                let (b, c) = (k1.deriv[s], k2.mono[s]);
                let mut next = Vec::new();
                for (coef, mono, deriv) in &partial {
                    for k in 0..=b.min(c) {
                        let weight = binom(b, k) * falling(c, k);
                        let mut mono = mono.clone();
                        mono[s] += c - k;
                        let mut deriv = deriv.clone();
                        deriv[s] += b - k;
                        next.push((coef * &Scalar::int(weight), mono, deriv));
                    }
                }
                partial = next;
            }
            for (coef, mono, deriv) in partial {
                out.add_term(WeylKey { mono, deriv }, coef);
            }
        }
    }
    out
}

impl fmt::Display for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(key, c)| {
                let mut factors = vec![format!("[{c}]")];
                for (s, &e) in key.mono.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(symbol_name(s)),
                        _ => factors.push(format!("{}^{e}", symbol_name(s))),
                    }
                }
                for (s, &e) in key.deriv.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(format!("d/d{}", symbol_name(s))),
                        _ => factors.push(format!("(d/d{})^{e}", symbol_name(s))),
                    }
                }
                factors.join(" ")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A real-linear change of coordinates written in `(z, z̄)`.
///
/// Row `t` of `forward` expresses the image of symbol `t` as a linear
/// combination of symbols; `inverse` is the inverse map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    pub n: usize,
    pub forward: ScalarMatrix,
    pub inverse: ScalarMatrix,
    pub real: bool,
    pub unimodular: bool,
}

impl Substitution {
    pub fn identity(n: usize) -> Self {
        Self::new(n, linalg::identity(2 * n), linalg::identity(2 * n))
    }

    fn new(n: usize, forward: ScalarMatrix, inverse: ScalarMatrix) -> Self {
        let real = is_real_form(&forward);
        let unimodular = linalg::determinant(&forward).is_one();
        Self {
            n,
            forward,
            inverse,
            real,
            unimodular,
        }
    }

    /// The inverse substitution.
    pub fn inverted(&self) -> Self {
        Self::new(self.n, self.inverse.clone(), self.forward.clone())
    }

    /// `self ∘ other` as maps of coordinates.
    pub fn then_after(&self, other: &Self) -> Self {
        Self::new(
            self.n,
            linalg::mat_mul(&self.forward, &other.forward),
            linalg::mat_mul(&other.inverse, &self.inverse),
        )
    }

    /// The linear form giving the image of symbol `t`.
    pub fn image(&self, t: usize) -> &[Scalar] {
        &self.forward[t]
    }
}

fn is_real_form(m: &ScalarMatrix) -> bool {
    let dim = m.len();
    (0..dim).all(|t| (0..dim).all(|r| m[t ^ 1][r ^ 1] == m[t][r].conj()))
}

/// Coordinate matrix of `z ↦ g·z` in the `(z, z̄)` symbols.
pub fn coordinate_matrix(g: &REpsMatrix) -> ScalarMatrix {
    let n = g.dim();
    let mut m = vec![vec![Scalar::zero(); 2 * n]; 2 * n];
    for i in 1..=n {
        for j in 1..=n {
            let x = g.get(i - 1, j - 1);
            m[z(i)][z(j)] = x.a.clone();
            m[z(i)][zbar(j)] = x.b.clone();
            m[zbar(i)][zbar(j)] = x.a.conj();
            m[zbar(i)][z(j)] = x.b.conj();
        }
    }
    m
}

/// The substitution `z ↦ g·z`, or `z ↦ g⁻¹·z` in inverse mode.
pub fn substitution_from_group(g: &REpsMatrix, inverse_mode: bool) -> Result<Substitution> {
    let inv = group_inverse(g)?;
    let (fwd, back) = if inverse_mode { (&inv, g) } else { (g, &inv) };
    Ok(Substitution::new(g.dim(), coordinate_matrix(fwd), coordinate_matrix(back)))
}

/// `(s·D)(f) = s·(D(s⁻¹·f))` where `(s·f)(z) = f(s⁻¹ z)`.
///
/// Coefficients are composed with the inverse map; each `∂_t` becomes
/// `Σ_m (∂ image_m / ∂x_t) ∂_m` using the forward map.
pub fn conjugate_op(d: &WeylOp, s: &Substitution) -> Result<WeylOp> {
    let n = d.n;
    if s.n != n {
        return Err(Error::DimensionMismatch { expected: n, got: s.n });
    }
    // ∂_t as a linear form in the derivative symbols
    let partial_images: Vec<Poly> = (0..2 * n)
        .map(|t| {
            let column: Vec<Scalar> = (0..2 * n).map(|m| s.forward[m][t].clone()).collect();
            linear_form(n, &column)
        })
        .collect();
    let mut out = WeylOp::zero(n);
    for (key, c) in &d.terms {
        let coeff = Poly::monomial(n, key.mono.clone(), c.clone()).substitute(&s.inverse);
        let mut derivs = Poly::constant(n, Scalar::one());
        for (t, &k) in key.deriv.iter().enumerate() {
            if k > 0 {
                derivs = derivs.mul(&partial_images[t].pow(k));
            }
        }
        for (mono, a) in &coeff.terms {
            for (deriv, b) in &derivs.terms {
                out.add_term(
                    WeylKey {
                        mono: mono.clone(),
                        deriv: deriv.clone(),
                    },
                    a * b,
                );
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{h_element, HGenerator};

    fn vf(n: usize, mul: usize, d: usize) -> WeylOp {
        WeylOp::vector_field_term(n, Scalar::one(), mul, d)
    }

    #[test]
    fn canonical_commutator() {
        let n = 1;
        let lhs = compose(&WeylOp::partial(n, z(1)), &WeylOp::mul_by(n, z(1)));
        let rhs = vf(n, z(1), z(1)).add(&WeylOp::identity(n));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn independent_symbols_commute() {
        let n = 1;
        let lhs = compose(&WeylOp::partial(n, zbar(1)), &WeylOp::mul_by(n, z(1)));
        assert_eq!(lhs, vf(n, z(1), zbar(1)));
    }

    #[test]
    fn square_of_vector_field_matches_sequential_application() {
        let n = 3;
        let d = vf(n, zbar(1), zbar(2)).add(&vf(n, z(2), z(3)));
        let d2 = compose(&d, &d);
        // z̄₁² ∂²_{z̄₂} + 2 z̄₁z₂ ∂_{z̄₂}∂_{z₃} + z₂² ∂²_{z₃}; no derivative hits a coefficient
        let mut cross_mono = vec![0; 6];
        cross_mono[zbar(1)] = 1;
        cross_mono[z(2)] = 1;
        let mut cross_deriv = vec![0; 6];
        cross_deriv[zbar(2)] = 1;
        cross_deriv[z(3)] = 1;
        let key = WeylKey {
            mono: cross_mono,
            deriv: cross_deriv,
        };
        assert_eq!(d2.terms.get(&key), Some(&Scalar::int(2)));
        assert_eq!(d2.len(), 3);
    }

    fn all_monomials(n: usize, max_deg: u32) -> Vec<Vec<u32>> {
        let mut out = vec![vec![0; 2 * n]];
        for s in 0..2 * n {
            let mut next = Vec::new();
            for e in &out {
                let used: u32 = e.iter().sum();
                for k in 0..=(max_deg - used) {
                    let mut e2 = e.clone();
                    e2[s] = k;
                    next.push(e2);
                }
            }
            out = next;
        }
        out
    }

    #[test]
    fn compose_agrees_with_sequential_application() {
        let n = 2;
        let p = vf(n, z(1), z(2))
            .add(&WeylOp::partial(n, zbar(1)).scale(&Scalar::gauss(1, 2)))
            .add(&compose(&WeylOp::partial(n, z(1)), &WeylOp::partial(n, z(1))));
        let q = vf(n, zbar(2), z(1)).add(&WeylOp::mul_by(n, z(1)).scale(&Scalar::param(1)));
        let pq = compose(&p, &q);
        for e in all_monomials(n, 4) {
            let f = Poly::monomial(n, e, Scalar::one());
            assert_eq!(pq.apply(&f), p.apply(&q.apply(&f)));
        }
    }

    #[test]
    fn substitution_of_first_shift_in_inverse_mode() {
        let a = Scalar::param(1);
        let g = HGenerator::Shift { j: 1, a: a.clone() }.matrix(2);
        let s = substitution_from_group(&g, true).unwrap();
        assert!(s.real && s.unimodular);
        let mut z1_image = vec![Scalar::zero(); 4];
        z1_image[z(1)] = Scalar::one();
        z1_image[zbar(2)] = -&a;
        assert_eq!(s.image(z(1)), &z1_image[..]);
        let mut z2_image = vec![Scalar::zero(); 4];
        z2_image[z(2)] = Scalar::one();
        assert_eq!(s.image(z(2)), &z2_image[..]);
    }

    #[test]
    fn substitution_of_phase_in_inverse_mode() {
        let n = 3;
        let s = substitution_from_group(&HGenerator::Phase(1).matrix(n), true).unwrap();
        for j in 1..=n {
            assert_eq!(s.forward[z(j)][z(j)], Scalar::unit_power(-1));
            assert_eq!(s.forward[zbar(j)][zbar(j)], Scalar::unit_power(1));
        }
        let id = substitution_from_group(&REpsMatrix::identity(n), false).unwrap();
        assert_eq!(id, Substitution::identity(n));
    }

    fn d_field(n: usize) -> WeylOp {
        vf(n, zbar(n - 2), zbar(n - 1)).add(&vf(n, z(n - 1), z(n)))
    }

    #[test]
    fn phase_fixes_d() {
        for n in 3..=5 {
            let s = substitution_from_group(&HGenerator::Phase(2).matrix(n), false).unwrap();
            assert_eq!(conjugate_op(&d_field(n), &s).unwrap(), d_field(n));
        }
    }

    #[test]
    fn conjugation_intertwines_application() {
        let n = 3;
        let coeffs = vec![Scalar::gauss(1, 1), Scalar::ratio(2, 3)];
        let g = h_element(n, &Scalar::unit_power(1), &coeffs);
        let s = substitution_from_group(&g, false).unwrap();
        let d = d_field(n).add(&compose(&WeylOp::partial(n, z(1)), &WeylOp::mul_by(n, zbar(3))));
        let gd = conjugate_op(&d, &s).unwrap();
        // (g·f)(z) = f(g⁻¹z)
        for e in all_monomials(n, 3) {
            let f = Poly::monomial(n, e, Scalar::one());
            let gf = f.substitute(&s.inverse);
            let lhs = gd.apply(&gf);
            let rhs = d.apply(&f).substitute(&s.inverse);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn conjugation_is_an_action() {
        let n = 3;
        let d = d_field(n);
        let g1 = HGenerator::Shift { j: 1, a: Scalar::param(1) }.matrix(n);
        let g2 = HGenerator::Shift { j: 2, a: Scalar::param(2) }.matrix(n);
        let s1 = substitution_from_group(&g1, false).unwrap();
        let s2 = substitution_from_group(&g2, false).unwrap();
        let s12 = substitution_from_group(&g1.mul(&g2), false).unwrap();
        assert_eq!(s12, s1.then_after(&s2));
        let lhs = conjugate_op(&d, &s12).unwrap();
        let rhs = conjugate_op(&conjugate_op(&d, &s2).unwrap(), &s1).unwrap();
        assert_eq!(lhs, rhs);
        let back = conjugate_op(&conjugate_op(&d, &s1).unwrap(), &s1.inverted()).unwrap();
        assert_eq!(back, d);
        assert_eq!(conjugate_op(&d, &Substitution::identity(n)).unwrap(), d);
    }
}
