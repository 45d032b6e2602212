//! The twisted algebra `R_ε = ℂ ⊕ ℂε`, matrices over it, the real
//! representation `ι`, the group `H` and the complexified algebra.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, ScalarMatrix};
use crate::scalars::{GaussianRational, Scalar};

/// `a + bε` with `(a+bε)(c+dε) = (ac + b·d̄) + (b·c̄ + ad)ε`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct REpsElement {
    pub a: Scalar,
    pub b: Scalar,
}

impl REpsElement {
    pub fn new(a: Scalar, b: Scalar) -> Self {
        Self { a, b }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(Scalar::one())
    }

    pub fn scalar(a: Scalar) -> Self {
        Self::new(a, Scalar::zero())
    }

    pub fn eps() -> Self {
        Self::new(Scalar::zero(), Scalar::one())
    }

    pub fn i() -> Self {
        Self::scalar(Scalar::i())
    }

    /// `c·ε^k`; `ε^k` is `1` for even `k` and `ε` for odd `k`.
    pub fn times_eps_power(c: Scalar, k: usize) -> Self {
        if k % 2 == 0 {
            Self::scalar(c)
        } else {
            Self::new(Scalar::zero(), c)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

/// The twisted product of `R_ε`.
pub fn reps_mul(x: &REpsElement, y: &REpsElement) -> REpsElement {
    REpsElement::new(
        &(&x.a * &y.a) + &(&x.b * &y.b.conj()),
        &(&x.b * &y.a.conj()) + &(&x.a * &y.b),
    )
}

/// `(a+bε)·z = az + bz̄`, acting on the pair `(z, z̄)`.
pub fn reps_act(x: &REpsElement, z: &(Scalar, Scalar)) -> (Scalar, Scalar) {
    let (z, zbar) = z;
    (
        &(&x.a * z) + &(&x.b * zbar),
        &(&x.a.conj() * zbar) + &(&x.b.conj() * z),
    )
}

impl<'a> Mul<&'a REpsElement> for &'a REpsElement {
    type Output = REpsElement;
    fn mul(self, rhs: &REpsElement) -> REpsElement {
        reps_mul(self, rhs)
    }
}

impl<'a> Add<&'a REpsElement> for &'a REpsElement {
    type Output = REpsElement;
    fn add(self, rhs: &REpsElement) -> REpsElement {
        REpsElement::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a REpsElement> for &'a REpsElement {
    type Output = REpsElement;
    fn sub(self, rhs: &REpsElement) -> REpsElement {
        REpsElement::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Neg for &'a REpsElement {
    type Output = REpsElement;
    fn neg(self) -> REpsElement {
        REpsElement::new(-&self.a, -&self.b)
    }
}

impl fmt::Display for REpsElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] + [{}]e", self.a, self.b)
    }
}

/// An `n×n` matrix over `R_ε`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct REpsMatrix {
    n: usize,
    entries: Vec<REpsElement>,
}

impl REpsMatrix {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: vec![REpsElement::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, REpsElement::one());
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> REpsElement) -> Self {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &REpsElement {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: REpsElement) {
        self.entries[i * self.n + j] = x;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix dimensions differ");
        let n = self.n;
        Self::from_fn(n, |i, j| {
            let mut acc = REpsElement::zero();
            for k in 0..n {
                let (x, y) = (self.get(i, k), other.get(k, j));
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                acc = &acc + &reps_mul(x, y);
            }
            acc
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    /// Acts on `ℂ^n` given as pairs `(z_j, z̄_j)`.
    pub fn act(&self, v: &[(Scalar, Scalar)]) -> Vec<(Scalar, Scalar)> {
        (0..self.n)
            .map(|i| {
                let mut acc = (Scalar::zero(), Scalar::zero());
                for (j, zj) in v.iter().enumerate() {
                    let x = self.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    let (p, q) = reps_act(x, zj);
                    acc.0.add_assign_ref(&p);
                    acc.1.add_assign_ref(&q);
                }
                acc
            })
            .collect()
    }
}

/// Generators of `H`: the phase `h(θ)` with `e^{iθ}` the formal unit power
/// `u^m`, and the shifts `h_j(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HGenerator {
    Phase(i32),
    Shift { j: usize, a: Scalar },
}

impl HGenerator {
    pub fn matrix(&self, n: usize) -> REpsMatrix {
        match self {
            HGenerator::Phase(m) => h_element(n, &Scalar::unit_power(*m), &[]),
            HGenerator::Shift { j, a } => {
                assert!(*j >= 1 && *j < n, "shift index out of range");
                let mut coeffs = vec![Scalar::zero(); n - 1];
                coeffs[j - 1] = a.clone();
                h_element(n, &Scalar::one(), &coeffs)
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            HGenerator::Phase(m) => format!("h(u^{m})"),
            HGenerator::Shift { j, a } => format!("h_{j}({a})"),
        }
    }
}

/// `h^θ(a)`: `phase` on the diagonal and `a_k ε^k` along the k-th superdiagonal.
pub fn h_element(n: usize, phase: &Scalar, coeffs: &[Scalar]) -> REpsMatrix {
    assert!(coeffs.len() < n.max(1), "too many superdiagonal coefficients");
    REpsMatrix::from_fn(n, |i, j| {
        if i == j {
            REpsElement::scalar(phase.clone())
        } else if j > i && j - i <= coeffs.len() {
            REpsElement::times_eps_power(coeffs[j - i - 1].clone(), j - i)
        } else {
            REpsElement::zero()
        }
    })
}

/// Reads back `(phase, coefficients)` if `m` has the Toeplitz shape of an
/// element of `H`: constant unit diagonal without ε-part, and along the k-th
/// superdiagonal a constant entry of the form `c·ε^k`.
pub fn toeplitz_form(m: &REpsMatrix) -> Option<(Scalar, Vec<Scalar>)> {
    let n = m.dim();
    for i in 0..n {
        for j in 0..i {
            if !m.get(i, j).is_zero() {
                return None;
            }
        }
    }
    let diag = m.get(0, 0);
    if !diag.b.is_zero() || !(&diag.a * &diag.a.conj()).is_one() {
        return None;
    }
    let mut coeffs = Vec::new();
    for k in 1..n {
        let first = m.get(0, k);
        for i in 0..n - k {
            if m.get(i, i + k) != first {
                return None;
            }
        }
        let (c, wrong) = if k % 2 == 0 { (&first.a, &first.b) } else { (&first.b, &first.a) };
        if !wrong.is_zero() {
            return None;
        }
        coeffs.push(c.clone());
    }
    for i in 0..n {
        if m.get(i, i) != diag {
            return None;
        }
    }
    Some((diag.a.clone(), coeffs))
}

/// Matrix of left multiplication on `ℂ^n ≅ ℝ^{2n}` in the basis
/// `(x₁, y₁, …, x_n, y_n)`.
///
/// Real and imaginary parts are taken symbolically (`Re x = (x + x̄)/2`), so
/// entries may carry `u` and the formal parameters; λ is rejected.
pub fn iota(m: &REpsMatrix) -> Result<ScalarMatrix> {
    let n = m.dim();
    let mut out = vec![vec![Scalar::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let x = m.get(i, j);
            if x.a.involves_lambda() || x.b.involves_lambda() {
                return Err(Error::UnsupportedEntry {
                    row: i,
                    col: j,
                    reason: "lambda is not a group parameter".into(),
                });
            }
            let (ar, ai) = (x.a.real_part(), x.a.imag_part());
            let (br, bi) = (x.b.real_part(), x.b.imag_part());
            // az + b z̄ with z = x + iy
            out[2 * i][2 * j] = &ar + &br;
            out[2 * i][2 * j + 1] = &bi - &ai;
            out[2 * i + 1][2 * j] = &ai + &bi;
            out[2 * i + 1][2 * j + 1] = &ar - &br;
        }
    }
    Ok(out)
}

/// `iota` for matrices with Gaussian-rational entries, as a rational matrix.
pub fn iota_rational(m: &REpsMatrix) -> Result<Vec<Vec<BigRational>>> {
    let symbolic = iota(m)?;
    symbolic
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, x)| match x.as_constant() {
                    Some(g) if g.is_real() => Ok(g.re),
                    _ => Err(Error::UnsupportedEntry {
                        row: r / 2,
                        col: c / 2,
                        reason: format!("symbolic entry {x}"),
                    }),
                })
                .collect()
        })
        .collect()
}

/// One determinant evaluated by [`h_det_check`].
#[derive(Clone, Debug)]
pub struct DetRecord {
    pub label: String,
    pub det: Scalar,
}

impl DetRecord {
    pub fn passed(&self) -> bool {
        self.det.is_one()
    }
}

/// `det ι(g)` for the phase generator, every shift generator with a formal
/// parameter, their product, and a general element with all parameters formal.
pub fn h_det_check(n: usize) -> Result<Vec<DetRecord>> {
    assert!(n >= 2, "H is defined for n >= 2");
    let mut cases: Vec<(String, REpsMatrix)> = Vec::new();
    cases.push(("h(u)".into(), HGenerator::Phase(1).matrix(n)));
    for j in 1..n {
        let g = HGenerator::Shift { j, a: Scalar::param(j) };
        cases.push((g.label(), g.matrix(n)));
    }
    cases.push((
        "h(u)*h_1(a1)".into(),
        HGenerator::Phase(1)
            .matrix(n)
            .mul(&HGenerator::Shift { j: 1, a: Scalar::param(1) }.matrix(n)),
    ));
    let coeffs: Vec<Scalar> = (1..n).map(Scalar::param).collect();
    cases.push(("h^u(a1..)".into(), h_element(n, &Scalar::unit_power(1), &coeffs)));
    cases
        .into_iter()
        .map(|(label, g)| {
            Ok(DetRecord {
                label,
                det: linalg::determinant(&iota(&g)?),
            })
        })
        .collect()
}

/// Outcome of [`h_closure_check`].
#[derive(Clone, Debug, Default)]
pub struct ClosureReport {
    pub samples: usize,
    pub failures: Vec<String>,
}

pub(crate) fn random_gauss(rng: &mut impl Rng) -> Scalar {
    let den: i64 = rng.gen_range(1..=4);
    let re: i64 = rng.gen_range(-5..=5);
    let im: i64 = rng.gen_range(-5..=5);
    Scalar::constant(GaussianRational::new(
        BigRational::new(re.into(), den.into()),
        BigRational::new(im.into(), den.into()),
    ))
}

pub(crate) fn random_h(n: usize, rng: &mut impl Rng) -> (i32, Vec<Scalar>, REpsMatrix) {
    let m: i32 = rng.gen_range(-3..=3);
    let coeffs: Vec<Scalar> = (1..n).map(|_| random_gauss(rng)).collect();
    let g = h_element(n, &Scalar::unit_power(m), &coeffs);
    (m, coeffs, g)
}

/// Products of random elements of `H` keep the Toeplitz shape, with the
/// phases multiplying.
pub fn h_closure_check(n: usize, samples: usize, seed: u64) -> ClosureReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ClosureReport {
        samples,
        failures: Vec::new(),
    };
    for s in 0..samples {
        let (m1, _, g1) = random_h(n, &mut rng);
        let (m2, _, g2) = random_h(n, &mut rng);
        match toeplitz_form(&g1.mul(&g2)) {
            Some((phase, _)) if phase == Scalar::unit_power(m1 + m2) => {}
            Some((phase, _)) => report
                .failures
                .push(format!("sample {s}: phase {phase}, expected u^{}", m1 + m2)),
            None => report.failures.push(format!("sample {s}: product left H")),
        }
    }
    report
}

/// `ε² = 1`, `i² = -1` and `iε = -εi` in the twisted product.
pub fn clifford_relations_hold() -> bool {
    let e = REpsElement::eps();
    let i = REpsElement::i();
    &e * &e == REpsElement::one() && &i * &i == -&REpsElement::one() && &i * &e == -&(&e * &i)
}

/// `ι(xy) = ι(x)ι(y)` on random matrices with Gaussian-rational entries.
pub fn iota_multiplicativity_check(n: usize, samples: usize, seed: u64) -> ClosureReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ClosureReport {
        samples,
        failures: Vec::new(),
    };
    let random_matrix = |rng: &mut ChaCha8Rng| {
        REpsMatrix::from_fn(n, |_, _| REpsElement::new(random_gauss(rng), random_gauss(rng)))
    };
    for s in 0..samples {
        let x = random_matrix(&mut rng);
        let y = random_matrix(&mut rng);
        let lhs = iota_rational(&x.mul(&y));
        let rhs = iota_rational(&x).and_then(|a| iota_rational(&y).map(|b| rational_mat_mul(&a, &b)));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if l == r => {}
            (Ok(_), Ok(_)) => report.failures.push(format!("sample {s}: ι(xy) ≠ ι(x)ι(y)")),
            (Err(e), _) | (_, Err(e)) => report.failures.push(format!("sample {s}: {e}")),
        }
    }
    report
}

fn rational_mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    a.iter()
        .map(|row| {
            (0..b[0].len())
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

/// Inverse of `g = Δ(I + N)` with `Δ` a unit scalar diagonal and `N`
/// strictly upper triangular, via the terminating series `Σ(-N)^k Δ⁻¹`.
pub fn group_inverse(g: &REpsMatrix) -> Result<REpsMatrix> {
    let n = g.dim();
    let mut diag_inv = REpsMatrix::zero(n);
    for i in 0..n {
        for j in 0..i {
            if !g.get(i, j).is_zero() {
                return Err(Error::NotUnipotentForm(format!("nonzero entry below diagonal at {i},{j}")));
            }
        }
        let d = g.get(i, i);
        if !d.b.is_zero() || !(&d.a * &d.a.conj()).is_one() {
            return Err(Error::NotUnipotentForm(format!("diagonal entry {i} is not a unit scalar")));
        }
        diag_inv.set(i, i, REpsElement::scalar(d.a.conj()));
    }
    let nilpotent = diag_inv.mul(g).sub(&REpsMatrix::identity(n));
    let minus_n = REpsMatrix::zero(n).sub(&nilpotent);
    let mut series = REpsMatrix::identity(n);
    let mut power = REpsMatrix::identity(n);
    for _ in 1..n {
        power = power.mul(&minus_n);
        series = series.add(&power);
    }
    Ok(series.mul(&diag_inv))
}

/// `(a, c) + (b, d)ε` in `(ℂ⊕ℂ̄) ⊕ (ℂ⊕ℂ̄)ε`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CplxPairElement {
    pub z: (Scalar, Scalar),
    pub eps: (Scalar, Scalar),
}

impl CplxPairElement {
    pub fn new(a: Scalar, c: Scalar, b: Scalar, d: Scalar) -> Self {
        Self { z: (a, c), eps: (b, d) }
    }

    pub fn one() -> Self {
        Self::new(Scalar::one(), Scalar::one(), Scalar::zero(), Scalar::zero())
    }

    pub fn eps() -> Self {
        Self::new(Scalar::zero(), Scalar::zero(), Scalar::one(), Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.z.0.is_zero() && self.z.1.is_zero() && self.eps.0.is_zero() && self.eps.1.is_zero()
    }

    /// `(a, c)·ε^k`.
    pub fn times_eps_power(pair: (Scalar, Scalar), k: usize) -> Self {
        if k % 2 == 0 {
            Self::new(pair.0, pair.1, Scalar::zero(), Scalar::zero())
        } else {
            Self::new(Scalar::zero(), Scalar::zero(), pair.0, pair.1)
        }
    }
}

pub fn cplx_mul(x: &CplxPairElement, y: &CplxPairElement) -> CplxPairElement {
    let (a, c) = (&x.z.0, &x.z.1);
    let (b, d) = (&x.eps.0, &x.eps.1);
    let (a2, c2) = (&y.z.0, &y.z.1);
    let (b2, d2) = (&y.eps.0, &y.eps.1);
    CplxPairElement::new(
        &(a * a2) + &(b * &d2.conj()),
        &(c * c2) + &(d * &b2.conj()),
        &(a * b2) + &(b * &c2.conj()),
        &(c * d2) + &(d * &a2.conj()),
    )
}

/// `((a,c) + (b,d)ε)·(z, w) = (az + b·w̄, cw + d·z̄)`.
pub fn cplx_act(x: &CplxPairElement, v: &(Scalar, Scalar)) -> (Scalar, Scalar) {
    let (z, w) = v;
    (
        &(&x.z.0 * z) + &(&x.eps.0 * &w.conj()),
        &(&x.z.1 * w) + &(&x.eps.1 * &z.conj()),
    )
}

/// An element of `H_ℂ`: the pair `(t, s)` on the diagonal and `A_k ε^k` on
/// the k-th superdiagonal.
pub fn hc_element(n: usize, diag: &(Scalar, Scalar), coeffs: &[(Scalar, Scalar)]) -> Vec<Vec<CplxPairElement>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        CplxPairElement::new(diag.0.clone(), diag.1.clone(), Scalar::zero(), Scalar::zero())
                    } else if j > i && j - i <= coeffs.len() {
                        CplxPairElement::times_eps_power(coeffs[j - i - 1].clone(), j - i)
                    } else {
                        CplxPairElement::default()
                    }
                })
                .collect()
        })
        .collect()
}

/// Left multiplication of a matrix over the complexified algebra on `(ℂ⊕ℂ̄)^n`.
pub fn cplx_matrix_act(m: &[Vec<CplxPairElement>], v: &[(Scalar, Scalar)]) -> Vec<(Scalar, Scalar)> {
    m.iter()
        .map(|row| {
            let mut acc = (Scalar::zero(), Scalar::zero());
            for (x, vj) in row.iter().zip(v) {
                if x.is_zero() {
                    continue;
                }
                let (p, q) = cplx_act(x, vj);
                acc.0.add_assign_ref(&p);
                acc.1.add_assign_ref(&q);
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> Scalar {
        Scalar::gauss(re, im)
    }

    #[test]
    fn clifford_relations() {
        let e = REpsElement::eps();
        let i = REpsElement::i();
        assert_eq!(&e * &e, REpsElement::one());
        assert_eq!(&i * &i, -&REpsElement::one());
        assert_eq!(&i * &e, -&(&e * &i));
    }

    #[test]
    fn relations_and_multiplicativity() {
        assert!(clifford_relations_hold());
        for n in 1..=4 {
            let r = iota_multiplicativity_check(n, 25, n as u64);
            assert!(r.failures.is_empty(), "{:?}", r.failures);
        }
    }

    #[test]
    fn twisted_product_example() {
        let x = REpsElement::new(Scalar::one(), Scalar::int(2));
        let y = REpsElement::i();
        assert_eq!(&x * &y, REpsElement::new(g(0, 1), g(0, -2)));
    }

    #[test]
    fn action_on_complex_numbers() {
        let z = (g(2, 3), g(2, -3));
        assert_eq!(reps_act(&REpsElement::one(), &z), z);
        assert_eq!(reps_act(&REpsElement::eps(), &z), (g(2, -3), g(2, 3)));
        assert_eq!(reps_act(&REpsElement::i(), &z).0, &Scalar::i() * &z.0);
    }

    #[test]
    fn iota_of_basis_elements() {
        let one = |x: REpsElement| {
            let mut m = REpsMatrix::zero(1);
            m.set(0, 0, x);
            iota_rational(&m).unwrap()
        };
        let r = |x: i64| BigRational::from_integer(x.into());
        assert_eq!(one(REpsElement::i()), vec![vec![r(0), r(-1)], vec![r(1), r(0)]]);
        assert_eq!(one(REpsElement::eps()), vec![vec![r(1), r(0)], vec![r(0), r(-1)]]);
    }

    #[test]
    fn iota_rejects_lambda() {
        let mut m = REpsMatrix::zero(1);
        m.set(0, 0, REpsElement::scalar(Scalar::lambda()));
        assert!(iota(&m).is_err());
        let mut m = REpsMatrix::zero(1);
        m.set(0, 0, REpsElement::scalar(Scalar::param(1)));
        assert!(iota_rational(&m).is_err());
        assert!(iota(&m).is_ok());
    }

    #[test]
    fn determinants_of_generators() {
        for n in 2..=4 {
            for rec in h_det_check(n).unwrap() {
                assert!(rec.passed(), "n={n} {}: det = {}", rec.label, rec.det);
            }
        }
    }

    #[test]
    fn closure_of_diagonal_phases() {
        let n = 3;
        let p = HGenerator::Phase(1).matrix(n).mul(&HGenerator::Phase(2).matrix(n));
        assert_eq!(p, HGenerator::Phase(3).matrix(n));
    }

    #[test]
    fn closure_of_two_first_shifts() {
        let (a, b) = (Scalar::param(1), Scalar::param(2));
        let p = HGenerator::Shift { j: 1, a: a.clone() }
            .matrix(3)
            .mul(&HGenerator::Shift { j: 1, a: b.clone() }.matrix(3));
        let (phase, coeffs) = toeplitz_form(&p).unwrap();
        assert!(phase.is_one());
        assert_eq!(coeffs, vec![&a + &b, &a * &b.conj()]);
    }

    #[test]
    fn closure_of_first_and_second_shift() {
        let (a, b) = (Scalar::param(1), Scalar::param(2));
        let p = HGenerator::Shift { j: 1, a: a.clone() }
            .matrix(4)
            .mul(&HGenerator::Shift { j: 2, a: b.clone() }.matrix(4));
        let (_, coeffs) = toeplitz_form(&p).unwrap();
        assert_eq!(coeffs, vec![a.clone(), b.clone(), &a * &b.conj()]);
    }

    #[test]
    fn random_closure() {
        for n in 2..=5 {
            let rep = h_closure_check(n, 30, n as u64);
            assert!(rep.failures.is_empty(), "{:?}", rep.failures);
        }
    }

    #[test]
    fn inverse_of_shift_generators() {
        let a = Scalar::param(1);
        assert!(group_inverse(&REpsMatrix::identity(3)).unwrap().is_identity());
        let inv2 = group_inverse(&HGenerator::Shift { j: 1, a: a.clone() }.matrix(2)).unwrap();
        assert_eq!(inv2, HGenerator::Shift { j: 1, a: -&a }.matrix(2));
        let inv3 = group_inverse(&HGenerator::Shift { j: 1, a: a.clone() }.matrix(3)).unwrap();
        assert_eq!(inv3, h_element(3, &Scalar::one(), &[-&a, &a * &a.conj()]));
    }

    #[test]
    fn inverse_of_general_elements() {
        let coeffs: Vec<Scalar> = (1..4).map(Scalar::param).collect();
        let g = h_element(4, &Scalar::unit_power(1), &coeffs);
        let inv = group_inverse(&g).unwrap();
        assert!(g.mul(&inv).is_identity());
        assert!(inv.mul(&g).is_identity());
    }

    #[test]
    fn inverse_rejects_bad_shapes() {
        let mut m = REpsMatrix::identity(2);
        m.set(1, 0, REpsElement::one());
        assert!(group_inverse(&m).is_err());
        let mut m = REpsMatrix::identity(2);
        m.set(0, 0, REpsElement::scalar(Scalar::int(2)));
        assert!(group_inverse(&m).is_err());
        let mut m = REpsMatrix::identity(2);
        m.set(1, 1, REpsElement::eps());
        assert!(group_inverse(&m).is_err());
    }

    #[test]
    fn complexified_products() {
        let x = CplxPairElement::new(g(1, 2), g(3, 0), g(0, 1), g(2, -1));
        assert_eq!(cplx_mul(&CplxPairElement::one(), &x), x);
        assert_eq!(cplx_mul(&CplxPairElement::eps(), &CplxPairElement::eps()), CplxPairElement::one());
        let y = CplxPairElement::new(g(5, 1), g(-1, 1), Scalar::zero(), Scalar::zero());
        let x0 = CplxPairElement::new(g(1, 2), g(3, 0), Scalar::zero(), Scalar::zero());
        assert_eq!(
            cplx_mul(&x0, &y),
            CplxPairElement::new(&g(1, 2) * &g(5, 1), &g(3, 0) * &g(-1, 1), Scalar::zero(), Scalar::zero())
        );
    }

    #[test]
    fn complexified_action() {
        let v = (Scalar::param(1), Scalar::param(2));
        assert_eq!(cplx_act(&CplxPairElement::one(), &v), v);
        assert_eq!(cplx_act(&CplxPairElement::eps(), &v), (v.1.conj(), v.0.conj()));
        let x = CplxPairElement::new(Scalar::int(2), Scalar::int(3), Scalar::zero(), Scalar::zero());
        assert_eq!(cplx_act(&x, &v), (&Scalar::int(2) * &v.0, &Scalar::int(3) * &v.1));
    }
}
