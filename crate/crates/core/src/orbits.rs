//! Orbits of `H` on real projective space and of its complexification on
//! complex projective space.

use std::collections::BTreeSet;
use std::ops::{Add, Div, Mul, Sub};

use num::complex::Complex64;
use num::{BigRational, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::clifford::{cplx_matrix_act, hc_element};
use crate::constructions::{random_composites, CheckRecord};
use crate::error::{Error, Result};
use crate::linalg::rational_rank;
use crate::scalars::{ratio_to_f64, GaussianRational, Scalar};

/// A point of `(ℂ^n ∖ {0}) / ℝ^×`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjPoint {
    coords: Vec<GaussianRational>,
}

impl ProjPoint {
    pub fn new(coords: Vec<GaussianRational>) -> Result<Self> {
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::ZeroVector);
        }
        Ok(Self { coords })
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&(re, im)| GaussianRational::from_ints(re, im)).collect())
    }

    /// The `j`-th standard basis vector.
    pub fn basis(n: usize, j: usize) -> Self {
        let mut coords = vec![GaussianRational::zero(); n];
        coords[j - 1] = GaussianRational::from_ints(1, 0);
        Self { coords }
    }

    pub fn coords(&self) -> &[GaussianRational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// `Y_{2j-1}`: points whose last nonzero coordinate is the `j`-th.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Stratum {
    pub j: usize,
}

impl Stratum {
    pub fn dimension(&self) -> usize {
        2 * self.j - 1
    }
}

pub fn stratum_of(p: &ProjPoint) -> Stratum {
    let j = p.coords.iter().rposition(|c| !c.is_zero()).expect("ProjPoint is nonzero") + 1;
    Stratum { j }
}

fn stratum_of_scalars(v: &[(Scalar, Scalar)]) -> Option<usize> {
    v.iter().rposition(|(z, _)| !z.is_zero()).map(|i| i + 1)
}

fn eps_power_apply(x: &GaussianRational, k: usize) -> GaussianRational {
    if k % 2 == 1 {
        x.conj()
    } else {
        x.clone()
    }
}

fn realify(v: &[GaussianRational]) -> Vec<BigRational> {
    v.iter().flat_map(|c| [c.re.clone(), c.im.clone()]).collect()
}

/// Rank of `{X·v}` over the Lie algebra basis together with `v`, minus one.
pub fn orbit_dimension(p: &ProjPoint) -> usize {
    let n = p.dim();
    let v = &p.coords;
    let i = GaussianRational::i();
    let mut rows = vec![realify(v), realify(&v.iter().map(|c| &i * c).collect::<Vec<_>>())];
    for k in 1..n {
        for c in [GaussianRational::from_ints(1, 0), i.clone()] {
            let w: Vec<GaussianRational> = (0..n)
                .map(|r| {
                    if r + k < n {
                        &c * &eps_power_apply(&v[r + k], k)
                    } else {
                        GaussianRational::zero()
                    }
                })
                .collect();
            rows.push(realify(&w));
        }
    }
    rational_rank(&rows) - 1
}

/// `r·h·p = q` with `h` of phase `e^{iθ}` and superdiagonal `a`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransitivityWitness {
    pub stratum: usize,
    pub theta: f64,
    pub scale: f64,
    pub coeffs: Vec<(f64, f64)>,
    pub residual: f64,
    /// The witness was solved and checked in exact arithmetic.
    pub exact: bool,
}

trait Conj {
    fn conjugate(&self) -> Self;
}

impl Conj for Complex64 {
    fn conjugate(&self) -> Self {
        self.conj()
    }
}

impl Conj for GaussianRational {
    fn conjugate(&self) -> Self {
        self.conj()
    }
}

fn eps_apply<T: Conj + Clone>(x: &T, k: usize) -> T {
    if k % 2 == 1 {
        x.conjugate()
    } else {
        x.clone()
    }
}

/// `(h·p)_i = phase·p_i + Σ_k a_k ε^k p_{i+k}`.
fn apply_h<T>(phase: &T, a: &[T], p: &[T]) -> Vec<T>
where
    T: Conj + Clone + Zero + Add<Output = T> + Mul<Output = T>,
{
    let n = p.len();
    (0..n)
        .map(|i| {
            let mut acc = phase.clone() * p[i].clone();
            for k in 1..n - i {
                acc = acc + a[k - 1].clone() * eps_apply(&p[i + k], k);
            }
            acc
        })
        .collect()
}

/// Solves the triangular system for `a_1..a_{j-1}` row by row upwards.
fn back_substitute<T>(p: &[T], q: &[T], j0: usize, phase: &T, r_inv: &T) -> Vec<T>
where
    T: Conj + Clone + Zero + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Div<Output = T>,
{
    let n = p.len();
    let mut a = vec![T::zero(); n.saturating_sub(1)];
    for i in (0..j0).rev() {
        let m = j0 - i;
        let mut rhs = q[i].clone() * r_inv.clone() - phase.clone() * p[i].clone();
        for k in 1..m {
            rhs = rhs - a[k - 1].clone() * eps_apply(&p[i + k], k);
        }
        a[m - 1] = rhs / eps_apply(&p[j0], m);
    }
    a
}

fn to_c64(x: &GaussianRational) -> Complex64 {
    let (re, im) = x.to_f64_pair();
    Complex64::new(re, im)
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    let (num, den) = (x.numer().sqrt(), x.denom().sqrt());
    (&num * &num == *x.numer() && &den * &den == *x.denom()).then(|| BigRational::new(num, den))
}

/// A group element and positive scale carrying `p` to `q`, when both lie in
/// the same stratum.
pub fn transitivity_witness(p: &ProjPoint, q: &ProjPoint) -> Option<TransitivityWitness> {
    let n = p.dim();
    let j = stratum_of(p).j;
    if n != q.dim() || stratum_of(q).j != j {
        return None;
    }
    let j0 = j - 1;
    let ratio = q.coords[j0].norm_sqr() / p.coords[j0].norm_sqr();
    if let Some(r) = rational_sqrt(&ratio) {
        let r_gauss = GaussianRational::real(r.clone());
        let r_inv = GaussianRational::real(r.recip());
        let phase = q.coords[j0].clone() / (r_gauss.clone() * p.coords[j0].clone());
        let a = back_substitute(&p.coords, &q.coords, j0, &phase, &r_inv);
        let image: Vec<GaussianRational> =
            apply_h(&phase, &a, &p.coords).into_iter().map(|x| r_gauss.clone() * x).collect();
        if image == q.coords {
            let (re, im) = phase.to_f64_pair();
            return Some(TransitivityWitness {
                stratum: j,
                theta: im.atan2(re),
                scale: ratio_to_f64(&r),
                coeffs: a.iter().map(GaussianRational::to_f64_pair).collect(),
                residual: 0.0,
                exact: true,
            });
        }
    }
    let pf: Vec<Complex64> = p.coords.iter().map(to_c64).collect();
    let qf: Vec<Complex64> = q.coords.iter().map(to_c64).collect();
    let r = qf[j0].norm() / pf[j0].norm();
    let phase = qf[j0] / (pf[j0] * r);
    let a = back_substitute(&pf, &qf, j0, &phase, &Complex64::new(1.0 / r, 0.0));
    let residual = apply_h(&phase, &a, &pf)
        .iter()
        .zip(&qf)
        .map(|(x, y)| (x * r - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Some(TransitivityWitness {
        stratum: j,
        theta: phase.arg(),
        scale: r,
        coeffs: a.iter().map(|c| (c.re, c.im)).collect(),
        residual,
        exact: false,
    })
}

fn random_gaussian(rng: &mut impl Rng, nonzero: bool) -> GaussianRational {
    loop {
        let den: i64 = rng.gen_range(1..=4);
        let x = GaussianRational::new(
            BigRational::new(rng.gen_range(-6i64..=6).into(), den.into()),
            BigRational::new(rng.gen_range(-6i64..=6).into(), den.into()),
        );
        if !nonzero || !x.is_zero() {
            return x;
        }
    }
}

/// A random rational point of the given stratum.
pub fn random_point(n: usize, j: usize, rng: &mut impl Rng) -> ProjPoint {
    let coords = (1..=n)
        .map(|k| match k.cmp(&j) {
            std::cmp::Ordering::Less => random_gaussian(rng, false),
            std::cmp::Ordering::Equal => random_gaussian(rng, true),
            std::cmp::Ordering::Greater => GaussianRational::zero(),
        })
        .collect();
    ProjPoint { coords }
}

/// Same-stratum witness pairs drawn per stratum by [`enumerate_strata`].
pub const WITNESS_PAIRS: usize = 50;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StratumCensus {
    pub j: usize,
    pub dimension: usize,
    pub points: usize,
    pub dimension_mismatches: usize,
    pub witness_pairs: usize,
    pub exact_witnesses: usize,
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitCensus {
    pub n: usize,
    pub strata: Vec<StratumCensus>,
    pub distinct_labels: usize,
    pub cross_stratum_pairs: usize,
    pub cross_stratum_witnesses: usize,
    pub invariance_samples: usize,
    pub invariance_failures: usize,
}

impl OrbitCensus {
    pub fn passed(&self) -> bool {
        self.distinct_labels == self.n
            && self.strata.len() == self.n
            && self.strata.iter().all(|s| {
                s.dimension_mismatches == 0 && s.witness_pairs == WITNESS_PAIRS && s.max_residual <= 1e-9
            })
            && self.cross_stratum_witnesses == 0
            && self.invariance_failures == 0
    }
}

/// Buckets the basis points and `samples` random points by stratum, checks
/// tangent-rank dimensions, transitivity witnesses within strata, their
/// absence across strata, and invariance of the label under random group
/// words.
pub fn enumerate_strata(n: usize, samples: usize, seed: u64) -> Result<OrbitCensus> {
    if n < 2 {
        return Err(Error::InvalidConstruction(format!("orbit census needs n ≥ 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<ProjPoint> = (1..=n).map(|j| ProjPoint::basis(n, j)).collect();
    for _ in 0..samples {
        let j = rng.gen_range(1..=n);
        points.push(random_point(n, j, &mut rng));
    }
    let labels: BTreeSet<usize> = points.iter().map(|p| stratum_of(p).j).collect();
    let mut strata = Vec::with_capacity(n);
    for j in 1..=n {
        let bucket: Vec<&ProjPoint> = points.iter().filter(|p| stratum_of(p).j == j).collect();
        let dimension = 2 * j - 1;
        let dimension_mismatches = bucket.iter().filter(|p| orbit_dimension(p) != dimension).count();
        let mut witness_pairs = 0;
        let mut exact_witnesses = 0;
        let mut max_residual = 0.0f64;
        for _ in 0..WITNESS_PAIRS {
            let p = random_point(n, j, &mut rng);
            let q = random_point(n, j, &mut rng);
            if let Some(w) = transitivity_witness(&p, &q) {
                witness_pairs += 1;
                exact_witnesses += usize::from(w.exact);
                max_residual = max_residual.max(w.residual);
            }
        }
        strata.push(StratumCensus {
            j,
            dimension,
            points: bucket.len(),
            dimension_mismatches,
            witness_pairs,
            exact_witnesses,
            max_residual,
        });
    }
    let mut cross_stratum_pairs = 0;
    let mut cross_stratum_witnesses = 0;
    for j in 1..n {
        let p = random_point(n, j, &mut rng);
        let q = random_point(n, j + 1, &mut rng);
        cross_stratum_pairs += 2;
        cross_stratum_witnesses +=
            usize::from(transitivity_witness(&p, &q).is_some()) + usize::from(transitivity_witness(&q, &p).is_some());
    }
    let words = random_composites(n, samples, rng.gen());
    let mut invariance_failures = 0;
    for (_, g) in &words {
        let j = rng.gen_range(1..=n);
        let p = random_point(n, j, &mut rng);
        let v: Vec<(Scalar, Scalar)> = p
            .coords
            .iter()
            .map(|c| (Scalar::constant(c.clone()), Scalar::constant(c.conj())))
            .collect();
        if stratum_of_scalars(&g.act(&v)) != Some(j) {
            invariance_failures += 1;
        }
    }
    Ok(OrbitCensus {
        n,
        strata,
        distinct_labels: labels.len(),
        cross_stratum_pairs,
        cross_stratum_witnesses,
        invariance_samples: words.len(),
        invariance_failures,
    })
}

/// A point of `((ℂ⊕ℂ̄)^n ∖ {0}) / ℂ^×` as pairs `(z_k, w_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CplxProjPoint {
    coords: Vec<(GaussianRational, GaussianRational)>,
}

impl CplxProjPoint {
    pub fn new(coords: Vec<(GaussianRational, GaussianRational)>) -> Result<Self> {
        if coords.iter().all(|(z, w)| z.is_zero() && w.is_zero()) {
            return Err(Error::ZeroVector);
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[(GaussianRational, GaussianRational)] {
        &self.coords
    }

    /// `c·(z, w) = (cz, c̄w)`.
    pub fn scaled(&self, c: &GaussianRational) -> Self {
        let cb = c.conj();
        Self {
            coords: self.coords.iter().map(|(z, w)| (c * z, &cb * w)).collect(),
        }
    }
}

/// `z_{n-1}/z_n` on the locus `w_n = 0, z_n ≠ 0`.
pub fn zeta_invariant(p: &CplxProjPoint) -> Option<GaussianRational> {
    let n = p.coords.len();
    if n < 2 {
        return None;
    }
    let (zn, wn) = &p.coords[n - 1];
    if !wn.is_zero() || zn.is_zero() {
        return None;
    }
    Some(p.coords[n - 2].0.clone() / zn.clone())
}

/// With every coordinate and group parameter a free symbol, the image of a
/// point of `Y^ζ` under `H_ℂ` still satisfies `w_n = 0` and
/// `z_{n-1} = ζ z_n`.
pub fn zeta_invariance_symbolic(n: usize) -> bool {
    // slots 1..=2n-1 for the group, the rest for the point and ζ
    let diag = (Scalar::unit_power(1), Scalar::param(1));
    let coeffs: Vec<(Scalar, Scalar)> = (1..n).map(|k| (Scalar::param(2 * k), Scalar::param(2 * k + 1))).collect();
    let zeta = Scalar::param(2 * n);
    let zn = Scalar::param(2 * n + 1);
    let mut v: Vec<(Scalar, Scalar)> = (1..n.saturating_sub(1))
        .map(|k| (Scalar::param(2 * n + 2 * k), Scalar::param(2 * n + 2 * k + 1)))
        .collect();
    v.push((&zeta * &zn, Scalar::param(4 * n)));
    v.push((zn, Scalar::zero()));
    let image = cplx_matrix_act(&hc_element(n, &diag, &coeffs), &v);
    let (zn2, wn2) = &image[n - 1];
    let residual = &image[n - 2].0 - &(&zeta * zn2);
    residual.is_zero() && wn2.is_zero() && !zn2.is_zero()
}

/// A rational point of `Y^ζ` with random free coordinates.
pub fn point_on_y_zeta(n: usize, zeta: &GaussianRational, rng: &mut impl Rng) -> CplxProjPoint {
    let mut coords: Vec<(GaussianRational, GaussianRational)> = (1..n - 1)
        .map(|_| (random_gaussian(rng, false), random_gaussian(rng, false)))
        .collect();
    coords.push((zeta.clone(), random_gaussian(rng, false)));
    coords.push((GaussianRational::from_ints(1, 0), GaussianRational::zero()));
    CplxProjPoint { coords }
}

fn random_hc_image(p: &CplxProjPoint, rng: &mut impl Rng) -> CplxProjPoint {
    let n = p.coords.len();
    let c = |x: GaussianRational| Scalar::constant(x);
    let diag = (c(random_gaussian(rng, true)), c(random_gaussian(rng, true)));
    let coeffs: Vec<(Scalar, Scalar)> =
        (1..n).map(|_| (c(random_gaussian(rng, false)), c(random_gaussian(rng, false)))).collect();
    let v: Vec<(Scalar, Scalar)> = p.coords.iter().map(|(z, w)| (c(z.clone()), c(w.clone()))).collect();
    let coords = cplx_matrix_act(&hc_element(n, &diag, &coeffs), &v)
        .into_iter()
        .map(|(z, w)| (z.as_constant().expect("rational input"), w.as_constant().expect("rational input")))
        .collect();
    CplxProjPoint { coords }
}

/// `count` distinct Gaussian-rational values starting `0, 1, i, 2, 3+i`.
pub fn default_zetas(count: usize) -> Vec<GaussianRational> {
    let mut out: Vec<GaussianRational> = [(0, 0), (1, 0), (0, 1), (2, 0), (3, 1)]
        .iter()
        .map(|&(re, im)| GaussianRational::from_ints(re, im))
        .collect();
    let mut k = 0i64;
    while out.len() < count {
        let candidate = GaussianRational::new(BigRational::new((k % 7 - 3).into(), 2.into()), BigRational::new((k / 7 + 2).into(), 3.into()));
        if !out.contains(&candidate) {
            out.push(candidate);
        }
        k += 1;
    }
    out.truncate(count);
    out
}

/// Symbolic ζ-invariance, then for each ζ a point of `Y^ζ` moved by
/// `samples` random elements of `H_ℂ` and rescaled keeps its label; the
/// distinct labels witness as many distinct orbits.
pub fn complex_orbit_check(n: usize, zetas: &[GaussianRational], samples: usize, seed: u64) -> CheckRecord {
    let record = CheckRecord::new(
        format!("complex-orbits/n{n}/zetas{}", zetas.len()),
        format!("ζ = z_(n-1)/z_n is constant on H_C-orbits; {} values give distinct orbits", zetas.len()),
        "infinitely many orbits of the complexified group",
    );
    if n < 2 {
        return record.failed_with(&Error::InvalidConstruction(format!("needs n ≥ 2, got {n}")));
    }
    let symbolic = zeta_invariance_symbolic(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels = BTreeSet::new();
    let mut moved = 0usize;
    let mut failures = Vec::new();
    for zeta in zetas {
        let p = point_on_y_zeta(n, zeta, &mut rng);
        let mut label = zeta_invariant(&p);
        for _ in 0..samples {
            let image = random_hc_image(&p, &mut rng).scaled(&random_gaussian(&mut rng, true));
            moved += 1;
            let z = zeta_invariant(&image);
            if z != label {
                failures.push(json!({ "zeta": zeta.to_string(), "image_zeta": z.map(|z| z.to_string()) }));
                label = None;
            }
        }
        if let Some(l) = label {
            labels.insert(l);
        }
    }
    let distinct_inputs: BTreeSet<&GaussianRational> = zetas.iter().collect();
    let passed = symbolic && failures.is_empty() && labels.len() == distinct_inputs.len();
    record.finish(
        passed,
        json!({
            "symbolic_invariance": symbolic,
            "zeta_values": zetas.len(),
            "distinct_labels": labels.len(),
            "group_images": moved,
            "failures": failures,
        }),
    )
}
