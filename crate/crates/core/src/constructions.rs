//! Builders for the vector fields and invariant distribution families, and
//! the verification procedures run on them.

use std::collections::BTreeSet;
use std::fmt;

use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::clifford::{random_gauss, HGenerator, REpsMatrix};
use crate::distributions::{
    act_group, apply_weyl, degree, formal_support, independence_rank, parity, u1_weight, DistExpr, DistTerm,
    Homogeneity, Parity,
};
use crate::error::{Error, Result};
use crate::scalars::{AffineExponent, Scalar};
use crate::weyl::{conjugate_op, substitution_from_group, z, zbar, WeylOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectorField {
    /// `z̄_{n-2} ∂_{z̄_{n-1}} + z_{n-1} ∂_{z_n}`, n ≥ 3.
    D,
    /// `z_{n-2} ∂_{z_{n-1}} + z̄_{n-1} ∂_{z̄_n}`, n ≥ 3.
    Dbar,
    /// `z̄_{j-1} ∂_{z̄_j} + z_j ∂_{z_{j+1}}`, 2 ≤ j ≤ n-1.
    Dj(usize),
    /// `z_1 ∂_{z_2}`, n = 2.
    Dprime,
}

pub fn build_vector_field(which: VectorField, n: usize) -> Result<WeylOp> {
    let field = |a, b, c, d| {
        WeylOp::vector_field_term(n, Scalar::one(), a, b).add(&WeylOp::vector_field_term(n, Scalar::one(), c, d))
    };
    match which {
        VectorField::D if n >= 3 => Ok(field(zbar(n - 2), zbar(n - 1), z(n - 1), z(n))),
        VectorField::Dbar if n >= 3 => Ok(field(z(n - 2), z(n - 1), zbar(n - 1), zbar(n))),
        VectorField::Dj(j) if n >= 3 && (2..n).contains(&j) => Ok(field(zbar(j - 1), zbar(j), z(j), z(j + 1))),
        VectorField::Dprime if n == 2 => Ok(WeylOp::vector_field_term(2, Scalar::one(), z(1), z(2))),
        _ => Err(Error::InvalidConstruction(format!("{which:?} is not defined for n = {n}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaMode {
    Formal,
    Value(BigRational),
}

impl LambdaMode {
    fn exponent(&self, e: AffineExponent) -> AffineExponent {
        match self {
            LambdaMode::Formal => e,
            LambdaMode::Value(v) => e.specialize(v),
        }
    }

    /// `-λ` as an exponent.
    pub fn minus_lambda(&self) -> AffineExponent {
        self.exponent(AffineExponent::from_ratios(0, 1, -1, 1))
    }
}

impl fmt::Display for LambdaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaMode::Formal => write!(f, "formal"),
            LambdaMode::Value(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `D^l (|z_{n-1}|^{2-λ} δ(z_n))`.
    T,
    /// `D̄^l (|z_{n-1}|^{2-λ} δ(z_n))`.
    Tbar,
    /// `D_j^l (|z_j|^{2(n-j)-λ} Π_{k>j} δ(z_k))`.
    Tj(usize),
    /// `(z_1 ∂_{z_2})^l δ(z_2)` in dimension 2, degree -2.
    T2,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::T => write!(f, "T"),
            Family::Tbar => write!(f, "Tbar"),
            Family::Tj(j) => write!(f, "Tj{j}"),
            Family::T2 => write!(f, "T2"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub n: usize,
    pub family: Family,
    pub l: u32,
    pub lambda: LambdaMode,
}

impl FamilySpec {
    pub fn new(n: usize, family: Family, l: u32, lambda: LambdaMode) -> Self {
        Self { n, family, l, lambda }
    }

    pub fn with_order(&self, l: u32) -> Self {
        Self { l, ..self.clone() }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self.family {
            Family::T | Family::Tbar => self.n >= 3,
            Family::Tj(j) => self.n >= 3 && (2..self.n).contains(&j),
            Family::T2 => {
                self.n == 2
                    && match &self.lambda {
                        LambdaMode::Formal => true,
                        LambdaMode::Value(v) => v == &BigRational::from_integer(2.into()),
                    }
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConstruction(format!(
                "family {} with n = {}, λ = {}",
                self.family, self.n, self.lambda
            )))
        }
    }

    /// The degree every member should have; `T2` lives at λ = 2 only.
    pub fn expected_degree(&self) -> AffineExponent {
        match self.family {
            Family::T2 => AffineExponent::from_ratios(-2, 1, 0, 1),
            _ => self.lambda.minus_lambda(),
        }
    }

    pub fn operator(&self) -> Result<WeylOp> {
        self.validate()?;
        let which = match self.family {
            Family::T => VectorField::D,
            Family::Tbar => VectorField::Dbar,
            Family::Tj(j) => VectorField::Dj(j),
            Family::T2 => VectorField::Dprime,
        };
        build_vector_field(which, self.n)
    }

    pub fn base(&self) -> Result<DistExpr> {
        self.validate()?;
        let n = self.n;
        let (carrier, first_delta, sigma) = match self.family {
            Family::T | Family::Tbar => (Some(n - 1), n, AffineExponent::from_ratios(1, 1, -1, 2)),
            Family::Tj(j) => (Some(j), j + 1, AffineExponent::from_ratios((n - j) as i64, 1, -1, 2)),
            Family::T2 => (None, 2, AffineExponent::zero()),
        };
        let mut t = DistTerm::new(n, Scalar::one());
        if let Some(c) = carrier {
            t = t.power(c, self.lambda.exponent(sigma))?;
        }
        for k in first_delta..=n {
            t = t.delta(k, 0, 0)?;
        }
        Ok(crate::distributions::normalize(&DistExpr::from_terms(n, vec![t])))
    }

    pub fn label(&self) -> String {
        format!("{}/n{}/l{}/lambda={}", self.family, self.n, self.l, self.lambda)
    }
}

/// The family member of order `spec.l`, carrying its factored form.
pub fn build_family(spec: &FamilySpec) -> Result<DistExpr> {
    let op = spec.operator()?;
    let base = spec.base()?;
    let mut acc = base.clone().with_factored(op.clone(), 0, base);
    for _ in 0..spec.l {
        acc = apply_weyl(&op, &acc)?;
    }
    Ok(acc)
}

/// All members of orders `0..=lmax`.
pub fn build_family_members(spec: &FamilySpec, lmax: u32) -> Result<Vec<DistExpr>> {
    let op = spec.operator()?;
    let base = spec.base()?;
    let mut acc = base.clone().with_factored(op.clone(), 0, base);
    let mut out = Vec::with_capacity(lmax as usize + 1);
    for l in 0..=lmax {
        if l > 0 {
            acc = apply_weyl(&op, &acc)?;
        }
        out.push(acc.clone());
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Outcome of one named check with a JSON witness or counterexample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub statement: String,
    #[serde(rename = "paper_ref")]
    pub claim: String,
    pub status: Status,
    pub details: Value,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, statement: impl Into<String>, claim: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            statement: statement.into(),
            claim: claim.into(),
            status: Status::Skipped,
            details: Value::Null,
        }
    }

    pub fn finish(mut self, passed: bool, details: Value) -> Self {
        self.status = if passed { Status::Pass } else { Status::Fail };
        self.details = details;
        self
    }

    pub fn failed_with(mut self, err: &Error) -> Self {
        self.status = Status::Fail;
        self.details = json!({ "error": err.to_string() });
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn run(record: CheckRecord, body: impl FnOnce() -> Result<(bool, Value)>) -> CheckRecord {
    match body() {
        Ok((passed, details)) => record.finish(passed, details),
        Err(e) => record.failed_with(&e),
    }
}

fn term_list(e: &DistExpr) -> Vec<String> {
    e.terms().iter().map(ToString::to_string).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftedField {
    D,
    Dprime,
}

/// The expected image of `D` (resp. `D'`) under the first shift `h_1(a)`.
pub fn shifted_field_expected(n: usize, which: ShiftedField) -> Result<WeylOp> {
    let a = Scalar::param(1);
    let ab = Scalar::param_conj(1);
    let vf = |c: Scalar, mul: usize, d: usize| WeylOp::vector_field_term(n, c, mul, d);
    match which {
        ShiftedField::D => {
            let d = build_vector_field(VectorField::D, n)?;
            // a(z̄_{n-2} - ā z_{n-1} + |a|² z̄_n) ∂_{z_{n-2}} - a z̄_n ∂_{z_n}
            Ok(d.add(&vf(a.clone(), zbar(n - 2), z(n - 2)))
                .add(&vf(&(&a * &ab) * &Scalar::int(-1), z(n - 1), z(n - 2)))
                .add(&vf(&(&a * &a) * &ab, zbar(n), z(n - 2)))
                .add(&vf(&a * &Scalar::int(-1), zbar(n), z(n))))
        }
        ShiftedField::Dprime => {
            let d = build_vector_field(VectorField::Dprime, n)?;
            // ā(z_1 - a z̄_2) ∂_{z̄_1} - a z̄_2 ∂_{z_2}
            Ok(d.add(&vf(ab.clone(), z(1), zbar(1)))
                .add(&vf(&(&a * &ab) * &Scalar::int(-1), zbar(2), zbar(1)))
                .add(&vf(&a * &Scalar::int(-1), zbar(2), z(2))))
        }
    }
}

/// Conjugates the field by `h_1(a)` with formal `a` and compares with the
/// expected operator term by term.
pub fn verify_shifted_field(n: usize, which: ShiftedField) -> CheckRecord {
    let (id, field) = match which {
        ShiftedField::D => (format!("lemma-d/D/n{n}"), "D"),
        ShiftedField::Dprime => (format!("lemma-d/Dprime/n{n}"), "D'"),
    };
    let record = CheckRecord::new(
        id,
        format!("h_1(a)·{field} equals the displayed operator, symbolically in a and conj(a)"),
        "conjugation of the vector field by the first shift",
    );
    run(record, || {
        let d = match which {
            ShiftedField::D => build_vector_field(VectorField::D, n)?,
            ShiftedField::Dprime => build_vector_field(VectorField::Dprime, n)?,
        };
        let g = HGenerator::Shift { j: 1, a: Scalar::param(1) }.matrix(n);
        let sub = substitution_from_group(&g, false)?;
        let got = conjugate_op(&d, &sub)?;
        let expected = shifted_field_expected(n, which)?;
        let diff = got.sub(&expected);
        Ok((
            diff.is_zero(),
            json!({ "n": n, "conjugated": got.to_string(), "difference": diff.to_string() }),
        ))
    })
}

fn generator_list(n: usize) -> Vec<HGenerator> {
    let mut gens = vec![HGenerator::Phase(1)];
    gens.extend((1..n).map(|j| HGenerator::Shift { j, a: Scalar::param(1) }));
    gens
}

/// Products of one to four generators with rational parameters.
pub fn random_composites(n: usize, count: usize, seed: u64) -> Vec<(String, REpsMatrix)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=4);
            let mut g = REpsMatrix::identity(n);
            let mut labels = Vec::with_capacity(len);
            for _ in 0..len {
                let gen = if n < 2 || rng.gen_bool(0.3) {
                    HGenerator::Phase(rng.gen_range(-3..=3))
                } else {
                    HGenerator::Shift {
                        j: rng.gen_range(1..n),
                        a: random_gauss(&mut rng),
                    }
                };
                labels.push(gen.label());
                g = g.mul(&gen.matrix(n));
            }
            (labels.join("*"), g)
        })
        .collect()
}

/// Every member of order `0..=spec.l` is fixed by all generators (formal
/// parameters) and by `composites` random products; also checks zero U(1)
/// weights, evenness, the expected degree and factored-form consistency.
pub fn verify_invariance(spec: &FamilySpec, composites: usize, seed: u64) -> CheckRecord {
    let record = CheckRecord::new(
        format!("invariance/{}", spec.label()),
        format!(
            "members of order 0..={} of family {} are fixed by h(θ), h_j(a) and random products",
            spec.l, spec.family
        ),
        "invariance of the delta-supported family under H",
    );
    run(record, || {
        let members = build_family_members(spec, spec.l)?;
        let gens = generator_list(spec.n);
        let extra = random_composites(spec.n, composites, seed);
        let mut failures = Vec::new();
        let mut checked = 0usize;
        let expected_degree = spec.expected_degree();
        for (l, e) in members.iter().enumerate() {
            let group_elements = gens.iter().map(|g| (g.label(), g.matrix(spec.n))).chain(extra.iter().cloned());
            for (label, g) in group_elements {
                let image = act_group(&g, e)?;
                checked += 1;
                if &image != e {
                    let residual = image.sub(e);
                    failures.push(json!({ "order": l, "element": label, "residual": term_list(&residual) }));
                }
            }
            if u1_weight(e).iter().any(|&w| w != 0) {
                failures.push(json!({ "order": l, "side_check": "u1 weight" }));
            }
            if parity(e) != Parity::Even {
                failures.push(json!({ "order": l, "side_check": "parity" }));
            }
            if degree(e) != Homogeneity::Degree(expected_degree.clone()) {
                failures.push(json!({ "order": l, "side_check": "degree", "got": format!("{:?}", degree(e)) }));
            }
            if e.expand_factored().as_ref() != Some(e) {
                failures.push(json!({ "order": l, "side_check": "factored form" }));
            }
        }
        Ok((
            failures.is_empty(),
            json!({
                "orders": spec.l + 1,
                "group_checks": checked,
                "degree": expected_degree.to_string(),
                "normalization": "unnormalized: the 1/Gamma prefactor is omitted",
                "failures": failures,
            }),
        ))
    })
}

/// Rank of `{member_l}_{l=0..lmax}` over the λ-function field equals `lmax+1`.
pub fn verify_independence(spec: &FamilySpec, lmax: u32) -> CheckRecord {
    let record = CheckRecord::new(
        format!("independence/{}", spec.with_order(lmax).label()),
        format!("members of order 0..={lmax} of family {} are linearly independent", spec.family),
        "linear independence of the invariant family",
    );
    run(record, || {
        let members = build_family_members(spec, lmax)?;
        let rank = independence_rank(&members)?;
        Ok((
            rank == lmax as usize + 1,
            json!({ "rank": rank, "expected": lmax + 1, "lambda": spec.lambda.to_string() }),
        ))
    })
}

/// Every member of `T_{λ,j}` is supported on `X_j` and the family has full
/// rank.
pub fn verify_support_filtration(n: usize, j: usize, lmax: u32) -> CheckRecord {
    let record = CheckRecord::new(
        format!("support/n{n}/j{j}/l{lmax}"),
        format!("T_(λ,{j}) members of order 0..={lmax} are supported on X_{j} and independent"),
        "support filtration with infinite-dimensional quotients",
    );
    run(record, || {
        let spec = FamilySpec::new(n, Family::Tj(j), lmax, LambdaMode::Formal);
        let members = build_family_members(&spec, lmax)?;
        let expected_delta: BTreeSet<usize> = (j + 1..=n).collect();
        let mut bad = Vec::new();
        for (l, e) in members.iter().enumerate() {
            let s = formal_support(e);
            if s.stratum != Some(j) || s.delta_vars != expected_delta {
                bad.push(json!({ "order": l, "delta_vars": s.delta_vars, "stratum": s.stratum }));
            }
        }
        let rank = independence_rank(&members)?;
        let first_excluded = 2 + 2 * (n - j);
        Ok((
            bad.is_empty() && rank == lmax as usize + 1,
            json!({
                "delta_vars": expected_delta,
                "stratum": j,
                "rank": rank,
                "expected_rank": lmax + 1,
                "excluded_lambda": format!("2N + {first_excluded} (analytic condition, recorded but not verified)"),
                "mismatches": bad,
            }),
        ))
    })
}

/// Verdicts for the finiteness of orbits and the unbounded multiplicity
/// conditions; dimension 2 uses λ = 2, higher dimensions formal λ.
pub fn multiplicity_report(n: usize, lmax: u32, samples: usize, seed: u64) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let census = crate::orbits::enumerate_strata(n, samples, seed);
    let passed = census.as_ref().map(|c| c.passed()).unwrap_or(false);
    let record = CheckRecord::new(
        format!("multiplicity/n{n}/finite-orbits"),
        format!("H has exactly {n} orbits on the real projective space"),
        "finiteness of H-orbits on G/Q",
    );
    out.push(match census {
        Ok(c) => record.finish(passed, serde_json::to_value(&c).unwrap_or(Value::Null)),
        Err(e) => record.failed_with(&e),
    });
    let (family, lambda, label) = if n == 2 {
        (Family::T2, LambdaMode::Value(BigRational::from_integer(2.into())), "lambda-2")
    } else {
        (Family::T, LambdaMode::Formal, "all-lambda")
    };
    let spec = FamilySpec::new(n, family, lmax.min(3), lambda);
    let inv = verify_invariance(&spec, 0, seed);
    let ind = verify_independence(&spec, lmax);
    let ok = inv.passed() && ind.passed();
    let mut details = json!({ "invariance": inv.details, "independence": ind.details });
    if n == 2 {
        details["note"] = json!("only λ = 2 is certified; for other λ the invariant space is expected to have dimension at most 2");
    }
    out.push(
        CheckRecord::new(
            format!("multiplicity/n{n}/unbounded-multiplicity-{label}"),
            format!("the H-invariant {family} family is infinite, so Hom-spaces have unbounded dimension"),
            "unbounded multiplicity despite finitely many orbits",
        )
        .finish(ok, details),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(v: i64) -> LambdaMode {
        LambdaMode::Value(BigRational::from_integer(v.into()))
    }

    #[test]
    fn displayed_vector_fields() {
        let d = build_vector_field(VectorField::D, 3).unwrap();
        assert_eq!(d.to_string(), "[1] z2 d/dz3 + [1] zb1 d/dzb2");
        let dp = build_vector_field(VectorField::Dprime, 2).unwrap();
        assert_eq!(dp.to_string(), "[1] z1 d/dz2");
        let d2 = build_vector_field(VectorField::Dj(2), 4).unwrap();
        let expected = WeylOp::vector_field_term(4, Scalar::one(), zbar(1), zbar(2))
            .add(&WeylOp::vector_field_term(4, Scalar::one(), z(2), z(3)));
        assert_eq!(d2, expected);
        assert!(build_vector_field(VectorField::D, 2).is_err());
        assert!(build_vector_field(VectorField::Dj(3), 3).is_err());
    }

    #[test]
    fn base_members() {
        let t0 = build_family(&FamilySpec::new(3, Family::T, 0, LambdaMode::Formal)).unwrap();
        assert_eq!(t0.to_string(), "[1] (z2*zb2)^(1-1/2*lam) delta(z3)");
        let t2 = build_family(&FamilySpec::new(2, Family::T2, 0, lam(2))).unwrap();
        assert_eq!(t2.to_string(), "[1] delta(z2)");
        let tj = build_family(&FamilySpec::new(4, Family::Tj(3), 0, LambdaMode::Formal)).unwrap();
        assert_eq!(tj.to_string(), "[1] (z3*zb3)^(1-1/2*lam) delta(z4)");
        assert!(FamilySpec::new(2, Family::T2, 0, lam(4)).base().is_err());
    }

    #[test]
    fn second_dimension_family_is_holomorphic_power() {
        // (z1 ∂_{z2})^l δ = z1^l ∂^l_{z2} δ
        for l in 0..=4u32 {
            let e = build_family(&FamilySpec::new(2, Family::T2, l, lam(2))).unwrap();
            let expected = DistExpr::from_terms(2, vec![DistTerm::new(2, Scalar::one()).monomial(1, l, 0).delta(2, l, 0).unwrap()]);
            assert_eq!(e, crate::distributions::normalize(&expected));
        }
    }

    #[test]
    fn family_recursion_matches_single_application() {
        for spec in [
            FamilySpec::new(3, Family::T, 0, LambdaMode::Formal),
            FamilySpec::new(4, Family::Tj(2), 0, LambdaMode::Formal),
            FamilySpec::new(3, Family::Tbar, 0, lam(3)),
        ] {
            for l in 1..=3 {
                let prev = build_family(&spec.with_order(l - 1)).unwrap();
                let next = build_family(&spec.with_order(l)).unwrap();
                assert_eq!(apply_weyl(&spec.operator().unwrap(), &prev).unwrap(), next);
            }
        }
    }

    #[test]
    fn lemma_d_identities() {
        for n in 3..=5 {
            let r = verify_shifted_field(n, ShiftedField::D);
            assert!(r.passed(), "{:?}", r.details);
        }
        let r = verify_shifted_field(2, ShiftedField::Dprime);
        assert!(r.passed(), "{:?}", r.details);
    }

    #[test]
    fn lemma_d_detects_a_wrong_sign() {
        let n = 3;
        let d = build_vector_field(VectorField::D, n).unwrap();
        let g = HGenerator::Shift { j: 1, a: Scalar::param(1) }.matrix(n);
        let got = conjugate_op(&d, &substitution_from_group(&g, false).unwrap()).unwrap();
        let wrong = shifted_field_expected(n, ShiftedField::D)
            .unwrap()
            .add(&WeylOp::vector_field_term(n, Scalar::int(2) * Scalar::param(1), zbar(n), z(n)));
        assert!(!got.sub(&wrong).is_zero());
    }

    #[test]
    fn invariance_of_small_families() {
        let specs = [
            FamilySpec::new(3, Family::T, 3, LambdaMode::Formal),
            FamilySpec::new(3, Family::Tbar, 2, LambdaMode::Formal),
            FamilySpec::new(2, Family::T2, 4, lam(2)),
            FamilySpec::new(4, Family::Tj(2), 2, LambdaMode::Formal),
        ];
        for spec in &specs {
            let r = verify_invariance(spec, 5, 11);
            assert!(r.passed(), "{}: {}", spec.label(), r.details);
        }
    }

    #[test]
    fn invariance_check_fails_on_a_non_invariant_expression() {
        // z̄_{n-1}-weighted variant is not fixed by the phase
        let e = DistExpr::from_terms(3, vec![DistTerm::new(3, Scalar::one()).monomial(2, 1, 0).delta(3, 0, 0).unwrap()]);
        let g = HGenerator::Phase(1).matrix(3);
        assert_ne!(act_group(&g, &e).unwrap(), e);
    }

    #[test]
    fn independence_examples() {
        assert!(verify_independence(&FamilySpec::new(3, Family::T, 0, LambdaMode::Formal), 5).passed());
        assert!(verify_independence(&FamilySpec::new(2, Family::T2, 0, lam(2)), 5).passed());
        let t0 = build_family(&FamilySpec::new(3, Family::T, 0, LambdaMode::Formal)).unwrap();
        assert_eq!(independence_rank(&[t0.clone(), t0.scale(&Scalar::int(2))]).unwrap(), 1);
    }

    #[test]
    fn support_filtration_examples() {
        let r = verify_support_filtration(4, 2, 3);
        assert!(r.passed(), "{}", r.details);
        assert_eq!(r.details["delta_vars"], json!([3, 4]));
        assert!(verify_support_filtration(3, 2, 3).passed());
        let r = verify_support_filtration(4, 3, 0);
        assert!(r.passed());
        assert_eq!(r.details["delta_vars"], json!([4]));
    }

    #[test]
    fn check_record_round_trips_through_json() {
        let r = verify_shifted_field(3, ShiftedField::D);
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"paper_ref\""));
        assert!(text.contains("\"status\":\"pass\""));
        let back: CheckRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
