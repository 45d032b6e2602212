//! Delta-supported homogeneous distribution expressions on `ℂ^n ∖ {0}`.
//!
//! A term is a coefficient times a product of per-variable factors. A free
//! variable carries `z^p z̄^q (z z̄)^σ`; a delta variable carries
//! `∂^α ∂̄^β δ(z_k, z̄_k)`. Pairing convention for one delta variable:
//! `⟨∂^α∂̄^β δ, z^p z̄^q⟩ = (-1)^{α+β} α! β!` if `(p, q) = (α, β)`, else 0.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::clifford::REpsMatrix;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalars::{generalized_binomial, rank_over_function_field, AffineExponent, Scalar};
use crate::weyl::{self, substitution_from_group, Poly, Substitution, WeylOp};

/// Canonical content of one variable slot.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarFactor {
    pub p: u32,
    pub q: u32,
    pub power: Option<AffineExponent>,
    pub delta: Option<(u32, u32)>,
}

impl VarFactor {
    pub fn is_trivial(&self) -> bool {
        self.p == 0 && self.q == 0 && self.power.is_none() && self.delta.is_none()
    }
}

/// One summand: coefficient × Π_j factor_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistTerm {
    coeff: Scalar,
    factors: Vec<VarFactor>,
}

impl DistTerm {
    pub fn new(n: usize, coeff: Scalar) -> Self {
        Self {
            coeff,
            factors: vec![VarFactor::default(); n],
        }
    }

    /// Multiplies by `z_j^p z̄_j^q` (also allowed on delta variables before
    /// normalization).
    pub fn monomial(mut self, j: usize, p: u32, q: u32) -> Self {
        let f = &mut self.factors[j - 1];
        f.p += p;
        f.q += q;
        self
    }

    /// Multiplies by `(z_j z̄_j)^σ`.
    pub fn power(mut self, j: usize, sigma: AffineExponent) -> Result<Self> {
        let f = &mut self.factors[j - 1];
        if f.delta.is_some() {
            return Err(Error::InvalidTerm(format!("power factor on delta variable z{j}")));
        }
        f.power = Some(match f.power.take() {
            Some(s) => s + sigma,
            None => sigma,
        });
        Ok(self)
    }

    /// Multiplies by `∂^α ∂̄^β δ(z_k, z̄_k)`.
    pub fn delta(mut self, k: usize, alpha: u32, beta: u32) -> Result<Self> {
        let f = &mut self.factors[k - 1];
        if f.power.is_some() || f.delta.is_some() {
            return Err(Error::InvalidTerm(format!("z{k} already carries a power or delta")));
        }
        f.delta = Some((alpha, beta));
        Ok(self)
    }

    pub fn coeff(&self) -> &Scalar {
        &self.coeff
    }

    pub fn factors(&self) -> &[VarFactor] {
        &self.factors
    }

    pub fn delta_vars(&self) -> BTreeSet<usize> {
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, f)| f.delta.is_some())
            .map(|(i, _)| i + 1)
            .collect()
    }

    fn delta_order(&self) -> u32 {
        self.factors.iter().filter_map(|f| f.delta).map(|(a, b)| a + b).sum()
    }
}

/// `(op)^power applied to base`, kept alongside the expanded terms.
#[derive(Clone, Debug)]
pub struct Factored {
    pub op: WeylOp,
    pub power: u32,
    pub base: Box<DistExpr>,
}

/// A finite sum of distribution terms.
///
/// Equality compares dimension and term lists only; after [`normalize`] the
/// term list is canonical.
#[derive(Clone, Debug)]
pub struct DistExpr {
    n: usize,
    terms: Vec<DistTerm>,
    factored: Option<Factored>,
}

impl PartialEq for DistExpr {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.terms == other.terms
    }
}

impl Eq for DistExpr {}

/// Order in which the two annihilation rules are applied inside a delta slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteOrder {
    HolomorphicFirst,
    AntiholomorphicFirst,
}

impl DistExpr {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: Vec::new(),
            factored: None,
        }
    }

    /// Wraps raw terms; call [`normalize`] for the canonical form.
    pub fn from_terms(n: usize, terms: Vec<DistTerm>) -> Self {
        assert!(terms.iter().all(|t| t.factors.len() == n), "term dimension mismatch");
        Self {
            n,
            terms,
            factored: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[DistTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn factored(&self) -> Option<&Factored> {
        self.factored.as_ref()
    }

    pub fn with_factored(mut self, op: WeylOp, power: u32, base: DistExpr) -> Self {
        self.factored = Some(Factored {
            op,
            power,
            base: Box::new(base),
        });
        self
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| DistTerm {
                coeff: &t.coeff * c,
                factors: t.factors.clone(),
            })
            .collect();
        normalize(&Self::from_terms(self.n, terms))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        normalize(&Self::from_terms(self.n, terms))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    /// Expands the factored form, if any, and normalizes it.
    pub fn expand_factored(&self) -> Option<DistExpr> {
        let f = self.factored.as_ref()?;
        let mut acc = f.base.as_ref().clone();
        for _ in 0..f.power {
            acc = apply_weyl(&f.op, &acc).ok()?;
        }
        Some(acc)
    }
}

// Raw per-variable content; exponents may be negative while a power factor
// is present.
#[derive(Clone, Debug, Default, PartialEq)]
struct RawFactor {
    p: i64,
    q: i64,
    power: Option<AffineExponent>,
    delta: Option<(u32, u32)>,
}

impl RawFactor {
    fn from_canonical(f: &VarFactor) -> Self {
        Self {
            p: f.p as i64,
            q: f.q as i64,
            power: f.power.clone(),
            delta: f.delta,
        }
    }

    fn mul(&self, other: &Self) -> Result<Self> {
        let power = match (&self.power, &other.power) {
            (Some(a), Some(b)) => Some(a + b),
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        let delta = match (self.delta, other.delta) {
            (Some(_), Some(_)) => return Err(Error::InvalidTerm("product of two deltas in one variable".into())),
            (a, b) => a.or(b),
        };
        Ok(Self {
            p: self.p + other.p,
            q: self.q + other.q,
            power,
            delta,
        })
    }
}

type FactorCombo = Vec<(Scalar, VarFactor)>;

/// `z^p ∂^α … δ` rewritten by `z·∂^α δ = -α ∂^{α-1} δ` one step at a time.
fn reduce_delta(p: u32, q: u32, alpha: u32, beta: u32, order: RewriteOrder) -> Option<(Scalar, u32, u32)> {
    let mut coeff = Scalar::one();
    let (mut a, mut b) = (alpha, beta);
    let mut steps = match order {
        RewriteOrder::HolomorphicFirst => [(true, p), (false, q)],
        RewriteOrder::AntiholomorphicFirst => [(false, q), (true, p)],
    };
    for (holo, count) in steps.iter_mut() {
        for _ in 0..*count {
            let order = if *holo { &mut a } else { &mut b };
            if *order == 0 {
                return None;
            }
            coeff = &coeff * &Scalar::int(-(*order as i64));
            *order -= 1;
        }
    }
    Some((coeff, a, b))
}

fn canonical_factor(raw: &RawFactor, order: RewriteOrder) -> Result<FactorCombo> {
    if let Some((alpha, beta)) = raw.delta {
        if raw.power.is_some() {
            return Err(Error::InvalidTerm("power factor on a delta variable".into()));
        }
        if raw.p < 0 || raw.q < 0 {
            return Err(Error::InvalidTerm("negative exponent on a delta variable".into()));
        }
        return Ok(reduce_delta(raw.p as u32, raw.q as u32, alpha, beta, order)
            .map(|(c, a, b)| {
                vec![(
                    c,
                    VarFactor {
                        delta: Some((a, b)),
                        ..VarFactor::default()
                    },
                )]
            })
            .unwrap_or_default());
    }
    let (mut p, mut q) = (raw.p, raw.q);
    let mut power = raw.power.clone();
    if let Some(sigma) = power.take() {
        // z^p z̄^q (zz̄)^σ with min(p, q) absorbed into σ
        let m = p.min(q);
        p -= m;
        q -= m;
        let sigma = sigma.shift(m);
        match sigma.as_nonneg_integer() {
            Some(r) => {
                p += r as i64;
                q += r as i64;
            }
            None => power = Some(sigma),
        }
    }
    if p < 0 || q < 0 {
        return Err(Error::InvalidTerm("negative exponent without a power factor".into()));
    }
    Ok(vec![(
        Scalar::one(),
        VarFactor {
            p: p as u32,
            q: q as u32,
            power,
            delta: None,
        },
    )])
}

fn accumulate(
    out: &mut BTreeMap<Vec<VarFactor>, Scalar>,
    coeff: Scalar,
    raw: &[RawFactor],
    order: RewriteOrder,
) -> Result<()> {
    if coeff.is_zero() {
        return Ok(());
    }
    let mut partial: Vec<(Scalar, Vec<VarFactor>)> = vec![(coeff, Vec::with_capacity(raw.len()))];
    for r in raw {
        let combo = canonical_factor(r, order)?;
        let mut next = Vec::with_capacity(partial.len() * combo.len());
        for (c, fs) in &partial {
            for (c2, f) in &combo {
                let mut fs = fs.clone();
                fs.push(f.clone());
                next.push((c * c2, fs));
            }
        }
        partial = next;
        if partial.is_empty() {
            return Ok(());
        }
    }
    for (c, fs) in partial {
        let entry = out.entry(fs.clone()).or_default();
        entry.add_assign_ref(&c);
        if entry.is_zero() {
            out.remove(&fs);
        }
    }
    Ok(())
}

fn collect(n: usize, map: BTreeMap<Vec<VarFactor>, Scalar>) -> DistExpr {
    let terms = map
        .into_iter()
        .map(|(factors, coeff)| DistTerm { coeff, factors })
        .collect();
    DistExpr::from_terms(n, terms)
}

/// Canonical form using the given rule order inside delta slots.
pub fn normalize_with(e: &DistExpr, order: RewriteOrder) -> Result<DistExpr> {
    let mut map = BTreeMap::new();
    for t in &e.terms {
        let raw: Vec<RawFactor> = t.factors.iter().map(RawFactor::from_canonical).collect();
        accumulate(&mut map, t.coeff.clone(), &raw, order)?;
    }
    let mut out = collect(e.n, map);
    out.factored = e.factored.clone();
    Ok(out)
}

/// Canonical form: delta annihilation applied exhaustively, power factors
/// folded, like terms merged and sorted.
///
/// Panics only if a term was built with a power factor on a delta variable,
/// which the [`DistTerm`] builders refuse.
pub fn normalize(e: &DistExpr) -> DistExpr {
    normalize_with(e, RewriteOrder::HolomorphicFirst).expect("term builders keep terms well formed")
}

/// `∂/∂z` (holomorphic) or `∂/∂z̄` on one canonical factor.
fn differentiate_factor(f: &VarFactor, holo: bool) -> Vec<(Scalar, RawFactor)> {
    let mut raw = RawFactor::from_canonical(f);
    if let Some((a, b)) = raw.delta {
        raw.delta = Some(if holo { (a + 1, b) } else { (a, b + 1) });
        return vec![(Scalar::one(), raw)];
    }
    let mut out = Vec::new();
    let own = if holo { raw.p } else { raw.q };
    if own > 0 {
        let mut r = raw.clone();
        if holo {
            r.p -= 1;
        } else {
            r.q -= 1;
        }
        out.push((Scalar::int(own), r));
    }
    if let Some(sigma) = &raw.power {
        // ∂_z (zz̄)^σ = σ z̄ (zz̄)^{σ-1}
        let mut r = raw.clone();
        if holo {
            r.q += 1;
        } else {
            r.p += 1;
        }
        r.power = Some(sigma.shift(-1));
        out.push((sigma.to_scalar(), r));
    }
    out
}

fn act_on_factor(f: &VarFactor, mul: (u32, u32), deriv: (u32, u32)) -> Result<FactorCombo> {
    let mut combo: FactorCombo = vec![(Scalar::one(), f.clone())];
    for (holo, count) in [(true, deriv.0), (false, deriv.1)] {
        for _ in 0..count {
            let mut next: BTreeMap<VarFactor, Scalar> = BTreeMap::new();
            for (c, f) in &combo {
                for (c2, raw) in differentiate_factor(f, holo) {
                    for (c3, g) in canonical_factor(&raw, RewriteOrder::HolomorphicFirst)? {
                        let entry = next.entry(g).or_default();
                        entry.add_assign_ref(&(&(c * &c2) * &c3));
                    }
                }
            }
            combo = next.into_iter().filter(|(_, c)| !c.is_zero()).map(|(f, c)| (c, f)).collect();
        }
    }
    if mul == (0, 0) {
        return Ok(combo);
    }
    let mut out = Vec::new();
    for (c, f) in combo {
        let mut raw = RawFactor::from_canonical(&f);
        raw.p += mul.0 as i64;
        raw.q += mul.1 as i64;
        for (c2, g) in canonical_factor(&raw, RewriteOrder::HolomorphicFirst)? {
            out.push((&c * &c2, g));
        }
    }
    Ok(out)
}

/// Applies a polynomial-coefficient operator by the Leibniz rule, then
/// normalizes.
pub fn apply_weyl(d: &WeylOp, e: &DistExpr) -> Result<DistExpr> {
    let n = e.n;
    if d.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: d.dim() });
    }
    let mut map: BTreeMap<Vec<VarFactor>, Scalar> = BTreeMap::new();
    for (key, c) in d.terms() {
        for t in &e.terms {
            let mut partial: Vec<(Scalar, Vec<VarFactor>)> = vec![(c * &t.coeff, Vec::with_capacity(n))];
            for j in 1..=n {
                let mul = (key.mono[weyl::z(j)], key.mono[weyl::zbar(j)]);
                let deriv = (key.deriv[weyl::z(j)], key.deriv[weyl::zbar(j)]);
                let f = &t.factors[j - 1];
                let combo = if mul == (0, 0) && deriv == (0, 0) {
                    vec![(Scalar::one(), f.clone())]
                } else {
                    act_on_factor(f, mul, deriv)?
                };
                let mut next = Vec::with_capacity(partial.len() * combo.len());
                for (c1, fs) in &partial {
                    for (c2, g) in &combo {
                        let mut fs = fs.clone();
                        fs.push(g.clone());
                        next.push((c1 * c2, fs));
                    }
                }
                partial = next;
            }
            for (coef, fs) in partial {
                if coef.is_zero() {
                    continue;
                }
                let entry = map.entry(fs.clone()).or_default();
                entry.add_assign_ref(&coef);
                if entry.is_zero() {
                    map.remove(&fs);
                }
            }
        }
    }
    let mut out = collect(n, map);
    if let Some(f) = &e.factored {
        if &f.op == d {
            out.factored = Some(Factored {
                op: f.op.clone(),
                power: f.power + 1,
                base: f.base.clone(),
            });
        }
    }
    Ok(out)
}

/// Pullback `(g·T)(φ) = T(g⁻¹·φ)`.
///
/// With a factored form the conjugated operator is applied to the transformed
/// base; otherwise the terms are transformed one by one, see
/// [`act_group_termwise`].
pub fn act_group(g: &REpsMatrix, e: &DistExpr) -> Result<DistExpr> {
    match &e.factored {
        Some(f) => {
            let sub = substitution_from_group(g, false)?;
            let op = weyl::conjugate_op(&f.op, &sub)?;
            let base = act_group_termwise(g, &f.base)?;
            let mut acc = base.clone();
            for _ in 0..f.power {
                acc = apply_weyl(&op, &acc)?;
            }
            acc.factored = Some(Factored {
                op,
                power: f.power,
                base: Box::new(base),
            });
            Ok(acc)
        }
        None => act_group_termwise(g, e),
    }
}

/// Termwise pullback: free monomials are substituted, power factors are
/// jet-expanded in the delta variables up to the total delta order, and
/// delta derivatives are transformed by the chain rule.
pub fn act_group_termwise(g: &REpsMatrix, e: &DistExpr) -> Result<DistExpr> {
    let n = e.n;
    if g.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: g.dim() });
    }
    let sub = substitution_from_group(g, false)?;
    if !sub.unimodular {
        return Err(Error::UnsupportedSubstitution("determinant is not 1".into()));
    }
    let mut map = BTreeMap::new();
    for t in &e.terms {
        for (coeff, raw) in transform_term(&sub, t)? {
            accumulate(&mut map, coeff, &raw, RewriteOrder::HolomorphicFirst)?;
        }
    }
    Ok(collect(n, map))
}

fn symbols_of(vars: &BTreeSet<usize>) -> Vec<usize> {
    vars.iter().flat_map(|&k| [weyl::z(k), weyl::zbar(k)]).collect()
}

fn check_delta_block(sub: &Substitution, delta: &BTreeSet<usize>) -> Result<()> {
    let syms = symbols_of(delta);
    for &t in &syms {
        for (r, c) in sub.inverse[t].iter().enumerate() {
            if !c.is_zero() && !syms.contains(&r) {
                return Err(Error::UnsupportedSubstitution(format!(
                    "delta variable z{} picks up a dependence outside the delta block",
                    t / 2 + 1
                )));
            }
        }
    }
    let block: Vec<Vec<Scalar>> = syms
        .iter()
        .map(|&t| syms.iter().map(|&r| sub.inverse[t][r].clone()).collect())
        .collect();
    if !linalg::determinant(&block).is_one() {
        return Err(Error::UnsupportedSubstitution("delta block does not have determinant 1".into()));
    }
    Ok(())
}

fn poly_to_raw(n: usize, p: &Poly) -> Vec<(Scalar, Vec<RawFactor>)> {
    p.terms()
        .map(|(e, c)| {
            let raw = (1..=n)
                .map(|j| RawFactor {
                    p: e[weyl::z(j)] as i64,
                    q: e[weyl::zbar(j)] as i64,
                    ..RawFactor::default()
                })
                .collect();
            (c.clone(), raw)
        })
        .collect()
}

fn mul_raw(
    a: &[(Scalar, Vec<RawFactor>)],
    b: &[(Scalar, Vec<RawFactor>)],
) -> Result<Vec<(Scalar, Vec<RawFactor>)>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (c1, f1) in a {
        for (c2, f2) in b {
            let fs = f1.iter().zip(f2).map(|(x, y)| x.mul(y)).collect::<Result<Vec<_>>>()?;
            out.push((c1 * c2, fs));
        }
    }
    Ok(out)
}

fn delta_degree(raw: &[RawFactor], delta: &BTreeSet<usize>) -> i64 {
    delta.iter().map(|&k| raw[k - 1].p + raw[k - 1].q).sum()
}

fn transform_term(sub: &Substitution, t: &DistTerm) -> Result<Vec<(Scalar, Vec<RawFactor>)>> {
    let n = sub.n;
    let delta = t.delta_vars();
    let max_order = t.delta_order() as i64;
    check_delta_block(sub, &delta)?;
    let delta_syms = symbols_of(&delta);
    let one = || vec![RawFactor::default(); n];

    let mut acc: Vec<(Scalar, Vec<RawFactor>)> = vec![(t.coeff.clone(), one())];
    let prune = |v: Vec<(Scalar, Vec<RawFactor>)>| -> Vec<(Scalar, Vec<RawFactor>)> {
        v.into_iter()
            .filter(|(c, raw)| !c.is_zero() && delta_degree(raw, &delta) <= max_order)
            .collect()
    };

    for j in 1..=n {
        let f = &t.factors[j - 1];
        if f.delta.is_some() || f.is_trivial() {
            continue;
        }
        // monomial part: substitute the inverse map
        if f.p > 0 || f.q > 0 {
            let mut exps = vec![0; 2 * n];
            exps[weyl::z(j)] = f.p;
            exps[weyl::zbar(j)] = f.q;
            let poly = Poly::monomial(n, exps, Scalar::one()).substitute(&sub.inverse);
            acc = prune(mul_raw(&acc, &poly_to_raw(n, &poly))?);
        }
        if let Some(sigma) = &f.power {
            let expansion = jet_expand(sub, j, sigma, &delta_syms, max_order)?;
            acc = prune(mul_raw(&acc, &expansion)?);
        }
    }

    if !delta.is_empty() {
        // ∂_t ↦ Σ_m (∂φ_m/∂x_t) ∂_m, keeping delta directions only
        let mut derivs = Poly::constant(n, Scalar::one());
        for &k in &delta {
            let (alpha, beta) = t.factors[k - 1].delta.unwrap();
            for (sym, count) in [(weyl::z(k), alpha), (weyl::zbar(k), beta)] {
                if count == 0 {
                    continue;
                }
                let mut form = Poly::zero(n);
                for &m in &delta_syms {
                    let c = &sub.forward[m][sym];
                    if !c.is_zero() {
                        form = form.add(&Poly::var(n, m).scale(c));
                    }
                }
                derivs = derivs.mul(&form.pow(count));
            }
        }
        let delta_raw: Vec<(Scalar, Vec<RawFactor>)> = derivs
            .terms()
            .map(|(e, c)| {
                let mut raw = one();
                for &k in &delta {
                    raw[k - 1].delta = Some((e[weyl::z(k)], e[weyl::zbar(k)]));
                }
                (c.clone(), raw)
            })
            .collect();
        acc = mul_raw(&acc, &delta_raw)?;
    }
    Ok(acc)
}

/// `(L L̄)^σ` for `L = c z_j + w`, `w` linear in the delta symbols, as
/// `Σ_{k+m ≤ N} C(σ,k) C(σ,m) c̄^k c^m w^k w̄^m z_j^{-k} z̄_j^{-m} (z_j z̄_j)^σ`.
fn jet_expand(
    sub: &Substitution,
    j: usize,
    sigma: &AffineExponent,
    delta_syms: &[usize],
    max_order: i64,
) -> Result<Vec<(Scalar, Vec<RawFactor>)>> {
    let n = sub.n;
    let row = &sub.inverse[weyl::z(j)];
    let c = row[weyl::z(j)].clone();
    for (r, x) in row.iter().enumerate() {
        if r == weyl::z(j) || x.is_zero() || delta_syms.contains(&r) {
            continue;
        }
        return Err(Error::UnsupportedSubstitution(format!(
            "power factor base z{j} picks up a dependence on a non-delta symbol"
        )));
    }
    if !(&c * &c.conj()).is_one() {
        return Err(Error::UnsupportedSubstitution(format!(
            "power factor base z{j} has leading coefficient {c} of modulus other than 1"
        )));
    }
    let mut w = Poly::zero(n);
    for &r in delta_syms {
        if !row[r].is_zero() {
            w = w.add(&Poly::var(n, r).scale(&row[r]));
        }
    }
    let wbar_row = &sub.inverse[weyl::zbar(j)];
    let mut wbar = Poly::zero(n);
    for &r in delta_syms {
        if !wbar_row[r].is_zero() {
            wbar = wbar.add(&Poly::var(n, r).scale(&wbar_row[r]));
        }
    }
    let cbar = c.conj();
    let mut out = Vec::new();
    let top = if w.is_zero() && wbar.is_zero() { 0 } else { max_order.max(0) as u32 };
    for k in 0..=top {
        for m in 0..=(top - k) {
            let coeff = &(&generalized_binomial(sigma, k) * &generalized_binomial(sigma, m))
                * &(&cbar.pow(k) * &c.pow(m));
            if coeff.is_zero() {
                continue;
            }
            let jet = w.pow(k).mul(&wbar.pow(m)).scale(&coeff);
            for (cc, mut raw) in poly_to_raw(n, &jet) {
                let f = &mut raw[j - 1];
                f.p -= k as i64;
                f.q -= m as i64;
                f.power = Some(sigma.clone());
                out.push((cc, raw));
            }
        }
    }
    Ok(out)
}

/// Result of [`degree`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Degree(AffineExponent),
    Inhomogeneous,
}

fn term_degree(t: &DistTerm) -> AffineExponent {
    let mut d = AffineExponent::zero();
    for f in &t.factors {
        match f.delta {
            Some((a, b)) => d = d.shift(-2 - (a + b) as i64),
            None => {
                d = d.shift((f.p + f.q) as i64);
                if let Some(s) = &f.power {
                    d = &d + &s.scale(&num::BigRational::from_integer(2.into()));
                }
            }
        }
    }
    d
}

/// Homogeneity degree of every term, if they agree.
pub fn degree(e: &DistExpr) -> Homogeneity {
    let mut degrees = e.terms.iter().map(term_degree);
    let Some(first) = degrees.next() else {
        return Homogeneity::Zero;
    };
    if degrees.all(|d| d == first) {
        Homogeneity::Degree(first)
    } else {
        Homogeneity::Inhomogeneous
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// Parity under `z ↦ -z`; the zero expression counts as even.
pub fn parity(e: &DistExpr) -> Parity {
    let mut seen = BTreeSet::new();
    for t in &e.terms {
        let s: u32 = t
            .factors
            .iter()
            .map(|f| match f.delta {
                Some((a, b)) => a + b,
                None => f.p + f.q,
            })
            .sum();
        seen.insert(s % 2);
    }
    match (seen.contains(&0), seen.contains(&1)) {
        (_, false) => Parity::Even,
        (false, true) => Parity::Odd,
        (true, true) => Parity::Mixed,
    }
}

/// `Σ(p - q) - Σ(α - β)` per term: the character by which phases act.
pub fn u1_weight(e: &DistExpr) -> Vec<i64> {
    e.terms
        .iter()
        .map(|t| {
            t.factors
                .iter()
                .map(|f| match f.delta {
                    Some((a, b)) => b as i64 - a as i64,
                    None => f.p as i64 - f.q as i64,
                })
                .sum()
        })
        .collect()
}

/// Rank over `ℚ(i)(λ)` of the coefficient matrix on the union of basis terms.
pub fn independence_rank(family: &[DistExpr]) -> Result<usize> {
    let mut columns: BTreeMap<&[VarFactor], usize> = BTreeMap::new();
    for e in family {
        for t in &e.terms {
            let next = columns.len();
            columns.entry(&t.factors).or_insert(next);
        }
    }
    let rows: Vec<Vec<Scalar>> = family
        .iter()
        .map(|e| {
            let mut row = vec![Scalar::zero(); columns.len()];
            for t in &e.terms {
                row[columns[t.factors.as_slice()]] = t.coeff.clone();
            }
            row
        })
        .collect();
    rank_over_function_field(&rows)
}

/// Which stratum closure a delta-supported expression lives on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportDescriptor {
    /// Delta variables, 1-based.
    pub delta_vars: BTreeSet<usize>,
    /// Largest index outside the delta set.
    pub top_free: Option<usize>,
    /// Largest index outside the delta set carrying a monomial or power factor.
    pub carrier: Option<usize>,
    /// `Some(j)` when the expression is nonzero and its delta set is `{j+1..n}`.
    pub stratum: Option<usize>,
}

pub fn formal_support(e: &DistExpr) -> SupportDescriptor {
    let n = e.n;
    let sets: BTreeSet<BTreeSet<usize>> = e.terms.iter().map(DistTerm::delta_vars).collect();
    let delta_vars: BTreeSet<usize> = sets.iter().flatten().copied().collect();
    let top_free = (1..=n).rev().find(|j| !delta_vars.contains(j));
    let carrier = (1..=n).rev().find(|&j| {
        !delta_vars.contains(&j)
            && e.terms.iter().any(|t| {
                let f = &t.factors[j - 1];
                f.p > 0 || f.q > 0 || f.power.is_some()
            })
    });
    let stratum = top_free.filter(|&j| {
        !e.is_zero() && sets.len() == 1 && delta_vars == (j + 1..=n).collect::<BTreeSet<_>>()
    });
    SupportDescriptor {
        delta_vars,
        top_free,
        carrier,
        stratum,
    }
}

fn fmt_power(name: &str, e: u32) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

impl fmt::Display for DistTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![format!("[{}]", self.coeff)];
        for (i, v) in self.factors.iter().enumerate() {
            let j = i + 1;
            if v.p > 0 {
                parts.push(fmt_power(&format!("z{j}"), v.p));
            }
            if v.q > 0 {
                parts.push(fmt_power(&format!("zb{j}"), v.q));
            }
            if let Some(s) = &v.power {
                parts.push(format!("(z{j}*zb{j})^({s})"));
            }
            if let Some((a, b)) = v.delta {
                let mut d = String::new();
                if a > 0 {
                    d.push_str(&fmt_power(&format!("dz{j}"), a));
                    d.push(' ');
                }
                if b > 0 {
                    d.push_str(&fmt_power(&format!("dzb{j}"), b));
                    d.push(' ');
                }
                d.push_str(&format!("delta(z{j})"));
                parts.push(d);
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Display for DistExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
                write!(f, "+ ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}
