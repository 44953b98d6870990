//! The five families of self-dual GRS / extended GRS codes.
//!
//! Every construction builds an evaluation vector, chooses `lambda` where the
//! plain engine needs one, and hands off to [`crate::grs`] for assembly.
//! [`validate`] checks hypotheses with arbitrary-precision arithmetic, so it
//! also works for fields far too large to materialize.

mod cosets;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cosets::{select_coset_reps, CosetSelection, Parity};

use crate::ff::numtheory::{divisors, is_prime};
use crate::ff::{FieldCtx, FieldElement, FieldError};
use crate::grs::{
    assemble_self_dual_grs, assemble_self_dual_xgrs, CodeArtifact, ConstructionTrace, EvalVector,
    GrsError,
};

/// Largest code length a construction will materialize.
pub const MAX_MATERIALIZED_LENGTH: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("hypothesis violated: {clause}")]
    HypothesisViolated { clause: String },
    #[error("not enough cosets: wanted {wanted}, only {available} available")]
    NotEnoughCosets { wanted: u64, available: u64 },
    #[error("no coset representatives with the required parity (t={t}, m={m})")]
    ParityInfeasible { t: u64, m: u64 },
    #[error("code length {n} exceeds the build budget of {MAX_MATERIALIZED_LENGTH}")]
    TooLargeToMaterialize { n: String },
    #[error("closed form not available for {0}")]
    UnsupportedTheorem(String),
    #[error("point index {index} out of range for length {len}")]
    PointOutOfRange { index: usize, len: usize },
    #[error("assembly failed: {0}")]
    Assembly(#[from] GrsError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn violated(clause: &str) -> ConstructionError {
    ConstructionError::HypothesisViolated {
        clause: clause.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem {
    T1i,
    T1ii,
    T2,
    T3i,
    T3ii,
    T4,
    T5,
}

impl Theorem {
    pub const ALL: [Theorem; 7] = [
        Theorem::T1i,
        Theorem::T1ii,
        Theorem::T2,
        Theorem::T3i,
        Theorem::T3ii,
        Theorem::T4,
        Theorem::T5,
    ];

    /// Whether the code carries the point at infinity.
    pub fn is_extended(self) -> bool {
        matches!(
            self,
            Theorem::T1ii | Theorem::T2 | Theorem::T3ii | Theorem::T4
        )
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Theorem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown theorem {s:?}"))
    }
}

/// Parameters of one construction. `T5::k` is the subfield degree in
/// `q = p^(k m')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstructionParams {
    T1i { m: u64, t: u64 },
    T1ii { m: u64, t: u64 },
    T2 { m: u64, t: u64 },
    T3i { m: u64, t: u64, s: u64 },
    T3ii { m: u64, t: u64, s: u64 },
    T4 { e: u32 },
    T5 { k: u32, t: u64, e: u32 },
}

impl ConstructionParams {
    pub fn theorem(&self) -> Theorem {
        match self {
            ConstructionParams::T1i { .. } => Theorem::T1i,
            ConstructionParams::T1ii { .. } => Theorem::T1ii,
            ConstructionParams::T2 { .. } => Theorem::T2,
            ConstructionParams::T3i { .. } => Theorem::T3i,
            ConstructionParams::T3ii { .. } => Theorem::T3ii,
            ConstructionParams::T4 { .. } => Theorem::T4,
            ConstructionParams::T5 { .. } => Theorem::T5,
        }
    }

    /// Named integer parameters in label order.
    pub fn fields(&self) -> Vec<(&'static str, u64)> {
        match *self {
            ConstructionParams::T1i { m, t }
            | ConstructionParams::T1ii { m, t }
            | ConstructionParams::T2 { m, t } => vec![("m", m), ("t", t)],
            ConstructionParams::T3i { m, t, s } | ConstructionParams::T3ii { m, t, s } => {
                vec![("m", m), ("t", t), ("s", s)]
            }
            ConstructionParams::T4 { e } => vec![("e", e as u64)],
            ConstructionParams::T5 { k, t, e } => vec![("k", k as u64), ("t", t), ("e", e as u64)],
        }
    }
}

impl fmt::Display for ConstructionParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.theorem())?;
        for (i, (name, v)) in self.fields().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{name}={v}")?;
        }
        f.write_str(")")
    }
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn divides(a: &BigUint, b: &BigUint) -> bool {
    !a.is_zero() && (b % a).is_zero()
}

/// Check the hypotheses of `params` over `F_{p^d}` and return the code length.
///
/// Works for any `p^d`; nothing is materialized.
pub fn validate(params: &ConstructionParams, p: u64, d: u32) -> Result<BigUint, ConstructionError> {
    if p % 2 == 0 && p != 0 {
        return Err(FieldError::EvenCharacteristic(p).into());
    }
    if !is_prime(p) {
        return Err(FieldError::NonPrime(p).into());
    }
    if d == 0 {
        return Err(FieldError::DegreeZero.into());
    }
    let q = big(p).pow(d);
    let qm1 = &q - 1u32;

    let square_root = || -> Result<BigUint, ConstructionError> {
        if d % 2 != 0 {
            return Err(violated("q = r^2"));
        }
        Ok(big(p).pow(d / 2))
    };
    let m_divides = |m: u64| -> Result<BigUint, ConstructionError> {
        let m = big(m);
        if !divides(&m, &qm1) {
            return Err(violated("m | q-1"));
        }
        Ok(m)
    };

    match *params {
        ConstructionParams::T1i { m, t } | ConstructionParams::T1ii { m, t } => {
            let r = square_root()?;
            let mb = m_divides(m)?;
            let plain = matches!(params, ConstructionParams::T1i { .. });
            if plain && !(&qm1 / &mb).is_even() {
                return Err(violated("(q-1)/m is even"));
            }
            let rp1 = &r + 1u32;
            let bound = &rp1 / rp1.gcd(&mb);
            if t == 0 || big(t) > bound {
                return Err(violated("1 <= t <= (r+1)/gcd(r+1,m)"));
            }
            let tm = big(t) * &mb;
            if !tm.is_even() {
                return Err(violated("tm is even"));
            }
            if plain {
                return Ok(tm);
            }
            if t % 2 == 0 && m % 2 == 0 && (&r % 4u32) == big(1) {
                return Err(violated(
                    "excluded case: t is even, m is even and r≡1 (mod 4)",
                ));
            }
            Ok(tm + 2u32)
        }
        ConstructionParams::T2 { m, t } => {
            let r = square_root()?;
            let mb = m_divides(m)?;
            let tm = big(t) * &mb;
            if tm.is_even() {
                return Err(violated("tm is odd"));
            }
            let rp1 = &r + 1u32;
            let bound = &rp1 / (rp1.gcd(&mb) * 2u32);
            if t < 2 || big(t) > bound {
                return Err(violated("2 <= t <= (r+1)/(2 gcd(r+1,m))"));
            }
            Ok(tm + 1u32)
        }
        ConstructionParams::T3i { m, t, s } | ConstructionParams::T3ii { m, t, s } => {
            let r = square_root()?;
            let mb = m_divides(m)?;
            let sb = big(s);
            if s == 0 || s % 2 != 0 {
                return Err(violated("s is even"));
            }
            if m % s != 0 {
                return Err(violated("s | m"));
            }
            let rp1 = &r + 1u32;
            if !divides(&sb, &rp1) {
                return Err(violated("s | r+1"));
            }
            let plain = matches!(params, ConstructionParams::T3i { .. });
            if plain {
                if !(&rp1 / &sb).is_even() {
                    return Err(violated("(r+1)/s is even"));
                }
                if !(&qm1 / &mb).is_even() {
                    return Err(violated("(q-1)/m is even"));
                }
            }
            let srm1 = &sb * (&r - 1u32);
            let bound = &srm1 / srm1.gcd(&mb);
            if t == 0 || big(t) > bound {
                return Err(violated("1 <= t <= s(r-1)/gcd(s(r-1),m)"));
            }
            let tm = big(t) * mb;
            Ok(if plain { tm } else { tm + 2u32 })
        }
        ConstructionParams::T4 { e } => {
            if d % 2 != 0 {
                return Err(violated("q = p^(2s)"));
            }
            if e == 0 || e > d / 2 {
                return Err(violated("1 <= e <= s"));
            }
            Ok(big(p).pow(2 * e) + 1u32)
        }
        ConstructionParams::T5 { k, t, e } => {
            if k == 0 || d % k != 0 {
                return Err(violated("q = p^(km)"));
            }
            let mm = d / k;
            let two_t = big(2) * big(t);
            if t == 0 || !divides(&two_t, &(big(p).pow(k) - 1u32)) {
                return Err(violated("2t | p^k-1"));
            }
            if e > mm - 1 {
                return Err(violated("e <= m-1"));
            }
            if !(&qm1 / &two_t).is_even() {
                return Err(violated("(q-1)/(2t) is even"));
            }
            Ok(two_t * big(p).pow(k * e))
        }
    }
}

/// `g^(x_1 * x_2 * ...)` with the exponent reduced mod `q-1`.
fn gexp(ctx: &FieldCtx, parts: &[u64]) -> FieldElement {
    let qm1 = (ctx.order() - 1) as u128;
    let e = parts
        .iter()
        .fold(1u128, |acc, &x| acc * (x as u128 % qm1) % qm1);
    ctx.gpow(e as i128)
}

fn sqrt_order(ctx: &FieldCtx) -> Result<u64, ConstructionError> {
    ctx.sqrt_order().ok_or_else(|| violated("q = r^2"))
}

/// Coset-based data shared by Theorems 1-3.
struct Cyclic {
    sel: CosetSelection,
    points: Vec<FieldElement>,
    u: Vec<FieldElement>,
}

fn cyclic(
    ctx: &FieldCtx,
    m: u64,
    t: u64,
    stride: u64,
    parity: Parity,
) -> Result<Cyclic, ConstructionError> {
    let sel = select_coset_reps(ctx, stride, m, t, parity)?;
    let step = (ctx.order() - 1) / m;
    let mut points = Vec::with_capacity((t * m) as usize);
    for &z in &sel.indices {
        let base = gexp(ctx, &[stride, z]);
        let w = ctx.gpow(step as i128);
        let mut x = base;
        for _ in 0..m {
            points.push(x);
            x = ctx.mul(x, w);
        }
    }
    let u = coset_products(ctx, m, stride, &sel.indices);
    Ok(Cyclic { sel, points, u })
}

/// `u_z = prod_{l in I, l != z} (g^(stride z m) - g^(stride l m))` for each `z`.
fn coset_products(ctx: &FieldCtx, m: u64, stride: u64, indices: &[u64]) -> Vec<FieldElement> {
    let powers: Vec<FieldElement> = indices
        .iter()
        .map(|&l| gexp(ctx, &[stride, l, m]))
        .collect();
    powers
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            powers
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(FieldElement::ONE, |acc, (_, &y)| {
                    ctx.mul(acc, ctx.sub(x, y))
                })
        })
        .collect()
}

fn cyclic_trace(c: &Cyclic, locators: &[FieldElement]) -> ConstructionTrace {
    ConstructionTrace {
        coset_indices: Some(c.sel.indices.clone()),
        coset_sum: Some(c.sel.sum),
        locators: locators.to_vec(),
        u: Some(c.u.clone()),
        ..Default::default()
    }
}

fn finish(mut art: CodeArtifact, params: &ConstructionParams) -> CodeArtifact {
    art.set_label(params.to_string());
    art
}

fn prepare(ctx: &FieldCtx, params: &ConstructionParams) -> Result<(), ConstructionError> {
    let n = validate(params, ctx.characteristic(), ctx.degree())?;
    if n > big(MAX_MATERIALIZED_LENGTH) {
        return Err(ConstructionError::TooLargeToMaterialize { n: n.to_string() });
    }
    Ok(())
}

/// Plain GRS over `tm` points in `t` cosets of the order-`m` subgroup,
/// coset representatives taken from `<g^(r-1)>`.
pub fn construct_t1i(
    ctx: &FieldCtx,
    m: u64,
    t: u64,
) -> Result<(CodeArtifact, ConstructionTrace), ConstructionError> {
    let params = ConstructionParams::T1i { m, t };
    prepare(ctx, &params)?;
    let r = sqrt_order(ctx)?;
    let c = cyclic(ctx, m, t, r - 1, Parity::Any)?;
    // lambda = g^((r+1)(t-1)/2 - mA)
    let qm1 = (ctx.order() - 1) as i128;
    let e = ((r as i128 + 1) * (t as i128 - 1) / 2 - (m as i128 % qm1) * (c.sel.sum as i128 % qm1))
        .rem_euclid(qm1);
    let lambda = ctx.gpow(e);
    let a = EvalVector::new(c.points.clone(), false)?;
    let art = assemble_self_dual_grs(ctx, &a, lambda)?;
    let mut trace = cyclic_trace(&c, art.locators());
    trace.lambda = Some(lambda);
    Ok((finish(art, &params), trace))
}

/// Extended GRS over `{0}` plus the points of [`construct_t1i`].
pub fn construct_t1ii(
    ctx: &FieldCtx,
    m: u64,
    t: u64,
) -> Result<(CodeArtifact, ConstructionTrace), ConstructionError> {
    let params = ConstructionParams::T1ii { m, t };
    prepare(ctx, &params)?;
    let r = sqrt_order(ctx)?;
    // With m even the sign of L(0) and the A-term both vanish, so any A works.
    // For m odd (t even) A must have the parity of (r+1)/2.
    let parity = if m % 2 == 0 {
        Parity::Any
    } else if r % 4 == 3 {
        Parity::SumEven
    } else {
        Parity::SumOdd
    };
    let c = cyclic(ctx, m, t, r - 1, parity)?;
    let mut points = vec![FieldElement::ZERO];
    points.extend_from_slice(&c.points);
    let a = EvalVector::new(points, true)?;
    let art = assemble_self_dual_xgrs(ctx, &a)?;
    let trace = cyclic_trace(&c, art.locators());
    Ok((finish(art, &params), trace))
}

/// Extended GRS of odd `tm` points with every coset index even.
pub fn construct_t2(
    ctx: &FieldCtx,
    m: u64,
    t: u64,
) -> Result<(CodeArtifact, ConstructionTrace), ConstructionError> {
    let params = ConstructionParams::T2 { m, t };
    prepare(ctx, &params)?;
    let r = sqrt_order(ctx)?;
    let c = cyclic(ctx, m, t, r - 1, Parity::AllEven)?;
    let a = EvalVector::new(c.points.clone(), true)?;
    let art = assemble_self_dual_xgrs(ctx, &a)?;
    let trace = cyclic_trace(&c, art.locators());
    Ok((finish(art, &params), trace))
}

fn construct_t3(
    ctx: &FieldCtx,
    params: ConstructionParams,
    m: u64,
    t: u64,
    s: u64,
    extended: bool,
) -> Result<(CodeArtifact, ConstructionTrace), ConstructionError> {
    prepare(ctx, &params)?;
    let r = sqrt_order(ctx)?;
    let c = cyclic(ctx, m, t, (r + 1) / s, Parity::Any)?;
    let art = if extended {
        let mut points = vec![FieldElement::ZERO];
        points.extend_from_slice(&c.points);
        assemble_self_dual_xgrs(ctx, &EvalVector::new(points, true)?)?
    } else {
        assemble_self_dual_grs(
            ctx,
            &EvalVector::new(c.points.clone(), false)?,
            FieldElement::ONE,
        )?
    };
    let mut trace = cyclic_trace(&c, art.locators());
    if !extended {
        trace.lambda = Some(FieldElement::ONE);
    }
    trace.xi_s = Some(ctx.root_of_unity(s)?);
    Ok((finish(art, &params), trace))
}

/// Plain GRS with representatives from `<g^((r+1)/s)>` and `lambda = 1`.
pub fn construct_t3i(
    ctx: &FieldCtx,
    m: u64,
    t: u64,
    s: u64,
) -> Result<(CodeArtifact, ConstructionTrace), ConstructionError> {
    construct_t3(ctx, ConstructionParams::T3i { m, t, s }, m, t, s, false)
}

/// Extended GRS over `{0}` plus the points of [`construct_t3i`].
pub fn construct_t3ii(
    ctx: &FieldCtx,
    m: u64,
    t: u64,
    s: u64,
) -> Result<(CodeArtifact, ConstructionTrace), ConstructionError> {
    construct_t3(ctx, ConstructionParams::T3ii { m, t, s }, m, t, s, true)
}

/// The `F_p`-span of `1, x, ..., x^(e-1)`, in mixed-radix order of the
/// coordinates (first coordinate varies fastest).
fn span(ctx: &FieldCtx, coords: &[FieldElement], basis: &[FieldElement]) -> Vec<FieldElement> {
    let base = coords.len();
    let size = base.pow(basis.len() as u32);
    (0..size)
        .map(|mut idx| {
            let mut acc = FieldElement::ZERO;
            for &b in basis {
                acc = ctx.add(acc, ctx.mul(coords[idx % base], b));
                idx /= base;
            }
            acc
        })
        .collect()
}

fn prime_field(ctx: &FieldCtx) -> Vec<FieldElement> {
    (0..ctx.characteristic() as i64)
        .map(|c| ctx.from_int(c))
        .collect()
}

/// Points `alpha_k beta + alpha_j` over an `e`-dimensional `F_p`-subspace of
/// `F_r`, extended by infinity. Length `p^(2e) + 1`.
pub fn construct_t4(
    ctx: &FieldCtx,
    e: u32,
) -> Result<(CodeArtifact, ConstructionTrace), ConstructionError> {
    let params = ConstructionParams::T4 { e };
    prepare(ctx, &params)?;
    let r = sqrt_order(ctx)?;
    let gamma = ctx.subfield_generator(r)?;
    let basis: Vec<FieldElement> = (0..e).map(|i| ctx.pow_u(gamma, i as u64)).collect();
    let s = span(ctx, &prime_field(ctx), &basis);
    let beta = ctx.gpow((r - 1) as i128);
    let mut points = Vec::with_capacity(s.len() * s.len());
    for &ak in &s {
        let ab = ctx.mul(ak, beta);
        for &aj in &s {
            points.push(ctx.add(ab, aj));
        }
    }
    let art = assemble_self_dual_xgrs(ctx, &EvalVector::new(points, true)?)?;
    let trace = ConstructionTrace {
        locators: art.locators().to_vec(),
        beta: Some(beta),
        subspace_basis: Some(basis),
        ..Default::default()
    };
    Ok((finish(art, &params), trace))
}

fn subfield_elements(ctx: &FieldCtx, sub_q: u64) -> Result<Vec<FieldElement>, FieldError> {
    let gamma = ctx.subfield_generator(sub_q)?;
    let mut out = vec![FieldElement::ZERO];
    let mut x = FieldElement::ONE;
    for _ in 0..sub_q - 1 {
        out.push(x);
        x = ctx.mul(x, gamma);
    }
    Ok(out)
}

/// Plain GRS over `2t` translates `omega^j + V`, `V` an `e`-dimensional
/// subspace over `F_{p^k}` meeting `F_{p^k}` trivially.
pub fn construct_t5(
    ctx: &FieldCtx,
    k: u32,
    t: u64,
    e: u32,
) -> Result<(CodeArtifact, ConstructionTrace), ConstructionError> {
    let params = ConstructionParams::T5 { k, t, e };
    prepare(ctx, &params)?;
    let pk = ctx.characteristic().pow(k);
    let gamma = ctx.subfield_generator(pk)?;
    let omega = ctx.pow_u(gamma, (pk - 1) / (2 * t));
    let basis: Vec<FieldElement> = (1..=e as i128).map(|i| ctx.gpow(i)).collect();
    let v = span(ctx, &subfield_elements(ctx, pk)?, &basis);

    let mut c = v
        .iter()
        .filter(|u| !u.is_zero())
        .fold(FieldElement::ONE, |acc, &u| ctx.mul(acc, u));
    let omegas: Vec<FieldElement> = (0..2 * t).map(|h| ctx.pow_u(omega, h)).collect();
    for &u in &v {
        let one_u = ctx.add(FieldElement::ONE, u);
        for &w in &omegas[1..] {
            c = ctx.mul(c, ctx.sub(one_u, w));
        }
    }

    let mut points = Vec::with_capacity(omegas.len() * v.len());
    for &w in &omegas {
        for &u in &v {
            points.push(ctx.add(w, u));
        }
    }
    let art = assemble_self_dual_grs(ctx, &EvalVector::new(points, false)?, c)?;
    let trace = ConstructionTrace {
        lambda: Some(c),
        locators: art.locators().to_vec(),
        c: Some(c),
        omega: Some(omega),
        subspace_basis: Some(basis),
        ..Default::default()
    };
    Ok((finish(art, &params), trace))
}

/// Run the construction named by `params` over `ctx`.
pub fn construct(
    ctx: &FieldCtx,
    params: &ConstructionParams,
) -> Result<(CodeArtifact, ConstructionTrace), ConstructionError> {
    match *params {
        ConstructionParams::T1i { m, t } => construct_t1i(ctx, m, t),
        ConstructionParams::T1ii { m, t } => construct_t1ii(ctx, m, t),
        ConstructionParams::T2 { m, t } => construct_t2(ctx, m, t),
        ConstructionParams::T3i { m, t, s } => construct_t3i(ctx, m, t, s),
        ConstructionParams::T3ii { m, t, s } => construct_t3ii(ctx, m, t, s),
        ConstructionParams::T4 { e } => construct_t4(ctx, e),
        ConstructionParams::T5 { k, t, e } => construct_t5(ctx, k, t, e),
    }
}

/// Locator value at finite point `index` computed from the per-family
/// closed form rather than by multiplying out all differences.
pub fn closed_form_locator(
    ctx: &FieldCtx,
    params: &ConstructionParams,
    trace: &ConstructionTrace,
    index: usize,
) -> Result<FieldElement, ConstructionError> {
    let unsupported = || ConstructionError::UnsupportedTheorem(params.to_string());
    let len = trace.locators.len();
    if index >= len {
        return Err(ConstructionError::PointOutOfRange { index, len });
    }
    let qm1 = ctx.order() - 1;
    let m_in_field = |m: u64| ctx.from_int((m % ctx.characteristic()) as i64);

    match *params {
        ConstructionParams::T1i { m, .. }
        | ConstructionParams::T2 { m, .. }
        | ConstructionParams::T3i { m, .. }
        | ConstructionParams::T1ii { m, .. }
        | ConstructionParams::T3ii { m, .. } => {
            let r = sqrt_order(ctx)?;
            let stride = match params {
                ConstructionParams::T3i { s, .. } | ConstructionParams::T3ii { s, .. } => {
                    (r + 1) / s
                }
                _ => r - 1,
            };
            let indices = trace.coset_indices.as_ref().ok_or_else(unsupported)?;
            let u = trace.u.as_ref().ok_or_else(unsupported)?;
            let extended = matches!(
                params,
                ConstructionParams::T1ii { .. } | ConstructionParams::T3ii { .. }
            );
            if extended {
                if index == 0 {
                    // L(0) = (-1)^((m+1)t) prod_l g^(stride l m)
                    let t = indices.len() as u64;
                    let prod = indices.iter().fold(FieldElement::ONE, |acc, &l| {
                        ctx.mul(acc, gexp(ctx, &[stride, l, m]))
                    });
                    return Ok(if ((m + 1) * t) % 2 == 1 {
                        ctx.neg(prod)
                    } else {
                        prod
                    });
                }
                // L(alpha) = m g^(stride z m) u_z
                let zi = (index - 1) / m as usize;
                let z = indices[zi];
                return Ok(ctx.mul(ctx.mul(m_in_field(m), gexp(ctx, &[stride, z, m])), u[zi]));
            }
            // L(alpha) = m alpha^(m-1) u_z
            let zi = index / m as usize;
            let k = (index % m as usize) as u64;
            let alpha = ctx.mul(gexp(ctx, &[k, qm1 / m]), gexp(ctx, &[stride, indices[zi]]));
            Ok(ctx.mul(ctx.mul(m_in_field(m), ctx.pow_u(alpha, m - 1)), u[zi]))
        }
        ConstructionParams::T4 { .. } => {
            let beta = trace.beta.ok_or_else(unsupported)?;
            let basis = trace.subspace_basis.as_ref().ok_or_else(unsupported)?;
            let s = span(ctx, &prime_field(ctx), basis);
            let (k0, j0) = (index / s.len(), index % s.len());
            let diffs = |i0: usize| -> FieldElement {
                s.iter()
                    .enumerate()
                    .filter(|&(i, _)| i != i0)
                    .fold(FieldElement::ONE, |acc, (_, &a)| {
                        ctx.mul(acc, ctx.sub(s[i0], a))
                    })
            };
            let mut u = FieldElement::ONE;
            for (j, &aj) in s.iter().enumerate() {
                if j == j0 {
                    continue;
                }
                let dj = ctx.sub(s[j0], aj);
                for (k, &ak) in s.iter().enumerate() {
                    if k == k0 {
                        continue;
                    }
                    let dk = ctx.mul(ctx.sub(s[k0], ak), beta);
                    u = ctx.mul(u, ctx.sub(dk, dj));
                }
            }
            let lead = ctx.pow_u(beta, s.len() as u64 - 1);
            Ok(ctx.mul(ctx.mul(lead, ctx.mul(diffs(j0), diffs(k0))), u))
        }
        ConstructionParams::T5 { t, .. } => {
            let omega = trace.omega.ok_or_else(unsupported)?;
            let c = trace.c.ok_or_else(unsupported)?;
            let v_size = (len as u64) / (2 * t);
            let i = index as u64 / v_size;
            // omega^(-i p^(ke)) with omega of order 2t
            let e = (2 * t - (i as u128 * v_size as u128 % (2 * t) as u128) as u64) % (2 * t);
            Ok(ctx.mul(ctx.pow_u(omega, e), c))
        }
    }
}

/// Code length of `params` over `F_{p^d}` as `u64`, if it fits.
pub fn code_length(params: &ConstructionParams, p: u64, d: u32) -> Result<u64, ConstructionError> {
    let n = validate(params, p, d)?;
    n.to_u64()
        .ok_or(ConstructionError::TooLargeToMaterialize { n: n.to_string() })
}

/// Validate over `F_{p^d}`, refuse oversized codes, then build the field and
/// construct. Oversized parameters never touch the field.
pub fn build(
    p: u64,
    d: u32,
    params: &ConstructionParams,
) -> Result<(CodeArtifact, ConstructionTrace), ConstructionError> {
    let n = validate(params, p, d)?;
    if n > big(MAX_MATERIALIZED_LENGTH) {
        return Err(ConstructionError::TooLargeToMaterialize { n: n.to_string() });
    }
    let ctx = crate::ff::make_field(p, d)?;
    construct(&ctx, params)
}

/// Every parameter tuple valid over `F_{p^d}` with code length at most `max_n`.
///
/// Requires `p^d - 1` to fit in a `u64`.
pub fn valid_params(p: u64, d: u32, max_n: u64) -> Vec<ConstructionParams> {
    let Some(q) = crate::ff::checked_order(p, d, u64::MAX) else {
        return vec![];
    };
    let mut out = Vec::new();
    let mut push = |params: ConstructionParams| {
        if let Ok(n) = code_length(&params, p, d) {
            if n <= max_n {
                out.push(params);
            }
        }
    };
    let divs = divisors(q - 1);
    if d % 2 == 0 {
        for &m in &divs {
            if m > max_n {
                break;
            }
            for t in 1..=max_n / m {
                push(ConstructionParams::T1i { m, t });
                push(ConstructionParams::T1ii { m, t });
                push(ConstructionParams::T2 { m, t });
                for s in (2..=m).step_by(2).filter(|s| m % s == 0) {
                    push(ConstructionParams::T3i { m, t, s });
                    push(ConstructionParams::T3ii { m, t, s });
                }
            }
        }
        for e in 1..=d / 2 {
            push(ConstructionParams::T4 { e });
        }
    }
    for k in (1..=d).filter(|k| d % k == 0) {
        let pk1 = p.pow(k) - 1;
        for t in (1..=pk1 / 2).filter(|t| pk1 % (2 * t) == 0) {
            for e in 0..d / k {
                push(ConstructionParams::T5 { k, t, e });
            }
        }
    }
    out
}
