//! Generalized Reed-Solomon codes and the two self-dual assembly engines.
//!
//! `GRS_k(a, v)` is spanned by the rows `(v_j a_j^i)_j` for `i < k`. The
//! extended code `GRS_k(a, v, inf)` appends one coordinate holding the
//! coefficient of `x^{k-1}`, i.e. a column that is zero except for a 1 in
//! the last row.
//!
//! Self-duality criteria used by the engines, with `L_a(a_i) = prod_{j != i}(a_i - a_j)`:
//! * plain: if `lambda * L_a(a_i)` is a nonzero square for every `i`, taking
//!   `v_i^2 = 1 / (lambda * L_a(a_i))` gives a self-dual `[n, n/2]` MDS code;
//! * extended: if `-L_a(a_i)` is a nonzero square for all `n - 1` points,
//!   `v_i^2 = -1 / L_a(a_i)` does the same for the extended code.

use serde::Serialize;
use thiserror::Error;

use crate::ff::{FieldCtx, FieldElement, FieldError};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrsError {
    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("code length {0} is odd")]
    OddLength(usize),
    #[error("square condition fails at point {index}")]
    SquareConditionViolated { index: usize },
    #[error("evaluation point {0} repeated")]
    RepeatedPoint(u64),
    #[error("scaling weight at position {0} is zero")]
    ZeroWeight(usize),
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Distinct evaluation points, optionally followed by the point at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalVector {
    points: Vec<FieldElement>,
    extended: bool,
}

impl EvalVector {
    pub fn new(points: Vec<FieldElement>, extended: bool) -> Result<Self, GrsError> {
        let mut sorted: Vec<u64> = points.iter().map(|p| p.value()).collect();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(GrsError::RepeatedPoint(w[0]));
        }
        Ok(EvalVector { points, extended })
    }

    pub fn points(&self) -> &[FieldElement] {
        &self.points
    }

    pub fn is_extended(&self) -> bool {
        self.extended
    }

    /// Code length: the number of points, plus one when extended.
    pub fn code_length(&self) -> usize {
        self.points.len() + usize::from(self.extended)
    }
}

/// Nonzero column multipliers (the infinity coordinate, if any, is implicitly 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingVector {
    weights: Vec<FieldElement>,
}

impl ScalingVector {
    pub fn new(weights: Vec<FieldElement>) -> Result<Self, GrsError> {
        if let Some(i) = weights.iter().position(|w| w.is_zero()) {
            return Err(GrsError::ZeroWeight(i));
        }
        Ok(ScalingVector { weights })
    }

    pub fn ones(n: usize) -> Self {
        ScalingVector {
            weights: vec![FieldElement::ONE; n],
        }
    }

    pub fn weights(&self) -> &[FieldElement] {
        &self.weights
    }
}

/// Intermediate values recorded by a construction. Only the fields the
/// originating construction defines are populated.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ConstructionTrace {
    #[serde(rename = "I", skip_serializing_if = "Option::is_none")]
    pub coset_indices: Option<Vec<u64>>,
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub coset_sum: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<FieldElement>,
    /// Brute-force locator values, one per finite evaluation point.
    pub locators: Vec<FieldElement>,
    /// One `u` per coset index in `coset_indices`, same order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<FieldElement>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<FieldElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi_s: Option<FieldElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<FieldElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<FieldElement>,
    #[serde(rename = "V_basis", skip_serializing_if = "Option::is_none")]
    pub subspace_basis: Option<Vec<FieldElement>>,
}

/// A constructed code together with the data that produced it.
#[derive(Debug, Clone)]
pub struct CodeArtifact {
    ctx: FieldCtx,
    a: EvalVector,
    v: ScalingVector,
    k: usize,
    generator: Matrix,
    label: String,
    locators: Vec<FieldElement>,
}

impl CodeArtifact {
    /// Wrap an arbitrary generator matrix; nothing about it is checked.
    pub fn from_parts(
        ctx: FieldCtx,
        a: EvalVector,
        v: ScalingVector,
        generator: Matrix,
        label: impl Into<String>,
    ) -> Self {
        CodeArtifact {
            ctx,
            a,
            v,
            k: generator.rows(),
            generator,
            label: label.into(),
            locators: Vec::new(),
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn eval_vector(&self) -> &EvalVector {
        &self.a
    }
    pub fn scaling(&self) -> &ScalingVector {
        &self.v
    }
    pub fn dimension(&self) -> usize {
        self.k
    }
    pub fn length(&self) -> usize {
        self.generator.cols()
    }
    pub fn generator(&self) -> &Matrix {
        &self.generator
    }
    pub fn label(&self) -> &str {
        &self.label
    }
    pub(crate) fn set_label(&mut self, label: String) {
        self.label = label;
    }
    /// Brute-force locator values cached during assembly (empty for hand-built artifacts).
    pub fn locators(&self) -> &[FieldElement] {
        &self.locators
    }
}

/// `L_a(a_i) = prod_{j != i} (a_i - a_j)` by direct multiplication. `i` is 0-based.
pub fn locator(ctx: &FieldCtx, a: &EvalVector, i: usize) -> Result<FieldElement, GrsError> {
    let pts = a.points();
    let x = *pts.get(i).ok_or(GrsError::IndexOutOfRange {
        index: i,
        len: pts.len(),
    })?;
    Ok(pts
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .fold(FieldElement::ONE, |acc, (_, &y)| {
            ctx.mul(acc, ctx.sub(x, y))
        }))
}

/// Locators at every point.
pub fn all_locators(ctx: &FieldCtx, a: &EvalVector) -> Vec<FieldElement> {
    (0..a.points().len())
        .map(|i| locator(ctx, a, i).expect("index in range"))
        .collect()
}

/// `prod_{j != i}(z^i - z^j) = m z^{-i}` over the `m`-th roots of unity `z^1..z^m`.
pub fn cyclotomic_locator(ctx: &FieldCtx, m: u64, i: u64) -> Result<FieldElement, FieldError> {
    let z = ctx.root_of_unity(m)?;
    let zi = ctx.pow(z, -(i as i128))?;
    Ok(ctx.mul(ctx.from_int((m % ctx.characteristic()) as i64), zi))
}

/// Points `z^1, ..., z^m` for `z = root_of_unity(m)`.
pub fn roots_of_unity_vector(ctx: &FieldCtx, m: u64) -> Result<EvalVector, GrsError> {
    let z = ctx.root_of_unity(m)?;
    let mut pts = Vec::with_capacity(m as usize);
    let mut cur = FieldElement::ONE;
    for _ in 0..m {
        cur = ctx.mul(cur, z);
        pts.push(cur);
    }
    EvalVector::new(pts, false)
}

fn fill_grs_rows(
    ctx: &FieldCtx,
    pts: &[FieldElement],
    w: &[FieldElement],
    g: &mut Matrix,
    k: usize,
) {
    for (col, (&x, &vj)) in pts.iter().zip(w).enumerate() {
        let mut entry = vj;
        for row in 0..k {
            g.set(row, col, entry);
            entry = ctx.mul(entry, x);
        }
    }
}

/// Generator matrix of `GRS_k(a, v)`: row `i` is `(v_j a_j^i)_j`.
pub fn grs_generator_matrix(
    ctx: &FieldCtx,
    a: &EvalVector,
    v: &ScalingVector,
    k: usize,
) -> Result<Matrix, GrsError> {
    let n = a.points().len();
    if a.is_extended() {
        return Err(GrsError::DimensionMismatch(
            "expected a non-extended vector".into(),
        ));
    }
    if v.weights().len() != n || k == 0 || k > n {
        return Err(GrsError::DimensionMismatch(format!(
            "n={n}, len(v)={}, k={k}",
            v.weights().len()
        )));
    }
    let mut g = Matrix::zeros(k, n);
    fill_grs_rows(ctx, a.points(), v.weights(), &mut g, k);
    Ok(g)
}

/// Generator matrix of `GRS_k(a, v, inf)`; the last column carries `f_{k-1}`.
pub fn xgrs_generator_matrix(
    ctx: &FieldCtx,
    a: &EvalVector,
    v: &ScalingVector,
    k: usize,
) -> Result<Matrix, GrsError> {
    let finite = a.points().len();
    if !a.is_extended() {
        return Err(GrsError::DimensionMismatch(
            "expected an extended vector".into(),
        ));
    }
    let n = finite + 1;
    if v.weights().len() != finite || k == 0 || k > n {
        return Err(GrsError::DimensionMismatch(format!(
            "n={n}, len(v)={}, k={k}",
            v.weights().len()
        )));
    }
    let mut g = Matrix::zeros(k, n);
    fill_grs_rows(ctx, a.points(), v.weights(), &mut g, k);
    g.set(k - 1, finite, FieldElement::ONE);
    Ok(g)
}

/// Assemble the self-dual `GRS_{n/2}(a, v)` for a caller-supplied `lambda`.
pub fn assemble_self_dual_grs(
    ctx: &FieldCtx,
    a: &EvalVector,
    lambda: FieldElement,
) -> Result<CodeArtifact, GrsError> {
    if a.is_extended() {
        return Err(GrsError::DimensionMismatch(
            "expected a non-extended vector".into(),
        ));
    }
    let n = a.points().len();
    if n % 2 != 0 {
        return Err(GrsError::OddLength(n));
    }
    if lambda.is_zero() {
        return Err(GrsError::ZeroLambda);
    }
    let locators = all_locators(ctx, a);
    let mut weights = Vec::with_capacity(n);
    for (i, &l) in locators.iter().enumerate() {
        let t = ctx.mul(lambda, l);
        if ctx.quadratic_character(t) != 1 {
            return Err(GrsError::SquareConditionViolated { index: i });
        }
        weights.push(ctx.sqrt(ctx.inv(t)?)?);
    }
    let v = ScalingVector::new(weights)?;
    let generator = grs_generator_matrix(ctx, a, &v, n / 2)?;
    Ok(CodeArtifact {
        ctx: ctx.clone(),
        a: a.clone(),
        v,
        k: n / 2,
        generator,
        label: "GRS".into(),
        locators,
    })
}

/// Assemble the self-dual extended `GRS_{n/2}(a, v, inf)` with `n = len(a) + 1`.
pub fn assemble_self_dual_xgrs(ctx: &FieldCtx, a: &EvalVector) -> Result<CodeArtifact, GrsError> {
    if !a.is_extended() {
        return Err(GrsError::DimensionMismatch(
            "expected an extended vector".into(),
        ));
    }
    let n = a.code_length();
    if n % 2 != 0 {
        return Err(GrsError::OddLength(n));
    }
    let locators = all_locators(ctx, a);
    let mut weights = Vec::with_capacity(n - 1);
    for (i, &l) in locators.iter().enumerate() {
        let t = ctx.neg(l);
        if ctx.quadratic_character(t) != 1 {
            return Err(GrsError::SquareConditionViolated { index: i });
        }
        weights.push(ctx.sqrt(ctx.inv(t)?)?);
    }
    let v = ScalingVector::new(weights)?;
    let generator = xgrs_generator_matrix(ctx, a, &v, n / 2)?;
    Ok(CodeArtifact {
        ctx: ctx.clone(),
        a: a.clone(),
        v,
        k: n / 2,
        generator,
        label: "XGRS".into(),
        locators,
    })
}

/// Try `lambda = 1` and `lambda = g`; one of them works whenever all
/// locators share a quadratic character.
pub fn search_lambda(ctx: &FieldCtx, a: &EvalVector) -> Option<FieldElement> {
    let locators = all_locators(ctx, a);
    [FieldElement::ONE, ctx.generator()]
        .into_iter()
        .find(|&lambda| {
            locators
                .iter()
                .all(|&l| ctx.quadratic_character(ctx.mul(lambda, l)) == 1)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    fn el(ctx: &FieldCtx, v: u64) -> FieldElement {
        ctx.element(v).unwrap()
    }

    // Gram check written out longhand so it does not depend on Matrix::gram.
    fn gram_is_zero(ctx: &FieldCtx, g: &Matrix) -> bool {
        for i in 0..g.rows() {
            for j in 0..g.rows() {
                let mut acc = FieldElement::ZERO;
                for c in 0..g.cols() {
                    acc = ctx.add(acc, ctx.mul(g.get(i, c), g.get(j, c)));
                }
                if !acc.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn locator_examples() {
        let f3 = make_field(3, 1).unwrap();
        let a = EvalVector::new(vec![el(&f3, 0), el(&f3, 1), el(&f3, 2)], false).unwrap();
        assert_eq!(locator(&f3, &a, 0).unwrap(), el(&f3, 2));
        assert!(matches!(
            locator(&f3, &a, 3),
            Err(GrsError::IndexOutOfRange { .. })
        ));
        let single = EvalVector::new(vec![el(&f3, 1)], false).unwrap();
        assert_eq!(locator(&f3, &single, 0).unwrap(), FieldElement::ONE);

        let f9 = make_field(3, 2).unwrap();
        let roots = roots_of_unity_vector(&f9, 4).unwrap();
        let two_x = f9.from_coeffs(&[0, 2]).unwrap();
        let idx = roots.points().iter().position(|&p| p == two_x).unwrap();
        assert_eq!(
            locator(&f9, &roots, idx).unwrap(),
            f9.from_coeffs(&[0, 1]).unwrap()
        );
    }

    #[test]
    fn cyclotomic_examples() {
        let f9 = make_field(3, 2).unwrap();
        assert_eq!(cyclotomic_locator(&f9, 1, 1).unwrap(), FieldElement::ONE);
        assert_eq!(
            cyclotomic_locator(&f9, 4, 1).unwrap(),
            f9.from_coeffs(&[0, 1]).unwrap()
        );
        for (p, d) in [(3, 2), (5, 1), (7, 1), (5, 2)] {
            let f = make_field(p, d).unwrap();
            assert_eq!(cyclotomic_locator(&f, 2, 2).unwrap(), f.from_int(2));
        }
        assert!(cyclotomic_locator(&f9, 3, 1).is_err());
    }

    #[test]
    fn generator_matrix_examples() {
        let f3 = make_field(3, 1).unwrap();
        let a = EvalVector::new(vec![el(&f3, 1), el(&f3, 2)], false).unwrap();
        let g = grs_generator_matrix(&f3, &a, &ScalingVector::ones(2), 1).unwrap();
        assert_eq!(g.to_rows(), vec![vec![el(&f3, 1), el(&f3, 1)]]);

        let f5 = make_field(5, 1).unwrap();
        let a = EvalVector::new((0..4).map(|v| el(&f5, v)).collect(), false).unwrap();
        let g = grs_generator_matrix(&f5, &a, &ScalingVector::ones(4), 2).unwrap();
        let vals: Vec<Vec<u64>> = g
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|x| x.value()).collect())
            .collect();
        assert_eq!(vals, vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]]);
        assert!(grs_generator_matrix(&f5, &a, &ScalingVector::ones(3), 2).is_err());
        assert!(grs_generator_matrix(&f5, &a, &ScalingVector::ones(4), 5).is_err());
    }

    #[test]
    fn extended_generator_matrix_examples() {
        let f3 = make_field(3, 1).unwrap();
        let a = EvalVector::new(vec![el(&f3, 0)], true).unwrap();
        let g = xgrs_generator_matrix(&f3, &a, &ScalingVector::ones(1), 1).unwrap();
        assert_eq!(
            g.to_rows(),
            vec![vec![FieldElement::ONE, FieldElement::ONE]]
        );

        let f5 = make_field(5, 1).unwrap();
        let a = EvalVector::new((0..3).map(|v| el(&f5, v)).collect(), true).unwrap();
        let g = xgrs_generator_matrix(&f5, &a, &ScalingVector::ones(3), 2).unwrap();
        let vals: Vec<Vec<u64>> = g
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|x| x.value()).collect())
            .collect();
        assert_eq!(vals, vec![vec![1, 1, 1, 0], vec![0, 1, 2, 1]]);
        let last: Vec<_> = (0..2)
            .map(|r| g.get(r, 3))
            .filter(|x| !x.is_zero())
            .collect();
        assert_eq!(last.len(), 1);
    }

    #[test]
    fn repeated_points_and_zero_weights_rejected() {
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(
            EvalVector::new(vec![el(&f5, 1), el(&f5, 1)], false),
            Err(GrsError::RepeatedPoint(1))
        );
        assert!(EvalVector::new(vec![], false).is_ok());
        assert_eq!(
            ScalingVector::new(vec![el(&f5, 1), FieldElement::ZERO]),
            Err(GrsError::ZeroWeight(1))
        );
    }

    #[test]
    fn plain_engine_on_roots_of_unity() {
        let f9 = make_field(3, 2).unwrap();
        let a = roots_of_unity_vector(&f9, 4).unwrap();
        let art = assemble_self_dual_grs(&f9, &a, FieldElement::ONE).unwrap();
        assert_eq!(art.dimension(), 2);
        assert_eq!(art.length(), 4);
        assert!(gram_is_zero(&f9, art.generator()));
        for (i, &v) in art.scaling().weights().iter().enumerate() {
            let l = art.locators()[i];
            assert_eq!(f9.mul(f9.mul(v, v), l), FieldElement::ONE);
        }
    }

    #[test]
    fn plain_engine_rejects() {
        let f9 = make_field(3, 2).unwrap();
        let g = f9.generator();
        let a = EvalVector::new(vec![FieldElement::ONE, g], false).unwrap();
        // L(1) = 1 - g = 2x and L(g) = x; decide squareness by listing all squares.
        let squares: Vec<FieldElement> = f9.elements().skip(1).map(|s| f9.mul(s, s)).collect();
        let l0 = f9.sub(FieldElement::ONE, g);
        let l1 = f9.sub(g, FieldElement::ONE);
        assert!(squares.contains(&l0) && squares.contains(&l1));
        assert!(assemble_self_dual_grs(&f9, &a, FieldElement::ONE).is_ok());
        // With lambda = g both products are non-squares.
        assert!(matches!(
            assemble_self_dual_grs(&f9, &a, g),
            Err(GrsError::SquareConditionViolated { index: 0 })
        ));
        // Mixed characters: {0, 1, g} has no valid lambda at all.
        let b = EvalVector::new(
            vec![FieldElement::ZERO, FieldElement::ONE, g, f9.mul(g, g)],
            false,
        )
        .unwrap();
        let chars: Vec<i8> = all_locators(&f9, &b)
            .iter()
            .map(|&l| f9.quadratic_character(l))
            .collect();
        if chars.iter().any(|&c| c != chars[0]) {
            assert!(search_lambda(&f9, &b).is_none());
        }
        let odd = EvalVector::new(vec![FieldElement::ONE], false).unwrap();
        assert_eq!(
            assemble_self_dual_grs(&f9, &odd, FieldElement::ONE).unwrap_err(),
            GrsError::OddLength(1)
        );
    }

    #[test]
    fn extended_engine() {
        let f3 = make_field(3, 1).unwrap();
        let a = EvalVector::new(f3.elements().collect(), true).unwrap();
        // Over the whole field every locator is -1, so -L = 1 is a square.
        assert!(all_locators(&f3, &a).iter().all(|&l| l == f3.from_int(-1)));
        let art = assemble_self_dual_xgrs(&f3, &a).unwrap();
        assert_eq!((art.length(), art.dimension()), (4, 2));
        assert!(gram_is_zero(&f3, art.generator()));

        for (p, d) in [(5, 1), (13, 1), (3, 2)] {
            let f = make_field(p, d).unwrap();
            let a = EvalVector::new(vec![f.from_int(1)], true).unwrap();
            let art = assemble_self_dual_xgrs(&f, &a).unwrap();
            let v1 = art.generator().get(0, 0);
            assert_eq!(f.mul(v1, v1), f.from_int(-1));
            assert_eq!(art.generator().get(0, 1), FieldElement::ONE);
        }
        // q = 7: -1 is not a square
        let f7 = make_field(7, 1).unwrap();
        let a = EvalVector::new(vec![f7.from_int(1)], true).unwrap();
        assert!(matches!(
            assemble_self_dual_xgrs(&f7, &a),
            Err(GrsError::SquareConditionViolated { index: 0 })
        ));
        let a = EvalVector::new(vec![f7.from_int(1), f7.from_int(2)], true).unwrap();
        assert_eq!(
            assemble_self_dual_xgrs(&f7, &a).unwrap_err(),
            GrsError::OddLength(3)
        );
    }

    #[test]
    fn lambda_search() {
        let f9 = make_field(3, 2).unwrap();
        let a = roots_of_unity_vector(&f9, 4).unwrap();
        assert_eq!(search_lambda(&f9, &a), Some(FieldElement::ONE));
    }
}
