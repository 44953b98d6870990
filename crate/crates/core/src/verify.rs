//! Independent certification of constructed codes.
//!
//! Nothing here looks at how an artifact was built: self-duality is decided
//! from `G G^T` and the rank of `G`, MDS-ness from all maximal minors or from
//! exhaustive codeword enumeration.

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::ff::{FieldCtx, FieldElement};
use crate::grs::CodeArtifact;
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("dimension mismatch: n = {n}, k = {k}")]
    DimensionMismatch { n: usize, k: usize },
    #[error("instance too large: {0}")]
    TooLarge(String),
}

/// Default largest length for exhaustive minor enumeration.
pub const DEFAULT_MINORS_MAX_N: usize = 16;
/// Default cap on `q^k` for codeword enumeration.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MdsCheck {
    ExhaustiveMinors,
    MinWeight,
    SkippedTooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub self_dual: bool,
    pub rank_ok: bool,
    pub distinct_points: bool,
    pub mds_checked: MdsCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_distance: Option<usize>,
    /// Wall-clock time; kept out of serialized output so artifacts stay reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    /// Everything that was checked passed.
    pub fn passed(&self) -> bool {
        self.self_dual && self.rank_ok && self.distinct_points && self.mds != Some(false)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub run_mds: bool,
    pub minors_max_n: usize,
    pub enumeration_budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            run_mds: true,
            minors_max_n: DEFAULT_MINORS_MAX_N,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
        }
    }
}

/// Row-reduce a copy of `m`; pivot is the first nonzero entry in each column.
pub fn rank(ctx: &FieldCtx, m: &Matrix) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                let (x, y) = (a.get(r, j), a.get(piv, j));
                a.set(r, j, y);
                a.set(piv, j, x);
            }
        }
        let inv = ctx.inv(a.get(r, c)).expect("pivot is nonzero");
        for i in r + 1..rows {
            let f = ctx.mul(a.get(i, c), inv);
            if f.is_zero() {
                continue;
            }
            for j in c..cols {
                let v = ctx.sub(a.get(i, j), ctx.mul(f, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        r += 1;
    }
    r
}

/// Determinant of a square matrix by elimination.
pub fn determinant(ctx: &FieldCtx, m: &Matrix) -> FieldElement {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let mut a = m.clone();
    let n = a.rows();
    let mut det = FieldElement::ONE;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !a.get(i, c).is_zero()) else {
            return FieldElement::ZERO;
        };
        if piv != c {
            for j in 0..n {
                let (x, y) = (a.get(c, j), a.get(piv, j));
                a.set(c, j, y);
                a.set(piv, j, x);
            }
            det = ctx.neg(det);
        }
        let p = a.get(c, c);
        det = ctx.mul(det, p);
        let inv = ctx.inv(p).expect("pivot is nonzero");
        for i in c + 1..n {
            let f = ctx.mul(a.get(i, c), inv);
            if f.is_zero() {
                continue;
            }
            for j in c..n {
                let v = ctx.sub(a.get(i, j), ctx.mul(f, a.get(c, j)));
                a.set(i, j, v);
            }
        }
    }
    det
}

fn check_half_rate(g: &Matrix) -> Result<(), VerifyError> {
    if g.cols() != 2 * g.rows() {
        return Err(VerifyError::DimensionMismatch {
            n: g.cols(),
            k: g.rows(),
        });
    }
    Ok(())
}

/// `G G^T = 0` and `rank(G) = k`, for a `k x 2k` matrix.
pub fn self_dual_matrix(ctx: &FieldCtx, g: &Matrix) -> Result<bool, VerifyError> {
    check_half_rate(g)?;
    Ok(g.gram(ctx).is_zero() && rank(ctx, g) == g.rows())
}

pub fn check_self_dual(art: &CodeArtifact) -> Result<bool, VerifyError> {
    self_dual_matrix(art.ctx(), art.generator())
}

/// Advance `idx` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
        return false;
    };
    idx[i] += 1;
    for j in i + 1..k {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

/// Lexicographically first set of `k` columns with vanishing determinant.
pub fn first_singular_minor(
    ctx: &FieldCtx,
    g: &Matrix,
    max_n: usize,
) -> Result<Option<Vec<usize>>, VerifyError> {
    let (k, n) = (g.rows(), g.cols());
    if n > max_n {
        return Err(VerifyError::TooLarge(format!(
            "minor enumeration needs n <= {max_n}, got {n}"
        )));
    }
    if k > n {
        return Err(VerifyError::DimensionMismatch { n, k });
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if determinant(ctx, &g.select_columns(&idx)).is_zero() {
            return Ok(Some(idx));
        }
        if !next_combination(&mut idx, n) {
            return Ok(None);
        }
    }
}

/// Every `k` columns of `G` are independent.
pub fn check_mds_minors(art: &CodeArtifact) -> Result<bool, VerifyError> {
    Ok(first_singular_minor(art.ctx(), art.generator(), DEFAULT_MINORS_MAX_N)?.is_none())
}

/// Minimum Hamming weight over all nonzero codewords spanned by the rows of `g`.
pub fn min_distance_matrix(ctx: &FieldCtx, g: &Matrix, budget: u64) -> Result<usize, VerifyError> {
    let (k, n) = (g.rows(), g.cols());
    let q = ctx.order();
    let fits = q.checked_pow(k as u32).is_some_and(|total| total <= budget);
    if !fits {
        return Err(VerifyError::TooLarge(format!(
            "{q}^{k} codewords exceed the enumeration budget {budget}"
        )));
    }
    let elements: Vec<FieldElement> = ctx.elements().collect();
    let mut best = usize::MAX;
    // Weight is invariant under scaling, so the first nonzero coefficient is fixed to 1.
    let mut stack: Vec<Vec<FieldElement>> = vec![vec![FieldElement::ZERO; n]; k + 1];
    for lead in 0..k {
        stack[lead + 1] = g.row(lead).to_vec();
        enumerate_tail(ctx, g, &elements, &mut stack, lead + 1, &mut best);
    }
    Ok(best)
}

fn enumerate_tail(
    ctx: &FieldCtx,
    g: &Matrix,
    elements: &[FieldElement],
    stack: &mut [Vec<FieldElement>],
    depth: usize,
    best: &mut usize,
) {
    let k = g.rows();
    if depth == k {
        let w = stack[k].iter().filter(|x| !x.is_zero()).count();
        *best = (*best).min(w);
        return;
    }
    for &c in elements {
        let (lo, hi) = stack.split_at_mut(depth + 1);
        let src = &lo[depth];
        let dst = &mut hi[0];
        for ((d, &s), &r) in dst.iter_mut().zip(src).zip(g.row(depth)) {
            *d = ctx.add(s, ctx.mul(c, r));
        }
        enumerate_tail(ctx, g, elements, stack, depth + 1, best);
    }
}

pub fn min_distance(art: &CodeArtifact) -> Result<usize, VerifyError> {
    min_distance_matrix(art.ctx(), art.generator(), DEFAULT_ENUMERATION_BUDGET)
}

pub fn check_distinct_points(art: &CodeArtifact) -> bool {
    let mut vals: Vec<u64> = art
        .eval_vector()
        .points()
        .iter()
        .map(|p| p.value())
        .collect();
    vals.sort_unstable();
    vals.windows(2).all(|w| w[0] != w[1])
}

/// Run every applicable check on a bare generator matrix.
pub fn verify_matrix(
    ctx: &FieldCtx,
    g: &Matrix,
    points: &[FieldElement],
    opts: VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    check_half_rate(g)?;
    let self_dual = g.gram(ctx).is_zero();
    let rank_ok = rank(ctx, g) == g.rows();
    let mut sorted: Vec<u64> = points.iter().map(|p| p.value()).collect();
    sorted.sort_unstable();
    let distinct_points = sorted.windows(2).all(|w| w[0] != w[1]);

    let (mut mds_checked, mut mds, mut min_d) = (MdsCheck::SkippedTooLarge, None, None);
    if opts.run_mds {
        let (k, n) = (g.rows(), g.cols());
        if n <= opts.minors_max_n {
            mds_checked = MdsCheck::ExhaustiveMinors;
            mds = Some(first_singular_minor(ctx, g, opts.minors_max_n)?.is_none());
        }
        if let Ok(d) = min_distance_matrix(ctx, g, opts.enumeration_budget) {
            min_d = Some(d);
            if mds.is_none() {
                mds_checked = MdsCheck::MinWeight;
                mds = Some(d == n - k + 1);
            }
        }
    }
    Ok(VerificationReport {
        self_dual: self_dual && rank_ok,
        rank_ok,
        distinct_points,
        mds_checked,
        mds,
        min_distance: min_d,
        elapsed: start.elapsed(),
    })
}

pub fn verify_artifact(
    art: &CodeArtifact,
    opts: VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    verify_matrix(art.ctx(), art.generator(), art.eval_vector().points(), opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use crate::grs::{assemble_self_dual_grs, roots_of_unity_vector, EvalVector, ScalingVector};

    fn mat(ctx: &FieldCtx, rows: &[&[u64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| ctx.element(v).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    fn wrap(ctx: &FieldCtx, g: Matrix) -> CodeArtifact {
        let n = g.cols();
        CodeArtifact::from_parts(
            ctx.clone(),
            EvalVector::new(vec![], false).unwrap(),
            ScalingVector::ones(n),
            g,
            "hand-built",
        )
    }

    #[test]
    fn self_dual_examples() {
        let f9 = make_field(3, 2).unwrap();
        // [[1, x]]: 1 + x^2 = 0
        assert!(check_self_dual(&wrap(&f9, mat(&f9, &[&[1, 3]]))).unwrap());
        let f3 = make_field(3, 1).unwrap();
        assert!(!check_self_dual(&wrap(&f3, mat(&f3, &[&[1, 1]]))).unwrap());
        assert!(matches!(
            check_self_dual(&wrap(&f3, mat(&f3, &[&[1, 1, 1]]))),
            Err(VerifyError::DimensionMismatch { .. })
        ));
        // Gram is zero but rank is deficient.
        assert!(!check_self_dual(&wrap(&f9, mat(&f9, &[&[1, 3, 0, 0], &[1, 3, 0, 0]]))).unwrap());
    }

    #[test]
    fn mds_minor_examples() {
        let f5 = make_field(5, 1).unwrap();
        let g = mat(&f5, &[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
        assert_eq!(first_singular_minor(&f5, &g, 16).unwrap(), Some(vec![0, 1]));
        assert!(!check_mds_minors(&wrap(&f5, g)).unwrap());

        let f9 = make_field(3, 2).unwrap();
        let a = roots_of_unity_vector(&f9, 4).unwrap();
        let art = assemble_self_dual_grs(&f9, &a, FieldElement::ONE).unwrap();
        assert!(check_mds_minors(&art).unwrap());
        assert_eq!(min_distance(&art).unwrap(), 3);

        let big = Matrix::zeros(10, 20);
        assert!(matches!(
            check_mds_minors(&wrap(&f5, big)),
            Err(VerifyError::TooLarge(_))
        ));
    }

    #[test]
    fn min_distance_examples() {
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(min_distance(&wrap(&f3, mat(&f3, &[&[1, 1]]))).unwrap(), 2);
        // Brute force over all 9 messages of a [3,2] code
        let g = mat(&f3, &[&[1, 0, 1], &[0, 1, 1]]);
        let mut best = usize::MAX;
        for a in 0..3u64 {
            for b in 0..3u64 {
                if a == 0 && b == 0 {
                    continue;
                }
                let w = [a, b, (a + b) % 3].iter().filter(|&&x| x != 0).count();
                best = best.min(w);
            }
        }
        assert_eq!(min_distance_matrix(&f3, &g, 1 << 20).unwrap(), best);
        let f9 = make_field(3, 2).unwrap();
        let g = Matrix::zeros(8, 16);
        assert!(matches!(
            min_distance_matrix(&f9, &g, DEFAULT_ENUMERATION_BUDGET),
            Err(VerifyError::TooLarge(_))
        ));
    }

    #[test]
    fn determinant_and_rank() {
        let f7 = make_field(7, 1).unwrap();
        let m = mat(&f7, &[&[2, 1], &[1, 4]]);
        assert_eq!(determinant(&f7, &m), FieldElement::ZERO); // 8 - 1 = 7
        let m = mat(&f7, &[&[0, 1], &[1, 0]]);
        assert_eq!(determinant(&f7, &m), f7.from_int(-1));
        assert_eq!(rank(&f7, &mat(&f7, &[&[1, 2, 3], &[2, 4, 6]])), 1);
        assert_eq!(rank(&f7, &mat(&f7, &[&[0, 0, 1], &[0, 1, 0]])), 2);
    }

    #[test]
    fn distinct_points() {
        let f5 = make_field(5, 1).unwrap();
        let art = CodeArtifact::from_parts(
            f5.clone(),
            EvalVector::new(vec![], false).unwrap(),
            ScalingVector::ones(0),
            Matrix::zeros(0, 0),
            "empty",
        );
        assert!(check_distinct_points(&art));
        let report = verify_matrix(
            &f5,
            &mat(&f5, &[&[1, 2]]),
            &[f5.from_int(1), f5.from_int(1)],
            VerifyOptions::default(),
        )
        .unwrap();
        assert!(!report.distinct_points);
        assert!(report.self_dual);
    }

    #[test]
    fn lexicographic_combinations() {
        let mut idx = vec![0, 1];
        let mut seen = vec![idx.clone()];
        while next_combination(&mut idx, 4) {
            seen.push(idx.clone());
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }
}
