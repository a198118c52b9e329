//! Dense helpers for the handful of short vectors and tiny matrices the cone
//! routines need. Dimensions here are the ambient dimension `n + 1`, so
//! nothing is worth a BLAS call.

use crate::scalar::Scalar;

pub(crate) fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (&x, &y)| acc + x * y)
}

pub(crate) fn norm<S: Scalar>(a: &[S]) -> S {
    // scaled to avoid under/overflow on tiny residuals
    let m = a.iter().fold(S::zero(), |m, &x| m.max(x.abs()));
    if m == S::zero() {
        return S::zero();
    }
    let s = a.iter().fold(S::zero(), |acc, &x| {
        let y = x / m;
        acc + y * y
    });
    m * s.sqrt()
}

pub(crate) fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub(crate) fn add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub(crate) fn scale<S: Scalar>(a: &[S], k: S) -> Vec<S> {
    a.iter().map(|&x| x * k).collect()
}

/// `a += k * b`
pub(crate) fn axpy<S: Scalar>(a: &mut [S], k: S, b: &[S]) {
    for (x, &y) in a.iter_mut().zip(b) {
        *x = *x + k * y;
    }
}

pub(crate) fn normalized<S: Scalar>(a: &[S]) -> Option<Vec<S>> {
    let n = norm(a);
    if n > S::zero() && n.is_finite() {
        Some(scale(a, S::one() / n))
    } else {
        None
    }
}

/// Removes from `v` its components along the orthonormal vectors `basis`
/// (two passes of modified Gram-Schmidt).
pub(crate) fn reject<S: Scalar>(v: &mut [S], basis: &[Vec<S>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(v, b);
            axpy(v, -c, b);
        }
    }
}

/// Orthonormal basis of the span of `rows`, built greedily by always taking
/// the row with the largest remaining component. Rows whose residual falls
/// below `tol` (relative to their own norm) are treated as dependent.
pub(crate) fn span_basis<S: Scalar>(rows: &[Vec<S>], tol: S) -> Vec<Vec<S>> {
    let mut residuals: Vec<Vec<S>> = rows.to_vec();
    let scales: Vec<S> = rows.iter().map(|r| norm(r)).collect();
    let mut basis: Vec<Vec<S>> = Vec::new();
    let dim = rows.first().map_or(0, Vec::len);
    while basis.len() < dim {
        let mut best: Option<(usize, S)> = None;
        for (i, r) in residuals.iter().enumerate() {
            if scales[i] == S::zero() {
                continue;
            }
            let rel = norm(r) / scales[i];
            if rel > tol && best.is_none_or(|(_, b)| rel > b) {
                best = Some((i, rel));
            }
        }
        let Some((i, _)) = best else { break };
        let mut v = residuals[i].clone();
        reject(&mut v, &basis);
        let Some(u) = normalized(&v) else { break };
        for r in residuals.iter_mut() {
            let c = dot(r, &u);
            axpy(r, -c, &u);
        }
        basis.push(u);
    }
    basis
}

pub(crate) fn rank<S: Scalar>(rows: &[Vec<S>], tol: S) -> usize {
    span_basis(rows, tol).len()
}

/// Canonical orthonormal basis of the orthogonal complement of the span of
/// the orthonormal `span` inside `R^dim`.
///
/// The basis depends only on the subspace: standard basis vectors are
/// projected onto the complement and orthonormalized in index order, taking
/// each one whose residual exceeds a fixed threshold.
pub(crate) fn canonical_complement<S: Scalar>(span: &[Vec<S>], dim: usize) -> Vec<Vec<S>> {
    let target = dim.saturating_sub(span.len());
    let mut out: Vec<Vec<S>> = Vec::with_capacity(target);
    if target == 0 {
        return out;
    }
    let threshold = S::lit(0.5) / S::lit(dim as f64).sqrt();
    let residual = |j: usize, out: &Vec<Vec<S>>| {
        let mut e = vec![S::zero(); dim];
        e[j] = S::one();
        reject(&mut e, span);
        reject(&mut e, out);
        e
    };
    for j in 0..dim {
        if out.len() == target {
            break;
        }
        let e = residual(j, &out);
        if norm(&e) >= threshold {
            out.push(normalized(&e).expect("residual above threshold"));
        }
    }
    // the threshold argument guarantees progress; keep a largest-residual
    // fallback for pathological round-off
    while out.len() < target {
        let (_, e) = (0..dim)
            .map(|j| {
                let e = residual(j, &out);
                (norm(&e), e)
            })
            .fold((S::zero(), Vec::new()), |best, cand| if cand.0 > best.0 { cand } else { best });
        match normalized(&e) {
            Some(u) => out.push(u),
            None => break,
        }
    }
    out
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting. Returns `None` for (numerically) singular matrices.
pub(crate) fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let n = a.len();
    let mut m: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(S::zero(), |acc, &x| acc.max(x.abs()));
    if scale == S::zero() {
        return None;
    }
    let tiny = scale * S::epsilon() * S::lit(64.0);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            m[i][col]
                .abs()
                .partial_cmp(&m[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[piv][col].abs() <= tiny {
            return None;
        }
        m.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            if f != S::zero() {
                for k in col..=n {
                    let v = m[col][k];
                    m[row][k] = m[row][k] - f * v;
                }
            }
        }
    }
    let mut x = vec![S::zero(); n];
    for i in (0..n).rev() {
        let mut s = m[i][n];
        for k in i + 1..n {
            s = s - m[i][k] * x[k];
        }
        x[i] = s / m[i][i];
    }
    Some(x)
}

/// Lexicographic order on coordinates.
pub(crate) fn lex_cmp<S: Scalar>(a: &[S], b: &[S]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    a.len().cmp(&b.len())
}
