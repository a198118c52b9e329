//! Polyhedral cone machinery: V-representation to H-representation
//! conversion by the double description method, and Euclidean projection
//! onto a finitely generated cone by nonnegative least squares.
//!
//! A cone `C = cone(G)` is always handed around as its generator rows. Its
//! dual `C* = {q : q·g >= 0 for all g in G}` is returned as a lineality part
//! (an orthonormal basis of `span(G)^⊥`, listed once; callers add both signs)
//! and the extreme rays of the pointed part `C* ∩ span(G)`.

use crate::error::{GeometryError, Result};
use crate::linalg;
use crate::scalar::Scalar;

/// Generators of a dual cone, split into its lineality space and the
/// extreme rays of its pointed part.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCone<S: Scalar> {
    /// Canonical orthonormal basis of the lineality space.
    pub lineality: Vec<Vec<S>>,
    /// Unit extreme rays of the pointed part, lexicographically sorted.
    pub rays: Vec<Vec<S>>,
}

impl<S: Scalar> DualCone<S> {
    pub fn is_zero(&self) -> bool {
        self.lineality.is_empty() && self.rays.is_empty()
    }

    /// Flat generator list under the `±lineality + rays` convention.
    pub fn generators(&self) -> Vec<Vec<S>> {
        let mut out = Vec::with_capacity(2 * self.lineality.len() + self.rays.len());
        for l in &self.lineality {
            out.push(l.clone());
            out.push(linalg::scale(l, -S::one()));
        }
        out.extend(self.rays.iter().cloned());
        out.sort_by(|a, b| linalg::lex_cmp(a, b));
        out
    }
}

/// Dual of `cone(generators)`.
///
/// Returns [`GeometryError::PolarEmpty`] when the dual is `{0}`, i.e. the
/// generators positively span the whole space.
pub fn dual_cone<S: Scalar>(generators: &[Vec<S>]) -> Result<DualCone<S>> {
    let Some(first) = generators.first() else {
        return Err(GeometryError::EmptyInput);
    };
    let dim = first.len();
    if let Some(bad) = generators.iter().find(|g| g.len() != dim) {
        return Err(GeometryError::DimensionMismatch {
            expected: dim.saturating_sub(1),
            found: bad.len().saturating_sub(1),
        });
    }
    let span = linalg::span_basis(generators, S::tol_ray());
    let lineality = linalg::canonical_complement(&span, dim);
    let local: Vec<Vec<S>> = generators
        .iter()
        .map(|g| {
            let v: Vec<S> = span.iter().map(|b| linalg::dot(g, b)).collect();
            linalg::normalized(&v).unwrap_or(v)
        })
        .collect();
    let local_rays = double_description(&local, span.len());
    let mut rays: Vec<Vec<S>> = Vec::with_capacity(local_rays.len());
    for y in local_rays {
        let mut v = vec![S::zero(); dim];
        for (c, b) in y.iter().zip(&span) {
            linalg::axpy(&mut v, *c, b);
        }
        // strip round-off leaking into the lineality directions
        linalg::reject(&mut v, &lineality);
        if let Some(u) = linalg::normalized(&v) {
            if !rays.iter().any(|r| same_ray(r, &u)) {
                rays.push(u);
            }
        }
    }
    rays.sort_by(|a, b| linalg::lex_cmp(a, b));
    let out = DualCone { lineality, rays };
    if out.is_zero() {
        return Err(GeometryError::PolarEmpty);
    }
    Ok(out)
}

pub(crate) fn same_ray<S: Scalar>(a: &[S], b: &[S]) -> bool {
    crate::point::angle_between(a, b) <= S::tol_ray()
}

#[derive(Clone)]
struct Ray<S> {
    v: Vec<S>,
    zero: Bitset,
}

#[derive(Clone, PartialEq, Eq)]
struct Bitset(Vec<u64>);

impl Bitset {
    fn new(bits: usize) -> Self {
        Self(vec![0; bits.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn subset_of(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

/// Extreme rays of the pointed cone `{y in R^d : row·y >= 0 for all rows}`,
/// where the rows span `R^d`.
///
/// Classic incremental double description: start from the simplicial cone
/// of `d` independent rows, then intersect with one half-space at a time,
/// combining combinatorially adjacent pairs of rays on opposite sides.
fn double_description<S: Scalar>(rows: &[Vec<S>], d: usize) -> Vec<Vec<S>> {
    if d == 0 {
        return Vec::new();
    }
    let tol = S::tol_ray();
    let m = rows.len();
    let init = independent_rows(rows, d);
    debug_assert_eq!(init.len(), d);
    let a: Vec<Vec<S>> = init.iter().map(|&i| rows[i].clone()).collect();
    let mut rays: Vec<Ray<S>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut e = vec![S::zero(); d];
        e[j] = S::one();
        let Some(col) = linalg::solve(&a, &e) else {
            return Vec::new();
        };
        let mut zero = Bitset::new(m);
        for (k, &i) in init.iter().enumerate() {
            if k != j {
                zero.set(i);
            }
        }
        rays.push(Ray {
            v: linalg::normalized(&col).expect("column of an invertible matrix"),
            zero,
        });
    }

    let min_common = d.saturating_sub(2);
    for (k, row) in rows.iter().enumerate() {
        if init.contains(&k) {
            continue;
        }
        let vals: Vec<S> = rays.iter().map(|r| linalg::dot(row, &r.v)).collect();
        let mut next: Vec<Ray<S>> = Vec::with_capacity(rays.len());
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (i, &v) in vals.iter().enumerate() {
            if v > tol {
                pos.push(i);
            } else if v < -tol {
                neg.push(i);
            }
        }
        for (i, &v) in vals.iter().enumerate() {
            if v >= -tol {
                let mut r = rays[i].clone();
                if v <= tol {
                    r.zero.set(k);
                }
                next.push(r);
            }
        }
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zero.and(&rays[n].zero);
                if common.count() < min_common {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == n || !common.subset_of(&r.zero));
                if !adjacent {
                    continue;
                }
                let mut w = linalg::scale(&rays[n].v, vals[p]);
                linalg::axpy(&mut w, -vals[n], &rays[p].v);
                if let Some(u) = linalg::normalized(&w) {
                    let mut zero = common;
                    zero.set(k);
                    next.push(Ray { v: u, zero });
                }
            }
        }
        rays = next;
        if rays.is_empty() {
            break;
        }
    }
    rays.into_iter().map(|r| r.v).collect()
}

/// Indices of `d` linearly independent rows, picked greedily by largest
/// residual.
fn independent_rows<S: Scalar>(rows: &[Vec<S>], d: usize) -> Vec<usize> {
    let mut basis: Vec<Vec<S>> = Vec::new();
    let mut picked = Vec::new();
    while picked.len() < d {
        let mut best: Option<(usize, S, Vec<S>)> = None;
        for (i, r) in rows.iter().enumerate() {
            if picked.contains(&i) {
                continue;
            }
            let mut v = r.clone();
            linalg::reject(&mut v, &basis);
            let n = linalg::norm(&v);
            if best.as_ref().is_none_or(|(_, b, _)| n > *b) {
                best = Some((i, n, v));
            }
        }
        let Some((i, n, v)) = best else { break };
        if n <= S::tol_ray() {
            break;
        }
        basis.push(linalg::scale(&v, S::one() / n));
        picked.push(i);
    }
    picked
}

/// Euclidean projection of `x` onto `cone(generators)` (Lawson-Hanson
/// nonnegative least squares). Returns the projected vector.
pub fn project_onto_cone<S: Scalar>(x: &[S], generators: &[Vec<S>]) -> Vec<S> {
    let m = generators.len();
    let dim = x.len();
    let tol = S::epsilon() * S::lit(256.0);
    let mut lambda = vec![S::zero(); m];
    let mut passive = vec![false; m];
    let combine = |lambda: &[S]| {
        let mut p = vec![S::zero(); dim];
        for (l, g) in lambda.iter().zip(generators) {
            if *l != S::zero() {
                linalg::axpy(&mut p, *l, g);
            }
        }
        p
    };
    let mut banned = vec![false; m];
    for _outer in 0..(3 * m + 10) {
        let resid = linalg::sub(x, &combine(&lambda));
        let best = (0..m)
            .filter(|&j| !passive[j] && !banned[j])
            .map(|j| (j, linalg::dot(&generators[j], &resid)))
            .fold(None::<(usize, S)>, |b, c| match b {
                Some(bb) if bb.1 >= c.1 => Some(bb),
                _ => Some(c),
            });
        let Some((j, w)) = best else { break };
        if w <= tol {
            break;
        }
        passive[j] = true;
        for _inner in 0..(3 * m + 10) {
            let idx: Vec<usize> = (0..m).filter(|&i| passive[i]).collect();
            let Some(sol) = least_squares(x, generators, &idx) else {
                // column dependent on the current passive set: it cannot
                // improve the fit, so stop offering it
                passive[j] = false;
                banned[j] = true;
                break;
            };
            let mut s = vec![S::zero(); m];
            for (&i, &v) in idx.iter().zip(&sol) {
                s[i] = v;
            }
            if idx.iter().all(|&i| s[i] > S::zero()) {
                lambda = s;
                break;
            }
            let mut alpha = S::one();
            for &i in &idx {
                if s[i] <= S::zero() {
                    let denom = lambda[i] - s[i];
                    if denom > S::zero() {
                        alpha = alpha.min(lambda[i] / denom);
                    }
                }
            }
            for &i in &idx {
                lambda[i] = lambda[i] + alpha * (s[i] - lambda[i]);
                if lambda[i] <= tol {
                    lambda[i] = S::zero();
                    passive[i] = false;
                }
            }
        }
        banned.iter_mut().for_each(|b| *b = false);
    }
    combine(&lambda)
}

/// Unconstrained least squares over the generator subset `idx` via
/// modified Gram-Schmidt QR. `None` if the columns are dependent.
fn least_squares<S: Scalar>(x: &[S], generators: &[Vec<S>], idx: &[usize]) -> Option<Vec<S>> {
    let k = idx.len();
    let mut q: Vec<Vec<S>> = Vec::with_capacity(k);
    let mut r = vec![vec![S::zero(); k]; k];
    for (c, &i) in idx.iter().enumerate() {
        let mut v = generators[i].clone();
        for _ in 0..2 {
            for (row, qv) in q.iter().enumerate() {
                let proj = linalg::dot(&v, qv);
                r[row][c] = r[row][c] + proj;
                linalg::axpy(&mut v, -proj, qv);
            }
        }
        let n = linalg::norm(&v);
        if n <= S::lit(1e3) * S::epsilon() {
            return None;
        }
        r[c][c] = n;
        q.push(linalg::scale(&v, S::one() / n));
    }
    let qtx: Vec<S> = q.iter().map(|qv| linalg::dot(qv, x)).collect();
    let mut sol = vec![S::zero(); k];
    for i in (0..k).rev() {
        let mut s = qtx[i];
        for j in i + 1..k {
            s = s - r[i][j] * sol[j];
        }
        sol[i] = s / r[i][i];
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vec<f64> {
        linalg::normalized(c).unwrap()
    }

    #[test]
    fn quadrant_is_self_dual() {
        let d = dual_cone(&[v(&[1.0, 0.0]), v(&[0.0, 1.0])]).unwrap();
        assert!(d.lineality.is_empty());
        assert_eq!(d.rays, vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn dual_of_a_ray_is_a_half_plane() {
        let d = dual_cone(&[v(&[1.0, 0.0])]).unwrap();
        assert_eq!(d.lineality, vec![vec![0.0, 1.0]]);
        assert_eq!(d.rays, vec![vec![1.0, 0.0]]);
        assert_eq!(
            d.generators(),
            vec![vec![0.0, -1.0], vec![0.0, 1.0], vec![1.0, 0.0]]
        );
    }

    #[test]
    fn spanning_set_has_zero_dual() {
        let g = vec![
            v(&[1.0, 0.0, 0.0]),
            v(&[-1.0, 0.0, 0.0]),
            v(&[0.0, 1.0, 0.0]),
            v(&[0.0, -1.0, 0.0]),
            v(&[0.0, 0.0, 1.0]),
            v(&[0.0, 0.0, -1.0]),
        ];
        assert_eq!(dual_cone(&g), Err(GeometryError::PolarEmpty));
    }

    #[test]
    fn octant_in_three_space() {
        let g = vec![v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0]), v(&[0.0, 0.0, 1.0])];
        let d = dual_cone(&g).unwrap();
        assert_eq!(d.rays.len(), 3);
        assert!(d.lineality.is_empty());
    }

    #[test]
    fn square_pyramid_needs_adjacency() {
        // four rays around the z axis: the dual has four facets-normals
        let g: Vec<Vec<f64>> = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]
            .iter()
            .map(|&(x, y)| v(&[x, y, 1.0]))
            .collect();
        let d = dual_cone(&g).unwrap();
        assert_eq!(d.rays.len(), 4);
        for r in &d.rays {
            let tight = g.iter().filter(|gg| linalg::dot(gg, r).abs() < 1e-12).count();
            assert_eq!(tight, 2);
            assert!(g.iter().all(|gg| linalg::dot(gg, r) > -1e-12));
        }
    }

    #[test]
    fn projection_onto_quadrant() {
        let g = vec![v(&[1.0, 0.0]), v(&[0.0, 1.0])];
        let p = project_onto_cone(&[0.6, -0.8], &g);
        assert!((p[0] - 0.6).abs() < 1e-15 && p[1].abs() < 1e-15);
        let p = project_onto_cone(&[-0.6, -0.8], &g);
        assert!(linalg::norm(&p) < 1e-15);
        let p = project_onto_cone(&[0.6, 0.8], &g);
        assert!((p[0] - 0.6).abs() < 1e-15 && (p[1] - 0.8).abs() < 1e-15);
    }
}
