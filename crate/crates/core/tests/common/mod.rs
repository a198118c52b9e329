//! Independent reference computations used by the integration tests.
//!
//! Nothing here calls into the library's geometry: duals come from subset
//! enumeration with nalgebra, distances from enumerating the faces a nearest
//! point can lie on.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn unit(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn angle(a: &[f64], b: &[f64]) -> f64 {
    let cross: f64 = {
        let s = dot(a, a) * dot(b, b) - dot(a, b).powi(2);
        s.max(0.0).sqrt()
    };
    cross.atan2(dot(a, b))
}

/// All `k`-element index subsets of `0..n`, in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn matrix(rows: &[&Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j])
}

/// Extreme rays of `{u : u·g >= 0}` for a full-dimensional cone, by testing
/// the normal of every `d − 1` generators of rank `d − 1`.
pub fn brute_dual_rays(gens: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let d = gens[0].len();
    let mut rays: Vec<Vec<f64>> = Vec::new();
    for s in subsets(gens.len(), d - 1) {
        let m = matrix(&s.iter().map(|&i| &gens[i]).collect::<Vec<_>>());
        if m.rank(1e-9) < d - 1 {
            continue;
        }
        // pad with a zero row: the null vector is the smallest singular direction
        let full = DMatrix::from_fn(d, d, |i, j| if i < d - 1 { m[(i, j)] } else { 0.0 });
        let svd_full = full.svd(false, true);
        let vt = svd_full.v_t.expect("requested");
        let (k, _) = svd_full
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty");
        let u: Vec<f64> = (0..d).map(|j| vt[(k, j)]).collect();
        for sign in [1.0, -1.0] {
            let cand: Vec<f64> = u.iter().map(|x| sign * x).collect();
            if gens.iter().all(|g| dot(&cand, g) >= -1e-12) && !rays.iter().any(|r| angle(r, &cand) < 1e-9) {
                rays.push(unit(&cand));
            }
        }
    }
    rays
}

/// Whether two unit ray sets agree up to `tol` in both directions.
pub fn same_rays(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    let covered = |x: &[Vec<f64>], y: &[Vec<f64>]| {
        x.iter()
            .all(|r| y.iter().any(|s| r.iter().zip(s).all(|(p, q)| (p - q).abs() <= tol)))
    };
    a.len() == b.len() && covered(a, b) && covered(b, a)
}

/// `d(x, cone(gens) ∩ S^n)` from every face candidate: the projection of
/// `x` onto the span of each linearly independent subset of generators,
/// kept when its coefficients are nonnegative, together with the generators
/// themselves. With `normals` of a full-dimensional cone, members return 0
/// at once and only subsets spanning a boundary face are tried.
pub fn point_distance(x: &[f64], gens: &[Vec<f64>], normals: Option<&[Vec<f64>]>) -> f64 {
    let d = x.len();
    let max_k = match normals {
        Some(ns) if ns.iter().all(|n| dot(n, x) >= -1e-12) => return 0.0,
        Some(_) => d - 1,
        None => d,
    };
    let mut best = gens.iter().map(|g| angle(x, g)).fold(f64::INFINITY, f64::min);
    for s in subsets(gens.len(), 2) {
        // closed form for arcs
        let (a, b) = (&gens[s[0]], &gens[s[1]]);
        let (ab, xa, xb) = (dot(a, b), dot(x, a), dot(x, b));
        let det = 1.0 - ab * ab;
        if det < 1e-12 {
            continue;
        }
        let (ca, cb) = ((xa - ab * xb) / det, (xb - ab * xa) / det);
        if ca < -1e-13 || cb < -1e-13 {
            continue;
        }
        let p: Vec<f64> = a.iter().zip(b).map(|(u, v)| ca * u + cb * v).collect();
        let r: Vec<f64> = x.iter().zip(&p).map(|(u, v)| u - v).collect();
        let np = dot(&p, &p).sqrt();
        if np > 1e-12 {
            best = best.min(dot(&r, &r).sqrt().atan2(np));
        }
    }
    for k in 3..=max_k.min(gens.len()) {
        for s in subsets(gens.len(), k) {
            let a = matrix(&s.iter().map(|&i| &gens[i]).collect::<Vec<_>>()).transpose();
            let gram = a.transpose() * &a;
            let Some(chol) = gram.cholesky() else { continue };
            let coef = chol.solve(&(a.transpose() * DVector::from_column_slice(x)));
            if coef.iter().any(|&c| c < -1e-13) {
                continue;
            }
            let p = &a * coef;
            let np = p.norm();
            if np < 1e-12 {
                continue;
            }
            let r = (DVector::from_column_slice(x) - &p).norm();
            best = best.min(r.atan2(np));
        }
    }
    best
}

/// Points of `cone(gens) ∩ S^n`: the generators, every arc between two of
/// them at spacing at most `delta`, and `extra` random convex combinations.
pub fn dense_sample(gens: &[Vec<f64>], delta: f64, extra: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = gens.to_vec();
    for s in subsets(gens.len(), 2) {
        let (a, b) = (&gens[s[0]], &gens[s[1]]);
        let steps = (angle(a, b) / delta).ceil() as usize;
        for t in 1..steps {
            let t = t as f64 / steps as f64;
            let theta = angle(a, b);
            // slerp keeps the spacing uniform along the arc
            let (wa, wb) = (((1.0 - t) * theta).sin(), (t * theta).sin());
            let v: Vec<f64> = a.iter().zip(b).map(|(x, y)| wa * x + wb * y).collect();
            out.push(unit(&v));
        }
    }
    for _ in 0..extra {
        let w: Vec<f64> = (0..gens.len()).map(|_| -rng.random::<f64>().ln()).collect();
        let mut v = vec![0.0; gens[0].len()];
        for (wi, g) in w.iter().zip(gens) {
            for (vj, gj) in v.iter_mut().zip(g) {
                *vj += wi * gj;
            }
        }
        out.push(unit(&v));
    }
    out
}

/// Sampled `max_{x ∈ a} d(x, b)`; a lower bound on the true value.
pub fn sampled_directed(a: &[Vec<f64>], b: &[Vec<f64>], delta: f64, rng: &mut ChaCha8Rng) -> f64 {
    let full = matrix(&b.iter().collect::<Vec<_>>()).rank(1e-9) == b[0].len();
    let normals = if full { brute_dual_rays(b) } else { Vec::new() };
    let normals = full.then_some(normals.as_slice());
    dense_sample(a, delta, 2000, rng)
        .iter()
        .map(|x| point_distance(x, b, normals))
        .fold(0.0, f64::max)
}
