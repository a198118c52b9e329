//! Candidate maximisers of `d(·, b)` over a pointed body `a`.
//!
//! Where `0 < d(x, b) < π/2` the distance is differentiable and its gradient
//! points away from the nearest point `p`. If `x` maximises `d(·, b)` over
//! `a` and lies in the relative interior of a face `F` of `a`, while `p`
//! lies in the relative interior of a face `G` of `b`, then `p` is the
//! normalized projection of `x` onto `span G` and the gradient is normal to
//! `span F`. Hence `x` is an eigenvector of `P_F P_G` restricted to
//! `span F`. Enumerating face pairs therefore yields a finite set that
//! contains every maximiser.

use std::collections::BTreeSet;

use nalgebra::DMatrix;

use crate::body::SphericalBody;
use crate::linalg;
use crate::scalar::Scalar;

/// Generator index sets of the faces of a pointed body, the body itself
/// included.
fn face_sets<S: Scalar>(body: &SphericalBody<S>) -> BTreeSet<Vec<usize>> {
    let gens = body.generator_rows();
    let tol = S::tol_ray();
    let all: Vec<usize> = (0..gens.len()).collect();
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    faces.insert(all.clone());
    for i in &all {
        faces.insert(vec![*i]);
    }
    let mut frontier: Vec<Vec<usize>> = body
        .normal_rows()
        .iter()
        .map(|n| all.iter().copied().filter(|&i| linalg::dot(n, &gens[i]).abs() <= tol).collect())
        .filter(|f: &Vec<usize>| !f.is_empty())
        .collect();
    let facets = frontier.clone();
    while let Some(f) = frontier.pop() {
        if !faces.insert(f.clone()) {
            continue;
        }
        for g in &facets {
            let meet: Vec<usize> = f.iter().copied().filter(|i| g.contains(i)).collect();
            if !meet.is_empty() && !faces.contains(&meet) {
                frontier.push(meet);
            }
        }
    }
    faces
}

/// Orthonormal bases of the linear spans of the faces of `body`.
pub(crate) fn face_spans<S: Scalar>(body: &SphericalBody<S>) -> Vec<Vec<Vec<S>>> {
    let gens = body.generator_rows();
    let mut spans: Vec<Vec<Vec<S>>> = Vec::new();
    for face in face_sets(body) {
        let rows: Vec<Vec<S>> = face.iter().map(|&i| gens[i].clone()).collect();
        let basis = linalg::span_basis(&rows, S::tol_ray());
        if !basis.is_empty() {
            spans.push(basis);
        }
    }
    spans
}

/// Unit eigenvectors (both signs) of `P_F P_G` on `span F`, for orthonormal
/// bases `f` and `g`.
fn stationary_points<S: Scalar>(f: &[Vec<S>], g: &[Vec<S>]) -> Vec<Vec<S>> {
    if f.len() == 1 {
        return vec![f[0].clone()];
    }
    let c = DMatrix::from_fn(f.len(), g.len(), |i, j| linalg::dot(&f[i], &g[j]).as_f64());
    let eig = (&c * c.transpose()).symmetric_eigen();
    let mut out = Vec::with_capacity(2 * f.len());
    for k in 0..f.len() {
        let mut x = vec![S::zero(); f[0].len()];
        for (i, row) in f.iter().enumerate() {
            linalg::axpy(&mut x, S::lit(eig.eigenvectors[(i, k)]), row);
        }
        if let Some(u) = linalg::normalized(&x) {
            out.push(linalg::scale(&u, -S::one()));
            out.push(u);
        }
    }
    out
}

/// Points of `a` containing every maximiser of `d(·, b)` over `a`, valid
/// when both bodies are pointed and `d(·, b) < π/2` throughout `a`.
pub(crate) fn candidates<S: Scalar>(a: &SphericalBody<S>, b: &SphericalBody<S>) -> Vec<Vec<S>> {
    let a_spans = face_spans(a);
    let b_spans = face_spans(b);
    let mut out = a.generator_rows();
    for f in a_spans.iter().filter(|f| f.len() > 1) {
        for g in &b_spans {
            out.extend(stationary_points(f, g).into_iter().filter(|x| a.contains_vec(x)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::UnitPoint;

    fn p(c: &[f64]) -> UnitPoint<f64> {
        UnitPoint::from_slice(c).unwrap()
    }

    #[test]
    fn square_has_ten_faces() {
        let sq: Vec<_> = [[1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [-1.0, 0.0, 1.0], [0.0, -1.0, 1.0]]
            .iter()
            .map(|c| p(c))
            .collect();
        let body = SphericalBody::from_generators(&sq).unwrap();
        // 4 vertices, 4 edges and the square itself
        assert_eq!(face_sets(&body).len(), 9);
        let dims: Vec<usize> = face_spans(&body).iter().map(Vec::len).collect();
        assert_eq!(dims.iter().filter(|&&d| d == 2).count(), 4);
    }

    #[test]
    fn edge_candidates_lie_in_the_body() {
        let arc = SphericalBody::from_generators(&[p(&[0.2, 1.0, -0.3]), p(&[0.2, -1.0, -0.3])]).unwrap();
        let tri = SphericalBody::from_generators(&[p(&[1.0, 0.0, 0.05]), p(&[-0.5, 0.8, 0.05]), p(&[-0.5, -0.8, 0.05])])
            .unwrap();
        let c = candidates(&arc, &tri);
        assert!(c.len() > 2);
        assert!(c.iter().all(|x| arc.contains_vec(x) && (linalg::norm(x) - 1.0).abs() < 1e-12));
    }
}
