//! Spherical simplicial decompositions of bodies and a branch-and-bound
//! maximiser for 1-Lipschitz functions over them.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, BTreeSet};

use crate::body::SphericalBody;
use crate::linalg;
use crate::point::angle_between;
use crate::scalar::Scalar;

/// Vertex lists of spherical simplices whose union is the body.
///
/// Pointed parts are triangulated by coning from the first generator over
/// the facets that miss it; lineality directions contribute one orthant per
/// sign pattern.
pub(crate) fn decompose<S: Scalar>(body: &SphericalBody<S>) -> Vec<Vec<Vec<S>>> {
    let dim = body.ambient_dim() + 1;
    let tol = S::tol_ray();
    let normals = body.normal_rows();
    let lineality = if body.is_pointed() {
        Vec::new()
    } else {
        let span = linalg::span_basis(&normals, tol);
        linalg::canonical_complement(&span, dim)
    };
    let rays: Vec<Vec<S>> = body
        .generator_rows()
        .into_iter()
        .filter(|g| lineality.iter().all(|l| linalg::dot(g, l).abs() <= tol))
        .collect();
    let ray_cells: Vec<Vec<usize>> = if rays.is_empty() {
        vec![Vec::new()]
    } else {
        let k = linalg::rank(&rays, tol);
        let face: Vec<usize> = (0..rays.len()).collect();
        let mut out = Vec::new();
        cone_over_facets(&rays, &face, k, &normals, &mut out);
        out
    };
    let mut cells = Vec::new();
    for signs in 0..(1usize << lineality.len()) {
        for cell in &ray_cells {
            let mut verts: Vec<Vec<S>> = lineality
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    if signs >> i & 1 == 1 {
                        linalg::scale(l, -S::one())
                    } else {
                        l.clone()
                    }
                })
                .collect();
            verts.extend(cell.iter().map(|&i| rays[i].clone()));
            cells.push(verts);
        }
    }
    cells
}

fn cone_over_facets<S: Scalar>(
    gens: &[Vec<S>],
    face: &[usize],
    k: usize,
    normals: &[Vec<S>],
    out: &mut Vec<Vec<usize>>,
) {
    if face.len() <= k || k <= 1 {
        out.push(face[..k.max(1).min(face.len())].to_vec());
        return;
    }
    let tol = S::tol_ray();
    let apex = face[0];
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for n in normals {
        let facet: Vec<usize> = face
            .iter()
            .copied()
            .filter(|&i| linalg::dot(n, &gens[i]).abs() <= tol)
            .collect();
        if facet.is_empty() || facet.contains(&apex) || seen.contains(&facet) {
            continue;
        }
        let rows: Vec<Vec<S>> = facet.iter().map(|&i| gens[i].clone()).collect();
        if linalg::rank(&rows, tol) != k - 1 {
            continue;
        }
        seen.insert(facet.clone());
        let start = out.len();
        cone_over_facets(gens, &facet, k - 1, normals, out);
        for cell in &mut out[start..] {
            cell.insert(0, apex);
        }
    }
}

/// Result of a certified maximisation: the true maximum lies in
/// `[lower, lower + gap]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Bracket<S> {
    pub lower: S,
    pub gap: S,
}

struct Cell<S> {
    verts: Vec<Vec<S>>,
    upper: S,
}

impl<S: Scalar> PartialEq for Cell<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: Scalar> Eq for Cell<S> {}

impl<S: Scalar> PartialOrd for Cell<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for Cell<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper.as_f64().total_cmp(&other.upper.as_f64())
    }
}

/// Maximises the 1-Lipschitz (in geodesic distance) function `f` over the
/// union of `cells`, refining by longest-edge bisection until the bracket is
/// at most `resolution` wide or `budget` evaluations have been spent.
pub(crate) fn maximize<S: Scalar, F: Fn(&[S]) -> S>(
    cells: Vec<Vec<Vec<S>>>,
    f: F,
    resolution: S,
    budget: usize,
) -> Bracket<S> {
    let mut lower = S::neg_infinity();
    let mut evals = 0usize;
    let mut heap = BinaryHeap::new();
    let push = |verts: Vec<Vec<S>>, lower: &mut S, evals: &mut usize, heap: &mut BinaryHeap<Cell<S>>| {
        let mut sum = vec![S::zero(); verts[0].len()];
        for v in &verts {
            linalg::axpy(&mut sum, S::one(), v);
        }
        let center = linalg::normalized(&sum).unwrap_or_else(|| verts[0].clone());
        let radius = verts
            .iter()
            .fold(S::zero(), |r, v| r.max(angle_between(&center, v)));
        let value = f(&center);
        *evals += 1;
        *lower = lower.max(value);
        heap.push(Cell { verts, upper: value + radius });
    };
    for cell in cells {
        for v in &cell {
            lower = lower.max(f(v));
            evals += 1;
        }
        push(cell, &mut lower, &mut evals, &mut heap);
    }
    loop {
        let Some(top) = heap.pop() else {
            return Bracket { lower, gap: S::zero() };
        };
        let gap = (top.upper - lower).max(S::zero());
        if gap <= resolution || evals >= budget {
            return Bracket { lower, gap };
        }
        let (i, j) = longest_edge(&top.verts);
        if i == j {
            continue;
        }
        let Some(mid) = linalg::normalized(&linalg::add(&top.verts[i], &top.verts[j])) else {
            continue;
        };
        lower = lower.max(f(&mid));
        evals += 1;
        let mut left = top.verts.clone();
        left[i] = mid.clone();
        let mut right = top.verts;
        right[j] = mid;
        push(left, &mut lower, &mut evals, &mut heap);
        push(right, &mut lower, &mut evals, &mut heap);
    }
}

fn longest_edge<S: Scalar>(verts: &[Vec<S>]) -> (usize, usize) {
    let mut best = (0, 0, S::zero());
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            let d = angle_between(&verts[i], &verts[j]);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    (best.0, best.1)
}
