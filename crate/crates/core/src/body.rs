//! Closed spherically convex sets stored as polyhedral cones.
//!
//! A [`SphericalBody`] is `cone(generators) ∩ S^n`. Both representations are
//! kept: the generators (V-representation) and the supporting normals
//! (H-representation, the generators of the dual cone). Non-pointed cones use
//! the `±lineality basis + pointed rays` convention on both sides, with the
//! lineality basis chosen canonically from the subspace so that equal bodies
//! get identical generator lists.

use crate::cone::{self, dual_cone, same_ray};
use crate::error::{GeometryError, Result};
use crate::linalg;
use crate::point::{Angle, UnitPoint};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct SphericalBody<S: Scalar> {
    ambient_dim: usize,
    generators: Vec<UnitPoint<S>>,
    support_normals: Vec<UnitPoint<S>>,
    span: Vec<Vec<S>>,
    pointed: bool,
    canonical: bool,
}

fn rows<S: Scalar>(points: &[UnitPoint<S>]) -> Vec<Vec<S>> {
    points.iter().map(|p| p.coords().to_vec()).collect()
}

fn to_points<S: Scalar>(rows: Vec<Vec<S>>) -> Vec<UnitPoint<S>> {
    let mut pts: Vec<UnitPoint<S>> = rows.into_iter().map(UnitPoint::from_unit_unchecked).collect();
    pts.sort_by(|a, b| linalg::lex_cmp(a.coords(), b.coords()));
    pts
}

fn check_dims<S: Scalar>(points: &[UnitPoint<S>]) -> Result<usize> {
    let first = points.first().ok_or(GeometryError::EmptyInput)?;
    let n = first.ambient_dim();
    for p in points {
        first.check_dim(p)?;
    }
    Ok(n)
}

impl<S: Scalar> SphericalBody<S> {
    /// Canonical body `cone(points) ∩ S^n`; for hemispherical input this is
    /// the spherical convex hull `s-conv(points)`.
    pub fn from_generators(points: &[UnitPoint<S>]) -> Result<Self> {
        let n = check_dims(points)?;
        let dim = n + 1;
        let gens = rows(points);
        let normals = match dual_cone(&gens) {
            Ok(d) => d.generators(),
            // cone(points) is the whole space: the body is all of S^n
            Err(GeometryError::PolarEmpty) => Vec::new(),
            Err(e) => return Err(e),
        };
        let normal_span = linalg::span_basis(&normals, S::tol_ray());
        let pointed = normal_span.len() == dim;
        let canonical_gens = if pointed {
            extreme_generators(&gens)
        } else {
            let lineality = linalg::canonical_complement(&normal_span, dim);
            let mut out = Vec::new();
            for l in &lineality {
                out.push(l.clone());
                out.push(linalg::scale(l, -S::one()));
            }
            if !normals.is_empty() {
                // pointed part of C = C** restricted to the normals' span
                let pointed_part = dual_cone(&normals)?;
                out.extend(pointed_part.rays);
            }
            out
        };
        let span = linalg::span_basis(&canonical_gens, S::tol_ray());
        Ok(Self {
            ambient_dim: n,
            generators: to_points(canonical_gens),
            support_normals: to_points(normals),
            span,
            pointed,
            canonical: true,
        })
    }

    /// Assembles a body from representations that are already canonical
    /// and mutually dual.
    pub(crate) fn from_parts(
        ambient_dim: usize,
        generators: Vec<Vec<S>>,
        support_normals: Vec<Vec<S>>,
    ) -> Self {
        let span = linalg::span_basis(&generators, S::tol_ray());
        let pointed = linalg::rank(&support_normals, S::tol_ray()) == ambient_dim + 1;
        Self {
            ambient_dim,
            generators: to_points(generators),
            support_normals: to_points(support_normals),
            span,
            pointed,
            canonical: true,
        }
    }

    /// The cone `{x : u·x >= 0 for all u in normals}` as a body.
    pub fn from_normals(normals: &[UnitPoint<S>]) -> Result<Self> {
        check_dims(normals)?;
        let d = dual_cone(&rows(normals)).map_err(|e| match e {
            GeometryError::PolarEmpty => {
                GeometryError::Precondition("half-space intersection is {0}".into())
            }
            other => other,
        })?;
        Self::from_generators(&to_points(d.generators()))
    }

    /// The closed hemisphere `H(center)`.
    pub fn hemisphere(center: &UnitPoint<S>) -> Self {
        let tangent = center.tangent_basis();
        let mut gens = vec![center.coords().to_vec()];
        for t in &tangent {
            gens.push(t.clone());
            gens.push(linalg::scale(t, -S::one()));
        }
        let span = linalg::span_basis(&gens, S::tol_ray());
        Self {
            ambient_dim: center.ambient_dim(),
            generators: to_points(gens),
            support_normals: vec![center.clone()],
            span,
            pointed: false,
            canonical: true,
        }
    }

    /// Polytope inscribed in the closed cap of radius `radius` around
    /// `center`: its vertices lie on the boundary circle. On `S^2` it is a
    /// regular `segments`-gon; in higher dimensions the vertices sit over the
    /// cross-polytope and cube directions of the tangent space.
    pub fn cap_polytope(center: &UnitPoint<S>, radius: Angle<S>, segments: usize) -> Result<Self> {
        let r = radius.radians();
        if !(r > S::zero() && r < S::FRAC_PI_2()) {
            return Err(GeometryError::AngleOutOfRange {
                value: r.as_f64(),
                range: "(0, pi/2)",
            });
        }
        let mut pts = Vec::new();
        for dir in tangent_directions(center, segments.max(3)) {
            pts.push(center.exp(&dir, r)?);
        }
        Self::from_generators(&pts)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[UnitPoint<S>] {
        &self.generators
    }

    pub fn support_normals(&self) -> &[UnitPoint<S>] {
        &self.support_normals
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// Whether the cone contains no line (equivalently, the body is
    /// hemispherical); fixed at construction.
    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    /// Dimension of the cone's linear span.
    pub fn span_dim(&self) -> usize {
        self.span.len()
    }

    pub(crate) fn generator_rows(&self) -> Vec<Vec<S>> {
        rows(&self.generators)
    }

    pub(crate) fn normal_rows(&self) -> Vec<Vec<S>> {
        rows(&self.support_normals)
    }

    pub(crate) fn check_point(&self, q: &UnitPoint<S>) -> Result<()> {
        if q.ambient_dim() != self.ambient_dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.ambient_dim,
                found: q.ambient_dim(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_body(&self, other: &Self) -> Result<()> {
        if other.ambient_dim != self.ambient_dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }

    /// Membership: `u·q >= -1e-10` for every support normal and `q` within
    /// `1e-10` of the cone's linear span.
    pub fn contains(&self, q: &UnitPoint<S>) -> bool {
        if q.ambient_dim() != self.ambient_dim {
            return false;
        }
        self.contains_vec(q.coords())
    }

    pub(crate) fn contains_vec(&self, q: &[S]) -> bool {
        let tol = S::tol_membership();
        if self
            .support_normals
            .iter()
            .any(|u| linalg::dot(u.coords(), q) < -tol)
        {
            return false;
        }
        let mut r = q.to_vec();
        linalg::reject(&mut r, &self.span);
        linalg::norm(&r) <= tol
    }

    /// A direction `q` with `q·g >= 1e-9` for every generator, if one
    /// exists. The returned witness has been checked against every generator.
    pub fn hemisphere_witness(&self) -> Option<UnitPoint<S>> {
        if !self.pointed {
            return None;
        }
        let mut q = vec![S::zero(); self.ambient_dim + 1];
        for u in &self.support_normals {
            linalg::axpy(&mut q, S::one(), u.coords());
        }
        let q = UnitPoint::new(q).ok()?;
        let eps = S::eps_strict();
        self.generators
            .iter()
            .all(|g| g.dot(&q) >= eps)
            .then_some(q)
    }

    /// True iff the body misses some closed hemisphere, i.e. its cone is
    /// pointed.
    pub fn is_hemispherical(&self) -> bool {
        self.hemisphere_witness().is_some()
    }

    /// True iff the cone is full-dimensional with a strictly interior ray.
    pub fn has_interior(&self) -> bool {
        if self.span.len() != self.ambient_dim + 1 {
            return false;
        }
        let mut q = vec![S::zero(); self.ambient_dim + 1];
        for g in &self.generators {
            linalg::axpy(&mut q, S::one(), g.coords());
        }
        let Some(q) = linalg::normalized(&q) else {
            return false;
        };
        let eps = S::eps_strict();
        self.support_normals
            .iter()
            .all(|u| linalg::dot(u.coords(), &q) >= eps)
    }

    /// Whether the body is a spherical Wulff shape relative to `p`:
    /// `W ∩ H(-p) = ∅`, `p ∈ int(W)` and `W` is a spherical convex body.
    pub fn is_wulff_relative(&self, p: &UnitPoint<S>) -> bool {
        if p.ambient_dim() != self.ambient_dim {
            return false;
        }
        let eps = S::eps_strict();
        let misses_opposite = self.generators.iter().all(|g| g.dot(p) >= eps);
        let p_interior = self.support_normals.iter().all(|u| u.dot(p) >= eps);
        misses_opposite && p_interior && self.has_interior()
    }

    /// Recomputes the canonical form from the generators.
    pub fn canonicalize(&self) -> Result<Self> {
        Self::from_generators(&self.generators)
    }

    /// How far `self` sticks out of `outer`: the largest violation over the
    /// generators of `self` of the half-space and span conditions of `outer`.
    /// Zero (up to round-off) iff `self ⊂ outer`.
    pub fn containment_defect(&self, outer: &Self) -> Result<S> {
        self.check_body(outer)?;
        let mut worst = S::zero();
        for g in &self.generators {
            for u in &outer.support_normals {
                worst = worst.max(-g.dot(u));
            }
            let mut r = g.coords().to_vec();
            linalg::reject(&mut r, &outer.span);
            worst = worst.max(linalg::norm(&r));
        }
        Ok(worst)
    }

    /// `self ⊂ outer`, decided on generators.
    pub fn is_subset_of(&self, outer: &Self) -> Result<bool> {
        Ok(self.containment_defect(outer)? <= S::tol_membership())
    }

    /// Set distance between the generator lists (max over both directions
    /// of the nearest-generator angle); `π` when the counts differ.
    pub fn generator_mismatch(&self, other: &Self) -> Result<S> {
        self.check_body(other)?;
        if self.generators.len() != other.generators.len() {
            return Ok(S::PI());
        }
        let one_way = |a: &[UnitPoint<S>], b: &[UnitPoint<S>]| {
            a.iter().fold(S::zero(), |acc, x| {
                let best = b.iter().fold(S::PI(), |m, y| {
                    m.min(crate::point::angle_between(x.coords(), y.coords()))
                });
                acc.max(best)
            })
        };
        Ok(one_way(&self.generators, &other.generators).max(one_way(&other.generators, &self.generators)))
    }
}

/// Generators of a pointed cone that are not in the cone of the others.
fn extreme_generators<S: Scalar>(gens: &[Vec<S>]) -> Vec<Vec<S>> {
    let mut unique: Vec<Vec<S>> = Vec::with_capacity(gens.len());
    for g in gens {
        if !unique.iter().any(|u| same_ray(u, g)) {
            unique.push(g.clone());
        }
    }
    let mut keep = vec![true; unique.len()];
    for i in 0..unique.len() {
        let others: Vec<Vec<S>> = unique
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i && keep[j])
            .map(|(_, g)| g.clone())
            .collect();
        if others.is_empty() {
            continue;
        }
        let p = cone::project_onto_cone(&unique[i], &others);
        if linalg::norm(&linalg::sub(&unique[i], &p)) <= S::tol_ray() {
            keep[i] = false;
        }
    }
    unique
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect()
}

/// Unit tangent directions used for inscribed cap polytopes.
fn tangent_directions<S: Scalar>(center: &UnitPoint<S>, segments: usize) -> Vec<Vec<S>> {
    let t = center.tangent_basis();
    let dim = center.coords().len();
    let n = t.len();
    let mut out = Vec::new();
    match n {
        1 => {
            out.push(t[0].clone());
            out.push(linalg::scale(&t[0], -S::one()));
        }
        2 => {
            for k in 0..segments {
                let a = S::lit(2.0 * std::f64::consts::PI * k as f64 / segments as f64);
                let mut v = linalg::scale(&t[0], a.cos());
                linalg::axpy(&mut v, a.sin(), &t[1]);
                out.push(v);
            }
        }
        _ => {
            for ti in &t {
                out.push(ti.clone());
                out.push(linalg::scale(ti, -S::one()));
            }
            let k = S::one() / S::lit(n as f64).sqrt();
            for mask in 0u32..(1 << n) {
                let mut v = vec![S::zero(); dim];
                for (i, ti) in t.iter().enumerate() {
                    let s = if mask & (1 << i) != 0 { -k } else { k };
                    linalg::axpy(&mut v, s, ti);
                }
                out.push(v);
            }
        }
    }
    out
}

/// `from_generators` as a free function.
pub fn from_generators<S: Scalar>(points: &[UnitPoint<S>]) -> Result<SphericalBody<S>> {
    SphericalBody::from_generators(points)
}

/// `H(center)` as a body.
pub fn hemisphere_body<S: Scalar>(center: &UnitPoint<S>) -> SphericalBody<S> {
    SphericalBody::hemisphere(center)
}

pub fn contains<S: Scalar>(body: &SphericalBody<S>, q: &UnitPoint<S>) -> bool {
    body.contains(q)
}

pub fn is_hemispherical<S: Scalar>(body: &SphericalBody<S>) -> bool {
    body.is_hemispherical()
}

pub fn has_interior<S: Scalar>(body: &SphericalBody<S>) -> bool {
    body.has_interior()
}

pub fn is_wulff_relative<S: Scalar>(body: &SphericalBody<S>, p: &UnitPoint<S>) -> bool {
    body.is_wulff_relative(p)
}

pub fn canonicalize<S: Scalar>(body: &SphericalBody<S>) -> Result<SphericalBody<S>> {
    body.canonicalize()
}

/// Generator lists agree as sets, pairwise within `tol`.
pub fn bodies_equal<S: Scalar>(
    a: &SphericalBody<S>,
    b: &SphericalBody<S>,
    tol: Angle<S>,
) -> Result<bool> {
    Ok(a.generator_mismatch(b)? <= tol.radians())
}
