//! Geodesic distances between points and bodies, the Pompeiu–Hausdorff
//! distance, dilations and the separation of disjoint bodies.
//!
//! Directed distances take an exact path (maximum over the stationary points
//! of the distance function on the faces of the first body) when that
//! function stays below a right angle, and otherwise a certified branch-and-bound over a simplicial
//! decomposition whose result carries an explicit error bound.

use crate::body::SphericalBody;
use crate::critical;
use crate::cone::{dual_cone, project_onto_cone};
use crate::error::{GeometryError, Result};
use crate::linalg;
use crate::point::{angle_between, sample_sphere, seeded_rng, Angle, UnitPoint};
use crate::scalar::Scalar;
use crate::simplicial;
use crate::transforms::{polar, polar_admissible};

/// Environment variable overriding [`DEFAULT_RESOLUTION`].
pub const RESOLUTION_ENV: &str = "WULFF_DEFAULT_RESOLUTION";

/// Sampling resolution in radians for the non-exact distance path.
pub const DEFAULT_RESOLUTION: f64 = 0.005;

/// Cap on distance evaluations spent by one branch-and-bound run.
const EVALUATION_BUDGET: usize = 2_000_000;

/// Width of the band around the dilation radius excluded from the dilation
/// comparison.
const BOUNDARY_BAND: f64 = 1e-6;

/// [`DEFAULT_RESOLUTION`], unless the environment sets a valid value in
/// `(0, 0.1)`.
pub fn default_resolution() -> f64 {
    std::env::var(RESOLUTION_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<f64>().ok())
        .filter(|&d| d > 0.0 && d < 0.1)
        .unwrap_or(DEFAULT_RESOLUTION)
}

/// A distance together with how it was obtained. The true value lies in
/// `[angle, angle + error_bound]`; `exact` marks the exact path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measured<S: Scalar> {
    pub angle: Angle<S>,
    pub error_bound: S,
    pub exact: bool,
}

impl<S: Scalar> Measured<S> {
    fn exact(angle: S) -> Self {
        Self { angle: Angle::clamped(angle), error_bound: S::zero(), exact: true }
    }

    fn max(self, other: Self) -> Self {
        let (hi, lo) = if self.angle >= other.angle { (self, other) } else { (other, self) };
        // the smaller one may still dominate once its bound is added
        let reach = (lo.angle.radians() + lo.error_bound).max(hi.angle.radians() + hi.error_bound);
        Self {
            angle: hi.angle,
            error_bound: reach - hi.angle.radians(),
            exact: hi.exact && lo.exact,
        }
    }
}

/// `d(x, body) = min_{y ∈ body} |xy|`.
///
/// Computed from the Euclidean projection `p` of `x` onto the cone: when
/// `p ≠ 0` the nearest point is `p/|p|`; otherwise every point of the body
/// is at least `π/2` away and the minimum is attained at a generator.
pub fn point_body_distance<S: Scalar>(x: &UnitPoint<S>, body: &SphericalBody<S>) -> Result<Angle<S>> {
    body.check_point(x)?;
    let gens = body.generator_rows();
    Ok(Angle::clamped(distance_to_cone(x.coords(), body, &gens)))
}

fn distance_to_cone<S: Scalar>(x: &[S], body: &SphericalBody<S>, gens: &[Vec<S>]) -> S {
    if body.contains_vec(x) {
        return S::zero();
    }
    let p = project_onto_cone(x, gens);
    let np = linalg::norm(&p);
    if np > S::epsilon() * S::lit(64.0) {
        let r = linalg::norm(&linalg::sub(x, &p));
        r.atan2(np)
    } else {
        gens.iter()
            .fold(S::PI(), |m, g| m.min(angle_between(x, g)))
    }
}

/// `max_{x ∈ a} d(x, b)` at the default resolution.
pub fn directed_distance<S: Scalar>(a: &SphericalBody<S>, b: &SphericalBody<S>) -> Result<Angle<S>> {
    Ok(directed_distance_measured(a, b, S::lit(default_resolution()))?.angle)
}

/// `max_{x ∈ a} d(x, b)` with its provenance.
///
/// The exact path is taken when both bodies are pointed and some point of
/// `b` is strictly within `π/2` of every generator of `a`. Then `d(·, b)` is
/// below `π/2` and differentiable off `b` throughout `a`, and the maximum is
/// found among finitely many stationary points, one family per pair of
/// faces. Other inputs go through branch-and-bound with bracket width at
/// most `resolution`.
pub fn directed_distance_measured<S: Scalar>(
    a: &SphericalBody<S>,
    b: &SphericalBody<S>,
    resolution: S,
) -> Result<Measured<S>> {
    a.check_body(b)?;
    if a.is_subset_of(b)? {
        return Ok(Measured::exact(S::zero()));
    }
    if exact_path_applies(a, b) {
        let gens = b.generator_rows();
        let m = critical::candidates(a, b)
            .iter()
            .fold(S::zero(), |m, x| m.max(distance_to_cone(x, b, &gens)));
        return Ok(Measured::exact(m));
    }
    directed_distance_bnb(a, b, resolution)
}

/// The branch-and-bound path regardless of shape; the cross-check for the
/// exact path.
pub fn directed_distance_bnb<S: Scalar>(
    a: &SphericalBody<S>,
    b: &SphericalBody<S>,
    resolution: S,
) -> Result<Measured<S>> {
    a.check_body(b)?;
    if resolution.is_nan() || resolution <= S::zero() {
        return Err(GeometryError::Precondition("resolution must be positive".into()));
    }
    let gens = b.generator_rows();
    let bracket = simplicial::maximize(
        simplicial::decompose(a),
        |x| distance_to_cone(x, b, &gens),
        resolution,
        EVALUATION_BUDGET,
    );
    Ok(Measured {
        angle: Angle::clamped(bracket.lower),
        error_bound: bracket.gap,
        exact: false,
    })
}

/// Whether [`directed_distance_measured`] takes the exact path.
pub fn exact_path_applies<S: Scalar>(a: &SphericalBody<S>, b: &SphericalBody<S>) -> bool {
    a.ambient_dim() == b.ambient_dim()
        && a.is_pointed()
        && b.is_pointed()
        && positive_witness(&a.generator_rows(), &b.generator_rows()).is_some()
}

/// A direction in `cone(pool)` with strictly positive inner product against
/// every target, found by multiplicative weights on the zero-sum game
/// `pool × targets`. Any returned vector has been checked directly.
fn positive_witness<S: Scalar>(targets: &[Vec<S>], pool: &[Vec<S>]) -> Option<Vec<S>> {
    let eps = S::eps_strict();
    let certifies = |y: &[S]| {
        linalg::normalized(y)
            .filter(|u| targets.iter().all(|t| linalg::dot(u, t) > eps))
    };
    let mut sum = vec![S::zero(); pool.first()?.len()];
    for g in pool {
        if let Some(u) = certifies(g) {
            return Some(u);
        }
        linalg::axpy(&mut sum, S::one(), g);
    }
    if let Some(u) = certifies(&sum) {
        return Some(u);
    }
    let eta = S::lit(0.05);
    let mut weights = vec![S::one(); targets.len()];
    let mut mix = vec![S::zero(); sum.len()];
    for _ in 0..20_000 {
        let mut x = vec![S::zero(); sum.len()];
        for (w, t) in weights.iter().zip(targets) {
            linalg::axpy(&mut x, *w, t);
        }
        let best = pool
            .iter()
            .max_by(|g, h| linalg::dot(g, &x).as_f64().total_cmp(&linalg::dot(h, &x).as_f64()))?;
        linalg::axpy(&mut mix, S::one(), best);
        if let Some(u) = certifies(&mix) {
            return Some(u);
        }
        let mut total = S::zero();
        for (w, t) in weights.iter_mut().zip(targets) {
            *w = *w * (-eta * linalg::dot(best, t)).exp();
            total = total + *w;
        }
        for w in &mut weights {
            *w = *w / total;
        }
    }
    None
}

/// Pompeiu–Hausdorff distance at the default resolution.
pub fn hausdorff<S: Scalar>(a: &SphericalBody<S>, b: &SphericalBody<S>) -> Result<Angle<S>> {
    Ok(hausdorff_measured(a, b, S::lit(default_resolution()))?.angle)
}

/// `max(d(a, b), d(b, a))` with the combined error bound.
pub fn hausdorff_measured<S: Scalar>(
    a: &SphericalBody<S>,
    b: &SphericalBody<S>,
    resolution: S,
) -> Result<Measured<S>> {
    let ab = directed_distance_measured(a, b, resolution)?;
    let ba = directed_distance_measured(b, a, resolution)?;
    Ok(ab.max(ba))
}

/// `h(H(p), H(q))` in closed form: `|pq|` up to `π/2`, and `π/2` beyond.
pub fn hemisphere_hausdorff<S: Scalar>(p: &UnitPoint<S>, q: &UnitPoint<S>) -> Result<Angle<S>> {
    p.check_dim(q)?;
    Ok(Angle::clamped(angle_between(p.coords(), q.coords()).min(S::FRAC_PI_2())))
}

/// Membership of `x` in the closed dilation `B(body, r)`, `0 < r < π`.
pub fn dilation_contains<S: Scalar>(body: &SphericalBody<S>, r: Angle<S>, x: &UnitPoint<S>) -> Result<bool> {
    let rv = r.radians();
    if !(rv > S::zero() && rv < S::PI()) {
        return Err(GeometryError::AngleOutOfRange { value: rv.as_f64(), range: "(0, pi)" });
    }
    let d = point_body_distance(x, body)?;
    Ok(d.radians() <= rv + S::lit(1e-10))
}

/// Tally of a sampled comparison of `B(w°, r)` against `∩_{P ∈ w} B(H(P), r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DilationTally {
    pub compared: usize,
    pub banded: usize,
    pub mismatches: usize,
}

/// Samples `samples` uniform points of `S^n` and compares membership in the
/// dilation of the polar with membership in the intersection of the dilated
/// hemispheres `B(H(P), r)` over all `P ∈ w`.
///
/// The right-hand side is evaluated exactly: `x` lies in every `B(H(P), r)`
/// iff `max_{P ∈ w} |xP| ≤ π/2 + r`, and `max_{P ∈ w} |xP| = π − d(−x, w)`.
/// Points within `1e-6` of the radius on either side are not compared.
pub fn dilation_tally<S: Scalar>(
    w: &SphericalBody<S>,
    r: Angle<S>,
    samples: usize,
    seed: u64,
) -> Result<DilationTally> {
    let rv = r.radians();
    if !(rv > S::zero() && rv < S::FRAC_PI_2()) {
        return Err(GeometryError::Precondition(format!("radius {rv} outside (0, pi/2)")));
    }
    if !polar_admissible(w) {
        return Err(GeometryError::Precondition("polar of the body is empty".into()));
    }
    let wp = polar(w)?;
    let w_gens = w.generator_rows();
    let wp_gens = wp.generator_rows();
    let band = S::lit(BOUNDARY_BAND);
    let mut rng = seeded_rng(seed);
    let mut tally = DilationTally::default();
    for _ in 0..samples {
        let x: UnitPoint<S> = sample_sphere(w.ambient_dim(), &mut rng);
        let left = distance_to_cone(x.coords(), &wp, &wp_gens);
        let minus: Vec<S> = x.coords().iter().map(|&c| -c).collect();
        let right = (S::FRAC_PI_2() - distance_to_cone(&minus, w, &w_gens)).max(S::zero());
        if (left - rv).abs() < band || (right - rv).abs() < band {
            tally.banded += 1;
            continue;
        }
        tally.compared += 1;
        if (left <= rv) != (right <= rv) {
            tally.mismatches += 1;
        }
    }
    Ok(tally)
}

/// True iff [`dilation_tally`] finds no mismatch outside the boundary band.
pub fn dilation_check<S: Scalar>(w: &SphericalBody<S>, r: Angle<S>, samples: usize, seed: u64) -> Result<bool> {
    Ok(dilation_tally(w, r, samples, seed)?.mismatches == 0)
}

/// A point `Q` with `a ⊂ H(Q)` and `b ∩ H(Q) = ∅`.
///
/// Candidates come from the dual of `cone(a ∪ −b)`; the one with the largest
/// margin on `b` is rechecked (`Q·x ≥ −1e-10` on the generators of `a`,
/// `Q·y ≤ −1e-9` on those of `b`) before it is returned.
pub fn separate<S: Scalar>(a: &SphericalBody<S>, b: &SphericalBody<S>) -> Result<UnitPoint<S>> {
    a.check_body(b)?;
    let a_rows = a.generator_rows();
    let b_rows = b.generator_rows();
    let mut rows = a_rows.clone();
    rows.extend(b_rows.iter().map(|y| linalg::scale(y, -S::one())));
    let dual = dual_cone(&rows).map_err(|e| match e {
        GeometryError::PolarEmpty => GeometryError::NoSeparator("cone(a ∪ -b) is the whole space".into()),
        other => other,
    })?;
    let mut candidates = dual.generators();
    let mut sum = vec![S::zero(); a.ambient_dim() + 1];
    for r in &dual.rays {
        linalg::axpy(&mut sum, S::one(), r);
    }
    if let Some(u) = linalg::normalized(&sum) {
        candidates.push(u);
    }
    let tol_a = S::tol_membership();
    let eps = S::eps_strict();
    let margin = |q: &[S]| -> Option<S> {
        if a_rows.iter().any(|x| linalg::dot(q, x) < -tol_a) {
            return None;
        }
        Some(b_rows.iter().fold(S::infinity(), |m, y| m.min(-linalg::dot(q, y))))
    };
    let best = candidates
        .into_iter()
        .filter_map(|q| margin(&q).map(|m| (m, q)))
        .max_by(|x, y| x.0.as_f64().total_cmp(&y.0.as_f64()));
    match best {
        Some((m, q)) if m >= eps => Ok(UnitPoint::from_unit_unchecked(q)),
        Some((m, _)) => Err(GeometryError::NoSeparator(format!("best margin {m} is not strictly positive"))),
        None => Err(GeometryError::NoSeparator("no candidate keeps the first body in H(Q)".into())),
    }
}
