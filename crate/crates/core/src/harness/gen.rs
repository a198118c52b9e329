//! Seeded random bodies for the property suites.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::body::SphericalBody;
use crate::error::{GeometryError, Result};
use crate::linalg;
use crate::point::{angle_between, sample_cap_with, sample_sphere, seeded_rng, Angle, UnitPoint};

type Body = SphericalBody<f64>;
type Point = UnitPoint<f64>;

const WULFF_ATTEMPTS: usize = 100;
const SIMPLEX_RADIUS: f64 = 0.02;

/// A spherical Wulff shape relative to `p`: the hull of `k` points drawn
/// from the open cap of radius `rho` around `p` and a regular simplex of
/// radius 0.02 around `p`.
pub fn gen_wulff(p: &Point, k: usize, rho: f64, seed: u64) -> Result<Body> {
    gen_wulff_with(p, k, rho, &mut seeded_rng(seed))
}

pub fn gen_wulff_with(p: &Point, k: usize, rho: f64, rng: &mut ChaCha8Rng) -> Result<Body> {
    let n = p.ambient_dim();
    if k < n + 2 {
        return Err(GeometryError::Precondition(format!("k = {k} must be at least n + 2 = {}", n + 2)));
    }
    if !(rho > 0.0 && rho < FRAC_PI_2 - 0.05) {
        return Err(GeometryError::AngleOutOfRange { value: rho, range: "(0, pi/2 - 0.05)" });
    }
    let core = simplex_around(p, SIMPLEX_RADIUS)?;
    for _ in 0..WULFF_ATTEMPTS {
        let mut pts = sample_cap_with(p, Angle::new(rho)?, rng, k)?;
        pts.extend(core.iter().cloned());
        let body = SphericalBody::from_generators(&pts)?;
        if body.is_wulff_relative(p) {
            return Ok(body);
        }
    }
    Err(GeometryError::Generation(format!(
        "no Wulff shape after {WULFF_ATTEMPTS} attempts"
    )))
}

/// Wulff shape relative to the pole of `S^n` with at most 12 generators and
/// cap radius in `[0.1, 1.2]`.
pub fn random_wulff(n: usize, rng: &mut ChaCha8Rng) -> Result<Body> {
    let k_max = (11usize.saturating_sub(n)).max(n + 2);
    let k = rng.random_range(n + 2..=k_max);
    let rho = rng.random_range(0.1..=1.2);
    gen_wulff_with(&Point::pole(n), k, rho, rng)
}

/// Vertices of a regular simplex inscribed in the cap of radius `radius`
/// around `p`.
pub fn simplex_around(p: &Point, radius: f64) -> Result<Vec<Point>> {
    let n = p.ambient_dim();
    let tangent = p.tangent_basis();
    // orthonormal basis of the hyperplane orthogonal to (1, ..., 1) in R^(n+1)
    let ones = vec![1.0 / ((n + 1) as f64).sqrt(); n + 1];
    let plane = linalg::canonical_complement(&[ones], n + 1);
    (0..=n)
        .map(|i| {
            let mut dir = vec![0.0; n + 1];
            for (b, t) in plane.iter().zip(&tangent) {
                linalg::axpy(&mut dir, b[i], t);
            }
            let dir = linalg::normalized(&dir).ok_or(GeometryError::Generation("flat simplex".into()))?;
            p.exp(&dir, radius)
        })
        .collect()
}

/// Shape families for the broader convex class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvexKind {
    /// Hull of points in a cap.
    General,
    /// Hull of cap points squashed along one tangent direction.
    Skewed,
    /// Thin neighbourhood of an arc.
    Sliver,
    /// Hull of points near the boundary of a cap of radius close to `π/2`.
    NearHemisphere,
}

impl ConvexKind {
    pub const ALL: [ConvexKind; 4] = [Self::General, Self::Skewed, Self::Sliver, Self::NearHemisphere];

    pub fn name(self) -> &'static str {
        match self {
            Self::General => "general",
            Self::Skewed => "skewed",
            Self::Sliver => "sliver",
            Self::NearHemisphere => "near_hemisphere",
        }
    }

    /// Largest angular reach from the centre.
    fn reach(self) -> f64 {
        match self {
            Self::General | Self::Skewed => 1.3,
            Self::Sliver => 1.0,
            Self::NearHemisphere => 1.45,
        }
    }
}

fn random_tangent(center: &Point, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let t = center.tangent_basis();
    loop {
        let mut v = vec![0.0; center.coords().len()];
        for ti in &t {
            linalg::axpy(&mut v, rng.random_range(-1.0..1.0), ti);
        }
        if let Some(u) = linalg::normalized(&v) {
            return u;
        }
    }
}

/// Walks along the tangent vector `v` (not necessarily unit).
fn exp_vec(center: &Point, v: &[f64]) -> Result<Point> {
    let len = linalg::norm(v);
    match linalg::normalized(v) {
        Some(u) => center.exp(&u, len),
        None => Ok(center.clone()),
    }
}

/// Tangent vector at `center` pointing to `q`, of length `|center q|`.
fn log_vec(center: &Point, q: &Point) -> Vec<f64> {
    let c = center.coords();
    let mut r = q.coords().to_vec();
    linalg::axpy(&mut r, -q.dot(center), c);
    match linalg::normalized(&r) {
        Some(u) => linalg::scale(&u, angle_between(c, q.coords())),
        None => vec![0.0; c.len()],
    }
}

/// A random spherical convex body of the given family around `center`.
pub fn gen_convex_kind(center: &Point, kind: ConvexKind, rng: &mut ChaCha8Rng) -> Result<Body> {
    let n = center.ambient_dim();
    let pts = match kind {
        ConvexKind::General => {
            let r = rng.random_range(0.2..kind.reach());
            let k = rng.random_range(n + 2..=12.max(n + 2));
            sample_cap_with(center, Angle::new(r)?, rng, k)?
        }
        ConvexKind::Skewed => {
            let r = rng.random_range(0.3..kind.reach());
            let k = rng.random_range(n + 2..=12.max(n + 2));
            let squash = rng.random_range(0.03..0.3);
            let axis = random_tangent(center, rng);
            sample_cap_with(center, Angle::new(r)?, rng, k)?
                .iter()
                .map(|q| {
                    let mut v = log_vec(center, q);
                    let along = linalg::dot(&v, &axis);
                    linalg::axpy(&mut v, -(1.0 - squash) * along, &axis);
                    exp_vec(center, &v)
                })
                .collect::<Result<Vec<_>>>()?
        }
        ConvexKind::Sliver => {
            let half = rng.random_range(0.15..kind.reach());
            let dir = random_tangent(center, rng);
            let width = rng.random_range(1e-3..2e-2);
            let mut pts = vec![center.exp(&dir, half)?, center.exp(&linalg::scale(&dir, -1.0), half)?];
            let mid = center.exp(&dir, rng.random_range(-0.5..0.5) * half)?;
            for t in mid.tangent_basis() {
                let mut perp = t.clone();
                let c = linalg::dot(&perp, &dir);
                linalg::axpy(&mut perp, -c, &dir);
                let Some(u) = linalg::normalized(&perp) else { continue };
                if linalg::norm(&perp) < 0.5 {
                    continue;
                }
                pts.push(mid.exp(&u, width)?);
                pts.push(mid.exp(&linalg::scale(&u, -1.0), width)?);
            }
            pts
        }
        ConvexKind::NearHemisphere => {
            let r = rng.random_range(1.35..kind.reach());
            let k = rng.random_range(n + 3..=12.max(n + 3));
            (0..k)
                .map(|_| center.exp(&random_tangent(center, rng), r * rng.random_range(0.98..1.0)))
                .collect::<Result<Vec<_>>>()?
        }
    };
    SphericalBody::from_generators(&pts)
}

/// Two bodies of random families whose union lies in an open hemisphere.
pub fn gen_convex_pair(n: usize, rng: &mut ChaCha8Rng) -> Result<(Body, Body, [ConvexKind; 2])> {
    let c: Point = sample_sphere(n, rng);
    let mut out = Vec::with_capacity(2);
    let mut kinds = [ConvexKind::General; 2];
    for slot in &mut kinds {
        let kind = ConvexKind::ALL[rng.random_range(0..ConvexKind::ALL.len())];
        // keeps the body within pi/2 - 0.02 of c
        let shift = rng.random_range(0.0..FRAC_PI_2 - 0.02 - kind.reach());
        let center = c.exp(&random_tangent(&c, rng), shift)?;
        out.push(gen_convex_kind(&center, kind, rng)?);
        *slot = kind;
    }
    let b = out.pop().expect("two bodies");
    let a = out.pop().expect("two bodies");
    Ok((a, b, kinds))
}

/// A random convex body of any family around a random centre.
pub fn gen_convex(n: usize, rng: &mut ChaCha8Rng) -> Result<Body> {
    let c: Point = sample_sphere(n, rng);
    let kind = ConvexKind::ALL[rng.random_range(0..ConvexKind::ALL.len())];
    gen_convex_kind(&c, kind, rng)
}

/// `(inner, outer)` with `inner ⊂ outer`: the inner body is generated by
/// random normalized positive combinations of the outer generators.
pub fn gen_nested_pair(n: usize, rng: &mut ChaCha8Rng) -> Result<(Body, Body)> {
    let c: Point = sample_sphere(n, rng);
    let kind = [ConvexKind::General, ConvexKind::Skewed][rng.random_range(0..2)];
    let outer = gen_convex_kind(&c, kind, rng)?;
    let gens = outer.generators();
    let k = rng.random_range(1..=8);
    let pts = (0..k)
        .map(|_| {
            let mut v = vec![0.0; n + 1];
            for g in gens {
                let w: f64 = rng.random::<f64>().powi(3);
                linalg::axpy(&mut v, w, g.coords());
            }
            Point::new(v)
        })
        .collect::<Result<Vec<_>>>()?;
    let inner = SphericalBody::from_generators(&pts)?;
    Ok((inner, outer))
}

/// Hemispherical generator sets of every shape: single points, arcs,
/// low-dimensional and full-dimensional hulls.
pub fn gen_hemispherical(n: usize, rng: &mut ChaCha8Rng) -> Result<Body> {
    let c: Point = sample_sphere(n, rng);
    match rng.random_range(0..6) {
        0 => SphericalBody::from_generators(&[c]),
        1 => {
            let dir = random_tangent(&c, rng);
            let a = c.exp(&dir, rng.random_range(0.05..1.4))?;
            let b = c.exp(&linalg::scale(&dir, -1.0), rng.random_range(0.05..1.4))?;
            SphericalBody::from_generators(&[a, b])
        }
        2 if n >= 2 => {
            // points on a great sphere through c: a lower-dimensional hull
            let normal = random_tangent(&c, rng);
            let r = Angle::new(rng.random_range(0.2..1.4))?;
            let k = rng.random_range(3..=10);
            let pts = sample_cap_with(&c, r, rng, k)?
                .into_iter()
                .map(|q| {
                    let mut v = q.coords().to_vec();
                    let s = linalg::dot(&v, &normal);
                    linalg::axpy(&mut v, -s, &normal);
                    Point::new(v)
                })
                .collect::<Result<Vec<_>>>()?;
            SphericalBody::from_generators(&pts)
        }
        _ => {
            let kind = ConvexKind::ALL[rng.random_range(0..ConvexKind::ALL.len())];
            gen_convex_kind(&c, kind, rng)
        }
    }
}

/// Families for the union-of-closures construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedKind {
    Point,
    Arc,
    Polygon,
}

impl SeedKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Point => "point",
            Self::Arc => "arc",
            Self::Polygon => "polygon",
        }
    }
}

/// Largest distance from the reference point to a union-closure seed body.
pub const SEED_REACH: f64 = 0.6;

/// A convex body `W` (possibly without interior) together with a point
/// `P ∈ W` such that `W` lies within [`SEED_REACH`] of `P`.
pub fn gen_closure_seed(n: usize, kind: SeedKind, rng: &mut ChaCha8Rng) -> Result<(Body, Point)> {
    let p: Point = sample_sphere(n, rng);
    let body = match kind {
        SeedKind::Point => SphericalBody::from_generators(std::slice::from_ref(&p))?,
        SeedKind::Arc => {
            let dir = random_tangent(&p, rng);
            let a = p.exp(&dir, rng.random_range(0.05..SEED_REACH))?;
            let b = p.exp(&linalg::scale(&dir, -1.0), rng.random_range(0.0..SEED_REACH))?;
            SphericalBody::from_generators(&[a, b])?
        }
        SeedKind::Polygon => {
            let k = rng.random_range(n + 1..=10.max(n + 1));
            let mut pts = sample_cap_with(&p, Angle::new(SEED_REACH)?, rng, k)?;
            pts.push(p.clone());
            SphericalBody::from_generators(&pts)?
        }
    };
    Ok((body, p))
}

/// Polytope inscribed in the dilation `B(w, eps)`: the hull of inscribed cap
/// polytopes of radius `eps` around the generators of `w`.
pub fn dilation_approximant(w: &Body, eps: f64, segments: usize) -> Result<Body> {
    let mut pts = Vec::new();
    for g in w.generators() {
        let cap = SphericalBody::cap_polytope(g, Angle::new(eps)?, segments)?;
        pts.extend(cap.generators().iter().cloned());
    }
    SphericalBody::from_generators(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wulff_examples() {
        let p = Point::pole(2);
        let small = gen_wulff(&p, 4, 0.1, 1).unwrap();
        assert!(small.is_wulff_relative(&p));
        assert_eq!(gen_wulff(&p, 6, 0.8, 9).unwrap(), gen_wulff(&p, 6, 0.8, 9).unwrap());
        assert!(gen_wulff(&p, 3, 0.5, 1).is_err());
        assert!(gen_wulff(&p, 5, FRAC_PI_2 - 0.04, 1).is_err());
        let mut rng = seeded_rng(4);
        for _ in 0..200 {
            let w = random_wulff(2, &mut rng).unwrap();
            assert!(w.is_wulff_relative(&p));
            assert!(w.generators().len() <= 12);
        }
    }

    #[test]
    fn simplex_is_regular() {
        let p = Point::from_slice(&[0.1, 0.2, 0.3, 0.9]).unwrap();
        let s = simplex_around(&p, 0.02).unwrap();
        assert_eq!(s.len(), 4);
        let d01 = angle_between(s[0].coords(), s[1].coords());
        for i in 0..4 {
            assert!((angle_between(s[i].coords(), p.coords()) - 0.02).abs() < 1e-12);
            for j in i + 1..4 {
                assert!((angle_between(s[i].coords(), s[j].coords()) - d01).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn convex_pairs_share_an_open_hemisphere() {
        let mut rng = seeded_rng(8);
        for n in [2, 3] {
            for _ in 0..100 {
                let (a, b, _) = gen_convex_pair(n, &mut rng).unwrap();
                assert!(a.has_interior() && b.has_interior());
                let mut all = a.generators().to_vec();
                all.extend_from_slice(b.generators());
                assert!(SphericalBody::from_generators(&all).unwrap().is_hemispherical());
            }
        }
    }

    #[test]
    fn nested_pairs_are_nested() {
        let mut rng = seeded_rng(5);
        for _ in 0..100 {
            let (inner, outer) = gen_nested_pair(2, &mut rng).unwrap();
            assert!(inner.is_subset_of(&outer).unwrap());
        }
    }

    #[test]
    fn closure_seeds_contain_their_point() {
        let mut rng = seeded_rng(6);
        for kind in [SeedKind::Point, SeedKind::Arc, SeedKind::Polygon] {
            let (w, p) = gen_closure_seed(2, kind, &mut rng).unwrap();
            assert!(w.contains(&p));
            assert!(w.generators().iter().all(|g| angle_between(g.coords(), p.coords()) < SEED_REACH + 1e-12));
            let approx = dilation_approximant(&w, 0.25, 16).unwrap();
            assert!(approx.is_wulff_relative(&p));
        }
    }
}
