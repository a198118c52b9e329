//! Points of `S^n`, geodesic lengths and the primitive operations on them.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{GeometryError, Result};
use crate::linalg;
use crate::scalar::Scalar;

/// A point of the unit sphere `S^n`, stored as a unit vector of `R^(n+1)`.
#[derive(Clone, PartialEq)]
pub struct UnitPoint<S: Scalar> {
    coords: Vec<S>,
}

impl<S: Scalar> fmt::Debug for UnitPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("UnitPoint").field(&self.coords).finish()
    }
}

impl<S: Scalar> UnitPoint<S> {
    /// Normalizes `coords` onto the sphere. Vectors shorter than the
    /// scalar's `MIN_NORM` are rejected.
    pub fn new(coords: Vec<S>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(GeometryError::InvalidDimension);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::DegenerateVector { norm: f64::NAN });
        }
        let n = linalg::norm(&coords);
        if n < S::min_norm() {
            return Err(GeometryError::DegenerateVector { norm: n.as_f64() });
        }
        let mut coords = linalg::scale(&coords, S::one() / n);
        // a second pass brings the norm to within an ulp or two of one
        let n2 = linalg::norm(&coords);
        if n2 != S::one() {
            coords = linalg::scale(&coords, S::one() / n2);
        }
        Ok(Self { coords })
    }

    pub fn from_slice(coords: &[S]) -> Result<Self> {
        Self::new(coords.to_vec())
    }

    /// Standard basis vector `e_axis` of `R^(n+1)`.
    pub fn axis(ambient_dim: usize, axis: usize) -> Self {
        assert!(ambient_dim >= 1 && axis <= ambient_dim);
        let mut coords = vec![S::zero(); ambient_dim + 1];
        coords[axis] = S::one();
        Self { coords }
    }

    /// North pole `e_n` of `S^n`.
    pub fn pole(ambient_dim: usize) -> Self {
        Self::axis(ambient_dim, ambient_dim)
    }

    /// Point of `S^2` at colatitude `colat` (from the pole `e_2`) and
    /// longitude `lon`.
    pub fn from_colat_lon(colat: S, lon: S) -> Self {
        let (s, c) = colat.sin_cos();
        Self {
            coords: vec![s * lon.cos(), s * lon.sin(), c],
        }
    }

    pub(crate) fn from_unit_unchecked(coords: Vec<S>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    /// The sphere dimension `n`.
    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn dot(&self, other: &Self) -> S {
        linalg::dot(&self.coords, &other.coords)
    }

    pub fn antipode(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|&c| -c).collect(),
        }
    }

    pub(crate) fn check_dim(&self, other: &Self) -> Result<()> {
        if self.coords.len() != other.coords.len() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.ambient_dim(),
                found: other.ambient_dim(),
            });
        }
        Ok(())
    }

    /// Canonical orthonormal basis of the tangent space at this point.
    pub fn tangent_basis(&self) -> Vec<Vec<S>> {
        linalg::canonical_complement(std::slice::from_ref(&self.coords), self.coords.len())
    }

    /// Point reached by walking `distance` radians from here along the unit
    /// tangent direction `tangent`.
    pub fn exp(&self, tangent: &[S], distance: S) -> Result<Self> {
        let (s, c) = distance.sin_cos();
        let v: Vec<S> = self
            .coords
            .iter()
            .zip(tangent)
            .map(|(&p, &t)| c * p + s * t)
            .collect();
        Self::new(v)
    }
}

/// A geodesic length in radians, always in `[0, π]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct Angle<S: Scalar>(S);

impl<S: Scalar> Angle<S> {
    pub fn new(radians: S) -> Result<Self> {
        let slack = S::tol_membership();
        if !(radians >= -slack && radians <= S::PI() + slack) {
            return Err(GeometryError::AngleOutOfRange {
                value: radians.as_f64(),
                range: "[0, pi]",
            });
        }
        Ok(Self::clamped(radians))
    }

    /// Clamps into `[0, π]`; used where the value is known to be an angle up
    /// to round-off.
    pub(crate) fn clamped(radians: S) -> Self {
        Self(radians.max(S::zero()).min(S::PI()))
    }

    pub fn zero() -> Self {
        Self(S::zero())
    }

    pub fn radians(self) -> S {
        self.0
    }
}

impl<S: Scalar> fmt::Display for Angle<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Great-circle distance `|PQ|`, from the two-argument arctangent of the
/// orthogonal component and the dot product.
pub fn geodesic_distance<S: Scalar>(p: &UnitPoint<S>, q: &UnitPoint<S>) -> Result<Angle<S>> {
    p.check_dim(q)?;
    Ok(Angle::clamped(angle_between(p.coords(), q.coords())))
}

/// Angle between two unit vectors (no dimension check).
pub(crate) fn angle_between<S: Scalar>(p: &[S], q: &[S]) -> S {
    let c = linalg::dot(p, q);
    let mut orth = q.to_vec();
    linalg::axpy(&mut orth, -c, p);
    linalg::norm(&orth).atan2(c)
}

/// Point `((1-t)p + tq) / ||(1-t)p + tq||` of the arc `PQ`.
pub fn arc_point<S: Scalar>(p: &UnitPoint<S>, q: &UnitPoint<S>, t: S) -> Result<UnitPoint<S>> {
    p.check_dim(q)?;
    if !(t >= S::zero() && t <= S::one()) {
        return Err(GeometryError::Precondition(format!(
            "arc parameter {t} outside [0, 1]"
        )));
    }
    // the chord passes through the origin iff the endpoints are antipodal
    if linalg::norm(&linalg::add(p.coords(), q.coords())) < S::min_norm() {
        return Err(GeometryError::Antipodal);
    }
    if t == S::zero() {
        return Ok(p.clone());
    }
    if t == S::one() {
        return Ok(q.clone());
    }
    let v: Vec<S> = p
        .coords()
        .iter()
        .zip(q.coords())
        .map(|(&a, &b)| (S::one() - t) * a + t * b)
        .collect();
    UnitPoint::new(v).map_err(|_| GeometryError::Antipodal)
}

/// Membership of `q` in the closed hemisphere `H(center)`.
pub fn hemisphere_contains<S: Scalar>(center: &UnitPoint<S>, q: &UnitPoint<S>) -> Result<bool> {
    center.check_dim(q)?;
    Ok(center.dot(q) >= -S::tol_membership())
}

/// Deterministic stream used by every sampler in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` points drawn uniformly (area measure) from the open cap of
/// geodesic radius `radius` around `center`.
pub fn sample_cap<S: Scalar>(
    center: &UnitPoint<S>,
    radius: Angle<S>,
    rng_seed: u64,
    count: usize,
) -> Result<Vec<UnitPoint<S>>> {
    let mut rng = seeded_rng(rng_seed);
    sample_cap_with(center, radius, &mut rng, count)
}

/// [`sample_cap`] drawing from a caller-supplied generator.
pub fn sample_cap_with<S: Scalar, R: Rng + ?Sized>(
    center: &UnitPoint<S>,
    radius: Angle<S>,
    rng: &mut R,
    count: usize,
) -> Result<Vec<UnitPoint<S>>> {
    let rho = radius.radians().as_f64();
    if !(rho > 0.0 && rho < std::f64::consts::FRAC_PI_2) {
        return Err(GeometryError::AngleOutOfRange {
            value: rho,
            range: "(0, pi/2)",
        });
    }
    if count == 0 {
        return Err(GeometryError::Precondition("count must be at least 1".into()));
    }
    let n = center.ambient_dim();
    let tangent = center.tangent_basis();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let theta = sample_polar_angle(n, rho, rng);
        let dir = random_unit_tangent(&tangent, rng);
        let p = center.exp(&dir, S::lit(theta))?;
        // guard the open-cap contract against round-off at theta ~ rho
        if angle_between(center.coords(), p.coords()) < S::lit(rho) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Polar angle with density proportional to `sin^(n-1)(theta)` on `[0, rho)`.
fn sample_polar_angle<R: Rng + ?Sized>(n: usize, rho: f64, rng: &mut R) -> f64 {
    match n {
        1 => rng.random::<f64>() * rho,
        2 => {
            let u: f64 = rng.random();
            (1.0 - u * (1.0 - rho.cos())).acos()
        }
        _ => {
            let smax = rho.sin();
            loop {
                let theta = rng.random::<f64>() * rho;
                let accept = (theta.sin() / smax).powi(n as i32 - 1);
                if rng.random::<f64>() < accept {
                    return theta;
                }
            }
        }
    }
}

fn random_unit_tangent<S: Scalar, R: Rng + ?Sized>(tangent: &[Vec<S>], rng: &mut R) -> Vec<S> {
    let dim = tangent[0].len();
    loop {
        let mut v = vec![S::zero(); dim];
        for t in tangent {
            let g: f64 = rng.sample(StandardNormal);
            linalg::axpy(&mut v, S::lit(g), t);
        }
        if let Some(u) = linalg::normalized(&v) {
            if linalg::norm(&v) > S::lit(1e-6) {
                return u;
            }
        }
    }
}

/// Uniform point of `S^n`.
pub fn sample_sphere<S: Scalar, R: Rng + ?Sized>(ambient_dim: usize, rng: &mut R) -> UnitPoint<S> {
    loop {
        let v: Vec<S> = (0..=ambient_dim)
            .map(|_| S::lit(rng.sample::<f64, _>(StandardNormal)))
            .collect();
        if linalg::norm(&v) > S::lit(1e-3) {
            return UnitPoint::new(v).expect("norm checked");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn p(c: &[f64]) -> UnitPoint<f64> {
        UnitPoint::from_slice(c).unwrap()
    }

    #[test]
    fn distance_examples() {
        let x = p(&[1.0, 0.0, 0.0]);
        let y = p(&[0.0, 1.0, 0.0]);
        assert!((geodesic_distance(&x, &y).unwrap().radians() - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(geodesic_distance(&x, &x).unwrap().radians(), 0.0);
        let z = p(&[-1.0, 0.0, 0.0]);
        assert!((geodesic_distance(&x, &z).unwrap().radians() - PI).abs() < 1e-15);
        assert!(matches!(
            geodesic_distance(&x, &p(&[1.0, 0.0])),
            Err(GeometryError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tiny_angles_keep_precision() {
        let a = 1e-9f64;
        let x = p(&[1.0, 0.0, 0.0]);
        let y = p(&[a.cos(), a.sin(), 0.0]);
        let d = geodesic_distance(&x, &y).unwrap().radians();
        assert!((d - a).abs() / a < 1e-6, "{d}");
    }

    #[test]
    fn construction_normalizes_and_rejects_zero() {
        let q = p(&[3.0, 4.0, 0.0]);
        assert!((linalg::norm(q.coords()) - 1.0).abs() < 1e-12);
        assert!(matches!(
            UnitPoint::<f64>::new(vec![1e-12, 0.0, 0.0]),
            Err(GeometryError::DegenerateVector { .. })
        ));
        assert!(UnitPoint::<f64>::new(vec![1.0]).is_err());
    }

    #[test]
    fn arc_examples() {
        let x = p(&[1.0, 0.0, 0.0]);
        let y = p(&[0.0, 1.0, 0.0]);
        assert_eq!(arc_point(&x, &y, 0.0).unwrap(), x);
        assert_eq!(arc_point(&x, &y, 1.0).unwrap(), y);
        let m = arc_point(&x, &y, 0.5).unwrap();
        let s = 0.5f64.sqrt();
        for (a, b) in m.coords().iter().zip([s, s, 0.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(arc_point(&x, &x.antipode(), 0.3), Err(GeometryError::Antipodal));
    }

    #[test]
    fn hemisphere_examples() {
        let c = p(&[0.0, 0.0, 1.0]);
        assert!(hemisphere_contains(&c, &c).unwrap());
        assert!(hemisphere_contains(&c, &p(&[1.0, 0.0, 0.0])).unwrap());
        assert!(!hemisphere_contains(&c, &p(&[0.0, 0.0, -1.0])).unwrap());
    }

    #[test]
    fn cap_sampling_contract() {
        let c = p(&[0.0, 0.0, 1.0]);
        let one = sample_cap(&c, Angle::new(0.1).unwrap(), 3, 1).unwrap();
        assert_eq!(one.len(), 1);
        assert!(geodesic_distance(&c, &one[0]).unwrap().radians() < 0.1);
        let a = sample_cap(&c, Angle::new(0.5).unwrap(), 11, 50).unwrap();
        let b = sample_cap(&c, Angle::new(0.5).unwrap(), 11, 50).unwrap();
        assert_eq!(a, b);
        assert!(sample_cap(&c, Angle::new(1.6).unwrap(), 1, 1).is_err());
        assert!(sample_cap(&c, Angle::new(0.5).unwrap(), 1, 0).is_err());
    }

    #[test]
    fn cap_sampling_is_rotationally_symmetric() {
        for c in [p(&[0.0, 0.0, 1.0]), p(&[0.3, -0.2, 0.5]), p(&[0.1, 0.2, 0.3, 0.4])] {
            let pts = sample_cap(&c, Angle::new(0.5).unwrap(), 99, 10_000).unwrap();
            let mut mean = vec![0.0; c.coords().len()];
            for q in &pts {
                linalg::axpy(&mut mean, 1.0, q.coords());
            }
            let m = UnitPoint::new(mean).unwrap();
            assert!(geodesic_distance(&c, &m).unwrap().radians() < 0.01);
        }
    }

    #[test]
    fn cap_sampling_matches_area_cdf_on_s2() {
        // P(theta <= rho/2) = (1 - cos(rho/2)) / (1 - cos rho)
        let c = UnitPoint::<f64>::pole(2);
        let rho = 1.0f64;
        let pts = sample_cap(&c, Angle::new(rho).unwrap(), 5, 20_000).unwrap();
        let inner = pts
            .iter()
            .filter(|q| geodesic_distance(&c, q).unwrap().radians() <= rho / 2.0)
            .count() as f64
            / pts.len() as f64;
        let expected = (1.0 - (rho / 2.0).cos()) / (1.0 - rho.cos());
        assert!((inner - expected).abs() < 0.015, "{inner} vs {expected}");
    }

    #[test]
    fn f32_points_work() {
        let x = UnitPoint::<f32>::from_slice(&[1.0, 0.0, 0.0]).unwrap();
        let y = UnitPoint::<f32>::from_slice(&[0.0, 1.0, 0.0]).unwrap();
        let d = geodesic_distance(&x, &y).unwrap().radians();
        assert!((d - std::f32::consts::FRAC_PI_2).abs() < 1e-6);
    }
}
