//! The spherical polar transform `W ↦ W° = ∩_{P ∈ W} H(P)` as exact cone
//! duality, and the operations built from it.

use crate::body::SphericalBody;
use crate::cone::dual_cone;
use crate::error::{GeometryError, Result};
use crate::point::{Angle, UnitPoint};
use crate::scalar::Scalar;

/// Extreme rays of `{q : q·g >= 0 for all g}` as unit points, under the
/// `±lineality basis + pointed rays` convention.
pub fn dual_cone_convert<S: Scalar>(generators: &[UnitPoint<S>]) -> Result<Vec<UnitPoint<S>>> {
    let rows: Vec<Vec<S>> = generators.iter().map(|g| g.coords().to_vec()).collect();
    let d = dual_cone(&rows)?;
    Ok(d.generators().into_iter().map(UnitPoint::from_unit_unchecked).collect())
}

/// Whether `W° ≠ ∅`.
pub fn polar_admissible<S: Scalar>(body: &SphericalBody<S>) -> bool {
    dual_cone(&body.generator_rows()).is_ok()
}

/// The polar body `W°`. Its support normals are the generators of `W`; its
/// generators are the extreme rays of the dual cone.
pub fn polar<S: Scalar>(body: &SphericalBody<S>) -> Result<SphericalBody<S>> {
    let gens = body.generator_rows();
    let dual = dual_cone(&gens)?;
    Ok(SphericalBody::from_parts(
        body.ambient_dim(),
        dual.generators(),
        gens,
    ))
}

/// The spherical dual Wulff shape of `body` relative to `p`.
pub fn dual_wulff<S: Scalar>(body: &SphericalBody<S>, p: &UnitPoint<S>) -> Result<SphericalBody<S>> {
    if !body.is_wulff_relative(p) {
        return Err(GeometryError::NotAWulffShape(
            "input fails the Wulff predicate relative to the given point".into(),
        ));
    }
    let dual = polar(body)?;
    if !dual.is_wulff_relative(p) {
        return Err(GeometryError::NotAWulffShape(
            "polar image fails the Wulff predicate".into(),
        ));
    }
    Ok(dual)
}

/// `s-conv(points)`; the points must be hemispherical. The result is checked
/// against the double polar of the raw cone.
pub fn spherical_hull<S: Scalar>(points: &[UnitPoint<S>]) -> Result<SphericalBody<S>> {
    let hull = SphericalBody::from_generators(points)?;
    if !hull.is_hemispherical() {
        return Err(GeometryError::NotHemispherical);
    }
    let back = double_polar(&hull)?;
    let gap = hull.generator_mismatch(&back)?;
    if gap > S::tol_ray() {
        return Err(GeometryError::Precondition(format!(
            "hull differs from its double polar by {gap}"
        )));
    }
    Ok(hull)
}

/// `W°°`.
pub fn double_polar<S: Scalar>(body: &SphericalBody<S>) -> Result<SphericalBody<S>> {
    polar(&polar(body)?)
}

/// For `a ⊂ b`, decides `b° ⊂ a°` by generator containment.
pub fn polar_antitone_check<S: Scalar>(a: &SphericalBody<S>, b: &SphericalBody<S>) -> Result<bool> {
    Ok(polar_antitone_defect(a, b)? <= S::tol_membership())
}

/// How far `b°` sticks out of `a°` (zero when the inclusion holds).
pub fn polar_antitone_defect<S: Scalar>(a: &SphericalBody<S>, b: &SphericalBody<S>) -> Result<S> {
    if !a.is_subset_of(b)? {
        return Err(GeometryError::Precondition("first body is not inside the second".into()));
    }
    let pa = polar(a)?;
    let pb = polar(b)?;
    pb.containment_defect(&pa)
}

/// Tolerance-aware equality of `W°°` and `W`.
pub fn double_polar_matches<S: Scalar>(body: &SphericalBody<S>, tol: Angle<S>) -> Result<bool> {
    crate::body::bodies_equal(&double_polar(body)?, body, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::bodies_equal;
    use crate::point::{geodesic_distance, sample_cap};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn p(c: &[f64]) -> UnitPoint<f64> {
        UnitPoint::from_slice(c).unwrap()
    }

    fn square(colat: f64, lon0: f64) -> Vec<UnitPoint<f64>> {
        (0..4)
            .map(|k| UnitPoint::from_colat_lon(colat, lon0 + k as f64 * FRAC_PI_2))
            .collect()
    }

    fn tol(x: f64) -> Angle<f64> {
        Angle::new(x).unwrap()
    }

    #[test]
    fn point_and_hemisphere_are_dual() {
        let x = p(&[0.3, -0.5, 0.8]);
        let single = SphericalBody::from_generators(std::slice::from_ref(&x)).unwrap();
        let h = SphericalBody::hemisphere(&x);
        let ps = polar(&single).unwrap();
        assert!(bodies_equal(&ps, &h, tol(1e-12)).unwrap());
        assert!(!ps.is_hemispherical());
        let ph = polar(&h).unwrap();
        assert!(bodies_equal(&ph, &single, tol(1e-12)).unwrap());
        assert!(bodies_equal(&double_polar(&single).unwrap(), &single, tol(1e-12)).unwrap());
        assert!(bodies_equal(&double_polar(&h).unwrap(), &h, tol(1e-12)).unwrap());
    }

    #[test]
    fn square_dual_is_rotated_square() {
        for theta in [0.2, PI / 6.0, 0.9] {
            let sq = SphericalBody::from_generators(&square(theta, 0.0)).unwrap();
            let d = polar(&sq).unwrap();
            let edge = (f64::tan(theta) * FRAC_PI_4.cos()).atan();
            let expected = SphericalBody::from_generators(&square(FRAC_PI_2 - edge, FRAC_PI_4)).unwrap();
            assert!(bodies_equal(&d, &expected, tol(1e-12)).unwrap());
            let from_normals = SphericalBody::from_generators(d.support_normals()).unwrap();
            assert!(bodies_equal(&from_normals, &sq, tol(1e-12)).unwrap());
            assert!(bodies_equal(&double_polar(&sq).unwrap(), &sq, tol(1e-12)).unwrap());
        }
    }

    #[test]
    fn admissibility() {
        let pole = UnitPoint::<f64>::pole(2);
        let sym: Vec<_> = (0..3)
            .flat_map(|i| [UnitPoint::<f64>::axis(2, i), UnitPoint::axis(2, i).antipode()])
            .collect();
        let all = SphericalBody::from_generators(&sym).unwrap();
        assert!(!polar_admissible(&all));
        assert_eq!(polar(&all), Err(GeometryError::PolarEmpty));
        assert!(polar_admissible(&SphericalBody::hemisphere(&pole)));
        let sq = SphericalBody::from_generators(&square(0.5, 0.0)).unwrap();
        assert!(polar_admissible(&sq));
    }

    #[test]
    fn dual_convert_examples() {
        let q = dual_cone_convert(&[p(&[1.0, 0.0]), p(&[0.0, 1.0])]).unwrap();
        assert_eq!(q, vec![p(&[0.0, 1.0]), p(&[1.0, 0.0])]);
        let h = dual_cone_convert(&[p(&[1.0, 0.0])]).unwrap();
        assert_eq!(h, vec![p(&[0.0, -1.0]), p(&[0.0, 1.0]), p(&[1.0, 0.0])]);
    }

    #[test]
    fn dual_wulff_of_caps() {
        let pole = UnitPoint::<f64>::pole(2);
        let cap = SphericalBody::cap_polytope(&pole, tol(0.5), 64).unwrap();
        let d = dual_wulff(&cap, &pole).unwrap();
        // dual vertices are the edge normals; the inscribed edges sit at
        // tan(r') = tan(0.5) cos(pi/64) from the pole
        let r_edge = (0.5f64.tan() * (PI / 64.0).cos()).atan();
        for g in d.generators() {
            let r = geodesic_distance(&pole, g).unwrap().radians();
            assert!((r - (FRAC_PI_2 - r_edge)).abs() < 1e-12, "{r}");
        }
        let back = dual_wulff(&d, &pole).unwrap();
        assert!(bodies_equal(&back, &cap, tol(1e-10)).unwrap());
        assert!(matches!(
            dual_wulff(&SphericalBody::hemisphere(&pole), &pole),
            Err(GeometryError::NotAWulffShape(_))
        ));
    }

    #[test]
    fn hull_checks() {
        let a = p(&[1.0, 0.0, 0.2]);
        let b = p(&[0.0, 1.0, 0.2]);
        let arc = spherical_hull(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(arc.generators().len(), 2);
        let sq = spherical_hull(&square(0.4, 0.0)).unwrap();
        assert_eq!(sq.generators().len(), 4);
        let c = p(&[0.2, 0.1, 0.9]);
        let pts = sample_cap(&c, tol(1.0), 17, 50).unwrap();
        let hull = spherical_hull(&pts).unwrap();
        assert!(hull.generators().len() <= 50);
        assert!(pts.iter().all(|q| hull.contains(q)));
        assert_eq!(
            spherical_hull(&[a.clone(), a.antipode()]).err(),
            Some(GeometryError::NotHemispherical)
        );
    }

    #[test]
    fn antitone() {
        let pole = UnitPoint::<f64>::pole(2);
        let inner = SphericalBody::cap_polytope(&pole, tol(0.2), 16).unwrap();
        let outer = SphericalBody::cap_polytope(&pole, tol(0.4), 16).unwrap();
        assert!(polar_antitone_check(&inner, &outer).unwrap());
        assert!(polar_antitone_check(&outer, &outer).unwrap());
        let vertex = SphericalBody::from_generators(&[outer.generators()[0].clone()]).unwrap();
        assert!(polar_antitone_check(&vertex, &outer).unwrap());
        assert!(polar_antitone_check(&outer, &inner).is_err());
    }
}
