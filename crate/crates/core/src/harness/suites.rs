use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::gen::{
    dilation_approximant, gen_closure_seed, gen_convex, gen_convex_pair, gen_hemispherical, gen_nested_pair,
    random_wulff, SeedKind,
};
use super::{run_trials, PropertyReport, SuiteConfig};
use crate::body::SphericalBody;
use crate::error::Result;
use crate::metric::{hausdorff_measured, hemisphere_hausdorff, dilation_tally, separate, Measured};
use crate::point::{sample_sphere, Angle, UnitPoint};
use crate::transforms::{double_polar, polar, polar_antitone_defect};

type Body = SphericalBody<f64>;
type Point = UnitPoint<f64>;

/// Gap parameters `γ` of the tightness construction, `|P1 P2| = π − γ`.
pub const TIGHTNESS_GAMMAS: [f64; 3] = [0.5, 0.1, 0.01];

/// Refinement indices `i` of the union-of-closures sequences `W_i`.
pub const UNION_STEPS: [usize; 4] = [4, 8, 16, 32];

/// Sphere samples per dilation comparison.
pub const DILATION_SAMPLES: usize = 10_000;

const CAP_SEGMENTS: usize = 16;

fn bound(ms: &[Measured<f64>]) -> Option<f64> {
    if ms.iter().all(|m| m.exact) {
        None
    } else {
        Some(ms.iter().map(|m| m.error_bound).fold(0.0, f64::max))
    }
}

fn guarded<F>(name: &str, seed: u64, dim: usize, f: F) -> Vec<PropertyReport>
where
    F: FnOnce() -> Result<Vec<PropertyReport>>,
{
    f().unwrap_or_else(|e| vec![PropertyReport::skipped(name, seed, dim, &e)])
}

/// `|h(W1°, W2°) − h(W1, W2)|` for random Wulff pairs relative to the pole.
pub fn suite_isometry(cfg: &SuiteConfig) -> Vec<PropertyReport> {
    let (n, res, tol) = (cfg.dim, cfg.sampling_resolution, cfg.tol_or(1e-8));
    run_trials(cfg, |seed, rng| {
        guarded("isometry", seed, n, || {
            let w1 = random_wulff(n, rng)?;
            let w2 = random_wulff(n, rng)?;
            Ok(vec![isometry_report(seed, &w1, &w2, res, tol)?])
        })
    })
}

pub(crate) fn isometry_report(seed: u64, w1: &Body, w2: &Body, res: f64, tol: f64) -> Result<PropertyReport> {
    let h = hausdorff_measured(w1, w2, res)?;
    let hd = hausdorff_measured(&polar(w1)?, &polar(w2)?, res)?;
    let delta = (hd.angle.radians() - h.angle.radians()).abs();
    let eb = bound(&[h, hd]);
    Ok(PropertyReport::check(
        "isometry",
        seed,
        w1.ambient_dim(),
        vec![
            ("delta", delta),
            ("h", h.angle.radians()),
            ("h_dual", hd.angle.radians()),
            ("generators", (w1.generators().len().max(w2.generators().len())) as f64),
        ],
        0.0,
        tol + eb.unwrap_or(0.0),
        eb,
    ))
}

/// `½h ≤ h(duals) ≤ 2h` on pairs from the broader convex class.
pub fn suite_bilipschitz(cfg: &SuiteConfig) -> Vec<PropertyReport> {
    let (n, res, tol) = (cfg.dim, cfg.sampling_resolution, cfg.tol_or(1e-8));
    run_trials(cfg, |seed, rng| {
        guarded("bilipschitz", seed, n, || {
            let (a, b, _) = gen_convex_pair(n, rng)?;
            let h = hausdorff_measured(&a, &b, res)?;
            let hd = hausdorff_measured(&polar(&a)?, &polar(&b)?, res)?;
            let (hv, hdv) = (h.angle.radians(), hd.angle.radians());
            let excess = (0.5 * hv - hdv).max(hdv - 2.0 * hv).max(0.0);
            let eb = bound(&[h, hd]);
            Ok(vec![PropertyReport::check(
                "bilipschitz",
                seed,
                n,
                vec![
                    ("sandwich_excess", excess),
                    ("h", hv),
                    ("h_dual", hdv),
                    ("ratio", if hv > 0.0 { hdv / hv } else { f64::NAN }),
                ],
                0.0,
                tol + 2.0 * eb.unwrap_or(0.0),
                eb,
            )])
        })
    })
}

/// Ratio `h(H(P1)°, H(P2)°) / h(H(P1), H(P2))` for `|P1P2| = π − γ`.
pub fn suite_tightness(cfg: &SuiteConfig) -> Vec<PropertyReport> {
    let (n, res, tol) = (cfg.dim, cfg.sampling_resolution, cfg.tol_or(1e-8));
    run_trials(cfg, |seed, rng| {
        guarded("tightness", seed, n, || {
            let p1: Point = sample_sphere(n, rng);
            let dir = random_unit_tangent(&p1, rng);
            TIGHTNESS_GAMMAS
                .iter()
                .map(|&gamma| {
                    let p2 = p1.exp(&dir, PI - gamma)?;
                    tightness_report(seed, &p1, &p2, gamma, res, tol)
                })
                .collect()
        })
    })
}

pub(crate) fn tightness_report(
    seed: u64,
    p1: &Point,
    p2: &Point,
    gamma: f64,
    res: f64,
    tol: f64,
) -> Result<PropertyReport> {
    let (h1, h2) = (Body::hemisphere(p1), Body::hemisphere(p2));
    let closed = hemisphere_hausdorff(p1, p2)?.radians();
    let generic = hausdorff_measured(&h1, &h2, res)?;
    let dual = hausdorff_measured(&polar(&h1)?, &polar(&h2)?, res)?;
    let ratio = dual.angle.radians() / closed;
    let floor = 2.0 - 2.0 * gamma / PI;
    let shortfall = if ratio < 2.0 { floor - ratio } else { f64::INFINITY };
    Ok(PropertyReport::check(
        "tightness",
        seed,
        p1.ambient_dim(),
        vec![
            ("ratio_shortfall", shortfall),
            ("ratio", ratio),
            ("gamma", gamma),
            ("h", closed),
            ("h_generic", generic.angle.radians()),
            ("h_generic_bound", generic.error_bound),
            ("h_dual", dual.angle.radians()),
        ],
        0.0,
        tol,
        bound(&[dual]),
    ))
}

fn random_unit_tangent(p: &Point, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let q: Point = sample_sphere(p.ambient_dim(), rng);
        let mut v = q.coords().to_vec();
        let c = q.dot(p);
        for (vi, pi) in v.iter_mut().zip(p.coords()) {
            *vi -= c * pi;
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// `W°° = W` on random hemispherical generator sets, plus `{P}` and `H(P)`
/// in the first trial.
pub fn suite_double_dual(cfg: &SuiteConfig) -> Vec<PropertyReport> {
    let (n, tol) = (cfg.dim, cfg.tol_or(1e-9));
    let first = cfg.seed;
    run_trials(cfg, |seed, rng| {
        guarded("double_dual", seed, n, || {
            let mut bodies = vec![("random", gen_hemispherical(n, rng)?)];
            if seed == first {
                let p: Point = sample_sphere(n, rng);
                bodies.push(("point", Body::from_generators(std::slice::from_ref(&p))?));
                bodies.push(("hemisphere", Body::hemisphere(&p)));
            }
            bodies
                .into_iter()
                .map(|(kind, w)| {
                    let back = double_polar(&w)?;
                    Ok(PropertyReport::check(
                        "double_dual",
                        seed,
                        n,
                        vec![
                            ("generator_mismatch", back.generator_mismatch(&w)?),
                            ("generators", w.generators().len() as f64),
                            ("special_case", if kind == "random" { 0.0 } else { 1.0 }),
                        ],
                        0.0,
                        tol,
                        None,
                    ))
                })
                .collect()
        })
    })
}

/// Antitonicity on nested pairs and closure of the Wulff class under the polar.
pub fn suite_antitone_closure(cfg: &SuiteConfig) -> Vec<PropertyReport> {
    let (n, tol) = (cfg.dim, cfg.tol_or(1e-10));
    run_trials(cfg, |seed, rng| {
        let mut out = guarded("antitone_closure", seed, n, || {
            let (inner, outer) = gen_nested_pair(n, rng)?;
            let defect = polar_antitone_defect(&inner, &outer)?;
            Ok(vec![PropertyReport::check(
                "antitone_closure",
                seed,
                n,
                vec![("antitone_defect", defect)],
                0.0,
                tol,
                None,
            )])
        });
        out.extend(guarded("antitone_closure", seed, n, || {
            let p = Point::pole(n);
            let w = random_wulff(n, rng)?;
            let dual_ok = polar(&w)?.is_wulff_relative(&p);
            Ok(vec![PropertyReport::check(
                "antitone_closure",
                seed,
                n,
                vec![("dual_not_wulff", if dual_ok { 0.0 } else { 1.0 })],
                0.0,
                0.0,
                None,
            )])
        }));
        out
    })
}

/// Hemisphere distance closed form against the generic distance, and the sampled
/// dilation comparison.
pub fn suite_metric_lemmas(cfg: &SuiteConfig) -> Vec<PropertyReport> {
    let (n, res) = (cfg.dim, cfg.sampling_resolution);
    let tol1 = cfg.tol_or(1e-8).max(2.0 * res);
    run_trials(cfg, |seed, rng| {
        let mut out = guarded("metric_lemmas", seed, n, || {
            let p: Point = sample_sphere(n, rng);
            let q = p.exp(&random_unit_tangent(&p, rng), rng.random_range(0.0..=FRAC_PI_2))?;
            Ok(vec![hemisphere_report(seed, &p, &q, res, tol1)?])
        });
        out.extend(guarded("metric_lemmas", seed, n, || {
            let w = gen_convex(n, rng)?;
            let r = rng.random_range(0.05..FRAC_PI_2 - 0.05);
            let t = dilation_tally(&w, Angle::new(r)?, DILATION_SAMPLES, seed)?;
            Ok(vec![PropertyReport::check(
                "metric_lemmas",
                seed,
                n,
                vec![
                    ("dilation_mismatches", t.mismatches as f64),
                    ("radius", r),
                    ("compared", t.compared as f64),
                    ("banded", t.banded as f64),
                ],
                0.0,
                0.0,
                None,
            )])
        }));
        out
    })
}

pub(crate) fn hemisphere_report(seed: u64, p: &Point, q: &Point, res: f64, tol: f64) -> Result<PropertyReport> {
    let closed = hemisphere_hausdorff(p, q)?.radians();
    let generic = hausdorff_measured(&Body::hemisphere(p), &Body::hemisphere(q), res)?;
    Ok(PropertyReport::check(
        "metric_lemmas",
        seed,
        p.ambient_dim(),
        vec![
            ("hemisphere_gap", (closed - generic.angle.radians()).abs()),
            ("pq", crate::point::geodesic_distance(p, q)?.radians()),
            ("closed_form", closed),
            ("generic", generic.angle.radians()),
        ],
        0.0,
        tol,
        bound(&[generic]),
    ))
}

/// Approximating Wulff sequences `W_i` of points, arcs and polygons.
pub fn suite_union_closure(cfg: &SuiteConfig) -> Vec<PropertyReport> {
    let (n, res, tol) = (cfg.dim, cfg.sampling_resolution, cfg.tol_or(1e-9));
    let kinds = [SeedKind::Point, SeedKind::Arc, SeedKind::Polygon];
    run_trials(cfg, |seed, rng| {
        guarded("union_closure", seed, n, || {
            let kind = kinds[(seed.wrapping_sub(cfg.seed) % 3) as usize];
            let (w, p) = gen_closure_seed(n, kind, rng)?;
            Ok(vec![union_report(seed, &w, &p, res, tol)?])
        })
    })
}

pub(crate) fn union_report(seed: u64, w: &Body, p: &Point, res: f64, tol: f64) -> Result<PropertyReport> {
    let mut hs = Vec::with_capacity(UNION_STEPS.len());
    let mut all_wulff = true;
    for &i in &UNION_STEPS {
        let wi = dilation_approximant(w, 1.0 / i as f64, CAP_SEGMENTS)?;
        all_wulff &= wi.is_wulff_relative(p);
        hs.push(hausdorff_measured(&wi, w, res)?);
    }
    let eb = bound(&hs);
    let slack = eb.unwrap_or(0.0);
    let h: Vec<f64> = hs.iter().map(|m| m.angle.radians()).collect();
    let decreasing = h.windows(2).all(|x| x[1] < x[0] + slack);
    let value = if all_wulff && decreasing { h[3] - h[0] / 4.0 } else { f64::INFINITY };
    Ok(PropertyReport::check(
        "union_closure",
        seed,
        p.ambient_dim(),
        vec![
            ("h32_minus_quarter_h4", value),
            ("h4", h[0]),
            ("h8", h[1]),
            ("h16", h[2]),
            ("h32", h[3]),
            ("all_wulff", if all_wulff { 1.0 } else { 0.0 }),
            ("generators", w.generators().len() as f64),
        ],
        0.0,
        tol + slack,
        eb,
    ))
}

/// Separation of disjoint bodies in a common open hemisphere.
pub fn suite_separation(cfg: &SuiteConfig) -> Vec<PropertyReport> {
    let n = cfg.dim;
    run_trials(cfg, |seed, rng| {
        guarded("separation", seed, n, || {
            let (a, b) = disjoint_pair(n, rng)?;
            Ok(vec![separation_report(seed, &a, &b)])
        })
    })
}

/// Two bodies in caps whose radii sum to less than their centre distance.
pub(crate) fn disjoint_pair(n: usize, rng: &mut ChaCha8Rng) -> Result<(Body, Body)> {
    let c: Point = sample_sphere(n, rng);
    let dir = random_unit_tangent(&c, rng);
    let s = rng.random_range(0.3..1.4);
    let back: Vec<f64> = dir.iter().map(|x| -x).collect();
    let centers = [c.exp(&dir, s / 2.0)?, c.exp(&back, s / 2.0)?];
    let mut bodies = Vec::with_capacity(2);
    for center in &centers {
        let r = rng.random_range(0.02..0.45 * s);
        let k = rng.random_range(1..=12);
        let pts = crate::point::sample_cap_with(center, Angle::new(r)?, rng, k)?;
        bodies.push(Body::from_generators(&pts)?);
    }
    let b = bodies.pop().expect("two bodies");
    let a = bodies.pop().expect("two bodies");
    Ok((a, b))
}

pub(crate) fn separation_report(seed: u64, a: &Body, b: &Body) -> PropertyReport {
    let n = a.ambient_dim();
    match separate(a, b) {
        Ok(q) => {
            let worst_a = a.generators().iter().map(|x| -q.dot(x)).fold(f64::NEG_INFINITY, f64::max);
            let worst_b = b.generators().iter().map(|y| q.dot(y)).fold(f64::NEG_INFINITY, f64::max);
            let violation = (worst_a - 1e-10).max(worst_b + 1e-9);
            PropertyReport::check(
                "separation",
                seed,
                n,
                vec![("clause_violation", violation), ("support_on_b", worst_b), ("min_on_a", -worst_a)],
                0.0,
                0.0,
                None,
            )
        }
        Err(_) => PropertyReport::check(
            "separation",
            seed,
            n,
            vec![("clause_violation", f64::INFINITY), ("no_separator", 1.0)],
            0.0,
            0.0,
            None,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{run_suite, suite_passed, SUITES};

    #[test]
    fn every_suite_passes_small_runs() {
        for name in SUITES {
            let mut cfg = SuiteConfig::new(name);
            cfg.trials = 6;
            cfg.seed = 11;
            let reports = run_suite(&cfg).unwrap();
            for r in reports.iter().filter(|r| !r.pass) {
                eprintln!("{r:?}");
            }
            assert!(suite_passed(&reports), "{name}");
        }
    }

    #[test]
    fn identical_and_rotated_wulff_pairs() {
        let mut rng = crate::point::seeded_rng(3);
        let w = random_wulff(2, &mut rng).unwrap();
        let r = isometry_report(0, &w, &w, 0.005, 1e-8).unwrap();
        assert_eq!(r.get("h"), Some(0.0));
        assert_eq!(r.value(), 0.0);
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let rotated: Vec<Point> = w
            .generators()
            .iter()
            .map(|g| {
                let x = g.coords();
                Point::from_slice(&[c * x[0] - s * x[1], s * x[0] + c * x[1], x[2]]).unwrap()
            })
            .collect();
        let w2 = Body::from_generators(&rotated).unwrap();
        let r = isometry_report(0, &w, &w2, 0.005, 1e-8).unwrap();
        assert!(r.pass && r.error_bound.is_none() && r.value() <= 1e-8, "{r:?}");
    }

    #[test]
    fn tightness_ratios() {
        let p1 = Point::pole(2);
        let dir = [1.0, 0.0, 0.0];
        let p2 = p1.exp(&dir, PI - 0.01).unwrap();
        let r = tightness_report(0, &p1, &p2, 0.01, 0.005, 1e-8).unwrap();
        let ratio = r.get("ratio").unwrap();
        assert!((ratio - (PI - 0.01) / FRAC_PI_2).abs() < 1e-12);
        assert!((1.993..2.0).contains(&ratio) && r.pass);
        // |P1P2| = pi/2: the closed form is |P1P2| itself, ratio 1
        let p2 = p1.exp(&dir, FRAC_PI_2).unwrap();
        let r = tightness_report(0, &p1, &p2, FRAC_PI_2, 0.005, 1e-8).unwrap();
        assert!((r.get("ratio").unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn union_sequence_for_a_point() {
        let p = Point::pole(2);
        let w = Body::from_generators(std::slice::from_ref(&p)).unwrap();
        let r = union_report(0, &w, &p, 0.005, 1e-9).unwrap();
        assert!(r.pass);
        // inscribed 16-gons: the farthest points are the vertices at 1/i
        for (label, i) in [("h4", 4.0), ("h8", 8.0), ("h16", 16.0), ("h32", 32.0)] {
            assert!((r.get(label).unwrap() - 1.0 / i).abs() < 1e-12);
        }
    }
}
