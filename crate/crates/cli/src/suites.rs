use explab::bundle::*;
use explab::classify::{classify, realizable_subspace, verify_milne_structure, DegreeMode};
use explab::groupexp::*;
use explab::lie::milne;
use explab::schrod::{convergence_study, mass_equality_sweep, Scenario};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::Suite;
use crate::Failure;

pub const IDENTITY_TOL: f64 = 1e-12;
pub const TIME_VARIANCE_TOL: f64 = 1e-24;
pub const MIN_ORDER: f64 = 1.8;
pub const MIN_MARGIN: f64 = 10.0;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl Check {
    fn bound(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            passed: value <= tol,
            value: json!(value),
            tolerance: Some(tol),
        }
    }

    fn holds(name: impl Into<String>, passed: bool, value: Value) -> Self {
        Self {
            name: name.into(),
            passed,
            value,
            tolerance: None,
        }
    }
}

pub struct SuiteOutput {
    pub checks: Vec<Check>,
    pub details: Value,
}

pub fn run(suite: Suite, samples: usize, seed: u64) -> Result<SuiteOutput, Failure> {
    match suite {
        Suite::Galilean => Ok(galilean(samples, seed)),
        Suite::Milne(m) => milne_suite(m, samples, seed),
        Suite::Bundle => bundle(seed),
        Suite::Schrodinger => schrodinger(),
        Suite::HGroup => Ok(h_group(samples, seed)),
    }
}

fn identity_checks(prefix: &str, report: &IdentityReport) -> Vec<Check> {
    report
        .checks
        .iter()
        .map(|s| Check::bound(format!("{prefix}{}", s.name), s.max_violation, IDENTITY_TOL))
        .collect()
}

fn galilean(samples: usize, seed: u64) -> SuiteOutput {
    let xi = PhaseExponent(GalileanMass { mass: 1.0 });
    let report = verify_exponent(&GalileanGroup, &xi, samples, seed);
    let mut checks = identity_checks("", &report);
    let var = time_variance(&GalileanGroup, &xi, samples.min(200), 20, seed);
    checks.push(Check::bound("time_independence", var, TIME_VARIANCE_TOL));
    SuiteOutput {
        checks,
        details: json!({ "max_violation": report.max_violation() }),
    }
}

fn milne_suite(m: usize, samples: usize, seed: u64) -> Result<SuiteOutput, Failure> {
    let alg = milne(m).map_err(|e| Failure::Input(e.to_string()))?;
    let c = classify(alg, DegreeMode::default()).map_err(|e| Failure::Aborted(e.to_string()))?;
    let want = m * (m + 1) / 2;
    let mut checks = vec![Check::holds("quotient_dim", c.quotient_dim == want, json!(c.quotient_dim))];
    let report = verify_milne_structure(&c, m).map_err(|e| Failure::Aborted(e.to_string()))?;
    for outcome in &report.checks {
        checks.push(Check::holds(
            outcome.name,
            outcome.passed(),
            json!({ "failures": outcome.failures }),
        ));
    }
    let realizable = realizable_subspace(&c, m).map_err(|e| Failure::Aborted(e.to_string()))?;
    checks.push(Check::holds(
        "realizable_dim",
        realizable.quotient_dim == m,
        json!(realizable.quotient_dim),
    ));
    let group = MilneGroup::new(m).map_err(|e| Failure::Input(e.to_string()))?;
    let ids = verify_exponent(&group, &PhaseExponent(MilneSchrodinger { mass: 1.0 }), samples, seed);
    checks.extend(identity_checks("group_", &ids));
    Ok(SuiteOutput {
        checks,
        details: json!({
            "degree_used": c.degree_used,
            "cocycle_dim": c.cocycle_dim,
            "coboundary_dim": c.coboundary_dim,
        }),
    })
}

fn bundle(seed: u64) -> Result<SuiteOutput, Failure> {
    let err = |e: BundleError| Failure::Aborted(e.to_string());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = TimeGrid::uniform(0.0, 2.0, 25).map_err(err)?;
    let s = Section::random(&grid, 3, &mut rng);
    let planted: Vec<f64> = (0..grid.len()).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    let moved = apply_bundle_map(&BundleMap::phases(&planted, 3), &s).map_err(err)?;
    let recovery = match ray_equivalent(&s, &moved, DEFAULT_RAY_TOL).map_err(err)? {
        RayEquivalence::Equivalent { phases } => planted
            .iter()
            .zip(&phases)
            .map(|(a, b)| angle_distance(*a, *b))
            .fold(0.0, f64::max),
        RayEquivalence::NotEquivalent { .. } => f64::INFINITY,
    };
    let scaled = ray_equivalent(&s, &moved.scale(Complex64::new(1.5, 0.0)), DEFAULT_RAY_TOL).map_err(err)?;
    let other = ray_equivalent(&s, &Section::random(&grid, 3, &mut rng), DEFAULT_RAY_TOL).map_err(err)?;
    let mut perm: Vec<usize> = (0..grid.len()).collect();
    for k in (1..perm.len()).rev() {
        perm.swap(k, rng.random_range(0..=k));
    }
    let t = BundleMap::random(perm.clone(), 3, &mut rng).map_err(err)?;
    let phi = Section::random(&grid, 3, &mut rng);
    let (ts, tphi) = (apply_bundle_map(&t, &s).map_err(err)?, apply_bundle_map(&t, &phi).map_err(err)?);
    let mut iso: f64 = 0.0;
    for (k, &target) in perm.iter().enumerate() {
        let d = fiber_inner(&s, &phi, k).map_err(err)? - fiber_inner(&ts, &tphi, target).map_err(err)?;
        iso = iso.max(d.norm());
    }
    Ok(SuiteOutput {
        checks: vec![
            Check::bound("phase_recovery", recovery, IDENTITY_TOL),
            Check::holds("scaled_rejected", !scaled.is_equivalent(), json!(!scaled.is_equivalent())),
            Check::holds("independent_rejected", !other.is_equivalent(), json!(!other.is_equivalent())),
            Check::bound("isometry", iso, IDENTITY_TOL),
        ],
        details: json!({ "nodes": grid.len(), "fiber_dim": 3 }),
    })
}

fn schrodinger() -> Result<SuiteOutput, Failure> {
    let err = |e: explab::schrod::SchrodError| Failure::Aborted(e.to_string());
    let s = Scenario::standard();
    let g = s.accel.field();
    let study = convergence_study(4, 1.0, &s, |l| s.transformed_field(l), &g).map_err(err)?;
    let sweep = mass_equality_sweep(&s, &[0.5, 0.9, 1.0, 1.1, 2.0], 3).map_err(err)?;
    let margin = sweep.margin.unwrap_or(0.0);
    Ok(SuiteOutput {
        checks: vec![
            Check::holds("convergence_order", study.order >= MIN_ORDER, json!(study.order)),
            Check::holds(
                "sweep_minimum_at_unit_ratio",
                sweep.best_ratio == Some(1.0),
                json!(sweep.best_ratio),
            ),
            Check::holds("sweep_margin", margin >= MIN_MARGIN, json!(margin)),
        ],
        details: json!({
            "scenario": s,
            "convergence": study,
            "sweep": sweep,
        }),
    })
}

fn random_theta(rng: &mut ChaCha8Rng) -> impl Fn(&Event) -> f64 + Send + Sync + 'static {
    let (a, b, c): (f64, f64, f64) = (
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    );
    move |p: &Event| (a * p.x[0] + b * p.t).sin() + c * p.x[1] * p.x[2]
}

/// Largest `|associativity gap − cocycle defect|` and largest defect.
fn associativity<X>(xi: X, reference: &X, samples: &[Triple<GalileanElement>], seed: u64) -> (f64, f64)
where
    X: Exponent<GalileanElement, Scalar = f64> + 'static,
{
    let h = HGroup::new(xi, GalileanElement::identity());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut gap, mut size): (f64, f64) = (0.0, 0.0);
    for s in samples {
        let h1 = h.element(random_theta(&mut rng), s.r.clone());
        let h2 = h.element(random_theta(&mut rng), s.s.clone());
        let h3 = h.element(random_theta(&mut rng), s.g.clone());
        let left = h.multiply(&h.multiply(&h1, &h2), &h3);
        let right = h.multiply(&h1, &h.multiply(&h2, &h3));
        let d = cocycle_defect(reference, &s.r, &s.s, &s.g, &s.p);
        gap = gap.max(((left.theta)(&s.p) - (right.theta)(&s.p) - d).abs());
        size = size.max(d.abs());
    }
    (gap, size)
}

fn h_group(samples: usize, seed: u64) -> SuiteOutput {
    let triples = random_triples(&GalileanGroup, samples, seed);
    let exact = PhaseExponent(GalileanMass { mass: 1.0 });
    let (gap, _) = associativity(exact.clone(), &exact, &triples, seed);
    let perturbed = FnExponent::new(|r: &GalileanElement, s: &GalileanElement, p: &Event| {
        finite_exponent(&GalileanMass { mass: 1.0 }, r, s, p) + 0.1 * r.b * s.v[0] * p.t
    });
    let (pgap, size) = associativity(perturbed.clone(), &perturbed, &triples, seed);

    let h = HGroup::new(exact, GalileanElement::identity());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inv: f64 = 0.0;
    for s in &triples {
        let e = h.element(random_theta(&mut rng), s.r.clone());
        let ie = h.inverse(&e);
        for prod in [h.multiply(&e, &ie), h.multiply(&ie, &e)] {
            let r = &prod.r;
            let group_defect = (r.rot - Mat3::identity()).abs().max() + r.v.norm() + r.a.norm() + r.b.abs();
            inv = inv.max((prod.theta)(&s.p).abs()).max(group_defect);
        }
    }
    SuiteOutput {
        checks: vec![
            Check::bound("associativity_matches_defect", gap, IDENTITY_TOL),
            Check::bound("perturbed_associativity_matches_defect", pgap, IDENTITY_TOL),
            Check::holds("perturbed_defect_visible", size > 1e-3, json!(size)),
            Check::bound("inverse", inv, IDENTITY_TOL),
        ],
        details: json!({ "samples": samples }),
    }
}
