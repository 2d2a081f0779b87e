use explab::classify::{classify, DegreeMode};
use explab::groupexp::*;
use explab::lie::{galilean, milne_label};
use explab::ratpoly::rational_to_f64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::{GroupSpec, ThetaSpec};
use crate::Failure;

/// Relative agreement required against the classified representative.
pub const EXPECTED_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    pub a: String,
    pub b: String,
    pub value: f64,
    pub error_estimate: f64,
    pub order: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    pub passed: bool,
}

pub struct ExponentOutput {
    pub entries: Vec<Entry>,
    pub checks: Vec<(String, bool, Value)>,
}

fn extract<G, X>(
    group: &G,
    xi: &X,
    pairs: &[(usize, usize)],
    p: &Event,
    expected: impl Fn(usize, usize) -> Option<f64>,
) -> Result<Vec<Entry>, Failure>
where
    G: SpacetimeGroup,
    X: Exponent<G::Element, Scalar = f64>,
{
    let alg = group.algebra();
    let dim = alg.dim();
    pairs
        .iter()
        .map(|&(i, j)| {
            let (a, b) = (alg.label(i).to_string(), alg.label(j).to_string());
            let ext = infinitesimal_from_finite(
                group,
                xi,
                &basis_coeffs(dim, i),
                &basis_coeffs(dim, j),
                p,
                RichardsonConfig::default(),
            )
            .map_err(|e| Failure::Aborted(format!("({a}, {b}): {e}")))?;
            let expected = expected(i, j);
            let passed = expected.is_none_or(|w| (ext.value - w).abs() <= EXPECTED_TOL * w.abs().max(1.0));
            Ok(Entry {
                a,
                b,
                value: ext.value,
                error_estimate: ext.error_estimate,
                order: ext.order,
                expected,
                passed,
            })
        })
        .collect()
}

/// Resolves `--pair` labels, or every pair `i < j` when `pair` is `None`.
fn resolve_pairs(labels: &[String], pair: Option<&(String, String)>) -> Result<Vec<(usize, usize)>, Failure> {
    let find = |l: &str| {
        labels
            .iter()
            .position(|x| x == l)
            .ok_or_else(|| Failure::Input(format!("unknown generator {l:?}; known: {}", labels.join(", "))))
    };
    match pair {
        Some((a, b)) => {
            let (i, j) = (find(a)?, find(b)?);
            if i == j {
                return Err(Failure::Input(format!("pair ({a}, {b}) repeats a generator")));
            }
            Ok(vec![(i, j)])
        }
        None => Ok((0..labels.len())
            .flat_map(|i| (i + 1..labels.len()).map(move |j| (i, j)))
            .collect()),
    }
}

pub fn run(
    group: GroupSpec,
    theta: ThetaSpec,
    pair: Option<&(String, String)>,
    at: [f64; 4],
) -> Result<ExponentOutput, Failure> {
    let p = Event::new(Vec3::new(at[0], at[1], at[2]), at[3]);
    match (group, theta) {
        (GroupSpec::Galilean, ThetaSpec::GalileanMass(mass)) => {
            let g = GalileanGroup;
            let pairs = resolve_pairs(g.algebra().labels(), pair)?;
            let c = classify(galilean(), DegreeMode::default()).map_err(|e| Failure::Aborted(e.to_string()))?;
            let rep = c.representatives[0].clone();
            let entries = extract(&g, &PhaseExponent(GalileanMass { mass }), &pairs, &p, |i, j| {
                Some(mass * rational_to_f64(&rep.get(i, j).coeff(0)))
            })?;
            let all = entries.iter().all(|e| e.passed);
            Ok(ExponentOutput {
                entries,
                checks: vec![("matches_classified_representative".into(), all, json!(all))],
            })
        }
        (GroupSpec::Milne(m), ThetaSpec::MilneSchrodinger(mass)) => {
            let g = MilneGroup::new(m).map_err(|e| Failure::Input(e.to_string()))?;
            let xi = PhaseExponent(MilneSchrodinger { mass });
            let labels = g.algebra().labels().to_vec();
            let pairs = resolve_pairs(&labels, pair)?;
            let entries = extract(&g, &xi, &pairs, &p, |_, _| None)?;
            // Realizable classes have γ_(l,q) = Ξ(d_1^(l), d_1^(q))(0) = 0 for l, q ≥ 1.
            let origin = Event::new(p.x, 0.0);
            let mut gamma_pairs = Vec::new();
            for l in 1..=m {
                for q in l + 1..=m {
                    let find = |s: String| labels.iter().position(|x| *x == s).expect("milne labels");
                    gamma_pairs.push((find(milne_label(1, l)), find(milne_label(1, q))));
                }
            }
            let gammas = extract(&g, &xi, &gamma_pairs, &origin, |_, _| None)?;
            let worst = gammas.iter().map(|e| e.value.abs()).fold(0.0, f64::max);
            Ok(ExponentOutput {
                entries,
                checks: vec![("realizable".into(), worst <= EXPECTED_TOL, json!(worst))],
            })
        }
        (g, t) => Err(Failure::Input(format!("theta {t:?} does not belong to group {g:?}"))),
    }
}
