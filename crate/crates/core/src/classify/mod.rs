//! Exact classification of polynomial two-cocycles modulo coboundaries.
//!
//! Unknowns are the coefficients of `Ξ_ij(t)` for `i < j` up to a degree
//! bound `D`, laid out entry by entry in lexicographic pair order and then by
//! ascending power of `t`. That single ordering fixes every pivot choice, and
//! canonical representatives are the reduced echelon form of the cocycle
//! space taken modulo the coboundary space.
//!
//! ```
//! use explab::classify::{classify, DegreeMode};
//! use explab::lie::galilean;
//!
//! let c = classify(galilean(), DegreeMode::default()).unwrap();
//! assert_eq!(c.quotient_dim, 1);
//! let rep = &c.representatives[0];
//! assert_eq!(rep.get_by_label("b2", "d2").unwrap().to_string(), "1");
//! ```

pub mod linalg;

use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cochain::{coboundary, is_cocycle, pair_index, pairs, CochainEntry, OneCochain, TwoCochain};
use crate::lie::{galilean, milne, milne_index, JacobiViolation, LieAlgebra};
use crate::ratpoly::{format_rational, Rational, RationalPoly};
use linalg::{rref, sparse_from_entries, Echelon, Rref, SparseVec};

pub const DEFAULT_DEGREE_CAP: usize = 16;

/// Degree bound policy for [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeMode {
    /// Escalate from `D = 1` until the quotient dimension agrees at two
    /// consecutive degrees; give up past `cap`.
    Auto { cap: usize },
    Fixed(usize),
}

impl Default for DegreeMode {
    fn default() -> Self {
        DegreeMode::Auto {
            cap: DEFAULT_DEGREE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("quotient dimension did not stabilize up to degree {cap} (history: {})", fmt_history(.history))]
    DegreeCap { cap: usize, history: Vec<DegreeStep> },
    #[error("algebra violates the Jacobi identity on ({}, {}, {})", .0.labels[0], .0.labels[1], .0.labels[2])]
    InvalidAlgebra(Box<JacobiViolation>),
    #[error("the {0} cochain is not a cocycle")]
    NotACocycle(&'static str),
    #[error("cochains live on different algebras")]
    AlgebraMismatch,
    #[error("classification is not over milne({0})")]
    NotMilne(usize),
}

fn fmt_history(h: &[DegreeStep]) -> String {
    h.iter()
        .map(|s| format!("D={}: {}", s.degree, s.quotient_dim))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Dimensions found at one degree bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeStep {
    pub degree: usize,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    pub quotient_dim: usize,
}

/// Coordinates of polynomial cochains with entries of degree ≤ `d`.
#[derive(Debug, Clone, Copy)]
struct Layout {
    n: usize,
    d: usize,
}

impl Layout {
    fn ncols(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2 * (self.d + 1)
    }

    fn col(&self, pair: usize, k: usize) -> usize {
        pair * (self.d + 1) + k
    }

    /// Column block and sign of `Ξ(a_i, a_j)`; `None` on the diagonal.
    fn pair_sign(&self, i: usize, j: usize) -> Option<(usize, Rational)> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Some((pair_index(self.n, i, j), Rational::one())),
            std::cmp::Ordering::Greater => Some((pair_index(self.n, j, i), -Rational::one())),
            std::cmp::Ordering::Equal => None,
        }
    }

    fn encode(&self, xi: &TwoCochain) -> Option<SparseVec> {
        if xi.max_degree() > self.d as isize {
            return None;
        }
        let mut v = Vec::new();
        for (i, j, p) in xi.nonzero_entries() {
            let pair = pair_index(self.n, i, j);
            for (k, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    v.push((self.col(pair, k), c.clone()));
                }
            }
        }
        Some(v)
    }

    fn decode(&self, alg: &Arc<LieAlgebra>, v: &SparseVec) -> TwoCochain {
        let mut coeffs: Vec<Vec<Rational>> = vec![Vec::new(); self.n * self.n.saturating_sub(1) / 2];
        for (c, x) in v {
            let (pair, k) = (c / (self.d + 1), c % (self.d + 1));
            let e = &mut coeffs[pair];
            if e.len() <= k {
                e.resize(k + 1, Rational::zero());
            }
            e[k] = x.clone();
        }
        TwoCochain::from_entries(
            alg.clone(),
            pairs(self.n)
                .zip(coeffs)
                .filter(|(_, c)| !c.is_empty())
                .map(|((i, j), c)| (i, j, RationalPoly::from_coeffs(c))),
        )
        .expect("pairs are in range")
    }
}

/// Rows of the cocycle condition on the triple `(i, j, k)`, one per power of `t`.
///
/// Assembled straight from the structure constants; the flow of the time
/// generator enters as `+d/dt` on the opposite entry.
fn triple_rows(alg: &LieAlgebra, lay: Layout, i: usize, j: usize, k: usize) -> Vec<SparseVec> {
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); lay.d + 1];
    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
        for (m, coeff) in alg.bracket_basis(a, b) {
            if let Some((pair, s)) = lay.pair_sign(*m, c) {
                let w = s * coeff;
                for (e, row) in rows.iter_mut().enumerate() {
                    row.push((lay.col(pair, e), w.clone()));
                }
            }
        }
        if alg.time_index() == Some(a) {
            if let Some((pair, s)) = lay.pair_sign(b, c) {
                for (e, row) in rows.iter_mut().enumerate().take(lay.d) {
                    row.push((lay.col(pair, e + 1), &s * Rational::from_integer((e + 1).into())));
                }
            }
        }
    }
    rows.into_iter()
        .map(sparse_from_entries)
        .filter(|r| !r.is_empty())
        .collect()
}

fn cocycle_constraints(alg: &LieAlgebra, lay: Layout) -> Vec<SparseVec> {
    let n = alg.dim();
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (i, j, k))))
        .collect();
    triples
        .par_iter()
        .flat_map_iter(|&(i, j, k)| triple_rows(alg, lay, i, j, k))
        .collect()
}

/// Spanning set of the admissible one-cochains of component degree ≤ `d`:
/// `t^k` on each generator, constants only on the time generator.
fn one_cochain_generators(alg: &Arc<LieAlgebra>, d: usize) -> Vec<(usize, usize)> {
    (0..alg.dim())
        .flat_map(|g| {
            let top = if alg.time_index() == Some(g) { 0 } else { d };
            (0..=top).map(move |k| (g, k))
        })
        .collect()
}

fn monomial_one_cochain(alg: &Arc<LieAlgebra>, g: usize, k: usize) -> OneCochain {
    let mut comps = vec![RationalPoly::zero(); alg.dim()];
    comps[g] = RationalPoly::monomial(Rational::one(), k);
    OneCochain::new(alg.clone(), comps).expect("generator respects the constraint")
}

/// All polynomial cocycles with entries of degree ≤ `degree_bound`.
#[derive(Debug, Clone)]
pub struct CocycleSpace {
    pub alg: Arc<LieAlgebra>,
    pub degree_bound: usize,
    /// Reduced echelon basis under the global coefficient ordering.
    pub basis: Vec<TwoCochain>,
    rref: Rref,
}

impl CocycleSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Exact membership; cochains above the degree bound are never members.
    pub fn contains(&self, xi: &TwoCochain) -> bool {
        let lay = Layout {
            n: self.alg.dim(),
            d: self.degree_bound,
        };
        lay.encode(xi).is_some_and(|v| self.rref.contains(&v))
    }
}

pub fn solve_cocycles(alg: impl Into<Arc<LieAlgebra>>, degree_bound: usize) -> CocycleSpace {
    let alg = alg.into();
    let lay = Layout {
        n: alg.dim(),
        d: degree_bound,
    };
    let constraints = rref(lay.ncols(), cocycle_constraints(&alg, lay));
    let space = rref(lay.ncols(), constraints.nullspace());
    CocycleSpace {
        basis: space.rows().iter().map(|v| lay.decode(&alg, v)).collect(),
        alg,
        degree_bound,
        rref: space,
    }
}

fn coboundary_rref(alg: &Arc<LieAlgebra>, lay: Layout) -> Rref {
    let images: Vec<SparseVec> = one_cochain_generators(alg, lay.d)
        .into_par_iter()
        .map(|(g, k)| {
            lay.encode(&coboundary(&monomial_one_cochain(alg, g, k)))
                .expect("coboundaries do not raise degree")
        })
        .collect();
    rref(lay.ncols(), images)
}

/// Echelon basis of the coboundaries of admissible one-cochains of degree ≤ `degree_bound`.
pub fn solve_coboundaries(alg: impl Into<Arc<LieAlgebra>>, degree_bound: usize) -> Vec<TwoCochain> {
    let alg = alg.into();
    let lay = Layout {
        n: alg.dim(),
        d: degree_bound,
    };
    coboundary_rref(&alg, lay)
        .rows()
        .iter()
        .map(|v| lay.decode(&alg, v))
        .collect()
}

/// Named linear coordinates on the quotient, evaluated on each representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coordinates {
    pub names: Vec<String>,
    /// `values[r][c]`: coordinate `c` of representative `r`.
    pub values: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub alg: Arc<LieAlgebra>,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    pub quotient_dim: usize,
    /// Canonical representative of each quotient basis class.
    pub representatives: Vec<TwoCochain>,
    pub degree_used: usize,
    pub coordinates: Option<Coordinates>,
    /// Every degree bound that was tried, in order.
    pub history: Vec<DegreeStep>,
}

struct DegreeResult {
    step: DegreeStep,
    representatives: Vec<TwoCochain>,
}

fn classify_at(alg: &Arc<LieAlgebra>, d: usize) -> DegreeResult {
    let lay = Layout { n: alg.dim(), d };
    let cocycles = solve_cocycles(alg.clone(), d);
    let cob = coboundary_rref(alg, lay);
    debug_assert!(cob.rows().iter().all(|r| cocycles.rref.contains(r)));
    let reduced = cocycles.rref.rows().iter().map(|r| cob.reduce(r));
    let quotient = rref(lay.ncols(), reduced);
    DegreeResult {
        step: DegreeStep {
            degree: d,
            cocycle_dim: cocycles.dim(),
            coboundary_dim: cob.rank(),
            quotient_dim: quotient.rank(),
        },
        representatives: quotient.rows().iter().map(|v| lay.decode(alg, v)).collect(),
    }
}

/// Classifies polynomial cocycles of `alg` up to equivalence.
///
/// Algebras without a time generator have no degree-raising terms, so their
/// classification is done at `D = 0` in auto mode: any polynomial cocycle
/// is then a polynomial combination of constant ones.
pub fn classify(
    alg: impl Into<Arc<LieAlgebra>>,
    mode: DegreeMode,
) -> Result<Classification, ClassifyError> {
    let alg = alg.into();
    alg.validate().map_err(ClassifyError::InvalidAlgebra)?;
    let mut history = Vec::new();
    let result = match mode {
        DegreeMode::Fixed(d) => {
            let r = classify_at(&alg, d);
            history.push(r.step);
            r
        }
        DegreeMode::Auto { .. } if alg.time_index().is_none() => {
            let r = classify_at(&alg, 0);
            history.push(r.step);
            r
        }
        DegreeMode::Auto { cap } => {
            let mut d = 1;
            let mut cur = classify_at(&alg, d);
            history.push(cur.step);
            loop {
                if d + 1 > cap {
                    return Err(ClassifyError::DegreeCap { cap, history });
                }
                let next = classify_at(&alg, d + 1);
                history.push(next.step);
                if next.step.quotient_dim == cur.step.quotient_dim {
                    break cur;
                }
                cur = next;
                d += 1;
            }
        }
    };
    let mut c = Classification {
        alg,
        cocycle_dim: result.step.cocycle_dim,
        coboundary_dim: result.step.coboundary_dim,
        quotient_dim: result.step.quotient_dim,
        representatives: result.representatives,
        degree_used: result.step.degree,
        coordinates: None,
        history,
    };
    c.coordinates = chart(&c.alg, &c.representatives);
    Ok(c)
}

/// Order `m` if `alg` is exactly `milne(m)`.
pub fn milne_order(alg: &LieAlgebra) -> Option<usize> {
    let n = alg.dim();
    if n < 10 || !(n - 7).is_multiple_of(3) {
        return None;
    }
    let m = (n - 7) / 3;
    (milne(m).ok()? == *alg).then_some(m)
}

/// `P^(l,n)`: the scalar carried by `Ξ(d_1^(l), d_1^(n))`.
pub fn milne_poly(xi: &TwoCochain, l: usize, n: usize) -> RationalPoly {
    xi.get(milne_index(1, l), milne_index(1, n))
}

/// `γ_(l,n) = P^(l,n)(0)` for `0 ≤ l < n ≤ m`, with their names.
pub fn milne_gammas(xi: &TwoCochain, m: usize) -> Vec<(String, Rational)> {
    let mut out = Vec::new();
    for l in 0..=m {
        for n in l + 1..=m {
            out.push((format!("gamma_({l},{n})"), milne_poly(xi, l, n).coeff(0)));
        }
    }
    out
}

fn chart(alg: &Arc<LieAlgebra>, reps: &[TwoCochain]) -> Option<Coordinates> {
    if **alg == galilean() {
        let b1 = alg.index_of("b1")?;
        let d1 = alg.index_of("d1")?;
        return Some(Coordinates {
            names: vec!["mass".into()],
            values: reps.iter().map(|r| vec![r.get(b1, d1).coeff(0)]).collect(),
        });
    }
    let m = milne_order(alg)?;
    let names = milne_gammas(&TwoCochain::zero(alg.clone()), m)
        .into_iter()
        .map(|(n, _)| n)
        .collect();
    Some(Coordinates {
        names,
        values: reps
            .iter()
            .map(|r| milne_gammas(r, m).into_iter().map(|(_, v)| v).collect())
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    /// `x2 − x1 = coboundary(witness)`.
    Equivalent { witness: OneCochain },
    Inequivalent,
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent { .. })
    }
}

/// Coefficients `γ` with `Σ γ_g images[g] = target`, if any.
fn solve_combination(ncols: usize, images: &[SparseVec], target: &SparseVec) -> Option<Vec<Rational>> {
    let width = ncols + images.len();
    let mut e = Echelon::new(width);
    for (g, img) in images.iter().enumerate() {
        let mut row = img.clone();
        row.push((ncols + g, Rational::one()));
        e.insert(row);
    }
    let r = e.into_rref();
    let mut v = target.clone();
    for row in r.rows() {
        let p = row[0].0;
        if p >= ncols {
            break;
        }
        if let Ok(pos) = v.binary_search_by_key(&p, |(c, _)| *c) {
            let coeff = v[pos].1.clone();
            v = linalg::sub_scaled(&v, &coeff, row);
        }
    }
    if v.first().is_some_and(|(c, _)| *c < ncols) {
        return None;
    }
    let mut gamma = vec![Rational::zero(); images.len()];
    for (c, x) in v {
        gamma[c - ncols] = -x;
    }
    Some(gamma)
}

/// Decides whether two cocycles differ by a coboundary.
///
/// Witnesses are searched among one-cochains of degree up to
/// `deg(x2 − x1) + dim + 1`, which covers the nilpotent chain of the time
/// generator's action.
pub fn are_equivalent(x1: &TwoCochain, x2: &TwoCochain) -> Result<Equivalence, ClassifyError> {
    let diff = x2.sub(x1).map_err(|_| ClassifyError::AlgebraMismatch)?;
    if !is_cocycle(x1) {
        return Err(ClassifyError::NotACocycle("first"));
    }
    if !is_cocycle(x2) {
        return Err(ClassifyError::NotACocycle("second"));
    }
    let alg = x1.algebra().clone();
    let d0 = diff.max_degree().max(0) as usize;
    for d in d0..=d0 + alg.dim() + 1 {
        let lay = Layout { n: alg.dim(), d };
        let gens = one_cochain_generators(&alg, d);
        let images: Vec<SparseVec> = gens
            .iter()
            .map(|&(g, k)| lay.encode(&coboundary(&monomial_one_cochain(&alg, g, k))).unwrap())
            .collect();
        let target = lay.encode(&diff).expect("degree bound covers the difference");
        if let Some(gamma) = solve_combination(lay.ncols(), &images, &target) {
            let mut comps = vec![RationalPoly::zero(); alg.dim()];
            for ((g, k), c) in gens.into_iter().zip(gamma) {
                comps[g] = &comps[g] + &RationalPoly::monomial(c, k);
            }
            let witness = OneCochain::new(alg, comps).expect("witness respects the constraint");
            return Ok(Equivalence::Equivalent { witness });
        }
        if alg.time_index().is_none() {
            break;
        }
    }
    Ok(Equivalence::Inequivalent)
}

/// Outcome of one structural check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MilneReport {
    pub m: usize,
    pub checks: Vec<CheckOutcome>,
}

impl MilneReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Isotropic part `(1/3) Σ_h Ξ(d_h^(l), d_h^(n))`.
fn trace_poly(xi: &TwoCochain, l: usize, n: usize) -> RationalPoly {
    let s = (1..=3).fold(RationalPoly::zero(), |acc, h| {
        &acc + &xi.get(milne_index(h, l), milne_index(h, n))
    });
    s.scale(&Rational::new(1.into(), 3.into()))
}

/// Re-expresses each representative in the `P^(l,n)` coordinates and checks
/// the acceleration structure: isotropy, `P^(0,0) = 0`, antisymmetry, the
/// recurrence `dP^(l,n)/dt = P^(l−1,n) + P^(l,n−1)`, the degree bound
/// `l + n − 1`, and vanishing rotation and time entries.
pub fn verify_milne_structure(c: &Classification, m: usize) -> Result<MilneReport, ClassifyError> {
    if milne_order(&c.alg) != Some(m) {
        return Err(ClassifyError::NotMilne(m));
    }
    let mut iso = Vec::new();
    let mut p00 = Vec::new();
    let mut anti = Vec::new();
    let mut rec = Vec::new();
    let mut deg = Vec::new();
    let mut rot = Vec::new();
    let tau = c.alg.time_index().expect("milne has a time generator");
    for (r, xi) in c.representatives.iter().enumerate() {
        let p = |l: usize, n: usize| trace_poly(xi, l, n);
        for l in 0..=m {
            for n in 0..=m {
                let scalar = p(l, n);
                for i in 1..=3 {
                    for k in 1..=3 {
                        let e = xi.get(milne_index(i, l), milne_index(k, n));
                        let want = if i == k { scalar.clone() } else { RationalPoly::zero() };
                        if e != want {
                            iso.push(format!("rep {r}: (l,n)=({l},{n}) entry ({i},{k}) = {e}"));
                        }
                    }
                }
                if l < n && !(&scalar + &p(n, l)).is_zero() {
                    anti.push(format!("rep {r}: (l,n)=({l},{n})"));
                }
                let mut rhs = RationalPoly::zero();
                if l > 0 {
                    rhs = &rhs + &p(l - 1, n);
                }
                if n > 0 {
                    rhs = &rhs + &p(l, n - 1);
                }
                if scalar.differentiate() != rhs {
                    rec.push(format!("rep {r}: (l,n)=({l},{n}) dP/dt = {} but P^(l-1,n) + P^(l,n-1) = {rhs}", scalar.differentiate()));
                }
                if scalar.degree() > l as isize + n as isize - 1 {
                    deg.push(format!("rep {r}: (l,n)=({l},{n}) degree {}", scalar.degree()));
                }
            }
        }
        if !p(0, 0).is_zero() {
            p00.push(format!("rep {r}: P^(0,0) = {}", p(0, 0)));
        }
        for (i, j, e) in xi.nonzero_entries() {
            if i < 3 || j < 3 || i == tau || j == tau {
                rot.push(format!("rep {r}: ({}, {}) = {e}", c.alg.label(i), c.alg.label(j)));
            }
        }
    }
    let mk = |name, failures| CheckOutcome { name, failures };
    Ok(MilneReport {
        m,
        checks: vec![
            mk("isotropy", iso),
            mk("p00_zero", p00),
            mk("antisymmetry", anti),
            mk("recurrence", rec),
            mk("degree_bound", deg),
            mk("rotation_time_entries_vanish", rot),
        ],
    })
}

/// Restricts a Milne classification to the classes with
/// `γ_(l,q) = 0` for all `l, q ≥ 1`.
pub fn realizable_subspace(c: &Classification, m: usize) -> Result<Classification, ClassifyError> {
    if milne_order(&c.alg) != Some(m) {
        return Err(ClassifyError::NotMilne(m));
    }
    let k = c.representatives.len();
    let mut constraints = Vec::new();
    for l in 1..=m {
        for q in l + 1..=m {
            constraints.push(sparse_from_entries(
                c.representatives
                    .iter()
                    .enumerate()
                    .map(|(r, xi)| (r, milne_poly(xi, l, q).coeff(0))),
            ));
        }
    }
    let combos = rref(k, constraints).nullspace();
    let d = c
        .representatives
        .iter()
        .map(|x| x.max_degree().max(0) as usize)
        .max()
        .unwrap_or(0);
    let lay = Layout { n: c.alg.dim(), d };
    let vectors: Vec<SparseVec> = combos
        .iter()
        .map(|combo| {
            let xi = combo.iter().fold(TwoCochain::zero(c.alg.clone()), |acc, (r, x)| {
                acc.add(&c.representatives[*r].scale(x)).expect("same algebra")
            });
            lay.encode(&xi).expect("within degree bound")
        })
        .collect();
    let reps: Vec<TwoCochain> = rref(lay.ncols(), vectors)
        .rows()
        .iter()
        .map(|v| lay.decode(&c.alg, v))
        .collect();
    Ok(Classification {
        alg: c.alg.clone(),
        cocycle_dim: c.coboundary_dim + reps.len(),
        coboundary_dim: c.coboundary_dim,
        quotient_dim: reps.len(),
        coordinates: chart(&c.alg, &reps),
        representatives: reps,
        degree_used: c.degree_used,
        history: c.history.clone(),
    })
}

/// Serialized form of a [`Classification`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub labels: Vec<String>,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    pub quotient_dim: usize,
    pub degree_used: usize,
    pub canonical_form: String,
    pub representatives: Vec<Vec<CochainEntry>>,
    pub coordinates: Option<CoordinatesRecord>,
    pub history: Vec<DegreeStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinatesRecord {
    pub names: Vec<String>,
    pub values: Vec<Vec<String>>,
}

pub const CANONICAL_FORM: &str =
    "reduced echelon modulo coboundaries; coefficients ordered by pair (i<j) lexicographically, then ascending power of t";

impl Classification {
    pub fn to_record(&self) -> ClassificationRecord {
        ClassificationRecord {
            labels: self.alg.labels().to_vec(),
            cocycle_dim: self.cocycle_dim,
            coboundary_dim: self.coboundary_dim,
            quotient_dim: self.quotient_dim,
            degree_used: self.degree_used,
            canonical_form: CANONICAL_FORM.into(),
            representatives: self.representatives.iter().map(TwoCochain::to_entries).collect(),
            coordinates: self.coordinates.as_ref().map(|c| CoordinatesRecord {
                names: c.names.clone(),
                values: c
                    .values
                    .iter()
                    .map(|row| row.iter().map(format_rational).collect())
                    .collect(),
            }),
            history: self.history.clone(),
        }
    }
}

impl Serialize for Classification {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_record().serialize(serializer)
    }
}
