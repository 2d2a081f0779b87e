//! A Hilbert bundle over a finite time grid.
//!
//! Every node carries the fiber `ℂᵈ`. Sections assign a fiber vector to each
//! node, bundle maps move sections along a permutation of the nodes while
//! applying a unitary per node, and [`ray_equivalent`] decides whether two
//! sections differ only by a node-dependent phase `e^{iξ(t)}`.
//!
//! ```
//! use explab::bundle::*;
//! use num_complex::Complex64;
//!
//! let grid = TimeGrid::uniform(0.0, 1.0, 5).unwrap();
//! let s = Section::from_fn(&grid, 2, |t, i| Complex64::new(1.0 + t, i as f64));
//! let shifted = s.map_nodes(|k, t, z| z * Complex64::from_polar(1.0, t.sin() + k as f64));
//! assert!(ray_equivalent(&s, &shifted, DEFAULT_RAY_TOL).unwrap().is_equivalent());
//! ```

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const DEFAULT_RAY_TOL: f64 = 1e-9;
pub const UNITARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BundleError {
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("sections live on different grids")]
    GridMismatch,
    #[error("fiber dimension {got} does not match {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("node index {0} out of range")]
    NodeOutOfRange(usize),
    #[error("fiber at node {0} is zero; its phase is undefined")]
    DegenerateFiber(usize),
    #[error("matrix at node {node} is not unitary (defect {defect:e})")]
    NotUnitary { node: usize, defect: f64 },
    #[error("base map is not a permutation of the nodes")]
    NotPermutation,
}

/// Strictly increasing nodes with positive quadrature weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl TimeGrid {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self, BundleError> {
        if nodes.len() < 2 {
            return Err(BundleError::InvalidGrid("need at least two nodes".into()));
        }
        if weights.len() != nodes.len() {
            return Err(BundleError::InvalidGrid("one weight per node".into()));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(BundleError::InvalidGrid("nodes must increase strictly".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(BundleError::InvalidGrid("weights must be positive".into()));
        }
        Ok(Self { nodes, weights })
    }

    /// `n` equally spaced nodes on `[t0, t1]` with trapezoid weights.
    pub fn uniform(t0: f64, t1: f64, n: usize) -> Result<Self, BundleError> {
        if n < 2 || !(t1 > t0) {
            return Err(BundleError::InvalidGrid(format!("uniform({t0}, {t1}, {n})")));
        }
        let h = (t1 - t0) / (n - 1) as f64;
        let nodes = (0..n).map(|k| t0 + h * k as f64).collect();
        let mut weights = vec![h; n];
        weights[0] = h / 2.0;
        weights[n - 1] = h / 2.0;
        Self::new(nodes, weights)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// One fiber vector per grid node.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    grid: TimeGrid,
    fibers: Vec<DVector<Complex64>>,
}

impl Section {
    pub fn new(grid: TimeGrid, fibers: Vec<DVector<Complex64>>) -> Result<Self, BundleError> {
        if fibers.len() != grid.len() {
            return Err(BundleError::DimensionMismatch {
                expected: grid.len(),
                got: fibers.len(),
            });
        }
        let d = fibers[0].len();
        if d == 0 {
            return Err(BundleError::DimensionMismatch { expected: 1, got: 0 });
        }
        if let Some(f) = fibers.iter().find(|f| f.len() != d) {
            return Err(BundleError::DimensionMismatch {
                expected: d,
                got: f.len(),
            });
        }
        Ok(Self { grid, fibers })
    }

    /// Fiber component `i` at node time `t` is `f(t, i)`.
    pub fn from_fn(grid: &TimeGrid, d: usize, f: impl Fn(f64, usize) -> Complex64) -> Self {
        let fibers = grid
            .nodes
            .iter()
            .map(|&t| DVector::from_fn(d, |i, _| f(t, i)))
            .collect();
        Self {
            grid: grid.clone(),
            fibers,
        }
    }

    pub fn zero(grid: &TimeGrid, d: usize) -> Self {
        Self::from_fn(grid, d, |_, _| Complex64::new(0.0, 0.0))
    }

    /// Random section with components uniform in the unit square.
    pub fn random(grid: &TimeGrid, d: usize, rng: &mut ChaCha8Rng) -> Self {
        let fibers = (0..grid.len())
            .map(|_| DVector::from_fn(d, |_, _| random_complex(rng)))
            .collect();
        Self {
            grid: grid.clone(),
            fibers,
        }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.fibers[0].len()
    }

    pub fn fiber(&self, k: usize) -> &DVector<Complex64> {
        &self.fibers[k]
    }

    pub fn fibers(&self) -> &[DVector<Complex64>] {
        &self.fibers
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map_nodes(|_, _, z| z * c)
    }

    /// Applies `f(node, t, component)` to every component.
    pub fn map_nodes(&self, f: impl Fn(usize, f64, Complex64) -> Complex64) -> Self {
        let fibers = self
            .fibers
            .iter()
            .zip(&self.grid.nodes)
            .enumerate()
            .map(|(k, (v, &t))| v.map(|z| f(k, t, z)))
            .collect();
        Self {
            grid: self.grid.clone(),
            fibers,
        }
    }

    /// Multiplies the fiber at node `k` by `e^{i phases[k]}`.
    pub fn with_phases(&self, phases: &[f64]) -> Self {
        self.map_nodes(|k, _, z| z * Complex64::from_polar(1.0, phases[k]))
    }

    pub fn to_record(&self) -> SectionRecord {
        SectionRecord {
            grid: self.grid.clone(),
            fibers: self
                .fibers
                .iter()
                .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    pub fn from_record(rec: &SectionRecord) -> Result<Self, BundleError> {
        let grid = TimeGrid::new(rec.grid.nodes.clone(), rec.grid.weights.clone())?;
        let fibers = rec
            .fibers
            .iter()
            .map(|f| DVector::from_iterator(f.len(), f.iter().map(|[re, im]| Complex64::new(*re, *im))))
            .collect();
        Self::new(grid, fibers)
    }
}

/// JSON form: grid plus per-node arrays of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionRecord {
    pub grid: TimeGrid,
    pub fibers: Vec<Vec<[f64; 2]>>,
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
}

fn compatible(s1: &Section, s2: &Section) -> Result<(), BundleError> {
    if s1.grid != s2.grid {
        return Err(BundleError::GridMismatch);
    }
    if s1.dim() != s2.dim() {
        return Err(BundleError::DimensionMismatch {
            expected: s1.dim(),
            got: s2.dim(),
        });
    }
    Ok(())
}

/// `(s1_k, s2_k)`, conjugate-linear in the first argument.
pub fn fiber_inner(s1: &Section, s2: &Section, k: usize) -> Result<Complex64, BundleError> {
    compatible(s1, s2)?;
    if k >= s1.grid.len() {
        return Err(BundleError::NodeOutOfRange(k));
    }
    Ok(s1.fibers[k].dotc(&s2.fibers[k]))
}

/// `sqrt(Σ_k w_k (s_k, s_k))`.
pub fn direct_integral_norm(s: &Section) -> f64 {
    s.fibers
        .iter()
        .zip(&s.grid.weights)
        .map(|(v, w)| w * v.norm_squared())
        .sum::<f64>()
        .sqrt()
}

/// A bundle isometry: node `k` is sent to `base_map[k]` and its fiber is
/// multiplied by `unitaries[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleMap {
    base_map: Vec<usize>,
    unitaries: Vec<DMatrix<Complex64>>,
}

impl BundleMap {
    pub fn new(base_map: Vec<usize>, unitaries: Vec<DMatrix<Complex64>>) -> Result<Self, BundleError> {
        let n = base_map.len();
        let mut seen = vec![false; n];
        for &k in &base_map {
            if k >= n || seen[k] {
                return Err(BundleError::NotPermutation);
            }
            seen[k] = true;
        }
        if unitaries.len() != n {
            return Err(BundleError::DimensionMismatch {
                expected: n,
                got: unitaries.len(),
            });
        }
        for (node, u) in unitaries.iter().enumerate() {
            if !u.is_square() {
                return Err(BundleError::NotUnitary {
                    node,
                    defect: f64::INFINITY,
                });
            }
            let defect = (u.adjoint() * u - DMatrix::identity(u.nrows(), u.ncols())).camax();
            if defect > UNITARY_TOL {
                return Err(BundleError::NotUnitary { node, defect });
            }
        }
        Ok(Self { base_map, unitaries })
    }

    pub fn identity(n: usize, d: usize) -> Self {
        Self {
            base_map: (0..n).collect(),
            unitaries: vec![DMatrix::identity(d, d); n],
        }
    }

    /// `U_k = e^{iξ_k} I` on the identity base map.
    pub fn phases(phases: &[f64], d: usize) -> Self {
        Self {
            base_map: (0..phases.len()).collect(),
            unitaries: phases
                .iter()
                .map(|&p| DMatrix::identity(d, d) * Complex64::from_polar(1.0, p))
                .collect(),
        }
    }

    /// Random per-node unitaries (Q factors of random complex matrices).
    pub fn random(base_map: Vec<usize>, d: usize, rng: &mut ChaCha8Rng) -> Result<Self, BundleError> {
        let unitaries = (0..base_map.len())
            .map(|_| DMatrix::from_fn(d, d, |_, _| random_complex(rng)).qr().q())
            .collect();
        Self::new(base_map, unitaries)
    }

    pub fn base_map(&self) -> &[usize] {
        &self.base_map
    }

    pub fn unitaries(&self) -> &[DMatrix<Complex64>] {
        &self.unitaries
    }
}

/// `(Ts)_{T^π(k)} = U_k s_k`.
pub fn apply_bundle_map(t: &BundleMap, s: &Section) -> Result<Section, BundleError> {
    if t.base_map.len() != s.grid.len() {
        return Err(BundleError::DimensionMismatch {
            expected: s.grid.len(),
            got: t.base_map.len(),
        });
    }
    if let Some(u) = t.unitaries.iter().find(|u| u.ncols() != s.dim()) {
        return Err(BundleError::DimensionMismatch {
            expected: s.dim(),
            got: u.ncols(),
        });
    }
    let mut fibers = vec![DVector::zeros(s.dim()); s.grid.len()];
    for (k, (&target, u)) in t.base_map.iter().zip(&t.unitaries).enumerate() {
        fibers[target] = u * &s.fibers[k];
    }
    Ok(Section {
        grid: s.grid.clone(),
        fibers,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum RayEquivalence {
    /// `s2_k = e^{i phases[k]} s1_k` at every node.
    Equivalent { phases: Vec<f64> },
    NotEquivalent { node: usize, reason: String },
}

impl RayEquivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, RayEquivalence::Equivalent { .. })
    }

    pub fn phases(&self) -> Option<&[f64]> {
        match self {
            RayEquivalence::Equivalent { phases } => Some(phases),
            RayEquivalence::NotEquivalent { .. } => None,
        }
    }
}

/// Recovers per-node phases with `s2_k = e^{iξ_k} s1_k`, up to `tol`
/// relative to `|s1_k|`.
///
/// The phase is read off the largest-modulus component of `s1_k`. The first
/// phase lies in `[0, 2π)` and later ones are unwrapped to the branch nearest
/// their predecessor.
pub fn ray_equivalent(s1: &Section, s2: &Section, tol: f64) -> Result<RayEquivalence, BundleError> {
    compatible(s1, s2)?;
    let mut phases: Vec<f64> = Vec::with_capacity(s1.grid.len());
    for (k, (a, b)) in s1.fibers.iter().zip(&s2.fibers).enumerate() {
        let (j, reference) = a
            .iter()
            .enumerate()
            .map(|(j, z)| (j, z.norm()))
            .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if reference == 0.0 {
            return Err(BundleError::DegenerateFiber(k));
        }
        let ratio = b[j] / a[j];
        let norm = a.norm();
        if (ratio.norm() - 1.0).abs() > tol * norm / reference {
            return Ok(RayEquivalence::NotEquivalent {
                node: k,
                reason: format!("modulus ratio {} is not 1", ratio.norm()),
            });
        }
        let phase = ratio.arg();
        let residual = (b - a * Complex64::from_polar(1.0, phase)).norm();
        if residual > tol * norm {
            return Ok(RayEquivalence::NotEquivalent {
                node: k,
                reason: format!("fibers not proportional (residual {residual:e})"),
            });
        }
        let phase = match phases.last() {
            None => phase.rem_euclid(TAU),
            Some(prev) => phase + TAU * ((prev - phase) / TAU).round(),
        };
        phases.push(phase);
    }
    Ok(RayEquivalence::Equivalent { phases })
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}
