//! Finite-dimensional Lie algebras with rational structure constants.
//!
//! An algebra carries basis labels, the brackets `[a_i, a_j] = Σ_k c_ij^k a_k`
//! and at most one *time generator*: the basis element whose flow translates
//! time. Every other generator leaves time alone, which is what lets the
//! cochain layer replace the general flow derivative by `∂_t`.
//!
//! Built-in algebras keep a fixed basis order so that everything downstream
//! (cochain coordinates, canonical representatives, reports) is
//! deterministic:
//!
//! * [`galilean`]: `a12 a13 a23 | b1 b2 b3 | d1 d2 d3 | tau`
//! * [`milne`]`(m)`: `a12 a13 a23 | d1_0 d2_0 d3_0 | d1_1 .. | d1_m d2_m d3_m | tau`,
//!   where `dk_n` is the `n`-acceleration along axis `k`
//! * [`phase_space`]`(n)`: `p1 .. pn | q1 .. qn`, abelian, no time generator

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::ratpoly::{format_rational, parse_rational, rat, ParseRationalError, Rational};

#[derive(Debug, thiserror::Error)]
pub enum LieError {
    #[error("algebra must have at least one generator")]
    Empty,
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown basis label {0:?}")]
    UnknownLabel(String),
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("bracket of {0:?} with itself must not be specified")]
    SelfBracket(String),
    #[error("bracket [{lhs}, {rhs}] specified more than once")]
    ConflictingBracket { lhs: String, rhs: String },
    #[error("vector has {got} components, algebra dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Jacobi(Box<JacobiViolation>),
    #[error("{what} requires a positive parameter, got {value}")]
    InvalidParameter { what: &'static str, value: usize },
    #[error("malformed algebra spec: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
}

impl From<Box<JacobiViolation>> for LieError {
    fn from(v: Box<JacobiViolation>) -> Self {
        LieError::Jacobi(v)
    }
}

/// First basis quadruple at which the structure-constant Jacobi identity
/// fails, together with the nonzero residual coefficient.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error(
    "Jacobi identity fails on ({}, {}, {}): coefficient of {} is {}",
    labels[0], labels[1], labels[2], labels[3], format_rational(residual)
)]
pub struct JacobiViolation {
    pub indices: [usize; 4],
    pub labels: [String; 4],
    pub residual: Rational,
}

/// Element of an algebra written in its basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraVector(Vec<Rational>);

impl AlgebraVector {
    pub fn zero(dim: usize) -> Self {
        Self(vec![Rational::zero(); dim])
    }

    /// The `i`-th basis vector.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_components(components: Vec<Rational>) -> Self {
        Self(components)
    }

    pub fn from_i64s(components: &[i64]) -> Self {
        Self(components.iter().map(|&c| rat(c, 1)).collect())
    }

    pub fn components(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Indices with nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self(self.0.iter().map(|a| a * c).collect())
    }
}

/// Finite-dimensional Lie algebra over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    labels: Vec<String>,
    // (i, j) -> [a_i, a_j] for i < j, sorted, nonzero coefficients only
    structure: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
    // full antisymmetric expansion, row-major n×n
    table: Vec<Vec<(usize, Rational)>>,
    time_index: Option<usize>,
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieAlgebra")
            .field("labels", &self.labels)
            .field("time_generator", &self.time_index.map(|i| &self.labels[i]))
            .finish_non_exhaustive()
    }
}

/// Incremental construction of a [`LieAlgebra`]; [`build`](Self::build)
/// checks the Jacobi identity.
#[derive(Debug, Clone)]
pub struct LieAlgebraBuilder {
    labels: Vec<String>,
    structure: BTreeMap<(usize, usize), BTreeMap<usize, Rational>>,
    time_index: Option<usize>,
}

impl LieAlgebraBuilder {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self, LieError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(LieError::Empty);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(LieError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self {
            labels,
            structure: BTreeMap::new(),
            time_index: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, label: &str) -> Result<usize, LieError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| LieError::UnknownLabel(label.to_string()))
    }

    fn check_index(&self, i: usize) -> Result<(), LieError> {
        if i >= self.dim() {
            return Err(LieError::IndexOutOfRange {
                index: i,
                dim: self.dim(),
            });
        }
        Ok(())
    }

    /// Adds `coeff · a_out` to `[a_i, a_j]` (and the negative to `[a_j, a_i]`).
    pub fn add_bracket_term(
        &mut self,
        i: usize,
        j: usize,
        out: usize,
        coeff: Rational,
    ) -> Result<&mut Self, LieError> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.check_index(out)?;
        if i == j {
            return Err(LieError::SelfBracket(self.labels[i].clone()));
        }
        let (key, coeff) = if i < j { ((i, j), coeff) } else { ((j, i), -coeff) };
        let entry = self.structure.entry(key).or_default();
        let c = entry.entry(out).or_insert_with(Rational::zero);
        *c += coeff;
        if c.is_zero() {
            entry.remove(&out);
        }
        Ok(self)
    }

    /// Marks `i` as the time-translation generator.
    pub fn time_generator(&mut self, i: usize) -> Result<&mut Self, LieError> {
        self.check_index(i)?;
        self.time_index = Some(i);
        Ok(self)
    }

    /// Finishes construction without checking the Jacobi identity.
    pub fn build_unchecked(&self) -> LieAlgebra {
        let n = self.dim();
        let mut structure = BTreeMap::new();
        let mut table = vec![Vec::new(); n * n];
        for (&(i, j), terms) in &self.structure {
            let terms: Vec<(usize, Rational)> =
                terms.iter().map(|(k, c)| (*k, c.clone())).collect();
            if terms.is_empty() {
                continue;
            }
            table[j * n + i] = terms.iter().map(|(k, c)| (*k, -c)).collect();
            table[i * n + j] = terms.clone();
            structure.insert((i, j), terms);
        }
        LieAlgebra {
            labels: self.labels.clone(),
            structure,
            table,
            time_index: self.time_index,
        }
    }

    pub fn build(&self) -> Result<LieAlgebra, LieError> {
        let alg = self.build_unchecked();
        alg.validate()?;
        Ok(alg)
    }
}

impl LieAlgebra {
    pub fn builder<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
    ) -> Result<LieAlgebraBuilder, LieError> {
        LieAlgebraBuilder::new(labels)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn time_index(&self) -> Option<usize> {
        self.time_index
    }

    /// `[a_i, a_j]` as sparse `(k, c_ij^k)` terms.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.table[i * self.dim() + j]
    }

    /// Stored brackets `[a_i, a_j]`, `i < j`, nonzero only.
    pub fn structure(&self) -> impl Iterator<Item = ((usize, usize), &[(usize, Rational)])> {
        self.structure.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    pub fn basis_vector(&self, i: usize) -> AlgebraVector {
        AlgebraVector::basis(self.dim(), i)
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, x: &AlgebraVector, y: &AlgebraVector) -> Result<AlgebraVector, LieError> {
        for v in [x, y] {
            if v.dim() != self.dim() {
                return Err(LieError::DimensionMismatch {
                    expected: self.dim(),
                    got: v.dim(),
                });
            }
        }
        let mut out = vec![Rational::zero(); self.dim()];
        for i in x.support() {
            for j in y.support() {
                let xy = &x.0[i] * &y.0[j];
                for (k, c) in self.bracket_basis(i, j) {
                    out[*k] += &xy * c;
                }
            }
        }
        Ok(AlgebraVector(out))
    }

    fn bracket_sparse(&self, x: &BTreeMap<usize, Rational>, j: usize) -> BTreeMap<usize, Rational> {
        let mut out = BTreeMap::new();
        for (i, xi) in x {
            for (k, c) in self.bracket_basis(*i, j) {
                *out.entry(*k).or_insert_with(Rational::zero) += xi * c;
            }
        }
        out
    }

    /// Checks `[[a_i,a_j],a_k] + [[a_j,a_k],a_i] + [[a_k,a_i],a_j] = 0` on
    /// every basis triple and reports the first failure.
    pub fn validate(&self) -> Result<(), Box<JacobiViolation>> {
        let n = self.dim();
        let basis_map = |i: usize, j: usize| -> BTreeMap<usize, Rational> {
            self.bracket_basis(i, j).iter().cloned().collect()
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut sum: BTreeMap<usize, Rational> = BTreeMap::new();
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (l, v) in self.bracket_sparse(&basis_map(a, b), c) {
                            *sum.entry(l).or_insert_with(Rational::zero) += v;
                        }
                    }
                    if let Some((l, r)) = sum.into_iter().find(|(_, v)| !v.is_zero()) {
                        return Err(Box::new(JacobiViolation {
                            indices: [i, j, k, l],
                            labels: [i, j, k, l].map(|x| self.labels[x].clone()),
                            residual: r,
                        }));
                    }
                }
            }
        }
        Ok(())
    }

    /// Serializable form, see [`AlgebraSpec`].
    pub fn to_spec(&self) -> AlgebraSpec {
        let brackets = self
            .structure
            .iter()
            .map(|(&(i, j), terms)| BracketSpec {
                lhs: self.labels[i].clone(),
                rhs: self.labels[j].clone(),
                out: terms
                    .iter()
                    .map(|(k, c)| (self.labels[*k].clone(), format_rational(c)))
                    .collect(),
            })
            .collect();
        AlgebraSpec {
            labels: self.labels.clone(),
            brackets,
            time_generator: self.time_index.map(|i| self.labels[i].clone()),
        }
    }

    /// Builds and validates an algebra from its spec.
    pub fn from_spec(spec: &AlgebraSpec) -> Result<Self, LieError> {
        let mut b = LieAlgebraBuilder::new(spec.labels.iter().cloned())?;
        let mut seen = std::collections::BTreeSet::new();
        for br in &spec.brackets {
            let i = b.index_of(&br.lhs)?;
            let j = b.index_of(&br.rhs)?;
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(LieError::ConflictingBracket {
                    lhs: br.lhs.clone(),
                    rhs: br.rhs.clone(),
                });
            }
            if i == j {
                return Err(LieError::SelfBracket(br.lhs.clone()));
            }
            for (label, coeff) in &br.out {
                let k = b.index_of(label)?;
                b.add_bracket_term(i, j, k, parse_rational(coeff)?)?;
            }
        }
        if let Some(t) = &spec.time_generator {
            let ti = b.index_of(t)?;
            b.time_generator(ti)?;
        }
        b.build()
    }

    /// Parses the JSON spec format; syntax errors carry line and column.
    pub fn from_json_str(s: &str) -> Result<Self, LieError> {
        let spec: AlgebraSpec = serde_json::from_str(s)?;
        Self::from_spec(&spec)
    }
}

/// JSON algebra file:
///
/// ```json
/// { "labels": ["b1", "d1", "tau"],
///   "brackets": [ { "lhs": "d1", "rhs": "tau", "out": [["b1", "1"]] } ],
///   "time_generator": "tau" }
/// ```
///
/// Unlisted pairs bracket to zero. Coefficients are `"num/den"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub labels: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketSpec>,
    #[serde(default)]
    pub time_generator: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketSpec {
    pub lhs: String,
    pub rhs: String,
    pub out: Vec<(String, String)>,
}

fn kron(a: usize, b: usize) -> i64 {
    i64::from(a == b)
}

/// Index into the rotation block `a12, a13, a23` for the antisymmetric pair
/// `(p, q)`, with the sign of `a_pq` relative to the stored generator.
fn rotation_slot(p: usize, q: usize) -> Option<(usize, i64)> {
    let slot = |a: usize, b: usize| match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (1, 2) => 2,
        _ => unreachable!(),
    };
    match p.cmp(&q) {
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Less => Some((slot(p, q), 1)),
        std::cmp::Ordering::Greater => Some((slot(q, p), -1)),
    }
}

const ROTATION_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Builder preloaded with `so(3)` on indices 0..3 acting on each listed
/// vector family (each family occupies three consecutive indices).
fn spatial_builder(labels: Vec<String>, vector_families: &[usize]) -> LieAlgebraBuilder {
    let mut b = LieAlgebraBuilder::new(labels).expect("static labels");
    for (x, &(i, j)) in ROTATION_PAIRS.iter().enumerate() {
        for (y, &(k, l)) in ROTATION_PAIRS.iter().enumerate() {
            if x >= y {
                continue;
            }
            // [a_ij, a_kl] = δ_jk a_il − δ_ik a_jl + δ_il a_jk − δ_jl a_ik
            let terms = [
                (kron(j, k), (i, l)),
                (-kron(i, k), (j, l)),
                (kron(i, l), (j, k)),
                (-kron(j, l), (i, k)),
            ];
            for (c, (p, q)) in terms {
                if c == 0 {
                    continue;
                }
                if let Some((slot, sign)) = rotation_slot(p, q) {
                    b.add_bracket_term(x, y, slot, rat(c * sign, 1)).unwrap();
                }
            }
        }
        for &base in vector_families {
            for k in 0..3 {
                // [a_ij, v_k] = δ_jk v_i − δ_ik v_j
                if j == k {
                    b.add_bracket_term(x, base + k, base + i, rat(1, 1)).unwrap();
                }
                if i == k {
                    b.add_bracket_term(x, base + k, base + j, rat(-1, 1)).unwrap();
                }
            }
        }
    }
    b
}

fn rotation_labels() -> Vec<String> {
    vec!["a12".into(), "a13".into(), "a23".into()]
}

/// The Galilean algebra: rotations, translations `b`, boosts `d`, time `tau`,
/// with `[d_k, tau] = b_k` the only bracket outside the rotation action.
pub fn galilean() -> LieAlgebra {
    let mut labels = rotation_labels();
    labels.extend((1..=3).map(|k| format!("b{k}")));
    labels.extend((1..=3).map(|k| format!("d{k}")));
    labels.push("tau".into());
    let mut b = spatial_builder(labels, &[3, 6]);
    for k in 0..3 {
        b.add_bracket_term(6 + k, 9, 3 + k, rat(1, 1)).unwrap();
    }
    b.time_generator(9).unwrap();
    b.build().expect("galilean algebra satisfies Jacobi")
}

/// Label of the `n`-acceleration along axis `k` (1-based) in [`milne`].
pub fn milne_label(k: usize, n: usize) -> String {
    format!("d{k}_{n}")
}

/// Basis index of `d_k^(n)` in [`milne`] (`k` is 1-based).
pub fn milne_index(k: usize, n: usize) -> usize {
    3 + 3 * n + (k - 1)
}

/// The algebra of `G(m)`: `x → Rx + Σ_{n≤m} t^n/n! v_(n)`, `t → t + b`, of
/// dimension `3m + 7`, with `[d_k^(n), tau] = d_k^(n-1)`.
pub fn milne(m: usize) -> Result<LieAlgebra, LieError> {
    if m == 0 {
        return Err(LieError::InvalidParameter {
            what: "milne order",
            value: m,
        });
    }
    let mut labels = rotation_labels();
    for n in 0..=m {
        labels.extend((1..=3).map(|k| milne_label(k, n)));
    }
    labels.push("tau".into());
    let tau = labels.len() - 1;
    let families: Vec<usize> = (0..=m).map(|n| milne_index(1, n)).collect();
    let mut b = spatial_builder(labels, &families);
    for n in 1..=m {
        for k in 1..=3 {
            b.add_bracket_term(milne_index(k, n), tau, milne_index(k, n - 1), rat(1, 1))
                .unwrap();
        }
    }
    b.time_generator(tau).unwrap();
    Ok(b.build().expect("milne algebra satisfies Jacobi"))
}

/// Abelian algebra of phase-space translations `p1..pn, q1..qn`.
pub fn phase_space(n: usize) -> Result<LieAlgebra, LieError> {
    if n == 0 {
        return Err(LieError::InvalidParameter {
            what: "phase space dimension",
            value: n,
        });
    }
    let labels = (1..=n)
        .map(|i| format!("p{i}"))
        .chain((1..=n).map(|i| format!("q{i}")));
    Ok(LieAlgebraBuilder::new(labels)?.build_unchecked())
}
