//! One- and two-cochains on a Lie algebra with polynomial time dependence.
//!
//! A [`TwoCochain`] stores `Ξ(a_i, a_j, t)` for `i < j`; antisymmetry and the
//! zero diagonal are implied by the storage. A [`OneCochain`] stores
//! `Λ(a_i, t)`.
//!
//! Generators act on cochain values through their flow on time. Only the
//! time generator moves time, and the derivative is taken along the inverse
//! flow (functions on events are transported as `α((λa)⁻¹p)`), so
//!
//! ```text
//! flow(a_i) f = −df/dt   if a_i is the time generator
//!             = 0        otherwise
//! ```
//!
//! With this convention the cocycle condition on the Galilean triple
//! `(tau, b_1, d_1)` reads `dγ/dt = 0` and the Milne acceleration
//! polynomials obey `dP^(l,n)/dt = P^(l-1,n) + P^(l,n-1)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::lie::{AlgebraVector, LieAlgebra};
use crate::ratpoly::RationalPoly;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CochainError {
    #[error("expected {expected} components, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cochains live on different algebras")]
    AlgebraMismatch,
    #[error("Λ({label}) = {poly} is not constant along the flow of {label}")]
    ConstraintViolation { label: String, poly: RationalPoly },
    #[error("unknown basis label {0:?}")]
    UnknownLabel(String),
    #[error("diagonal entry ({0}, {0}) is identically zero and cannot be set")]
    Diagonal(String),
}

/// Index of the pair `(i, j)`, `i < j`, in lexicographic order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// All pairs `i < j` in lexicographic order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// Derivative of `f` along the flow of basis generator `i`.
pub fn flow_derivative(alg: &LieAlgebra, i: usize, f: &RationalPoly) -> RationalPoly {
    if alg.time_index() == Some(i) {
        -f.differentiate()
    } else {
        RationalPoly::zero()
    }
}

/// Antisymmetric bilinear form `Ξ(a, b, t)` with polynomial values.
#[derive(Clone, PartialEq, Eq)]
pub struct TwoCochain {
    alg: Arc<LieAlgebra>,
    entries: Vec<RationalPoly>,
}

impl std::fmt::Debug for TwoCochain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut m = f.debug_map();
        for (i, j, p) in self.nonzero_entries() {
            m.entry(
                &format!("({}, {})", self.alg.label(i), self.alg.label(j)),
                &p.to_string(),
            );
        }
        m.finish()
    }
}

impl TwoCochain {
    pub fn zero(alg: Arc<LieAlgebra>) -> Self {
        let n = alg.dim();
        Self {
            alg,
            entries: vec![RationalPoly::zero(); n * n.saturating_sub(1) / 2],
        }
    }

    /// Builds a cochain from entries `(i, j, Ξ_ij)`; repeated pairs add up.
    pub fn from_entries(
        alg: Arc<LieAlgebra>,
        entries: impl IntoIterator<Item = (usize, usize, RationalPoly)>,
    ) -> Result<Self, CochainError> {
        let mut c = Self::zero(alg);
        for (i, j, p) in entries {
            let cur = c.get(i, j);
            c.set(i, j, &cur + &p)?;
        }
        Ok(c)
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// `Ξ(a_i, a_j)`, antisymmetric in `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> RationalPoly {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => RationalPoly::zero(),
            std::cmp::Ordering::Less => self.entries[pair_index(self.dim(), i, j)].clone(),
            std::cmp::Ordering::Greater => -&self.entries[pair_index(self.dim(), j, i)],
        }
    }

    /// Stored entry for `i < j` without cloning.
    pub fn upper(&self, i: usize, j: usize) -> &RationalPoly {
        &self.entries[pair_index(self.dim(), i, j)]
    }

    /// Sets `Ξ(a_i, a_j) = p` (and `Ξ(a_j, a_i) = −p`).
    pub fn set(&mut self, i: usize, j: usize, p: RationalPoly) -> Result<(), CochainError> {
        let n = self.dim();
        if i >= n || j >= n {
            return Err(CochainError::DimensionMismatch {
                expected: n,
                got: i.max(j) + 1,
            });
        }
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => Err(CochainError::Diagonal(self.alg.label(i).into())),
            std::cmp::Ordering::Less => {
                self.entries[pair_index(n, i, j)] = p;
                Ok(())
            }
            std::cmp::Ordering::Greater => {
                self.entries[pair_index(n, j, i)] = -p;
                Ok(())
            }
        }
    }

    pub fn set_by_label(&mut self, a: &str, b: &str, p: RationalPoly) -> Result<(), CochainError> {
        let i = self.label_index(a)?;
        let j = self.label_index(b)?;
        self.set(i, j, p)
    }

    pub fn get_by_label(&self, a: &str, b: &str) -> Result<RationalPoly, CochainError> {
        Ok(self.get(self.label_index(a)?, self.label_index(b)?))
    }

    fn label_index(&self, l: &str) -> Result<usize, CochainError> {
        self.alg
            .index_of(l)
            .ok_or_else(|| CochainError::UnknownLabel(l.into()))
    }

    /// Nonzero upper-triangular entries in pair order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &RationalPoly)> {
        pairs(self.dim())
            .zip(&self.entries)
            .filter(|(_, p)| !p.is_zero())
            .map(|((i, j), p)| (i, j, p))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RationalPoly::is_zero)
    }

    /// Highest degree over all entries (−1 for the zero cochain).
    pub fn max_degree(&self) -> isize {
        self.entries.iter().map(RationalPoly::degree).max().unwrap_or(-1)
    }

    /// Bilinear extension `Ξ(x, y)`.
    pub fn apply(&self, x: &AlgebraVector, y: &AlgebraVector) -> Result<RationalPoly, CochainError> {
        for v in [x, y] {
            if v.dim() != self.dim() {
                return Err(CochainError::DimensionMismatch {
                    expected: self.dim(),
                    got: v.dim(),
                });
            }
        }
        let mut acc = RationalPoly::zero();
        for i in x.support() {
            for j in y.support() {
                let c = &x.components()[i] * &y.components()[j];
                acc = &acc + &self.get(i, j).scale(&c);
            }
        }
        Ok(acc)
    }

    fn check_same(&self, other: &Self) -> Result<(), CochainError> {
        if Arc::ptr_eq(&self.alg, &other.alg) || *self.alg == *other.alg {
            Ok(())
        } else {
            Err(CochainError::AlgebraMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, CochainError> {
        self.check_same(other)?;
        Ok(Self {
            alg: self.alg.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CochainError> {
        self.check_same(other)?;
        Ok(Self {
            alg: self.alg.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: &crate::ratpoly::Rational) -> Self {
        Self {
            alg: self.alg.clone(),
            entries: self.entries.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// JSON-facing entry list (nonzero upper-triangular entries only).
    pub fn to_entries(&self) -> Vec<CochainEntry> {
        self.nonzero_entries()
            .map(|(i, j, p)| CochainEntry {
                i: self.alg.label(i).to_string(),
                j: self.alg.label(j).to_string(),
                poly: p.clone(),
            })
            .collect()
    }

    pub fn from_entry_list(
        alg: Arc<LieAlgebra>,
        entries: &[CochainEntry],
    ) -> Result<Self, CochainError> {
        let mut c = Self::zero(alg);
        for e in entries {
            let cur = c.get_by_label(&e.i, &e.j)?;
            c.set_by_label(&e.i, &e.j, &cur + &e.poly)?;
        }
        Ok(c)
    }
}

/// One serialized cochain entry: `{"i": label, "j": label, "poly": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainEntry {
    pub i: String,
    pub j: String,
    pub poly: RationalPoly,
}

/// Admissible one-cochain `Λ(a_i, t)`.
///
/// Each generator's component must be constant along that generator's own
/// flow. Only the time generator moves time, so the constraint pins
/// `Λ(tau)` to a constant and leaves the other components free.
#[derive(Clone, PartialEq, Eq)]
pub struct OneCochain {
    alg: Arc<LieAlgebra>,
    components: Vec<RationalPoly>,
}

impl std::fmt::Debug for OneCochain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut m = f.debug_map();
        for (i, p) in self.components.iter().enumerate() {
            if !p.is_zero() {
                m.entry(&self.alg.label(i), &p.to_string());
            }
        }
        m.finish()
    }
}

impl OneCochain {
    pub fn new(alg: Arc<LieAlgebra>, components: Vec<RationalPoly>) -> Result<Self, CochainError> {
        if components.len() != alg.dim() {
            return Err(CochainError::DimensionMismatch {
                expected: alg.dim(),
                got: components.len(),
            });
        }
        for (i, p) in components.iter().enumerate() {
            if !flow_derivative(&alg, i, p).is_zero() {
                return Err(CochainError::ConstraintViolation {
                    label: alg.label(i).to_string(),
                    poly: p.clone(),
                });
            }
        }
        Ok(Self { alg, components })
    }

    pub fn zero(alg: Arc<LieAlgebra>) -> Self {
        let n = alg.dim();
        Self {
            alg,
            components: vec![RationalPoly::zero(); n],
        }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.alg
    }

    pub fn components(&self) -> &[RationalPoly] {
        &self.components
    }

    /// `Λ(x)` for an arbitrary algebra element.
    pub fn apply(&self, x: &AlgebraVector) -> RationalPoly {
        x.support().fold(RationalPoly::zero(), |acc, i| {
            &acc + &self.components[i].scale(&x.components()[i])
        })
    }
}

/// `d[Λ](a_i, a_j) = flow(a_i)Λ_j − flow(a_j)Λ_i − Λ([a_i, a_j])`.
pub fn coboundary(lam: &OneCochain) -> TwoCochain {
    let alg = lam.algebra().clone();
    let n = alg.dim();
    let mut out = TwoCochain::zero(alg.clone());
    for (i, j) in pairs(n) {
        let mut e = &flow_derivative(&alg, i, &lam.components[j])
            - &flow_derivative(&alg, j, &lam.components[i]);
        for (k, c) in alg.bracket_basis(i, j) {
            e = &e - &lam.components[*k].scale(c);
        }
        out.entries[pair_index(n, i, j)] = e;
    }
    out
}

/// `Ξ([a_i,a_j],a_k) + Ξ([a_j,a_k],a_i) + Ξ([a_k,a_i],a_j)`
/// `− (flow(a_i)Ξ(a_j,a_k) + flow(a_j)Ξ(a_k,a_i) + flow(a_k)Ξ(a_i,a_j))`.
///
/// Vanishes identically iff the cocycle condition holds on this triple.
pub fn jacobi_residual(xi: &TwoCochain, i: usize, j: usize, k: usize) -> RationalPoly {
    let alg = xi.algebra();
    let mut acc = RationalPoly::zero();
    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
        for (m, coeff) in alg.bracket_basis(a, b) {
            acc = &acc + &xi.get(*m, c).scale(coeff);
        }
        acc = &acc - &flow_derivative(alg, a, &xi.get(b, c));
    }
    acc
}

/// True iff [`jacobi_residual`] vanishes on every triple `i < j < k`.
pub fn is_cocycle(xi: &TwoCochain) -> bool {
    let n = xi.dim();
    (0..n).all(|i| {
        (i + 1..n).all(|j| (j + 1..n).all(|k| jacobi_residual(xi, i, j, k).is_zero()))
    })
}
