//! Group-level exponents: Galilean and Milne group elements, phase functions
//! `θ(r, p)`, finite exponents and their identities, the extension group `H`,
//! and numerical extraction of infinitesimal exponents.
//!
//! Conventions used throughout:
//!
//! * elements act on events as `(x, t) → (Rx + A(t), t + b)`;
//! * a phase function transforms wave functions by
//!   `T_r ψ(p) = e^{iθ(r,p)} ψ(r⁻¹p)`;
//! * the finite exponent is defined by `T_r T_s = e^{iξ(r,s,·)} T_{rs}`, i.e.
//!   `ξ(r,s,p) = θ(r,p) + θ(s,r⁻¹p) − θ(rs,p)`.
//!
//! With these signs the Galilean mass phase `−m v·x + (m/2)v²t` extracts to
//! `Ξ(b_i, d_k) = +m δ_ik`.
//!
//! ```
//! use explab::groupexp::*;
//!
//! let theta = GalileanMass { mass: 2.0 };
//! let shift = GalileanElement::translation(Vec3::new(1.0, 0.0, 0.0));
//! let boost = GalileanElement::boost(Vec3::new(0.5, 0.0, 0.0));
//! let p = Event::new(Vec3::new(0.3, -1.0, 2.0), 4.0);
//! // a translation followed by a boost picks up m v·a, whatever the event
//! assert!((finite_exponent(&theta, &shift, &boost, &p) - 1.0).abs() < 1e-12);
//! ```

use std::fmt::Debug;
use std::ops::{Add, Sub};
use std::sync::Arc;

use nalgebra::{Matrix3, Quaternion, UnitQuaternion, Vector3};
use num_traits::{Num, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::lie::{galilean, milne, milne_index, LieAlgebra};
use crate::ratpoly::{rational_to_f64, Rational, RationalPoly};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GroupError {
    #[error("cannot compose milne elements of orders {0} and {1}")]
    OrderMismatch(usize, usize),
    #[error("algebra vector has {got} components, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("no closed-form one-parameter subgroup: {0}")]
    NoClosedForm(String),
    #[error("extrapolation did not converge: {0}")]
    NonConvergent(String),
    #[error("invalid {what}: {value}")]
    InvalidParameter { what: &'static str, value: String },
}

/// A spacetime point `(x, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub x: Vec3,
    pub t: f64,
}

impl Event {
    pub fn new(x: Vec3, t: f64) -> Self {
        Self { x, t }
    }

    pub fn distance(&self, other: &Event) -> f64 {
        (self.x - other.x).amax().max((self.t - other.t).abs())
    }
}

/// Values a phase can take: `f64` in float mode, [`Rational`] in exact mode.
pub trait PhaseScalar: Clone + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Zero {
    fn magnitude(&self) -> f64;
}

impl PhaseScalar for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl PhaseScalar for Rational {
    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.abs())
    }
}

pub trait GroupElement: Clone + Debug + Send + Sync {
    type Point: Clone + Debug + Send + Sync;

    fn try_compose(&self, other: &Self) -> Result<Self, GroupError>;

    /// # Panics
    ///
    /// Panics where [`GroupElement::try_compose`] would fail.
    fn compose(&self, other: &Self) -> Self {
        self.try_compose(other).unwrap_or_else(|e| panic!("{e}"))
    }

    fn inverse(&self) -> Self;

    fn act(&self, p: &Self::Point) -> Self::Point;

    /// Identity of the group this element belongs to.
    fn identity_like(&self) -> Self;
}

/// A group whose elements act on [`Event`]s.
pub trait SpacetimeGroup: Send + Sync {
    type Element: GroupElement<Point = Event>;

    fn name(&self) -> String;
    fn algebra(&self) -> LieAlgebra;
    fn identity(&self) -> Self::Element;
    fn random_element(&self, rng: &mut ChaCha8Rng) -> Self::Element;

    /// `exp(τa)` for basis coefficients `a`, where a closed form exists.
    fn one_parameter(&self, a: &[f64], tau: f64) -> Result<Self::Element, GroupError>;
}

fn uniform3(rng: &mut ChaCha8Rng, half: f64) -> Vec3 {
    Vec3::new(
        rng.random_range(-half..=half),
        rng.random_range(-half..=half),
        rng.random_range(-half..=half),
    )
}

/// Haar-uniform rotation by rejection sampling a unit quaternion.
pub fn random_rotation(rng: &mut ChaCha8Rng) -> Mat3 {
    loop {
        let q = Quaternion::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        let n = q.norm();
        if n > 0.1 && n <= 1.0 {
            return UnitQuaternion::from_quaternion(q).to_rotation_matrix().into_inner();
        }
    }
}

/// Event with `x ∈ [−2, 2]³` and `t ∈ [−tmax, tmax]`.
pub fn random_event(rng: &mut ChaCha8Rng, tmax: f64) -> Event {
    Event::new(uniform3(rng, 2.0), rng.random_range(-tmax..=tmax))
}

/// `J_ij = E_ij − E_ji` summed with the rotation coefficients of `a`.
fn rotation_generator(a: &[f64]) -> Mat3 {
    let mut s = Mat3::zeros();
    for (c, (i, j)) in a[..3].iter().zip([(0, 1), (0, 2), (1, 2)]) {
        s[(i, j)] += c;
        s[(j, i)] -= c;
    }
    s
}

/// Which closed-form family a generator mix falls into.
enum Family {
    Rotation,
    Time,
    Linear,
    Zero,
}

fn family(a: &[f64], time: usize) -> Result<Family, GroupError> {
    let rot = a[..3].iter().any(|c| *c != 0.0);
    let tau = a[time] != 0.0;
    let lin = a
        .iter()
        .enumerate()
        .any(|(i, c)| i >= 3 && i != time && *c != 0.0);
    match (rot, tau, lin) {
        (false, false, false) => Ok(Family::Zero),
        (true, false, false) => Ok(Family::Rotation),
        (false, true, false) => Ok(Family::Time),
        (false, false, true) => Ok(Family::Linear),
        _ => Err(GroupError::NoClosedForm(
            "mixes rotations, time translation and linear generators".into(),
        )),
    }
}

fn check_dim(a: &[f64], expected: usize) -> Result<(), GroupError> {
    if a.len() != expected {
        return Err(GroupError::Dimension {
            expected,
            got: a.len(),
        });
    }
    Ok(())
}

/// `(x, t) → (Rx + vt + a, t + b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GalileanElement {
    pub rot: Mat3,
    pub v: Vec3,
    pub a: Vec3,
    pub b: f64,
}

impl GalileanElement {
    pub fn identity() -> Self {
        Self {
            rot: Mat3::identity(),
            v: Vec3::zeros(),
            a: Vec3::zeros(),
            b: 0.0,
        }
    }

    pub fn translation(a: Vec3) -> Self {
        Self { a, ..Self::identity() }
    }

    pub fn boost(v: Vec3) -> Self {
        Self { v, ..Self::identity() }
    }

    pub fn time_shift(b: f64) -> Self {
        Self { b, ..Self::identity() }
    }

    pub fn rotation(rot: Mat3) -> Self {
        Self { rot, ..Self::identity() }
    }
}

impl GroupElement for GalileanElement {
    type Point = Event;

    fn try_compose(&self, s: &Self) -> Result<Self, GroupError> {
        Ok(Self {
            rot: self.rot * s.rot,
            v: self.rot * s.v + self.v,
            a: self.rot * s.a + self.v * s.b + self.a,
            b: self.b + s.b,
        })
    }

    fn inverse(&self) -> Self {
        let rt = self.rot.transpose();
        Self {
            rot: rt,
            v: -(rt * self.v),
            a: rt * (self.v * self.b - self.a),
            b: -self.b,
        }
    }

    fn act(&self, p: &Event) -> Event {
        Event::new(self.rot * p.x + self.v * p.t + self.a, p.t + self.b)
    }

    fn identity_like(&self) -> Self {
        Self::identity()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GalileanGroup;

impl SpacetimeGroup for GalileanGroup {
    type Element = GalileanElement;

    fn name(&self) -> String {
        "galilean".into()
    }

    fn algebra(&self) -> LieAlgebra {
        galilean()
    }

    fn identity(&self) -> GalileanElement {
        GalileanElement::identity()
    }

    fn random_element(&self, rng: &mut ChaCha8Rng) -> GalileanElement {
        GalileanElement {
            rot: random_rotation(rng),
            v: uniform3(rng, 1.0),
            a: uniform3(rng, 1.0),
            b: rng.random_range(-1.0..=1.0),
        }
    }

    fn one_parameter(&self, a: &[f64], tau: f64) -> Result<GalileanElement, GroupError> {
        check_dim(a, 10)?;
        Ok(match family(a, 9)? {
            Family::Zero => GalileanElement::identity(),
            Family::Rotation => GalileanElement::rotation((rotation_generator(a) * tau).exp()),
            Family::Time => GalileanElement::time_shift(tau * a[9]),
            Family::Linear => GalileanElement {
                a: Vec3::new(a[3], a[4], a[5]) * tau,
                v: Vec3::new(a[6], a[7], a[8]) * tau,
                ..GalileanElement::identity()
            },
        })
    }
}

/// `(x, t) → (Rx + A(t), t + b)` with `A(t) = Σ_n (tⁿ/n!) v_(n)`, `n ≤ m`.
#[derive(Debug, Clone, PartialEq)]
pub struct MilneElement {
    pub rot: Mat3,
    /// `v_(0), …, v_(m)`.
    pub vs: Vec<Vec3>,
    pub b: f64,
}

fn factorials(n: usize) -> Vec<f64> {
    let mut f = vec![1.0; n + 1];
    for k in 1..=n {
        f[k] = f[k - 1] * k as f64;
    }
    f
}

impl MilneElement {
    pub fn identity(order: usize) -> Self {
        Self {
            rot: Mat3::identity(),
            vs: vec![Vec3::zeros(); order + 1],
            b: 0.0,
        }
    }

    pub fn order(&self) -> usize {
        self.vs.len() - 1
    }

    pub fn displacement(&self, t: f64) -> Vec3 {
        let f = factorials(self.order());
        self.vs
            .iter()
            .enumerate()
            .map(|(n, v)| v * (t.powi(n as i32) / f[n]))
            .sum()
    }

    /// Ordinary power-series coefficients of `A(t)`: `v_(n)/n!`.
    pub fn power_coeffs(&self) -> Vec<Vec3> {
        let f = factorials(self.order());
        self.vs.iter().enumerate().map(|(n, v)| v / f[n]).collect()
    }
}

impl GroupElement for MilneElement {
    type Point = Event;

    fn try_compose(&self, s: &Self) -> Result<Self, GroupError> {
        if self.order() != s.order() {
            return Err(GroupError::OrderMismatch(self.order(), s.order()));
        }
        // A(t) = R_r A_s(t) + A_r(t + b_s), re-expanded in tᵏ/k!
        let f = factorials(self.order());
        let vs = (0..=self.order())
            .map(|k| {
                let shifted: Vec3 = (k..=self.order())
                    .map(|n| self.vs[n] * (s.b.powi((n - k) as i32) / f[n - k]))
                    .sum();
                self.rot * s.vs[k] + shifted
            })
            .collect();
        Ok(Self {
            rot: self.rot * s.rot,
            vs,
            b: self.b + s.b,
        })
    }

    fn inverse(&self) -> Self {
        let rt = self.rot.transpose();
        let f = factorials(self.order());
        let vs = (0..=self.order())
            .map(|k| {
                let shifted: Vec3 = (k..=self.order())
                    .map(|n| self.vs[n] * ((-self.b).powi((n - k) as i32) / f[n - k]))
                    .sum();
                -(rt * shifted)
            })
            .collect();
        Self {
            rot: rt,
            vs,
            b: -self.b,
        }
    }

    fn act(&self, p: &Event) -> Event {
        Event::new(self.rot * p.x + self.displacement(p.t), p.t + self.b)
    }

    fn identity_like(&self) -> Self {
        Self::identity(self.order())
    }
}

/// The finite-dimensional Milne subgroup `G(m)`.
#[derive(Debug, Clone, Copy)]
pub struct MilneGroup {
    order: usize,
}

impl MilneGroup {
    pub fn new(order: usize) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::InvalidParameter {
                what: "milne order",
                value: "0".into(),
            });
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

impl SpacetimeGroup for MilneGroup {
    type Element = MilneElement;

    fn name(&self) -> String {
        format!("milne:{}", self.order)
    }

    fn algebra(&self) -> LieAlgebra {
        milne(self.order).expect("order validated")
    }

    fn identity(&self) -> MilneElement {
        MilneElement::identity(self.order)
    }

    fn random_element(&self, rng: &mut ChaCha8Rng) -> MilneElement {
        MilneElement {
            rot: random_rotation(rng),
            vs: (0..=self.order).map(|_| uniform3(rng, 1.0)).collect(),
            b: rng.random_range(-1.0..=1.0),
        }
    }

    fn one_parameter(&self, a: &[f64], tau: f64) -> Result<MilneElement, GroupError> {
        let dim = 3 + 3 * (self.order + 1) + 1;
        check_dim(a, dim)?;
        let time = dim - 1;
        let mut e = MilneElement::identity(self.order);
        match family(a, time)? {
            Family::Zero => {}
            Family::Rotation => e.rot = (rotation_generator(a) * tau).exp(),
            Family::Time => e.b = tau * a[time],
            Family::Linear => {
                for n in 0..=self.order {
                    for k in 1..=3 {
                        e.vs[n][k - 1] = tau * a[milne_index(k, n)];
                    }
                }
            }
        }
        Ok(e)
    }
}

/// `θ(r, p)`.
pub trait PhaseFunction<E: GroupElement>: Send + Sync {
    type Scalar: PhaseScalar;

    fn theta(&self, r: &E, p: &E::Point) -> Self::Scalar;

    fn tag(&self) -> String;
}

/// `θ(r, x, t) = −m v·x + (m/2)|v|² t`; rotations and translations contribute nothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GalileanMass {
    pub mass: f64,
}

impl PhaseFunction<GalileanElement> for GalileanMass {
    type Scalar = f64;

    fn theta(&self, r: &GalileanElement, p: &Event) -> f64 {
        -self.mass * r.v.dot(&p.x) + 0.5 * self.mass * r.v.norm_squared() * p.t
    }

    fn tag(&self) -> String {
        format!("galilean-mass:{}", self.mass)
    }
}

fn int<S: Num + Clone>(n: usize) -> S {
    (0..n).fold(S::zero(), |acc, _| acc + S::one())
}

fn eval_poly<S: Num + Clone>(c: &[S], t: &S) -> S {
    c.iter()
        .rev()
        .fold(S::zero(), |acc, x| acc * t.clone() + x.clone())
}

/// `θ(x, t) = m Ȧ(t)·x − (m/2) ∫₀ᵗ |Ȧ(s)|² ds` for a polynomial displacement `A`.
///
/// This is the phase under which `e^{iθ} ψ(x − A(t), t)` turns free
/// solutions into solutions with the potential `φ = −Ä·x` and gravitational
/// mass `m`. Shared by [`MilneSchrodinger`] and the wave-function transform;
/// generic over `f64` and exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct MilnePhase<S> {
    mass: S,
    /// Power coefficients of each component of `Ȧ`.
    velocity: Vec<Vec<S>>,
    /// Power coefficients of `∫₀ᵗ |Ȧ|²`.
    energy: Vec<S>,
}

impl<S: Num + Clone> MilnePhase<S> {
    /// `displacement[c][k]` is the coefficient of `tᵏ` in component `c` of `A`.
    pub fn from_power_coeffs(mass: S, displacement: &[Vec<S>]) -> Self {
        let velocity: Vec<Vec<S>> = displacement
            .iter()
            .map(|a| {
                a.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, c)| c.clone() * int::<S>(k))
                    .collect()
            })
            .collect();
        let len = velocity.iter().map(Vec::len).max().unwrap_or(0);
        let mut square = vec![S::zero(); (2 * len).saturating_sub(1)];
        for v in &velocity {
            for (i, x) in v.iter().enumerate() {
                for (j, y) in v.iter().enumerate() {
                    square[i + j] = square[i + j].clone() + x.clone() * y.clone();
                }
            }
        }
        let mut energy = vec![S::zero()];
        for (k, c) in square.into_iter().enumerate() {
            energy.push(c / int::<S>(k + 1));
        }
        Self {
            mass,
            velocity,
            energy,
        }
    }

    pub fn dimension(&self) -> usize {
        self.velocity.len()
    }

    pub fn evaluate(&self, x: &[S], t: &S) -> S {
        let two = int::<S>(2);
        let kinetic = self
            .velocity
            .iter()
            .zip(x)
            .fold(S::zero(), |acc, (v, xc)| acc + eval_poly(v, t) * xc.clone());
        self.mass.clone() * kinetic
            - self.mass.clone() * eval_poly(&self.energy, t) / two
    }

    /// `∂θ/∂x`, i.e. `m Ȧ(t)`.
    pub fn momentum(&self, t: &S) -> Vec<S> {
        self.velocity
            .iter()
            .map(|v| self.mass.clone() * eval_poly(v, t))
            .collect()
    }
}

impl MilnePhase<Rational> {
    /// Exact phase for the displacement polynomials `A_c(t)`.
    pub fn from_polys(mass: Rational, displacement: &[RationalPoly]) -> Self {
        let coeffs: Vec<Vec<Rational>> = displacement.iter().map(|p| p.coeffs().to_vec()).collect();
        Self::from_power_coeffs(mass, &coeffs)
    }

    pub fn to_f64(&self) -> MilnePhase<f64> {
        let conv = |v: &[Rational]| v.iter().map(rational_to_f64).collect::<Vec<_>>();
        MilnePhase {
            mass: rational_to_f64(&self.mass),
            velocity: self.velocity.iter().map(|v| conv(v)).collect(),
            energy: conv(&self.energy),
        }
    }
}

/// The Schrödinger-derived Milne phase: [`MilnePhase`] of the element's
/// displacement, evaluated at the image point `x'` and the source time
/// `t' − b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MilneSchrodinger {
    pub mass: f64,
}

impl MilneSchrodinger {
    pub fn phase_of(&self, r: &MilneElement) -> MilnePhase<f64> {
        let coeffs: Vec<Vec<f64>> = (0..3)
            .map(|c| r.power_coeffs().iter().map(|v| v[c]).collect())
            .collect();
        MilnePhase::from_power_coeffs(self.mass, &coeffs)
    }
}

impl PhaseFunction<MilneElement> for MilneSchrodinger {
    type Scalar = f64;

    fn theta(&self, r: &MilneElement, p: &Event) -> f64 {
        self.phase_of(r)
            .evaluate(p.x.as_slice(), &(p.t - r.b))
    }

    fn tag(&self) -> String {
        format!("milne-schrodinger:{}", self.mass)
    }
}

type PhaseClosure<E, S> = Arc<dyn Fn(&E, &<E as GroupElement>::Point) -> S + Send + Sync>;
type ExponentClosure<E, S> = Arc<dyn Fn(&E, &E, &<E as GroupElement>::Point) -> S + Send + Sync>;

/// User-supplied phase function.
pub struct FnPhase<E: GroupElement, S> {
    f: PhaseClosure<E, S>,
    tag: String,
}

impl<E: GroupElement, S> Clone for FnPhase<E, S> {
    fn clone(&self) -> Self {
        Self {
            f: self.f.clone(),
            tag: self.tag.clone(),
        }
    }
}

impl<E: GroupElement, S> FnPhase<E, S> {
    pub fn new(tag: impl Into<String>, f: impl Fn(&E, &E::Point) -> S + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            tag: tag.into(),
        }
    }
}

impl<E: GroupElement, S: PhaseScalar> PhaseFunction<E> for FnPhase<E, S> {
    type Scalar = S;

    fn theta(&self, r: &E, p: &E::Point) -> S {
        (self.f)(r, p)
    }

    fn tag(&self) -> String {
        self.tag.clone()
    }
}

/// `θ' = θ + ζ`.
#[derive(Clone)]
pub struct ShiftedPhase<P, Z> {
    pub base: P,
    pub zeta: Z,
}

pub fn equivalence_transform<P, Z>(theta: P, zeta: Z) -> ShiftedPhase<P, Z> {
    ShiftedPhase { base: theta, zeta }
}

impl<E, P, Z> PhaseFunction<E> for ShiftedPhase<P, Z>
where
    E: GroupElement,
    P: PhaseFunction<E>,
    Z: PhaseFunction<E, Scalar = P::Scalar>,
{
    type Scalar = P::Scalar;

    fn theta(&self, r: &E, p: &E::Point) -> P::Scalar {
        self.base.theta(r, p) + self.zeta.theta(r, p)
    }

    fn tag(&self) -> String {
        format!("{}+{}", self.base.tag(), self.zeta.tag())
    }
}

/// `ξ(r, s, p) = θ(r, p) + θ(s, r⁻¹p) − θ(rs, p)`.
pub fn finite_exponent<E: GroupElement, P: PhaseFunction<E>>(
    theta: &P,
    r: &E,
    s: &E,
    p: &E::Point,
) -> P::Scalar {
    theta.theta(r, p) + theta.theta(s, &r.inverse().act(p)) - theta.theta(&r.compose(s), p)
}

/// `ζ(r, p) + ζ(s, r⁻¹p) − ζ(rs, p)`: the exponent shift produced by a gauge `ζ`.
pub fn delta_zeta<E: GroupElement, Z: PhaseFunction<E>>(zeta: &Z, r: &E, s: &E, p: &E::Point) -> Z::Scalar {
    let rs = r.compose(s);
    let back = r.inverse().act(p);
    zeta.theta(r, p) + zeta.theta(s, &back) - zeta.theta(&rs, p)
}

/// A finite exponent `ξ(r, s, p)`.
pub trait Exponent<E: GroupElement>: Send + Sync {
    type Scalar: PhaseScalar;

    fn xi(&self, r: &E, s: &E, p: &E::Point) -> Self::Scalar;
}

/// The exponent [`finite_exponent`] of a phase function.
#[derive(Debug, Clone)]
pub struct PhaseExponent<P>(pub P);

impl<E: GroupElement, P: PhaseFunction<E>> Exponent<E> for PhaseExponent<P> {
    type Scalar = P::Scalar;

    fn xi(&self, r: &E, s: &E, p: &E::Point) -> P::Scalar {
        finite_exponent(&self.0, r, s, p)
    }
}

/// User-supplied exponent, e.g. a deliberately defective one.
pub struct FnExponent<E: GroupElement, S> {
    f: ExponentClosure<E, S>,
}

impl<E: GroupElement, S> Clone for FnExponent<E, S> {
    fn clone(&self) -> Self {
        Self { f: self.f.clone() }
    }
}

impl<E: GroupElement, S> FnExponent<E, S> {
    pub fn new(f: impl Fn(&E, &E, &E::Point) -> S + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f) }
    }
}

impl<E: GroupElement, S: PhaseScalar> Exponent<E> for FnExponent<E, S> {
    type Scalar = S;

    fn xi(&self, r: &E, s: &E, p: &E::Point) -> S {
        (self.f)(r, s, p)
    }
}

/// `ξ(r,s,p) + ξ(rs,g,p) − ξ(s,g,r⁻¹p) − ξ(r,sg,p)`; zero for every exponent.
pub fn cocycle_defect<E: GroupElement, X: Exponent<E>>(xi: &X, r: &E, s: &E, g: &E, p: &E::Point) -> X::Scalar {
    let back = r.inverse().act(p);
    xi.xi(r, s, p) + xi.xi(&r.compose(s), g, p) - xi.xi(s, g, &back) - xi.xi(r, &s.compose(g), p)
}

/// One random sample for the identity checks.
#[derive(Debug, Clone)]
pub struct Triple<E: GroupElement> {
    pub r: E,
    pub s: E,
    pub g: E,
    pub p: E::Point,
}

/// Seeded samples: three random elements and an event with `|t| ≤ 2`.
pub fn random_triples<G: SpacetimeGroup>(group: &G, n: usize, seed: u64) -> Vec<Triple<G::Element>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Triple {
            r: group.random_element(&mut rng),
            s: group.random_element(&mut rng),
            g: group.random_element(&mut rng),
            p: random_event(&mut rng, 2.0),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityStat {
    pub name: &'static str,
    pub max_violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub seed: Option<u64>,
    pub samples: usize,
    pub checks: Vec<IdentityStat>,
}

impl IdentityReport {
    pub fn max_violation(&self) -> f64 {
        self.checks.iter().map(|c| c.max_violation).fold(0.0, f64::max)
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.max_violation() <= tol
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.max_violation)
    }
}

/// Checks, on every sample:
///
/// * `cocycle`: `ξ(r,s,p) + ξ(rs,g,p) = ξ(s,g,r⁻¹p) + ξ(r,sg,p)`;
/// * `unit`: `ξ(e,e,p) = 0`;
/// * `unit_sides`: `ξ(r,e,p) = ξ(e,g,p) = 0`;
/// * `inverse_symmetry`: `ξ(r,r⁻¹,p) = ξ(r⁻¹,r,r⁻¹p)`.
pub fn check_cocycle_identities<E, X>(xi: &X, samples: &[Triple<E>]) -> IdentityReport
where
    E: GroupElement,
    X: Exponent<E>,
{
    let per_sample: Vec<[f64; 4]> = samples
        .par_iter()
        .map(|s| {
            let e = s.r.identity_like();
            let rinv = s.r.inverse();
            let back = rinv.act(&s.p);
            [
                cocycle_defect(xi, &s.r, &s.s, &s.g, &s.p).magnitude(),
                xi.xi(&e, &e, &s.p).magnitude(),
                xi.xi(&s.r, &e, &s.p)
                    .magnitude()
                    .max(xi.xi(&e, &s.g, &s.p).magnitude()),
                (xi.xi(&s.r, &rinv, &s.p) - xi.xi(&rinv, &s.r, &back)).magnitude(),
            ]
        })
        .collect();
    let names = ["cocycle", "unit", "unit_sides", "inverse_symmetry"];
    IdentityReport {
        seed: None,
        samples: samples.len(),
        checks: names
            .iter()
            .enumerate()
            .map(|(k, name)| IdentityStat {
                name,
                max_violation: per_sample.iter().map(|v| v[k]).fold(0.0, f64::max),
            })
            .collect(),
    }
}

/// [`check_cocycle_identities`] on `samples` seeded random triples of `group`.
pub fn verify_exponent<G, X>(group: &G, xi: &X, samples: usize, seed: u64) -> IdentityReport
where
    G: SpacetimeGroup,
    X: Exponent<G::Element>,
{
    let mut report = check_cocycle_identities(xi, &random_triples(group, samples, seed));
    report.seed = Some(seed);
    report
}

/// Largest sample variance of `t ↦ ξ(r, s, (x, t))` over random `(r, s, x)`,
/// with `times` values of `t` drawn from `[−10, 10]` per sample.
pub fn time_variance<G, X>(group: &G, xi: &X, samples: usize, times: usize, seed: u64) -> f64
where
    G: SpacetimeGroup,
    X: Exponent<G::Element, Scalar = f64>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let r = group.random_element(&mut rng);
        let s = group.random_element(&mut rng);
        let x = random_event(&mut rng, 0.0).x;
        let vals: Vec<f64> = (0..times)
            .map(|_| xi.xi(&r, &s, &Event::new(x, rng.random_range(-10.0..=10.0))))
            .collect();
        let mean = vals.iter().sum::<f64>() / times as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (times as f64 - 1.0);
        worst = worst.max(var);
    }
    worst
}

/// Largest `|ξ_{θ+ζ} − (ξ_θ + Δ[ζ])|` over the samples.
pub fn exponent_shift_violation<E, P, Z>(theta: &P, zeta: &Z, samples: &[Triple<E>]) -> f64
where
    E: GroupElement,
    P: PhaseFunction<E> + Clone,
    Z: PhaseFunction<E, Scalar = P::Scalar> + Clone,
{
    let shifted = equivalence_transform(theta.clone(), zeta.clone());
    samples
        .par_iter()
        .map(|s| {
            let lhs = finite_exponent(&shifted, &s.r, &s.s, &s.p);
            let rhs = finite_exponent(theta, &s.r, &s.s, &s.p) + delta_zeta(zeta, &s.r, &s.s, &s.p);
            (lhs - rhs).magnitude()
        })
        .reduce(|| 0.0, f64::max)
}

pub type PhaseFn = Arc<dyn Fn(&Event) -> f64 + Send + Sync>;

/// A pair `{θ, r}` in the extension group `H`.
#[derive(Clone)]
pub struct HElement<E> {
    pub theta: PhaseFn,
    pub r: E,
}

impl<E: Debug> Debug for HElement<E> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HElement").field("r", &self.r).finish_non_exhaustive()
    }
}

/// Pairs `{θ, r}` with `{θ, r}·{θ', r'} = {θ(p) + θ'(r⁻¹p) + ξ(r, r', p), rr'}`.
pub struct HGroup<E, X> {
    xi: Arc<X>,
    identity: E,
}

impl<E, X> HGroup<E, X>
where
    E: GroupElement<Point = Event> + 'static,
    X: Exponent<E, Scalar = f64> + 'static,
{
    pub fn new(xi: X, identity: E) -> Self {
        Self {
            xi: Arc::new(xi),
            identity,
        }
    }

    /// `ĕ = {0, e}`.
    pub fn unit(&self) -> HElement<E> {
        HElement {
            theta: Arc::new(|_| 0.0),
            r: self.identity.clone(),
        }
    }

    pub fn element(&self, theta: impl Fn(&Event) -> f64 + Send + Sync + 'static, r: E) -> HElement<E> {
        HElement {
            theta: Arc::new(theta),
            r,
        }
    }

    pub fn multiply(&self, h1: &HElement<E>, h2: &HElement<E>) -> HElement<E> {
        let (t1, t2) = (h1.theta.clone(), h2.theta.clone());
        let (r1, r2) = (h1.r.clone(), h2.r.clone());
        let r1inv = r1.inverse();
        let xi = self.xi.clone();
        let r = r1.compose(&r2);
        HElement {
            theta: Arc::new(move |p| t1(p) + t2(&r1inv.act(p)) + xi.xi(&r1, &r2, p)),
            r,
        }
    }

    /// `{θ, r}⁻¹ = {−θ(rp) − ξ(r, r⁻¹, rp), r⁻¹}`.
    pub fn inverse(&self, h: &HElement<E>) -> HElement<E> {
        let t = h.theta.clone();
        let r = h.r.clone();
        let rinv = r.inverse();
        let xi = self.xi.clone();
        let rinv2 = rinv.clone();
        HElement {
            theta: Arc::new(move |p| {
                let rp = r.act(p);
                -t(&rp) - xi.xi(&r, &rinv2, &rp)
            }),
            r: rinv,
        }
    }
}

/// Step schedule for [`richardson`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RichardsonConfig {
    pub tau0: f64,
    pub levels: usize,
}

impl Default for RichardsonConfig {
    fn default() -> Self {
        Self { tau0: 0.1, levels: 6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extrapolation {
    pub value: f64,
    pub error_estimate: f64,
    /// Leading error order estimated from the first three steps; `None` when
    /// the sequence was already flat at rounding level.
    pub order: Option<f64>,
    pub steps: Vec<f64>,
    pub values: Vec<f64>,
}

/// Extrapolates `lim_{τ→0} f(τ)` from `τ_k = τ₀ 2⁻ᵏ`, `k < levels`.
///
/// The leading order is estimated from the data and successive columns
/// eliminate orders `p, p+1, …` on the finest samples; the entry with the smallest
/// change is returned. Fails if the raw differences do not shrink, or the
/// extrapolated change never drops by a factor 10 and is not already at
/// rounding level.
pub fn richardson(f: impl Fn(f64) -> f64, cfg: RichardsonConfig) -> Result<Extrapolation, GroupError> {
    if cfg.levels < 3 || !(cfg.tau0 > 0.0) {
        return Err(GroupError::InvalidParameter {
            what: "richardson schedule",
            value: format!("{cfg:?}"),
        });
    }
    let steps: Vec<f64> = (0..cfg.levels).map(|k| cfg.tau0 / 2f64.powi(k as i32)).collect();
    let values: Vec<f64> = steps.iter().map(|&h| f(h)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(GroupError::NonConvergent(format!("non-finite samples {values:?}")));
    }
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-11 * scale;
    let spread = values.iter().map(|v| (v - values[0]).abs()).fold(0.0, f64::max);
    if spread <= floor {
        return Ok(Extrapolation {
            value: *values.last().unwrap(),
            error_estimate: spread,
            order: None,
            steps,
            values,
        });
    }
    let (d1, d2) = (values[0] - values[1], values[1] - values[2]);
    let order = if d2 != 0.0 { (d1 / d2).abs().log2() } else { 1.0 };
    let raw: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    if !(order > 0.5) || raw[raw.len() - 1] >= raw[0] {
        return Err(GroupError::NonConvergent(format!(
            "step differences {raw:?} do not shrink (samples {values:?})"
        )));
    }
    let p = order.round().clamp(1.0, 6.0);
    let n = values.len();
    let mut table = vec![values.clone()];
    for j in 1..n {
        let prev = &table[j - 1];
        let factor = 2f64.powf(p + (j - 1) as f64) - 1.0;
        let col: Vec<f64> = (1..prev.len())
            .map(|k| prev[k] + (prev[k] - prev[k - 1]) / factor)
            .collect();
        table.push(col);
    }
    // column j extrapolated from the j+1 finest samples
    let diag: Vec<f64> = (0..n).map(|j| *table[j].last().expect("column is nonempty")).collect();
    let changes: Vec<f64> = (1..n).map(|j| (diag[j] - diag[j - 1]).abs()).collect();
    let (best, err) = changes
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (j, e)| if *e < acc.1 { (j, *e) } else { acc });
    if err > floor && err * 10.0 > changes[0] {
        return Err(GroupError::NonConvergent(format!(
            "extrapolation changes {changes:?} do not shrink (samples {values:?})"
        )));
    }
    Ok(Extrapolation {
        value: diag[best + 1],
        error_estimate: err,
        order: Some(order),
        steps,
        values,
    })
}

/// `τ⁻² { ξ((τa)(τb), (τa)⁻¹(τb)⁻¹, p) + ξ(τa, τb, p) + ξ((τa)⁻¹, (τb)⁻¹, (τb)⁻¹(τa)⁻¹p) }`.
pub fn bracket_quotient<G, X>(group: &G, xi: &X, a: &[f64], b: &[f64], p: &Event, tau: f64) -> Result<f64, GroupError>
where
    G: SpacetimeGroup,
    X: Exponent<G::Element, Scalar = f64>,
{
    let ea = group.one_parameter(a, tau)?;
    let eb = group.one_parameter(b, tau)?;
    let (ia, ib) = (ea.inverse(), eb.inverse());
    let q = ib.act(&ia.act(p));
    let sum = xi.xi(&ea.compose(&eb), &ia.compose(&ib), p) + xi.xi(&ea, &eb, p) + xi.xi(&ia, &ib, &q);
    Ok(sum / (tau * tau))
}

/// `Ξ(a, b)` at the event `p`, extrapolated from finite exponents.
///
/// The quotient is antisymmetrized, `(F(a,b) − F(b,a))/2`, which removes the
/// symmetric contribution of non-canonical exponents and leaves canonical
/// ones untouched.
pub fn infinitesimal_from_finite<G, X>(
    group: &G,
    xi: &X,
    a: &[f64],
    b: &[f64],
    p: &Event,
    cfg: RichardsonConfig,
) -> Result<Extrapolation, GroupError>
where
    G: SpacetimeGroup,
    X: Exponent<G::Element, Scalar = f64>,
{
    let dim = group.algebra().dim();
    check_dim(a, dim)?;
    check_dim(b, dim)?;
    group.one_parameter(a, 0.0)?;
    group.one_parameter(b, 0.0)?;
    richardson(
        |tau| {
            let ab = bracket_quotient(group, xi, a, b, p, tau).expect("closed forms checked");
            let ba = bracket_quotient(group, xi, b, a, p, tau).expect("closed forms checked");
            0.5 * (ab - ba)
        },
        cfg,
    )
}

/// Basis vector `e_i` as float coefficients.
pub fn basis_coeffs(dim: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = 1.0;
    v
}
