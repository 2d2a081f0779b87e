//! A one-dimensional Galilean group with exact rational parameters, so the
//! cocycle identity for the mass phase can be checked with no rounding.

use explab::groupexp::*;
use explab::ratpoly::{rat, Rational};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
struct Boost1 {
    v: Rational,
    a: Rational,
    b: Rational,
}

type Point = (Rational, Rational);

impl GroupElement for Boost1 {
    type Point = Point;

    fn try_compose(&self, o: &Self) -> Result<Self, GroupError> {
        Ok(Boost1 {
            v: &self.v + &o.v,
            a: &self.a + &o.a + &self.v * &o.b,
            b: &self.b + &o.b,
        })
    }

    fn inverse(&self) -> Self {
        Boost1 {
            v: -self.v.clone(),
            a: &self.v * &self.b - &self.a,
            b: -self.b.clone(),
        }
    }

    fn act(&self, (x, t): &Point) -> Point {
        (x + &self.v * t + &self.a, t + &self.b)
    }

    fn identity_like(&self) -> Self {
        Boost1 {
            v: Rational::zero(),
            a: Rational::zero(),
            b: Rational::zero(),
        }
    }
}

fn mass_phase(m: Rational) -> FnPhase<Boost1, Rational> {
    FnPhase::new("toy-mass", move |r: &Boost1, (x, t): &Point| {
        -&m * &r.v * x + &m * &r.v * &r.v * t / rat(2, 1)
    })
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.random_range(-20..=20), rng.random_range(1..=7))
}

fn random_boost(rng: &mut ChaCha8Rng) -> Boost1 {
    Boost1 {
        v: random_rat(rng),
        a: random_rat(rng),
        b: random_rat(rng),
    }
}

#[test]
fn toy_group_action_composes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let (r, s) = (random_boost(&mut rng), random_boost(&mut rng));
        let p = (random_rat(&mut rng), random_rat(&mut rng));
        assert_eq!(r.act(&s.act(&p)), r.compose(&s).act(&p));
        assert_eq!(r.compose(&r.inverse()), r.identity_like());
    }
}

#[test]
fn mass_exponent_satisfies_cocycle_identity_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let xi = PhaseExponent(mass_phase(rat(7, 3)));
    let samples: Vec<Triple<Boost1>> = (0..300)
        .map(|_| Triple {
            r: random_boost(&mut rng),
            s: random_boost(&mut rng),
            g: random_boost(&mut rng),
            p: (random_rat(&mut rng), random_rat(&mut rng)),
        })
        .collect();
    for s in &samples {
        assert!(cocycle_defect(&xi, &s.r, &s.s, &s.g, &s.p).is_zero());
    }
    let report = check_cocycle_identities(&xi, &samples);
    assert_eq!(report.max_violation(), 0.0);
}

#[test]
fn mass_exponent_is_time_independent_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let theta = mass_phase(rat(5, 2));
    for _ in 0..100 {
        let (r, s) = (random_boost(&mut rng), random_boost(&mut rng));
        let x = random_rat(&mut rng);
        let at = |t: Rational| finite_exponent(&theta, &r, &s, &(x.clone(), t));
        let base = at(rat(0, 1));
        for t in [rat(1, 3), rat(-9, 2), rat(11, 1)] {
            assert_eq!(at(t), base);
        }
    }
}

#[test]
fn defective_exponent_is_caught_exactly() {
    let bad = FnExponent::new(|r: &Boost1, s: &Boost1, _: &Point| &r.b * &s.b * &s.b);
    let e = Boost1 {
        v: rat(0, 1),
        a: rat(0, 1),
        b: rat(1, 1),
    };
    let p = (rat(0, 1), rat(0, 1));
    assert!(!cocycle_defect(&bad, &e, &e, &e, &p).is_zero());
}
