use std::sync::Arc;

use explab::classify::*;
use explab::cochain::{is_cocycle, TwoCochain};
use explab::groupexp::*;
use explab::lie::{galilean, milne, milne_index, LieAlgebra};
use explab::ratpoly::{rat, RationalPoly};

#[test]
fn milne_quotient_is_stable_past_the_auto_degree() {
    for m in 1..=3usize {
        let low = classify(milne(m).unwrap(), DegreeMode::Fixed(2 * m - 1)).unwrap();
        let high = classify(milne(m).unwrap(), DegreeMode::Fixed(2 * m + 2)).unwrap();
        assert_eq!(low.quotient_dim, m * (m + 1) / 2);
        assert_eq!(high.quotient_dim, low.quotient_dim);
    }
}

#[test]
fn classification_is_deterministic() {
    let a = serde_json::to_string(&classify(milne(3).unwrap(), DegreeMode::default()).unwrap()).unwrap();
    let b = serde_json::to_string(&classify(milne(3).unwrap(), DegreeMode::default()).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn degree_cap_aborts() {
    assert!(matches!(
        classify(milne(4).unwrap(), DegreeMode::Auto { cap: 2 }),
        Err(ClassifyError::DegreeCap { .. })
    ));
}

fn heisenberg() -> LieAlgebra {
    let mut b = LieAlgebra::builder(["p", "q", "z"]).unwrap();
    b.add_bracket_term(0, 1, 2, rat(1, 1)).unwrap();
    b.build().unwrap()
}

fn so3() -> LieAlgebra {
    let mut b = LieAlgebra::builder(["j1", "j2", "j3"]).unwrap();
    b.add_bracket_term(0, 1, 2, rat(1, 1)).unwrap();
    b.add_bracket_term(1, 2, 0, rat(1, 1)).unwrap();
    b.add_bracket_term(2, 0, 1, rat(1, 1)).unwrap();
    b.build().unwrap()
}

#[test]
fn small_algebras_without_time() {
    // Heisenberg: all three forms are cocycles, [p,q] = z kills one class.
    let h = classify(heisenberg(), DegreeMode::default()).unwrap();
    assert_eq!((h.cocycle_dim, h.coboundary_dim, h.quotient_dim), (3, 1, 2));
    // Semisimple: every cocycle is trivial.
    let s = classify(so3(), DegreeMode::default()).unwrap();
    assert_eq!((s.cocycle_dim, s.coboundary_dim, s.quotient_dim), (3, 3, 0));
}

#[test]
fn galilean_extraction_matches_classification() {
    let c = classify(galilean(), DegreeMode::default()).unwrap();
    let rep = &c.representatives[0];
    let dim = c.alg.dim();
    let p = Event::new(Vec3::new(-0.4, 0.9, 0.2), -1.3);
    let xi = PhaseExponent(GalileanMass { mass: 3.0 });
    for i in 0..dim {
        for j in 0..dim {
            if i == j {
                continue;
            }
            let got = infinitesimal_from_finite(
                &GalileanGroup,
                &xi,
                &basis_coeffs(dim, i),
                &basis_coeffs(dim, j),
                &p,
                RichardsonConfig::default(),
            )
            .unwrap();
            let want = 3.0 * explab::ratpoly::rational_to_f64(&rep.get(i, j).coeff(0));
            assert!((got.value - want).abs() < 1e-8, "({i},{j}): {} vs {want}", got.value);
        }
    }
}

/// `Ξ(d_k^(0), d_k^(1)) = −1`, `Ξ(d_k^(0), d_k^(2)) = −t`, `Ξ(d_k^(1), d_k^(2)) = −t²/2`.
fn expected_milne2(alg: Arc<LieAlgebra>) -> TwoCochain {
    let mut xi = TwoCochain::zero(alg);
    for k in 1..=3 {
        xi.set(milne_index(k, 0), milne_index(k, 1), RationalPoly::from_i64s(&[-1])).unwrap();
        xi.set(milne_index(k, 0), milne_index(k, 2), RationalPoly::from_i64s(&[0, -1])).unwrap();
        xi.set(milne_index(k, 1), milne_index(k, 2), RationalPoly::monomial(rat(-1, 2), 2)).unwrap();
    }
    xi
}

#[test]
fn milne_extraction_is_a_realizable_cocycle() {
    let alg = Arc::new(milne(2).unwrap());
    let expected = expected_milne2(alg.clone());
    assert!(is_cocycle(&expected));
    let gammas = milne_gammas(&expected, 2);
    assert_eq!(gammas.iter().find(|(n, _)| n == "gamma_(1,2)").unwrap().1, rat(0, 1));

    let group = MilneGroup::new(2).unwrap();
    let xi = PhaseExponent(MilneSchrodinger { mass: 1.0 });
    let dim = alg.dim();
    for t in [0.0, 0.6, -1.1] {
        let p = Event::new(Vec3::new(0.2, -0.5, 0.7), t);
        for i in 0..dim {
            for j in i + 1..dim {
                let got = infinitesimal_from_finite(
                    &group,
                    &xi,
                    &basis_coeffs(dim, i),
                    &basis_coeffs(dim, j),
                    &p,
                    RichardsonConfig::default(),
                )
                .unwrap();
                let want = expected.get(i, j).evaluate_f64(t);
                assert!(
                    (got.value - want).abs() < 1e-8,
                    "t={t} ({}, {}): {} vs {want}",
                    alg.label(i),
                    alg.label(j),
                    got.value
                );
            }
        }
    }

    // The realizable classes are exactly those with γ_(1,2) = 0; the chart
    // fixes a class, so the extracted cocycle lies among them.
    let c = classify(alg, DegreeMode::default()).unwrap();
    let realizable = realizable_subspace(&c, 2).unwrap();
    assert_eq!(realizable.quotient_dim, 2);
    for v in &realizable.coordinates.as_ref().unwrap().values {
        assert_eq!(v[2], rat(0, 1));
    }
}

#[test]
fn corrupted_milne_representative_fails_recurrence() {
    let alg = Arc::new(milne(2).unwrap());
    let mut bad = TwoCochain::zero(alg.clone());
    for k in 1..=3 {
        bad.set(milne_index(k, 0), milne_index(k, 1), RationalPoly::from_i64s(&[1])).unwrap();
        bad.set(milne_index(k, 1), milne_index(k, 2), RationalPoly::from_i64s(&[3])).unwrap();
    }
    let mut c = classify(alg, DegreeMode::default()).unwrap();
    c.representatives = vec![bad];
    let report = verify_milne_structure(&c, 2).unwrap();
    assert!(!report.check("recurrence").unwrap().passed());
    assert!(report.check("antisymmetry").unwrap().passed());
    assert!(report.check("isotropy").unwrap().passed());
}
