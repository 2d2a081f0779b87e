use explab::groupexp::*;

const TOL: f64 = 1e-12;

fn close(a: &Event, b: &Event) -> bool {
    a.distance(b) <= TOL * (1.0 + a.x.norm() + a.t.abs())
}

fn check_axioms<G: SpacetimeGroup>(group: &G) {
    for s in random_triples(group, 1000, 11) {
        let e = group.identity();
        let lhs = s.r.compose(&s.s).compose(&s.g).act(&s.p);
        let rhs = s.r.compose(&s.s.compose(&s.g)).act(&s.p);
        assert!(close(&lhs, &rhs), "associativity");
        assert!(close(&s.r.compose(&e).act(&s.p), &s.r.act(&s.p)), "right unit");
        assert!(close(&e.compose(&s.r).act(&s.p), &s.r.act(&s.p)), "left unit");
        assert!(close(&s.r.compose(&s.r.inverse()).act(&s.p), &s.p), "inverse");
        assert!(close(&s.r.inverse().compose(&s.r).act(&s.p), &s.p), "inverse");
        let acted = s.r.act(&s.s.act(&s.p));
        assert!(close(&acted, &s.r.compose(&s.s).act(&s.p)), "action is a homomorphism");
    }
}

#[test]
fn galilean_group_axioms() {
    check_axioms(&GalileanGroup);
}

#[test]
fn milne_group_axioms() {
    for order in 1..=3 {
        check_axioms(&MilneGroup::new(order).unwrap());
    }
}

#[test]
fn milne_order_zero_rejected() {
    assert!(MilneGroup::new(0).is_err());
}

#[test]
fn one_parameter_families_are_homomorphisms() {
    let group = MilneGroup::new(2).unwrap();
    let dim = 3 + 9 + 1;
    let p = Event::new(Vec3::new(0.1, 0.4, -0.3), 0.25);
    for i in 0..dim {
        let a = basis_coeffs(dim, i);
        let (s, t) = (0.3, -0.7);
        let lhs = group.one_parameter(&a, s).unwrap().compose(&group.one_parameter(&a, t).unwrap());
        let rhs = group.one_parameter(&a, s + t).unwrap();
        assert!(close(&lhs.act(&p), &rhs.act(&p)), "generator {i}");
    }
}
