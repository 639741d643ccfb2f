use proptest::prelude::*;

use invbraid::engine::Poly;
use invbraid::feasibility::{Constraint, ConstraintSystem, Solutions};
use invbraid::numfield::{FieldElement, LinearPoly};

fn rat(n: i64, d: i64) -> FieldElement {
    FieldElement::from_ratio(n, d)
}

fn arb_poly(vars: usize) -> impl Strategy<Value = LinearPoly> {
    (-4i64..=4, prop::collection::vec(-3i64..=3, vars)).prop_map(|(c, coeffs)| {
        LinearPoly::from_parts(
            rat(c, 1),
            coeffs.into_iter().enumerate().map(|(v, a)| (v, rat(a, 1))),
        )
    })
}

fn arb_constraint(vars: usize) -> impl Strategy<Value = Constraint> {
    (arb_poly(vars), 0u8..4).prop_map(|(p, k)| match k {
        0 => Constraint::eq(p),
        1 => Constraint::ge(p),
        2 => Constraint::gt(p),
        _ => Constraint::le(p),
    })
}

/// Points (a/2, b/2) with |a|, |b| ≤ 16.
fn grid() -> Vec<invbraid::numfield::Assignment> {
    let mut out = Vec::new();
    for a in -16..=16 {
        for b in -16..=16 {
            out.push([(0, rat(a, 2)), (1, rat(b, 2))].into_iter().collect());
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn infeasible_systems_have_no_sample_points(cs in prop::collection::vec(arb_constraint(2), 1..5)) {
        let sys = ConstraintSystem::from_constraints(cs.clone());
        let witness = grid().into_iter().find(|pt| cs.iter().all(|c| c.holds_at(pt) == Some(true)));
        if witness.is_some() {
            prop_assert!(sys.is_feasible());
        }
    }

    #[test]
    fn finite_solutions_satisfy_the_system(cs in prop::collection::vec(arb_constraint(2), 1..5)) {
        let sys = ConstraintSystem::from_constraints(cs.clone());
        if let Solutions::Finite(points) = sys.solutions_if_finite() {
            for pt in &points {
                for c in &cs {
                    prop_assert_eq!(c.holds_at(pt), Some(true), "{} fails", c);
                }
            }
            prop_assert_eq!(points.is_empty(), !sys.is_feasible());
        }
    }

    #[test]
    fn interpolation_reproduces_samples(samples in prop::collection::vec((-20i64..=20, 1i64..=6), 1..7)) {
        let values: Vec<FieldElement> = samples.iter().map(|&(n, d)| rat(n, d)).collect();
        let p = Poly::interpolate(&values);
        prop_assert!(p.degree().is_none_or(|d| d < values.len()));
        for (k, v) in values.iter().enumerate() {
            prop_assert_eq!(&p.eval(k as u64), v);
        }
    }

    #[test]
    fn field_inverse_round_trips(a in -30i64..=30, b in 1i64..=9, c in -5i64..=5) {
        let sqrt2 = FieldElement::surd(invbraid::numfield::Rational::from_integer(c.into()), 2).unwrap();
        let x = &rat(a, b) + &sqrt2;
        match x.inverse() {
            Some(inv) => prop_assert!((&x * &inv).is_one()),
            None => prop_assert!(x.is_zero()),
        }
        prop_assert_eq!(x.sign() >= 0, x.to_f64() >= -1e-12);
    }
}
