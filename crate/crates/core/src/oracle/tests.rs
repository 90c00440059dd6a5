use num_rational::BigRational;

use super::*;
use crate::scalar::Fp;
use crate::text::{parse_polynomial, RationalSource};

type Q = Polynomial<BigRational>;

fn exact(polys: &[&str]) -> Vec<Q> {
    let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    polys
        .iter()
        .map(|s| parse_polynomial(s, &vars, MonomialOrder::GREVLEX, &RationalSource).unwrap())
        .collect()
}

fn gb(polys: &[&str]) -> Vec<Q> {
    buchberger_reduced(&exact(polys), MonomialOrder::GREVLEX, None, OracleLimits::default()).unwrap()
}

#[test]
fn small_reduced_bases() {
    assert_eq!(gb(&["x", "y"]), exact(&["x", "y"]));
    assert_eq!(gb(&["x + y", "x*y"]), exact(&["x + y", "y^2"]));
    assert_eq!(gb(&["x", "x*y^2 + y^3 + z^3"]), exact(&["x", "y^3 + z^3"]));
    assert_eq!(gb(&["2*x + 4*y"]), exact(&["x + 2*y"]));
}

#[test]
fn inputs_reduce_to_zero() {
    let f = exact(&["x^2 + y*z - 3*z^2", "x*y - 2*y^2 + x*z", "y^3 + x*z^2 - z^3"]);
    let g = buchberger_reduced(&f, MonomialOrder::GREVLEX, None, OracleLimits::default()).unwrap();
    for p in &f {
        assert!(reduce(p, &g).unwrap().is_zero());
    }
    for (k, gk) in g.iter().enumerate() {
        assert!(gk.leading_term().unwrap().1 == &BigRational::from_integer(1.into()));
        for (j, gj) in g.iter().enumerate() {
            if j != k {
                let lm = gj.leading_monomial().unwrap();
                assert!(gk.terms().iter().all(|(m, _)| !lm.divides(m)));
            }
        }
    }
}

#[test]
fn finite_field_basis() {
    type F7 = Fp<7>;
    let n = 2;
    let o = MonomialOrder::GREVLEX;
    let m = |e: [u32; 2]| Monomial::new(e);
    let f = vec![
        Polynomial::from_terms(n, o, [(m([1, 0]), F7::new(1)), (m([0, 1]), F7::new(1))]),
        Polynomial::from_terms(n, o, [(m([1, 1]), F7::new(3))]),
    ];
    let g = buchberger_reduced(&f, o, None, OracleLimits::default()).unwrap();
    assert_eq!(g.len(), 2);
    assert_eq!(g[1].terms(), &[(m([0, 2]), F7::new(1))]);
}

#[test]
fn structural_hypotheses() {
    let o = MonomialOrder::GREVLEX;
    let a = exact(&["x + y", "x*y + y^2 + z^2"]);
    assert!(check_regular_sequence(&a, o, 4).unwrap());
    assert!(!check_weakly_w(&a, o, 4).unwrap());
    let b = exact(&["x + y", "x^2 + x*y"]);
    assert!(!check_regular_sequence(&b, o, 4).unwrap());
    assert!(check_weakly_w(&b, o, 4).unwrap());
    let c = exact(&["x", "x*y^2 + y^3 + z^3"]);
    assert!(check_regular_sequence(&c, o, 4).unwrap());
    assert!(check_weakly_w(&c, o, 4).unwrap());
}

#[test]
fn hilbert_function_of_regular_sequences() {
    // two quadrics in three variables: 1, 3, 4, 4, 4, ...
    assert_eq!(regular_hilbert_function(3, &[2, 2], 4), vec![1, 3, 4, 4, 4]);
    // complete intersection of degrees 1, 1: 1, 1, 1
    assert_eq!(regular_hilbert_function(3, &[1, 1], 2), vec![1, 1, 1]);
}

#[test]
fn truncation_requires_homogeneous_input() {
    let f = exact(&["x - 1"]);
    assert_eq!(
        buchberger_reduced(&f, MonomialOrder::GREVLEX, Some(3), OracleLimits::default()),
        Err(OracleError::NotHomogeneous)
    );
}
