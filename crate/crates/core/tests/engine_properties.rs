use cdvf_gb::f5::{affine_weak_mf5, prec_mac, prec_mf5, weak_mf5, SystemInput};
use cdvf_gb::lifting::{reduce_lifted, weak_lift_exact};
use cdvf_gb::oracle::{buchberger_reduced, check_regular_sequence, check_weakly_w, OracleLimits};
use cdvf_gb::{reduce, Cdvf, CdvfContext, Monomial, MonomialOrder, Polynomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

type Q = Polynomial<BigRational>;
const W: MonomialOrder = MonomialOrder::GREVLEX;

/// Dense homogeneous polynomials in three variables with small coefficients.
fn system(degrees: &'static [u32]) -> impl Strategy<Value = Vec<Q>> {
    let sizes: Vec<usize> = degrees.iter().map(|&d| W.monomials_of_degree(3, d).len()).collect();
    sizes
        .into_iter()
        .map(|n| proptest::collection::vec(-9i64..10, n))
        .collect::<Vec<_>>()
        .prop_map(move |coeffs| {
            degrees
                .iter()
                .zip(coeffs)
                .map(|(&d, cs)| {
                    Polynomial::from_terms(
                        3,
                        W,
                        W.monomials_of_degree(3, d)
                            .into_iter()
                            .zip(cs)
                            .map(|(m, c)| (m, BigRational::from_integer(c.into()))),
                    )
                })
                .collect()
        })
        .prop_filter("nonzero generators", |f: &Vec<Q>| f.iter().all(|p| !p.is_zero()))
}

fn approx(f: &[Q], ctx: CdvfContext, prec: i64) -> Vec<Polynomial<Cdvf>> {
    f.iter().map(|p| p.map_coefficients(|c| ctx.from_bigrational(c, prec).unwrap())).collect()
}

fn lms<C: cdvf_gb::Scalar>(g: &[Polynomial<C>]) -> Vec<Monomial> {
    g.iter().map(|p| p.leading_monomial().unwrap().clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coordinates_reproduce_the_basis(f in system(&[2, 2, 3])) {
        let ctx = CdvfContext::padic(7).unwrap();
        let fa = approx(&f, ctx, 20);
        let input = SystemInput::with_macaulay_bound(fa.clone(), W).unwrap();
        let Ok(res) = weak_mf5(&input) else { return Ok(()) };
        let m = res.coordinates.as_ref().unwrap();
        for (k, g) in res.basis.iter().enumerate() {
            let mut acc = Polynomial::zero(3, W);
            for (j, fj) in fa.iter().enumerate() {
                acc = acc.add(&fj.mul(&m[j][k]));
            }
            let diff = acc.sub(g);
            prop_assert!(diff.terms().iter().all(|(_, c)| c.is_indistinguishable_from_zero()), "{diff}");
        }
    }

    #[test]
    fn realized_loss_is_bounded(f in system(&[2, 2, 3])) {
        let ctx = CdvfContext::padic(5).unwrap();
        let input = SystemInput::with_macaulay_bound(approx(&f, ctx, 30), W).unwrap();
        let Ok(res) = weak_mf5(&input) else { return Ok(()) };
        if res.report.certified {
            prop_assert!(res.realized_loss() <= res.report.bound);
        }
        let mac = prec_mac(&input).unwrap();
        let mf5 = prec_mf5(&input).unwrap();
        if mac.certified && mf5.certified {
            prop_assert!(mac.bound <= mf5.bound);
        }
    }

    #[test]
    fn leading_monomials_match_the_oracle(f in system(&[2, 3])) {
        let cap = cdvf_gb::f5::macaulay_bound(&[2, 3]);
        prop_assume!(check_regular_sequence(&f, W, cap).unwrap() && check_weakly_w(&f, W, cap).unwrap());
        let ctx = CdvfContext::padic(7).unwrap();
        let input = SystemInput::new(approx(&f, ctx, 40), cap, W).unwrap();
        let res = weak_mf5(&input).unwrap();
        let exact = buchberger_reduced(&f, W, Some(cap), OracleLimits::default()).unwrap();
        prop_assert_eq!(&res.leading_monomials, &lms(&exact));

        let lifted = reduce_lifted(weak_lift_exact(&f, &res).unwrap()).unwrap();
        prop_assert_eq!(&lifted.basis, &exact);
    }

    #[test]
    fn oracle_output_is_reduced(f in system(&[2, 2])) {
        let g = buchberger_reduced(&f, W, None, OracleLimits::default()).unwrap();
        for p in &f {
            prop_assert!(reduce(p, &g).unwrap().is_zero());
        }
        let leads = lms(&g);
        for (k, gk) in g.iter().enumerate() {
            prop_assert_eq!(gk.leading_term().unwrap().1, &BigRational::from_integer(BigInt::from(1)));
            for (j, l) in leads.iter().enumerate() {
                if j != k {
                    prop_assert!(gk.terms().iter().all(|(m, _)| !l.divides(m)));
                }
            }
        }
    }

    #[test]
    fn affine_on_homogeneous_input_is_weak_mf5(f in system(&[2, 2])) {
        let ctx = CdvfContext::padic(5).unwrap();
        let input = SystemInput::with_macaulay_bound(approx(&f, ctx, 15), W).unwrap();
        prop_assert_eq!(affine_weak_mf5(&input), weak_mf5(&input));
    }
}
