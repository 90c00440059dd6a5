use std::cmp::Ordering;

use cdvf_gb::linalg::{min_minor_valuation, row_echelon, row_echelon_prefix, Matrix};
use cdvf_gb::sensitivity::padic_valuation;
use cdvf_gb::{Cdvf, CdvfContext, Monomial, MonomialOrder};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn monomial() -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(0u32..5, 3).prop_map(Monomial::new)
}

fn orders() -> impl Strategy<Value = MonomialOrder> {
    prop_oneof![Just(MonomialOrder::GREVLEX), Just(MonomialOrder::LEX)]
}

/// Up to 5 x 6, at least as many columns as rows.
fn matrix(bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=6).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-bound..bound, c.max(r)), r)
    })
}

fn to_matrix(ctx: CdvfContext, rows: &[Vec<i64>], k: i64) -> Matrix {
    let ncols = rows[0].len();
    Matrix::new(
        rows.iter()
            .map(|r| r.iter().map(|&v| ctx.from_integer(&BigInt::from(v), k)).collect())
            .collect(),
        ncols,
    )
}

fn in_ball(c: &Cdvf, x: &BigRational, p: u64) -> bool {
    if c.is_exact_zero() {
        return x == &BigRational::from_integer(0.into());
    }
    let center = c.to_rational().unwrap();
    padic_valuation(&(x - center), p).is_none_or(|v| v >= c.order().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn orders_are_total_and_multiplicative(o in orders(), u in monomial(), v in monomial(), w in monomial()) {
        let uv = o.cmp(&u, &v);
        prop_assert_eq!(uv.reverse(), o.cmp(&v, &u));
        prop_assert_eq!(uv == Ordering::Equal, u == v);
        prop_assert_eq!(o.cmp(&u.mul(&w), &v.mul(&w)), uv);
        prop_assert_ne!(o.cmp(&Monomial::one(3), &u.mul(&Monomial::var(3, 0))), Ordering::Greater);
        if o == MonomialOrder::GREVLEX && u.degree() < v.degree() {
            prop_assert_eq!(uv, Ordering::Less);
        }
    }

    #[test]
    fn orders_are_transitive(o in orders(), u in monomial(), v in monomial(), w in monomial()) {
        if o.cmp(&u, &v).is_le() && o.cmp(&v, &w).is_le() {
            prop_assert!(o.cmp(&u, &w).is_le());
        }
    }

    #[test]
    fn monomials_of_degree_are_decreasing(o in orders(), d in 0u32..5) {
        let ms = o.monomials_of_degree(3, d);
        prop_assert_eq!(ms.len(), ((d + 1) * (d + 2) / 2) as usize);
        for w in ms.windows(2) {
            prop_assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater);
        }
    }

    #[test]
    fn echelon_matches_exact_elimination(
        p in prop_oneof![Just(2u64), Just(5u64), Just(7u64)],
        rows in matrix(125),
    ) {
        let k = 12;
        let ctx = CdvfContext::padic(p).unwrap();
        let m = to_matrix(ctx, &rows, k);
        let Ok((e, rep)) = row_echelon_prefix(&m) else { return Ok(()) };
        if rep.loss_bound >= k {
            return Ok(());
        }
        // exact elimination with the same row order
        let mut exact: Vec<Vec<BigRational>> = rep
            .permutation
            .iter()
            .map(|&i| rows[i].iter().map(|&v| BigRational::from_integer(v.into())).collect())
            .collect();
        for pv in &rep.pivots {
            let (r, c) = (pv.position, pv.column);
            for t in r + 1..exact.len() {
                let q = &exact[t][c] / &exact[r][c];
                for j in c..exact[t].len() {
                    let s = &q * &exact[r][j];
                    exact[t][j] -= s;
                }
            }
        }
        for (i, row) in e.rows.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                prop_assert!(in_ball(c, &exact[i][j], p), "entry ({i},{j})");
                if let Some(o) = c.order() {
                    prop_assert!(o >= k - rep.loss_bound);
                }
            }
        }
    }

    #[test]
    fn pivot_valuations_give_minimal_minor(
        p in prop_oneof![Just(2u64), Just(5u64)],
        rows in matrix(125),
    ) {
        let ctx = CdvfContext::padic(p).unwrap();
        let m = to_matrix(ctx, &rows, 30);
        let (_, rep) = row_echelon_prefix(&m).unwrap();
        let l = rep.stop_column;
        if l == 0 {
            return Ok(());
        }
        if let Ok(Some(v)) = min_minor_valuation(&m, l) {
            prop_assert_eq!(v, rep.loss_bound);
        }
    }

    #[test]
    fn full_echelon_has_exact_zeros_below_pivots(rows in matrix(27)) {
        let ctx = CdvfContext::padic(3).unwrap();
        let m = to_matrix(ctx, &rows, 10);
        if let Ok((e, rep)) = row_echelon(&m) {
            for pv in &rep.pivots {
                for r in pv.position + 1..e.nrows() {
                    prop_assert!(e.get(r, pv.column).is_exact_zero());
                }
            }
        }
    }
}
