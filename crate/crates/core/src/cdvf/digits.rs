//! Truncated pi-adic expansions: integers modulo `p^k` for Q_p, coefficient
//! vectors modulo `t^k` for F_p[[t]]. Every function takes the exponent `k`
//! of the modulus explicitly; results are always reduced.

use std::cell::RefCell;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Digits {
    Int(BigUint),
    /// Little-endian coefficients in `[0, p)`, no trailing zeros.
    Series(Vec<u64>),
}

thread_local! {
    static POWERS: RefCell<Vec<(u64, Vec<BigUint>)>> = const { RefCell::new(Vec::new()) };
}

/// Runs `f` on `p^k`, memoising powers per thread.
pub(crate) fn with_pow<R>(p: u64, k: usize, f: impl FnOnce(&BigUint) -> R) -> R {
    POWERS.with(|cell| {
        let mut table = cell.borrow_mut();
        let idx = match table.iter().position(|(q, _)| *q == p) {
            Some(i) => i,
            None => {
                table.push((p, vec![BigUint::one()]));
                table.len() - 1
            }
        };
        let powers = &mut table[idx].1;
        while powers.len() <= k {
            let next = powers.last().unwrap() * p;
            powers.push(next);
        }
        f(&powers[k])
    })
}

pub(crate) fn pow_big(p: u64, k: usize) -> BigUint {
    with_pow(p, k, BigUint::clone)
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn mod_inverse_u64(a: u64, p: u64) -> u64 {
    let (g, x) = {
        let a = BigInt::from(a);
        let e = a.extended_gcd(&BigInt::from(p));
        (e.gcd, e.x)
    };
    debug_assert!(g.is_one());
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

impl Digits {
    pub(crate) fn zero_like(&self) -> Digits {
        match self {
            Digits::Int(_) => Digits::Int(BigUint::zero()),
            Digits::Series(_) => Digits::Series(Vec::new()),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        match self {
            Digits::Int(n) => n.is_zero(),
            Digits::Series(v) => v.is_empty(),
        }
    }

    pub(crate) fn reduce(self, p: u64, k: i64) -> Digits {
        if k <= 0 {
            return self.zero_like();
        }
        match self {
            Digits::Int(n) => with_pow(p, k as usize, |m| {
                if &n >= m {
                    Digits::Int(n % m)
                } else {
                    Digits::Int(n)
                }
            }),
            Digits::Series(mut v) => {
                v.truncate(k as usize);
                Digits::Series(trim(v))
            }
        }
    }

    pub(crate) fn add(&self, other: &Digits, p: u64, k: i64) -> Digits {
        match (self, other) {
            (Digits::Int(a), Digits::Int(b)) => Digits::Int(a + b).reduce(p, k),
            (Digits::Series(a), Digits::Series(b)) => {
                let len = a.len().max(b.len()).min(k.max(0) as usize);
                let v = (0..len)
                    .map(|i| {
                        let x = *a.get(i).unwrap_or(&0) as u128 + *b.get(i).unwrap_or(&0) as u128;
                        (x % p as u128) as u64
                    })
                    .collect();
                Digits::Series(trim(v))
            }
            _ => unreachable!("digit kinds always match within a context"),
        }
    }

    pub(crate) fn neg(&self, p: u64, k: i64) -> Digits {
        if k <= 0 {
            return self.zero_like();
        }
        match self {
            Digits::Int(a) => with_pow(p, k as usize, |m| {
                let a = a % m;
                if a.is_zero() {
                    Digits::Int(a)
                } else {
                    Digits::Int(m - a)
                }
            }),
            Digits::Series(a) => {
                let v = a
                    .iter()
                    .take(k as usize)
                    .map(|&c| (p - c % p) % p)
                    .collect();
                Digits::Series(trim(v))
            }
        }
    }

    pub(crate) fn mul(&self, other: &Digits, p: u64, k: i64) -> Digits {
        if k <= 0 {
            return self.zero_like();
        }
        match (self, other) {
            (Digits::Int(a), Digits::Int(b)) => Digits::Int(a * b).reduce(p, k),
            (Digits::Series(a), Digits::Series(b)) => {
                let k = k as usize;
                let len = (a.len() + b.len()).saturating_sub(1).min(k);
                let mut acc = vec![0u128; len];
                for (i, &x) in a.iter().enumerate().take(len) {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in b.iter().enumerate().take(len - i) {
                        acc[i + j] = (acc[i + j] + x as u128 * y as u128) % p as u128;
                    }
                }
                Digits::Series(trim(acc.into_iter().map(|c| c as u64).collect()))
            }
            _ => unreachable!("digit kinds always match within a context"),
        }
    }

    /// Number of leading zero pi-digits; `None` for zero.
    pub(crate) fn valuation(&self, p: u64) -> Option<u64> {
        match self {
            Digits::Int(n) => {
                if n.is_zero() {
                    return None;
                }
                let mut v = 0;
                let mut n = n.clone();
                while (&n % p).is_zero() {
                    n /= p;
                    v += 1;
                }
                Some(v)
            }
            Digits::Series(c) => c.iter().position(|&x| x != 0).map(|i| i as u64),
        }
    }

    /// Exact division by `pi^j`; the caller guarantees divisibility.
    pub(crate) fn div_pi(&self, p: u64, j: u64) -> Digits {
        match self {
            Digits::Int(n) => Digits::Int(with_pow(p, j as usize, |m| n / m)),
            Digits::Series(c) => Digits::Series(c.iter().skip(j as usize).copied().collect()),
        }
    }

    pub(crate) fn mul_pi(&self, p: u64, j: u64) -> Digits {
        if j == 0 || self.is_zero() {
            return self.clone();
        }
        match self {
            Digits::Int(n) => Digits::Int(with_pow(p, j as usize, |m| n * m)),
            Digits::Series(c) => {
                let mut v = vec![0; j as usize];
                v.extend_from_slice(c);
                Digits::Series(v)
            }
        }
    }

    /// Inverse of a unit modulo `pi^k`.
    pub(crate) fn inv_unit(&self, p: u64, k: i64) -> Digits {
        if k <= 0 {
            return self.zero_like();
        }
        match self {
            Digits::Int(n) => with_pow(p, k as usize, |m| {
                let a = BigInt::from_biguint(Sign::Plus, n.clone());
                let m = BigInt::from_biguint(Sign::Plus, m.clone());
                let e = a.extended_gcd(&m);
                debug_assert!(e.gcd.is_one(), "inverse of a non-unit");
                Digits::Int(e.x.mod_floor(&m).to_biguint().unwrap())
            }),
            Digits::Series(c) => {
                let k = k as usize;
                let c0 = c[0];
                let c0_inv = mod_inverse_u64(c0, p);
                let mut inv = vec![0u64; k];
                inv[0] = c0_inv;
                for i in 1..k {
                    let mut s: u128 = 0;
                    for j in 1..=i.min(c.len() - 1) {
                        s = (s + c[j] as u128 * inv[i - j] as u128) % p as u128;
                    }
                    let s = (p as u128 - s) % p as u128;
                    inv[i] = ((s * c0_inv as u128) % p as u128) as u64;
                }
                Digits::Series(trim(inv))
            }
        }
    }

    /// pi-adic digits, least significant first, padded to `len`.
    pub(crate) fn expansion(&self, p: u64, len: usize) -> Vec<u64> {
        match self {
            Digits::Int(n) => {
                let mut n = n.clone();
                (0..len)
                    .map(|_| {
                        let d = (&n % p).to_u64().unwrap();
                        n /= p;
                        d
                    })
                    .collect()
            }
            Digits::Series(c) => (0..len).map(|i| *c.get(i).unwrap_or(&0)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_inverse_mod_power() {
        // 2 * 13 = 26 = 1 mod 25
        let inv = Digits::Int(BigUint::from(2u32)).inv_unit(5, 2);
        assert_eq!(inv, Digits::Int(BigUint::from(13u32)));
    }

    #[test]
    fn series_inverse_of_one_minus_t() {
        // 1/(1 - t) = 1 + t + t^2 + ... over F_3
        let one_minus_t = Digits::Series(vec![1, 2]);
        let inv = one_minus_t.inv_unit(3, 4);
        assert_eq!(inv, Digits::Series(vec![1, 1, 1, 1]));
    }

    #[test]
    fn series_has_no_carries() {
        let a = Digits::Series(vec![2, 2]);
        assert_eq!(a.add(&a, 3, 5), Digits::Series(vec![1, 1]));
    }

    #[test]
    fn valuation_counts_pi_factors() {
        assert_eq!(Digits::Int(BigUint::from(50u32)).valuation(5), Some(2));
        assert_eq!(Digits::Series(vec![0, 0, 4]).valuation(5), Some(2));
        assert_eq!(Digits::Int(BigUint::zero()).valuation(5), None);
    }
}
