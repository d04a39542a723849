//! p-adic helpers on exact rationals: valuations, unit parts, canonical
//! residues modulo powers of p, and rational square roots.

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `p^k` as a rational; `k` may be negative.
pub fn p_pow(p: u64, k: i64) -> BigRational {
    let base = BigInt::from(p);
    let mag = num::pow(base, k.unsigned_abs() as usize);
    if k >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

/// Valuation of a nonzero integer.
pub fn val_int(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Valuation of a rational, `None` for zero.
pub fn val(q: &BigRational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(val_int(q.numer(), p) - val_int(q.denom(), p))
}

/// Splits a nonzero rational as `p^v * u` with `u` a p-adic unit.
pub fn split_unit(q: &BigRational, p: u64) -> (i64, BigRational) {
    let v = val(q, p).expect("split_unit of zero");
    (v, q * p_pow(p, -v))
}

/// Inverse of `d` modulo `m`; `d` must be coprime to `m`.
fn inv_mod(d: &BigInt, m: &BigInt) -> BigInt {
    let e = d.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Image of a p-integral rational in `Z/p^k` as an integer in `[0, p^k)`.
pub fn reduce_int(q: &BigRational, p: u64, k: u32) -> BigInt {
    let m = num::pow(BigInt::from(p), k as usize);
    let n = q.numer().mod_floor(&m);
    let d = inv_mod(q.denom(), &m);
    (n * d).mod_floor(&m)
}

/// Canonical representative of `q` modulo `p^k Z_(p)`: zero when
/// `v(q) >= k`, otherwise `c / p^s` with `s = max(0, -v(q))` and
/// `0 <= c < p^(k+s)`.
pub fn mod_pk(q: &BigRational, p: u64, k: i64) -> BigRational {
    let v = match val(q, p) {
        None => return BigRational::zero(),
        Some(v) => v,
    };
    if v >= k {
        return BigRational::zero();
    }
    let s = (-v).max(0);
    let unit_scaled = q * p_pow(p, s);
    let c = reduce_int(&unit_scaled, p, (k + s) as u32);
    BigRational::new(c, num::pow(BigInt::from(p), s as usize))
}

/// Residue of a p-integral rational modulo p.
pub fn residue(q: &BigRational, p: u64) -> u64 {
    reduce_int(q, p, 1).to_u64().unwrap()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Exact square root in Q, if any.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    if q.is_zero() {
        return Some(BigRational::zero());
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &n * &n == *q.numer() && &d * &d == *q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Whether the nonzero rational `q` is a square in `Q_p`.
pub fn is_padic_square(q: &BigRational, p: u64) -> bool {
    let (v, u) = split_unit(q, p);
    if v % 2 != 0 {
        return false;
    }
    if p == 2 {
        reduce_int(&u, 2, 3) == BigInt::one()
    } else {
        let r = BigInt::from(residue(&u, p));
        let e = BigInt::from((p - 1) / 2);
        r.modpow(&e, &BigInt::from(p)).is_one()
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}
