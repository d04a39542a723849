//! Exact models of the base local field (Q with the p-adic valuation) and of
//! its quadratic extensions.
//!
//! A quadratic field is given by a monic `g(x) = x^2 + g1 x + g0` with root
//! `θ`. Internally every element is stored in an integral basis `{1, ω}` of
//! the valuation ring, `ω = (θ - offset) / p^k`, where `ω` is a uniformizer
//! when the extension is ramified. Membership in the valuation ring is then
//! a coordinatewise test.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::{BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::padic::{self, p_pow, rat};

#[derive(Debug)]
struct Quadratic {
    g0: BigRational,
    g1: BigRational,
    offset: BigRational,
    shift: u32,
    h0: BigRational,
    h1: BigRational,
    e: u32,
}

#[derive(Debug)]
struct FieldData {
    p: u64,
    quad: Option<Quadratic>,
}

/// A base field or a quadratic extension. Cheap to clone.
#[derive(Clone, Debug)]
pub struct Field(Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        self.0.p == other.0.p
            && match (&self.0.quad, &other.0.quad) {
                (None, None) => true,
                (Some(a), Some(b)) => a.g0 == b.g0 && a.g1 == b.g1,
                _ => false,
            }
    }
}

impl Eq for Field {}

/// Reduction of a valuation-ring element modulo the maximal ideal, as
/// digits over `Z/p` (one digit per residue degree).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueElement(pub Vec<u64>);

impl Field {
    pub fn base(p: u64) -> Result<Field> {
        if !padic::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field(Arc::new(FieldData { p, quad: None })))
    }

    /// The quadratic extension of `base` generated by a root of
    /// `x^2 + g1 x + g0`.
    pub fn quadratic(base: &Field, g0: BigRational, g1: BigRational) -> Result<Field> {
        if !base.is_base() {
            return Err(Error::BadParams("extension of a non-base field".into()));
        }
        let p = base.p();
        let integral = |c: &BigRational| padic::val(c, p).is_none_or(|v| v >= 0);
        if !integral(&g0) || !integral(&g1) {
            return Err(Error::NotIntegral);
        }
        let disc = &g1 * &g1 - rat(4) * &g0;
        if disc.is_zero() || padic::is_padic_square(&disc, p) {
            return Err(Error::Reducible);
        }

        // Conductor search: replace ω by (ω - c)/p while the result stays integral.
        let (mut offset, mut shift) = (BigRational::zero(), 0u32);
        let (mut h0, mut h1) = (g0.clone(), g1.clone());
        let divisible = |x: &BigRational, k: i64| padic::val(x, p).is_none_or(|v| v >= k);
        'outer: loop {
            for c in 0..p {
                let c = rat(c as i64);
                let lin = rat(2) * &c + &h1;
                let cst = &c * &c + &h1 * &c + &h0;
                if divisible(&lin, 1) && divisible(&cst, 2) {
                    offset += &c * p_pow(p, shift as i64);
                    shift += 1;
                    h1 = lin / rat(p as i64);
                    h0 = cst / rat((p * p) as i64);
                    continue 'outer;
                }
            }
            break;
        }

        let root = (0..p).find(|&c| {
            let c = rat(c as i64);
            divisible(&(&c * &c + &h1 * &c + &h0), 1)
        });
        let e = match root {
            None => 1,
            Some(c) => {
                // double root mod p: shift ω so that it becomes a uniformizer
                let c = rat(c as i64);
                offset += &c * p_pow(p, shift as i64);
                let new_h0 = &c * &c + &h1 * &c + &h0;
                h1 = rat(2) * &c + &h1;
                h0 = new_h0;
                debug_assert_eq!(padic::val(&h0, p), Some(1));
                2
            }
        };
        Ok(Field(Arc::new(FieldData {
            p,
            quad: Some(Quadratic {
                g0,
                g1,
                offset,
                shift,
                h0,
                h1,
                e,
            }),
        })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn is_base(&self) -> bool {
        self.0.quad.is_none()
    }

    pub fn is_ramified(&self) -> bool {
        self.e() == 2
    }

    pub fn e(&self) -> u32 {
        self.0.quad.as_ref().map_or(1, |q| q.e)
    }

    pub fn f(&self) -> u32 {
        match &self.0.quad {
            None => 1,
            Some(q) => 3 - q.e,
        }
    }

    pub fn degree(&self) -> u32 {
        if self.is_base() {
            1
        } else {
            2
        }
    }

    /// Residue field size.
    pub fn q(&self) -> u64 {
        self.p().pow(self.f())
    }

    /// Coefficients `(g0, g1)` of the defining polynomial.
    pub fn defining_poly(&self) -> Option<(BigRational, BigRational)> {
        self.0.quad.as_ref().map(|q| (q.g0.clone(), q.g1.clone()))
    }

    /// Minimal polynomial `(h0, h1)` of the integral generator ω.
    pub fn integral_generator_poly(&self) -> Option<(BigRational, BigRational)> {
        self.0.quad.as_ref().map(|q| (q.h0.clone(), q.h1.clone()))
    }

    /// `(offset, k)` with `ω = (θ - offset) / p^k`.
    pub fn integral_generator_shift(&self) -> Option<(BigRational, u32)> {
        self.0.quad.as_ref().map(|q| (q.offset.clone(), q.shift))
    }

    /// The underlying base field with the same prime.
    pub fn base_field(&self) -> Field {
        if self.is_base() {
            self.clone()
        } else {
            Field(Arc::new(FieldData {
                p: self.p(),
                quad: None,
            }))
        }
    }

    pub fn scalar(&self, c0: BigRational, c1: BigRational) -> Scalar {
        debug_assert!(!self.is_base() || c1.is_zero());
        Scalar {
            field: self.clone(),
            c0,
            c1,
        }
    }

    pub fn from_rational(&self, x: BigRational) -> Scalar {
        self.scalar(x, BigRational::zero())
    }

    pub fn int(&self, n: i64) -> Scalar {
        self.from_rational(rat(n))
    }

    pub fn zero(&self) -> Scalar {
        self.int(0)
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    /// The integral generator ω (for the base field: 0).
    pub fn omega(&self) -> Scalar {
        if self.is_base() {
            self.zero()
        } else {
            self.scalar(BigRational::zero(), BigRational::one())
        }
    }

    /// The root θ of the defining polynomial.
    pub fn theta(&self) -> Result<Scalar> {
        self.from_theta_coords(BigRational::zero(), BigRational::one())
    }

    /// `a + bθ`.
    pub fn from_theta_coords(&self, a: BigRational, b: BigRational) -> Result<Scalar> {
        match &self.0.quad {
            None if b.is_zero() => Ok(self.from_rational(a)),
            None => Err(Error::FieldMismatch),
            Some(q) => {
                let scale = p_pow(self.p(), q.shift as i64);
                Ok(self.scalar(a + &b * &q.offset, b * scale))
            }
        }
    }

    pub fn uniformizer(&self) -> Scalar {
        if self.is_ramified() {
            self.omega()
        } else {
            self.int(self.p() as i64)
        }
    }

    /// `π^k`, any sign of `k`.
    pub fn pi_pow(&self, k: i64) -> Scalar {
        if !self.is_ramified() {
            return self.from_rational(p_pow(self.p(), k));
        }
        let step = if k >= 0 {
            self.omega()
        } else {
            self.omega().inv().expect("uniformizer is invertible")
        };
        let mut out = self.one();
        for _ in 0..k.unsigned_abs() {
            out = &out * &step;
        }
        out
    }

    /// All residue field elements, in canonical order.
    pub fn residue_elements(&self) -> Vec<ResidueElement> {
        let p = self.p();
        (0..self.q())
            .map(|i| match self.f() {
                1 => ResidueElement(vec![i]),
                _ => ResidueElement(vec![i % p, i / p]),
            })
            .collect()
    }

    /// Lift of a residue using the digit set `{0, …, p-1}` per coordinate.
    pub fn residue_lift(&self, r: &ResidueElement) -> Scalar {
        let d0 = rat(r.0[0] as i64);
        if self.f() == 2 {
            self.scalar(d0, rat(r.0[1] as i64))
        } else {
            self.from_rational(d0)
        }
    }

    pub fn residue_add(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        let p = self.p();
        ResidueElement(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % p).collect())
    }

    pub fn residue_mul(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        let p = self.p();
        if self.f() == 1 {
            return ResidueElement(vec![(a.0[0] * b.0[0]) % p]);
        }
        let (h0, h1) = self.integral_generator_poly().unwrap();
        let h0 = padic::residue(&h0, p);
        let h1 = padic::residue(&h1, p);
        let (x0, x1, y0, y1) = (a.0[0], a.0[1], b.0[0], b.0[1]);
        let bd = (x1 * y1) % p;
        let c0 = (x0 * y0 + p * p - (bd * h0) % p) % p;
        let c1 = (x0 * y1 + x1 * y0 + p * p - (bd * h1) % p) % p;
        ResidueElement(vec![c0, c1])
    }

    /// Image of a base-field scalar in this field.
    pub fn embed(&self, x: &Scalar) -> Scalar {
        debug_assert!(x.field.is_base() && x.field.p() == self.p());
        self.from_rational(x.c0.clone())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.quad {
            None => write!(f, "Q_{}", self.p()),
            Some(q) => write!(
                f,
                "Q_{}[x]/(x^2 + ({})x + ({}))",
                self.p(),
                padic::format_rational(&q.g1),
                padic::format_rational(&q.g0)
            ),
        }
    }
}

/// An exact element of a [`Field`].
#[derive(Clone)]
pub struct Scalar {
    field: Field,
    c0: BigRational,
    c1: BigRational,
}

impl Scalar {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Coordinates in the integral basis `{1, ω}`.
    pub fn coords(&self) -> (&BigRational, &BigRational) {
        (&self.c0, &self.c1)
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    /// Norm to the base field (the element itself for the base field).
    pub fn norm(&self) -> BigRational {
        match &self.field.0.quad {
            None => self.c0.clone(),
            Some(q) => {
                &self.c0 * &self.c0 - &q.h1 * &self.c0 * &self.c1 + &q.h0 * &self.c1 * &self.c1
            }
        }
    }

    /// Trace to the base field.
    pub fn trace(&self) -> BigRational {
        match &self.field.0.quad {
            None => self.c0.clone(),
            Some(q) => rat(2) * &self.c0 - &q.h1 * &self.c1,
        }
    }

    /// Normalized valuation (`v(π) = 1`); `None` stands for `+∞`.
    pub fn val(&self) -> Option<i64> {
        let p = self.field.p();
        match &self.field.0.quad {
            None => padic::val(&self.c0, p),
            Some(q) => {
                let v = padic::val(&self.norm(), p)?;
                Some(if q.e == 2 { v } else { v / 2 })
            }
        }
    }

    pub fn is_integral(&self) -> bool {
        let p = self.field.p();
        let ok = |c: &BigRational| padic::val(c, p).is_none_or(|v| v >= 0);
        ok(&self.c0) && ok(&self.c1)
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match &self.field.0.quad {
            None => Some(self.field.from_rational(self.c0.recip())),
            Some(_) => {
                let n = self.norm();
                let c = self.conj().expect("quadratic");
                Some(self.field.scalar(c.c0 / &n, c.c1 / &n))
            }
        }
    }

    /// Division; panics on a zero divisor.
    pub fn div(&self, other: &Scalar) -> Scalar {
        self * &other.inv().expect("division by zero")
    }

    pub fn conj(&self) -> Result<Scalar> {
        match &self.field.0.quad {
            None => Err(Error::BaseFieldHasNoConjugation),
            Some(q) => Ok(self
                .field
                .scalar(&self.c0 - &self.c1 * &q.h1, -self.c1.clone())),
        }
    }

    /// Canonical representative of the class of `self` modulo `π^a O`.
    pub fn mod_pi_pow(&self, a: i64) -> Scalar {
        let p = self.field.p();
        match &self.field.0.quad {
            None => self.field.from_rational(padic::mod_pk(&self.c0, p, a)),
            Some(q) if q.e == 1 => self
                .field
                .scalar(padic::mod_pk(&self.c0, p, a), padic::mod_pk(&self.c1, p, a)),
            Some(_) => {
                // π^a O = p^(m+ε) Z ⊕ p^m Z ω with a = 2m + ε
                let m = a.div_euclid(2);
                let eps = a.rem_euclid(2);
                self.field.scalar(
                    padic::mod_pk(&self.c0, p, m + eps),
                    padic::mod_pk(&self.c1, p, m),
                )
            }
        }
    }

    pub fn residue(&self) -> Result<ResidueElement> {
        if !self.is_integral() {
            return Err(Error::NegativeValuation);
        }
        let p = self.field.p();
        let d0 = padic::residue(&self.c0, p);
        Ok(if self.field.f() == 2 {
            ResidueElement(vec![d0, padic::residue(&self.c1, p)])
        } else {
            ResidueElement(vec![d0])
        })
    }

    /// Coordinates `(a, b)` with `self = a + bθ`.
    pub fn to_theta_coords(&self) -> (BigRational, BigRational) {
        match &self.field.0.quad {
            None => (self.c0.clone(), BigRational::zero()),
            Some(q) => {
                let b = &self.c1 * p_pow(self.field.p(), -(q.shift as i64));
                (&self.c0 - &b * &q.offset, b)
            }
        }
    }

    /// The rational value of a base-field element (or of an element whose
    /// ω-coordinate vanishes).
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.c1.is_zero() {
            Some(&self.c0)
        } else {
            None
        }
    }

    pub fn pow(&self, k: u32) -> Scalar {
        let mut out = self.field.one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.to_theta_coords();
        if self.field.is_base() {
            write!(f, "{}", padic::format_rational(&a))
        } else {
            write!(
                f,
                "({},{})",
                padic::format_rational(&a),
                padic::format_rational(&b)
            )
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.c0 == other.c0 && self.c1 == other.c1
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c0.hash(state);
        self.c1.hash(state);
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c0.cmp(&other.c0).then_with(|| self.c1.cmp(&other.c1))
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.field.scalar(&self.c0 + &rhs.c0, &self.c1 + &rhs.c1)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.field.scalar(&self.c0 - &rhs.c0, &self.c1 - &rhs.c1)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match &self.field.0.quad {
            None => self.field.from_rational(&self.c0 * &rhs.c0),
            Some(q) => {
                if self.c1.is_zero() {
                    return self.field.scalar(&self.c0 * &rhs.c0, &self.c0 * &rhs.c1);
                }
                if rhs.c1.is_zero() {
                    return self.field.scalar(&self.c0 * &rhs.c0, &self.c1 * &rhs.c0);
                }
                let bd = &self.c1 * &rhs.c1;
                let c0 = &self.c0 * &rhs.c0 - &bd * &q.h0;
                let c1 = &self.c0 * &rhs.c1 + &self.c1 * &rhs.c0 - &bd * &q.h1;
                self.field.scalar(c0, c1)
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.field.scalar(-self.c0.clone(), -self.c1.clone())
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::rat_frac;

    fn quad(p: u64, g0: i64, g1: i64) -> Result<Field> {
        Field::quadratic(&Field::base(p).unwrap(), rat(g0), rat(g1))
    }

    #[test]
    fn base_fields() {
        let k = Field::base(2).unwrap();
        assert_eq!((k.q(), k.e(), k.f()), (2, 1, 1));
        assert_eq!(k.uniformizer(), k.int(2));
        assert_eq!(Field::base(5).unwrap().q(), 5);
        assert_eq!(Field::base(6), Err(Error::NotPrime(6)));
    }

    #[test]
    fn quadratic_fields() {
        // x^2 - x + 1 over Q_2: residue polynomial x^2 + x + 1 has no root in GF(2)
        for c in 0..2u64 {
            assert_ne!((c * c + c + 1) % 2, 0);
        }
        let l = quad(2, 1, -1).unwrap();
        assert_eq!((l.e(), l.f(), l.q()), (1, 2, 4));

        let l = quad(3, -3, 0).unwrap();
        assert_eq!((l.e(), l.f()), (2, 1));
        assert_eq!(l.uniformizer(), l.theta().unwrap());

        // x^2 - 2x - 2: Eisenstein at 2, discriminant 12 has odd valuation
        let l = quad(2, -2, -2).unwrap();
        assert_eq!((l.e(), l.f()), (2, 1));
        assert_eq!(l.uniformizer().val(), Some(1));

        assert_eq!(quad(2, -17, 0).unwrap_err(), Error::Reducible);
        assert_eq!(quad(3, -1, 0).unwrap_err(), Error::Reducible);
        assert_eq!(
            Field::quadratic(&Field::base(3).unwrap(), rat_frac(1, 3), rat(0)).unwrap_err(),
            Error::NotIntegral
        );
    }

    #[test]
    fn non_monogenic_defining_polynomial() {
        // x^2 + 3 at p = 2: θ = √-3, ring of integers generated by (1 + θ)/2
        let l = quad(2, 3, 0).unwrap();
        assert_eq!((l.e(), l.f()), (1, 2));
        let (_, k) = l.integral_generator_shift().unwrap();
        assert_eq!(k, 1);
        // x^2 - 12 at p = 2: θ = 2√3, ramified
        let l = quad(2, -12, 0).unwrap();
        assert_eq!((l.e(), l.f()), (2, 1));
        let th = l.theta().unwrap();
        assert_eq!(th.val(), Some(2));
    }

    #[test]
    fn valuations_and_conjugation() {
        let k = Field::base(2).unwrap();
        assert_eq!(k.int(12).val(), Some(2));
        assert_eq!(k.zero().val(), None);

        let l = quad(3, -3, 0).unwrap();
        let th = l.theta().unwrap();
        assert_eq!(th.val(), Some(1));
        assert_eq!(th.conj().unwrap(), -&th);
        assert_eq!(l.int(3).val(), Some(2));

        let l = quad(2, 1, -1).unwrap();
        let th = l.theta().unwrap();
        assert_eq!(th.norm(), rat(1));
        assert_eq!(th.val(), Some(0));
        assert_eq!(th.conj().unwrap(), &l.one() - &th);
        assert_eq!(l.int(7).conj().unwrap(), l.int(7));
        assert_eq!(k.int(7).conj(), Err(Error::BaseFieldHasNoConjugation));
    }

    #[test]
    fn residues() {
        let k = Field::base(3).unwrap();
        assert_eq!(k.int(7).residue().unwrap(), ResidueElement(vec![1]));
        let k2 = Field::base(2).unwrap();
        assert_eq!(
            k2.from_rational(rat_frac(1, 2)).residue(),
            Err(Error::NegativeValuation)
        );
        let l = quad(2, 1, -1).unwrap();
        let x = &l.theta().unwrap() + &l.int(2);
        let th_bar = l.theta().unwrap().residue().unwrap();
        assert_eq!(x.residue().unwrap(), th_bar);
        assert_eq!(l.residue_elements().len(), 4);
        for r in l.residue_elements() {
            assert_eq!(l.residue_lift(&r).residue().unwrap(), r);
        }
    }

    #[test]
    fn theta_round_trip() {
        let l = quad(2, 3, 0).unwrap();
        let x = l.from_theta_coords(rat_frac(1, 3), rat(5)).unwrap();
        assert_eq!(x.to_theta_coords(), (rat_frac(1, 3), rat(5)));
        let th = l.theta().unwrap();
        assert_eq!(&th * &th, l.int(-3));
    }

    #[test]
    fn pi_powers() {
        let l = quad(2, -2, 0).unwrap();
        let pi = l.uniformizer();
        assert_eq!(l.pi_pow(2).val(), Some(2));
        assert_eq!(&l.pi_pow(-3) * &l.pi_pow(3), l.one());
        assert_eq!(l.pi_pow(1), pi);
        assert_eq!(l.int(2).val(), Some(2));
    }
}
