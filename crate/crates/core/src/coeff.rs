//! Exact arithmetic in the field Q(q) of rational functions of the
//! deformation parameter.
//!
//! A [`QRat`] is stored as `q^shift * num(q) / den(q)` where `num` and `den`
//! are ordinary integer polynomials with non-zero constant terms. Every
//! constructor canonicalizes, so structural equality is field equality.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer polynomial, little-endian, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Poly(Vec<BigInt>);

impl Poly {
    fn zero() -> Self {
        Poly(Vec::new())
    }

    fn one() -> Self {
        Poly(vec![BigInt::one()])
    }

    fn constant(c: BigInt) -> Self {
        let mut p = Poly(vec![c]);
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &BigInt {
        self.0.last().expect("lead of zero polynomial")
    }

    /// Lowest power of q with a non-zero coefficient.
    fn valuation(&self) -> usize {
        self.0.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    fn shift_down(&self, k: usize) -> Poly {
        Poly(self.0[k..].to_vec())
    }

    fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.0.iter().cloned());
        Poly(v)
    }

    fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i);
            let b = other.0.get(i);
            v.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        let mut p = Poly(v);
        p.trim();
        p
    }

    fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        let mut p = Poly(v);
        p.trim();
        p
    }

    fn scale(&self, c: &BigInt) -> Poly {
        let mut p = Poly(self.0.iter().map(|x| x * c).collect());
        p.trim();
        p
    }

    fn content(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    fn div_scalar_exact(&self, c: &BigInt) -> Poly {
        Poly(self.0.iter().map(|x| x / c).collect())
    }

    fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.content();
        let mut p = self.div_scalar_exact(&c);
        if p.lead().is_negative() {
            p = p.neg();
        }
        p
    }

    /// Pseudo-remainder of `self` by `d`.
    fn prem(&self, d: &Poly) -> Poly {
        let mut r = self.clone();
        let dd = d.degree();
        let lc = d.lead().clone();
        while !r.is_zero() && r.degree() >= dd {
            let k = r.degree() - dd;
            let lr = r.lead().clone();
            r = r.scale(&lc).add(&d.shift_up(k).scale(&lr).neg());
        }
        r
    }

    /// Primitive gcd over Q[q], normalized to positive leading coefficient.
    fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part()
    }

    /// Exact division; `d` must divide `self` in Z[q].
    fn div_exact(&self, d: &Poly) -> Poly {
        if d.is_one() {
            return self.clone();
        }
        let mut r = self.clone();
        let dd = d.degree();
        let mut quo = vec![BigInt::zero(); self.degree().saturating_sub(dd) + 1];
        while !r.is_zero() && r.degree() >= dd {
            let k = r.degree() - dd;
            let (c, rem) = r.lead().div_rem(d.lead());
            debug_assert!(rem.is_zero(), "inexact polynomial division");
            r = r.add(&d.shift_up(k).scale(&c).neg());
            quo[k] = c;
        }
        debug_assert!(r.is_zero(), "inexact polynomial division");
        let mut p = Poly(quo);
        p.trim();
        p
    }

    fn eval(&self, x: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }
}

/// Exact element of Q(q).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QRat {
    shift: i64,
    num: Poly,
    den: Poly,
}

impl QRat {
    pub fn zero() -> Self {
        QRat { shift: 0, num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        QRat::int(1)
    }

    pub fn int(n: i64) -> Self {
        QRat { shift: 0, num: Poly::constant(BigInt::from(n)), den: Poly::one() }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        QRat { shift: 0, num: Poly::constant(n), den: Poly::one() }
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        QRat::int(n)
            .checked_div(&QRat::int(d))
            .expect("ratio with zero denominator")
    }

    /// The monomial q^k.
    pub fn q_pow(k: i64) -> Self {
        QRat { shift: k, num: Poly::one(), den: Poly::one() }
    }

    /// Laurent polynomial sum of `coeff * q^exp`.
    pub fn laurent(terms: &[(i64, i64)]) -> Self {
        terms
            .iter()
            .fold(QRat::zero(), |acc, &(c, e)| acc + QRat::q_pow(e) * QRat::int(c))
    }

    fn from_parts(shift: i64, num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return QRat::zero();
        }
        let vn = num.valuation();
        let vd = den.valuation();
        let mut num = if vn > 0 { num.shift_down(vn) } else { num };
        let mut den = if vd > 0 { den.shift_down(vd) } else { den };
        let shift = shift + vn as i64 - vd as i64;
        if !den.is_one() {
            let g = num.gcd(&den);
            if g.degree() > 0 {
                num = num.div_exact(&g);
                den = den.div_exact(&g);
            }
            let c = num.content().gcd(&den.content());
            if !c.is_one() {
                num = num.div_scalar_exact(&c);
                den = den.div_scalar_exact(&c);
            }
            if den.0[0].is_negative() {
                num = num.neg();
                den = den.neg();
            }
        }
        QRat { shift, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// True when the value is a Laurent polynomial in q.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// True for a single signed monomial `c q^k` with integer `c`.
    pub fn is_monomial(&self) -> bool {
        self.den.is_one() && self.num.0.iter().filter(|c| !c.is_zero()).count() == 1
    }

    /// Laurent coefficients `(exponent, coefficient)` in descending order,
    /// or `None` when the denominator is not a power of q.
    pub fn laurent_terms(&self) -> Option<Vec<(i64, BigInt)>> {
        if !self.den.is_one() {
            return None;
        }
        Some(
            self.num
                .0
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as i64 + self.shift, c.clone()))
                .collect(),
        )
    }

    pub fn inv(&self) -> Result<QRat> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QRat::from_parts(-self.shift, self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &QRat) -> Result<QRat> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, k: i64) -> Result<QRat> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = QRat::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Exact specialization at a rational value of q.
    pub fn eval_at(&self, q0: &BigRational) -> Result<BigRational> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        let d = self.den.eval(q0);
        if d.is_zero() || (q0.is_zero() && self.shift < 0) {
            return Err(Error::Pole(format!("{self} at q = {q0}")));
        }
        let mut p = BigRational::one();
        let base = if self.shift < 0 {
            q0.recip()
        } else {
            q0.clone()
        };
        for _ in 0..self.shift.unsigned_abs() {
            p *= &base;
        }
        Ok(p * self.num.eval(q0) / d)
    }

    /// The same value viewed as a constant (q-independent) element, after
    /// substituting `q = q0`.
    pub fn specialize(&self, q0: &BigRational) -> Result<QRat> {
        let v = self.eval_at(q0)?;
        Ok(QRat::from_parts(
            0,
            Poly::constant(v.numer().clone()),
            Poly::constant(v.denom().clone()),
        ))
    }

    /// Integer-coefficient text of `q^shift * p` with descending exponents.
    fn fmt_laurent(p: &Poly, shift: i64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in p.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let e = i as i64 + shift;
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (a.is_one(), e) {
                (_, 0) => write!(f, "{a}")?,
                (true, 1) => write!(f, "q")?,
                (true, e) => write!(f, "q^{e}")?,
                (false, 1) => write!(f, "{a}*q")?,
                (false, e) => write!(f, "{a}*q^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }

    fn term_count(p: &Poly) -> usize {
        p.0.iter().filter(|c| !c.is_zero()).count()
    }
}

/// Balanced q-integer `[n]_q = (q^n - q^-n) / (q - q^-1)`.
pub fn q_number(n: i64) -> QRat {
    if n == 0 {
        return QRat::zero();
    }
    let m = n.abs();
    let sign = if n < 0 { -1 } else { 1 };
    let terms: Vec<(i64, i64)> = (0..m).map(|k| (sign, m - 1 - 2 * k)).collect();
    QRat::laurent(&terms)
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return QRat::fmt_laurent(&self.num, self.shift, f);
        }
        let (top_shift, bot_shift) = if self.shift >= 0 { (self.shift, 0) } else { (0, -self.shift) };
        let top = self.num.shift_up(top_shift as usize);
        let bot = self.den.shift_up(bot_shift as usize);
        if QRat::term_count(&top) > 1 {
            write!(f, "(")?;
            QRat::fmt_laurent(&top, 0, f)?;
            write!(f, ")")?;
        } else {
            QRat::fmt_laurent(&top, 0, f)?;
        }
        write!(f, "/")?;
        let bot_needs_parens = QRat::term_count(&bot) > 1 || bot.0.iter().rev().find(|c| !c.is_zero()).is_some_and(|c| !c.is_one()) && bot.degree() > 0;
        if bot_needs_parens {
            write!(f, "(")?;
            QRat::fmt_laurent(&bot, 0, f)?;
            write!(f, ")")
        } else {
            QRat::fmt_laurent(&bot, 0, f)
        }
    }
}

impl Zero for QRat {
    fn zero() -> Self {
        QRat::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for QRat {
    fn one() -> Self {
        QRat::one()
    }
}

impl<'a> Add<&'a QRat> for &'a QRat {
    type Output = QRat;
    fn add(self, rhs: &QRat) -> QRat {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(rhs.shift);
        let a = self.num.shift_up((self.shift - s) as usize);
        let b = rhs.num.shift_up((rhs.shift - s) as usize);
        if self.den == rhs.den {
            if self.den.is_one() {
                return QRat::from_parts(s, a.add(&b), Poly::one());
            }
            return QRat::from_parts(s, a.add(&b), self.den.clone());
        }
        QRat::from_parts(s, a.mul(&rhs.den).add(&b.mul(&self.den)), self.den.mul(&rhs.den))
    }
}

impl<'a> Mul<&'a QRat> for &'a QRat {
    type Output = QRat;
    fn mul(self, rhs: &QRat) -> QRat {
        if self.is_zero() || rhs.is_zero() {
            return QRat::zero();
        }
        QRat::from_parts(self.shift + rhs.shift, self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Neg for &QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat { shift: self.shift, num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        -&self
    }
}

impl<'a> Sub<&'a QRat> for &'a QRat {
    type Output = QRat;
    fn sub(self, rhs: &QRat) -> QRat {
        self + &(-rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QRat> for QRat {
            type Output = QRat;
            fn $m(self, rhs: QRat) -> QRat {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a QRat> for QRat {
            type Output = QRat;
            fn $m(self, rhs: &QRat) -> QRat {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&QRat> for QRat {
    fn add_assign(&mut self, rhs: &QRat) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&QRat> for QRat {
    fn sub_assign(&mut self, rhs: &QRat) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&QRat> for QRat {
    fn mul_assign(&mut self, rhs: &QRat) {
        *self = &*self * rhs;
    }
}

impl From<i64> for QRat {
    fn from(n: i64) -> Self {
        QRat::int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QRat {
        QRat::q_pow(1)
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn self_division_is_one() {
        let x = q() - QRat::q_pow(-1);
        assert_eq!(x.checked_div(&x).unwrap(), QRat::one());
    }

    #[test]
    fn laurent_division() {
        let a = QRat::laurent(&[(1, 4), (-1, 0)]);
        let got = a.checked_div(&QRat::q_pow(3)).unwrap();
        assert_eq!(got, QRat::laurent(&[(1, 1), (-1, -3)]));
        assert_eq!(got.to_string(), "q - q^-3");
    }

    #[test]
    fn difference_of_squares() {
        let a = QRat::laurent(&[(1, 2), (1, 0)]);
        let b = QRat::laurent(&[(1, 2), (-1, 0)]);
        assert_eq!(a * b, QRat::laurent(&[(1, 4), (-1, 0)]));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(QRat::one().checked_div(&QRat::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn q_numbers() {
        assert_eq!(q_number(1), QRat::one());
        assert_eq!(q_number(2), QRat::laurent(&[(1, 1), (1, -1)]));
        assert_eq!(q_number(3), QRat::laurent(&[(1, 2), (1, 0), (1, -2)]));
        assert_eq!(q_number(0), QRat::zero());
        assert_eq!(q_number(-3), -q_number(3));
    }

    #[test]
    fn q_number_times_q_minus_inverse() {
        let qm = q() - QRat::q_pow(-1);
        for n in -20..=20 {
            assert_eq!(q_number(n) * &qm, QRat::q_pow(n) - QRat::q_pow(-n), "n = {n}");
        }
    }

    #[test]
    fn canonical_fraction() {
        // (q^4 - 1)/(q^2 - 1) = q^2 + 1
        let a = QRat::laurent(&[(1, 4), (-1, 0)]);
        let b = QRat::laurent(&[(1, 2), (-1, 0)]);
        assert_eq!(a.checked_div(&b).unwrap(), QRat::laurent(&[(1, 2), (1, 0)]));
        // 2/(2q^2 + 2) = 1/(q^2 + 1)
        let c = QRat::int(2).checked_div(&QRat::laurent(&[(2, 2), (2, 0)])).unwrap();
        let d = QRat::one().checked_div(&QRat::laurent(&[(1, 2), (1, 0)])).unwrap();
        assert_eq!(c, d);
        // sign lives in the numerator
        let e = QRat::one().checked_div(&QRat::laurent(&[(-1, 2), (-1, 0)])).unwrap();
        assert_eq!(e, -d);
    }

    #[test]
    fn evaluation() {
        assert_eq!(q_number(2).eval_at(&r(1, 1)).unwrap(), r(2, 1));
        let c2 = QRat::laurent(&[(1, 6), (1, 0)]).checked_div(&QRat::int(4)).unwrap();
        assert_eq!(c2.eval_at(&r(1, 1)).unwrap(), r(1, 2));
        let x = QRat::q_pow(5) * q_number(2);
        assert_eq!(x.eval_at(&r(1, 1)).unwrap(), r(2, 1));
        assert_eq!(QRat::q_pow(-2).eval_at(&r(1, 2)).unwrap(), r(4, 1));
    }

    #[test]
    fn pole_is_reported() {
        let x = QRat::one().checked_div(&QRat::laurent(&[(1, 1), (-1, 0)])).unwrap();
        assert!(matches!(x.eval_at(&r(1, 1)), Err(Error::Pole(_))));
        assert!(matches!(QRat::q_pow(-1).eval_at(&r(0, 1)), Err(Error::Pole(_))));
    }

    #[test]
    fn rendering() {
        let c3 = QRat::laurent(&[(2, 4), (-1, 2), (1, 0)])
            .checked_div(&QRat::laurent(&[(2, 2)]))
            .unwrap();
        assert_eq!(c3.to_string(), "(2*q^4 - q^2 + 1)/(2*q^2)");
        let c2 = QRat::laurent(&[(1, 6), (1, 0)]).checked_div(&QRat::int(4)).unwrap();
        assert_eq!(c2.to_string(), "(q^6 + 1)/4");
        assert_eq!(QRat::zero().to_string(), "0");
        assert_eq!((-QRat::q_pow(-2)).to_string(), "-q^-2");
    }
}
