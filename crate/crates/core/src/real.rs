//! Midpoint-radius ("ball") arithmetic over arbitrary-precision floats.
//!
//! A [`Real`] is a binary float midpoint together with an upper bound on the
//! distance to the exact value it encloses. Every operation rounds the
//! midpoint to the working precision and folds the rounding error into the
//! radius, so the true result is always inside the returned ball. Radii are
//! kept at 64 bits and always rounded upwards.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const RAD_PREC: usize = 64;
const WORD_BITS: usize = Word::BITS as usize;

/// Default number of fractional bits carried by approximate computations.
pub const DEFAULT_PRECISION: usize = 128;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

fn zero_float() -> BigFloat {
    BigFloat::from_word(0, RAD_PREC)
}

fn radd(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.add(b, RAD_PREC, RoundingMode::Up)
}

fn rmul(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.mul(b, RAD_PREC, RoundingMode::Up)
}

fn rdiv(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.div(b, RAD_PREC, RoundingMode::Up)
}

/// `|x|` rounded up to radius precision.
fn abs_up(x: &BigFloat) -> BigFloat {
    let mut a = x.abs();
    if a.set_precision(RAD_PREC, RoundingMode::Up).is_err() {
        return a;
    }
    a
}

/// `|x|` rounded down to radius precision.
fn abs_down(x: &BigFloat) -> BigFloat {
    let mut a = x.abs();
    let _ = a.set_precision(RAD_PREC, RoundingMode::Down);
    a
}

/// Multiplies a nonnegative float by `2^k` exactly.
fn scale2(x: &BigFloat, k: i32) -> BigFloat {
    if x.is_zero() {
        return x.clone();
    }
    let mut y = x.clone();
    let e = y.exponent().expect("finite value");
    y.set_exponent(e + k);
    y
}

/// Upper bound on the rounding error of a result `x` computed at `p` bits,
/// counted as `ulps` half-units in the last place.
fn rounding_error(x: &BigFloat, p: usize, ulps: i32) -> BigFloat {
    if x.is_zero() {
        return zero_float();
    }
    let a = abs_up(x);
    let mut bound = scale2(&a, -(p as i32));
    if ulps > 1 {
        bound = rmul(&bound, &BigFloat::from_word(ulps as Word, RAD_PREC));
    }
    bound
}

fn bigint_to_float(n: &BigInt) -> BigFloat {
    if n.is_zero() {
        return zero_float();
    }
    let bits = n.bits() as usize;
    let words = bits.div_ceil(WORD_BITS);
    let shifted: BigUint = n.magnitude() << (words * WORD_BITS - bits);
    let mut digits: Vec<Word> = shifted.to_u64_digits().into_iter().map(|d| d as Word).collect();
    digits.resize(words, 0);
    let sign = if n.sign() == BigSign::Minus { Sign::Neg } else { Sign::Pos };
    BigFloat::from_raw_parts(&digits, words * WORD_BITS, sign, bits as i32, false)
}

fn float_to_rational(x: &BigFloat) -> BigRational {
    let Some((words, _, sign, exp, _)) = x.as_raw_parts() else {
        return BigRational::zero();
    };
    if words.is_empty() || x.is_zero() {
        return BigRational::zero();
    }
    let mut m = BigUint::zero();
    for w in words.iter().rev() {
        m = (m << WORD_BITS) + BigUint::from(*w as u64);
    }
    let shift = exp as i64 - (words.len() * WORD_BITS) as i64;
    let mut value = BigRational::from_integer(BigInt::from(m));
    if shift >= 0 {
        value *= BigRational::from_integer(BigInt::one() << shift as usize);
    } else {
        value /= BigRational::from_integer(BigInt::one() << (-shift) as usize);
    }
    if sign == Sign::Neg {
        -value
    } else {
        value
    }
}

/// A real number known to lie in `[mid - rad, mid + rad]`.
#[derive(Clone)]
pub struct Real {
    mid: BigFloat,
    rad: BigFloat,
    prec: usize,
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:.3e}", self.to_decimal(20), self.rad_f64())
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(25))
    }
}

impl Real {
    fn from_parts(mid: BigFloat, rad: BigFloat, prec: usize) -> Self {
        Real { mid, rad, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Real::from_parts(BigFloat::from_word(0, prec), zero_float(), prec)
    }

    pub fn one(prec: usize) -> Self {
        Real::from_i64(1, prec)
    }

    pub fn from_i64(n: i64, prec: usize) -> Self {
        Real::from_bigint(&BigInt::from(n), prec)
    }

    /// Exact conversion; the midpoint carries as many bits as the integer needs.
    pub fn from_bigint(n: &BigInt, prec: usize) -> Self {
        Real::from_parts(bigint_to_float(n), zero_float(), prec)
    }

    pub fn from_rational(q: &BigRational, prec: usize) -> Self {
        let num = Real::from_bigint(q.numer(), prec);
        if q.denom().is_one() {
            return num;
        }
        let den = Real::from_bigint(q.denom(), prec);
        num.div(&den).expect("nonzero denominator")
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(x: f64, prec: usize) -> Self {
        Real::from_parts(BigFloat::from_f64(x, 64), zero_float(), prec)
    }

    /// A ball with the given midpoint and radius (the radius is rounded up).
    pub fn with_radius(mid: &Real, rad: &Real) -> Self {
        let r = radd(&abs_up(&rad.mid), &rad.rad);
        Real::from_parts(mid.mid.clone(), radd(&mid.rad, &r), mid.prec)
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn with_precision(mut self, prec: usize) -> Self {
        self.prec = prec;
        self
    }

    /// Midpoint as an exact ball.
    pub fn midpoint(&self) -> Real {
        Real::from_parts(self.mid.clone(), zero_float(), self.prec)
    }

    /// Radius as an exact ball.
    pub fn radius(&self) -> Real {
        Real::from_parts(self.rad.clone(), zero_float(), self.prec)
    }

    pub fn mid_rational(&self) -> BigRational {
        float_to_rational(&self.mid)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid_rational().to_f64().unwrap_or(f64::NAN)
    }

    /// Upper bound on the radius as an `f64` (rounded away from zero).
    pub fn rad_f64(&self) -> f64 {
        let r = float_to_rational(&self.rad).to_f64().unwrap_or(f64::INFINITY);
        if r == 0.0 {
            0.0
        } else {
            r * (1.0 + 1e-15)
        }
    }

    /// Lower end of the ball, rounded down, as an `f64` approximation.
    pub fn lower_f64(&self) -> f64 {
        self.mid_f64() - self.rad_f64()
    }

    pub fn upper_f64(&self) -> f64 {
        self.mid_f64() + self.rad_f64()
    }

    fn lower_bound(&self) -> BigFloat {
        self.mid.sub(&self.rad, RAD_PREC, RoundingMode::Down)
    }

    fn upper_bound(&self) -> BigFloat {
        self.mid.add(&self.rad, RAD_PREC, RoundingMode::Up)
    }

    /// Exact ball at an upper bound of the enclosure.
    pub fn upper(&self) -> Real {
        Real::from_parts(self.upper_bound(), zero_float(), self.prec)
    }

    /// Exact ball at a lower bound of the enclosure.
    pub fn lower(&self) -> Real {
        Real::from_parts(self.lower_bound(), zero_float(), self.prec)
    }

    /// Certainly `> 0`.
    pub fn is_positive(&self) -> bool {
        self.lower_bound().is_positive() && !self.lower_bound().is_zero()
    }

    /// Certainly `< 0`.
    pub fn is_negative(&self) -> bool {
        let u = self.upper_bound();
        u.is_negative() && !u.is_zero()
    }

    /// Certainly `>= 0`.
    pub fn is_nonnegative(&self) -> bool {
        let l = self.lower_bound();
        l.is_zero() || l.is_positive()
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    /// Exactly zero: zero midpoint and zero radius.
    pub fn is_exact_zero(&self) -> bool {
        self.mid.is_zero() && self.rad.is_zero()
    }

    fn wp(&self, other: &Real) -> usize {
        self.prec.max(other.prec)
    }

    pub fn add(&self, other: &Real) -> Real {
        let p = self.wp(other);
        let mid = self.mid.add(&other.mid, p, RoundingMode::ToEven);
        let rad = radd(&radd(&self.rad, &other.rad), &rounding_error(&mid, p, 1));
        Real::from_parts(mid, rad, p)
    }

    pub fn sub(&self, other: &Real) -> Real {
        let p = self.wp(other);
        let mid = self.mid.sub(&other.mid, p, RoundingMode::ToEven);
        let rad = radd(&radd(&self.rad, &other.rad), &rounding_error(&mid, p, 1));
        Real::from_parts(mid, rad, p)
    }

    pub fn neg(&self) -> Real {
        Real::from_parts(self.mid.neg(), self.rad.clone(), self.prec)
    }

    pub fn mul(&self, other: &Real) -> Real {
        let p = self.wp(other);
        let mid = self.mid.mul(&other.mid, p, RoundingMode::ToEven);
        let a = abs_up(&self.mid);
        let b = abs_up(&other.mid);
        let mut rad = radd(&rmul(&a, &other.rad), &rmul(&b, &self.rad));
        rad = radd(&rad, &rmul(&self.rad, &other.rad));
        rad = radd(&rad, &rounding_error(&mid, p, 1));
        Real::from_parts(mid, rad, p)
    }

    pub fn mul_i64(&self, k: i64) -> Real {
        self.mul(&Real::from_i64(k, self.prec))
    }

    pub fn sqr(&self) -> Real {
        self.mul(self)
    }

    pub fn div(&self, other: &Real) -> Result<Real> {
        if other.contains_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.wp(other);
        let mid = self.mid.div(&other.mid, p, RoundingMode::ToEven);
        // |a'/b' - a/b| <= (ra + |a/b| rb) / (|b| - rb)
        let q = abs_up(&mid);
        let num = radd(&self.rad, &rmul(&q, &other.rad));
        let den = abs_down(&other.mid).sub(&other.rad, RAD_PREC, RoundingMode::Down);
        let rad = radd(&rdiv(&num, &den), &rounding_error(&mid, p, 1));
        Ok(Real::from_parts(mid, rad, p))
    }

    pub fn recip(&self) -> Result<Real> {
        Real::one(self.prec).div(self)
    }

    pub fn abs(&self) -> Real {
        if self.mid.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, n: u32) -> Real {
        let mut result = Real::one(self.prec);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        result
    }

    pub fn sqrt(&self) -> Result<Real> {
        let p = self.prec;
        let upper = self.upper_bound();
        if upper.is_negative() && !upper.is_zero() {
            return Err(Error::LogDomain);
        }
        let lower = self.lower_bound();
        if lower.is_positive() && !lower.is_zero() {
            let mid = self.mid.sqrt(p, RoundingMode::ToEven);
            // |sqrt(x') - sqrt(x)| <= r / sqrt(x - r)
            let root_lo = lower.sqrt(RAD_PREC, RoundingMode::Down);
            let rad = radd(&rdiv(&self.rad, &root_lo), &rounding_error(&mid, p, 1));
            Ok(Real::from_parts(mid, rad, p))
        } else {
            // ball touches zero: enclose [0, sqrt(upper)]
            let top = upper.sqrt(RAD_PREC, RoundingMode::Up);
            let half = scale2(&top, -1);
            Ok(Real::from_parts(half.clone(), half, p))
        }
    }

    /// Natural logarithm; the ball must be certainly positive.
    pub fn ln(&self) -> Result<Real> {
        if !self.is_positive() {
            return Err(Error::LogDomain);
        }
        let p = self.prec;
        let mid = with_consts(|cc| self.mid.ln(p, RoundingMode::ToEven, cc));
        let lower = self.lower_bound();
        let rad = radd(&rdiv(&self.rad, &lower), &rounding_error(&mid, p, 4));
        // an absolute term for results that round to tiny values near ln 1
        let rad = radd(&rad, &scale2(&BigFloat::from_word(1, RAD_PREC), -(p as i32) - 8));
        Ok(Real::from_parts(mid, rad, p))
    }

    pub fn exp(&self) -> Real {
        let p = self.prec;
        let mid = with_consts(|cc| self.mid.exp(p, RoundingMode::ToEven, cc));
        let one = BigFloat::from_word(1, RAD_PREC);
        let spread = if self.rad.cmp(&one).is_some_and(|c| c <= 0) {
            // e^m (e^r - 1) <= 3 r e^m for r <= 1
            rmul(&rmul(&abs_up(&mid), &self.rad), &BigFloat::from_word(3, RAD_PREC))
        } else {
            with_consts(|cc| self.upper_bound().exp(RAD_PREC, RoundingMode::Up, cc))
        };
        let rad = radd(&spread, &rounding_error(&mid, p, 4));
        Real::from_parts(mid, rad, p)
    }

    /// `self^y` for a positive base.
    pub fn pow(&self, y: &Real) -> Result<Real> {
        Ok(self.ln()?.mul(y).exp())
    }

    pub fn ln_i64(n: i64, prec: usize) -> Result<Real> {
        Real::from_i64(n, prec).ln()
    }

    pub fn ln_bigint(n: &BigInt, prec: usize) -> Result<Real> {
        Real::from_bigint(n, prec).ln()
    }

    pub fn ln_rational(q: &BigRational, prec: usize) -> Result<Real> {
        Ok(Real::ln_bigint(q.numer(), prec)?.sub(&Real::ln_bigint(q.denom(), prec)?))
    }

    /// `max(0, x)` as a ball.
    pub fn pos_part(&self) -> Real {
        if self.is_nonnegative() {
            return self.clone();
        }
        if self.is_negative() {
            return Real::zero(self.prec);
        }
        // straddles zero: enclose [0, upper]
        let half = scale2(&self.upper_bound(), -1);
        Real::from_parts(half.clone(), half, self.prec)
    }

    /// Smallest ball containing both operands' enclosures of `max(a, b)`.
    pub fn max(&self, other: &Real) -> Real {
        match self.cmp_certified(other) {
            Some(Ordering::Less) => other.clone(),
            Some(_) => self.clone(),
            None => {
                let lo = {
                    let a = self.lower_bound();
                    let b = other.lower_bound();
                    if a.cmp(&b).is_some_and(|c| c >= 0) { a } else { b }
                };
                let hi = {
                    let a = self.upper_bound();
                    let b = other.upper_bound();
                    if a.cmp(&b).is_some_and(|c| c >= 0) { a } else { b }
                };
                let p = self.wp(other);
                let mid = scale2(&lo.add(&hi, p, RoundingMode::ToEven), 0);
                let mid = if mid.is_zero() { mid } else { scale2(&mid, -1) };
                let rad = scale2(&hi.sub(&lo, RAD_PREC, RoundingMode::Up), -1);
                let rad = radd(&rad, &rounding_error(&mid, p, 1));
                Real::from_parts(mid, rad, p)
            }
        }
    }

    /// Ordering that is only returned when the balls are disjoint.
    pub fn cmp_certified(&self, other: &Real) -> Option<Ordering> {
        let d = self.sub(other);
        if d.is_positive() {
            Some(Ordering::Greater)
        } else if d.is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Ordering of midpoints, used for sorting only.
    pub fn cmp_mid(&self, other: &Real) -> Ordering {
        match self.mid.cmp(&other.mid) {
            Some(c) if c < 0 => Ordering::Less,
            Some(c) if c > 0 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }

    /// Widens the radius so it also covers `extra`.
    pub fn inflate(&self, extra: &Real) -> Real {
        let e = radd(&abs_up(&extra.mid), &extra.rad);
        Real::from_parts(self.mid.clone(), radd(&self.rad, &e), self.prec)
    }

    /// Decimal rendering of the midpoint with `sig` significant digits.
    pub fn to_decimal(&self, sig: usize) -> String {
        format_rational_sig(&self.mid_rational(), sig)
    }

    /// Radius rendered with three significant digits.
    pub fn radius_decimal(&self) -> String {
        format_rational_sig(&float_to_rational(&self.rad), 3)
    }

    pub fn pi(prec: usize) -> Real {
        let mid = with_consts(|cc| cc.pi(prec, RoundingMode::ToEven));
        let rad = rounding_error(&mid, prec, 2);
        Real::from_parts(mid, rad, prec)
    }
}

/// Formats an exact rational in scientific notation with `sig` significant
/// digits, rounding half away from zero. Zero renders as `0`.
pub fn format_rational_sig(q: &BigRational, sig: usize) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let sig = sig.max(1);
    let neg = q.is_negative();
    let a = q.abs();
    let ten = BigInt::from(10);
    // decimal exponent estimate from bit lengths, corrected below
    let est = ((a.numer().bits() as f64 - a.denom().bits() as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let mut k = est - 1;
    let pow10 = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), e as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
        }
    };
    while a >= pow10(k + 1) {
        k += 1;
    }
    while a < pow10(k) {
        k -= 1;
    }
    let scaled = &a * pow10(sig as i64 - 1 - k);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut digits = (scaled + half).floor().to_integer();
    if digits >= num_traits::pow(ten.clone(), sig) {
        digits /= &ten;
        k += 1;
    }
    let s = digits.to_string();
    let (head, tail) = s.split_at(1);
    let body = if tail.is_empty() { head.to_string() } else { format!("{head}.{tail}") };
    format!("{}{}e{}{}", if neg { "-" } else { "" }, body, if k < 0 { "-" } else { "+" }, k.abs())
}

/// A complex ball: rectangular enclosure with ball real and imaginary parts.
#[derive(Clone, Debug)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn from_real(re: Real) -> Self {
        let p = re.precision();
        Complex { re, im: Real::zero(p) }
    }

    pub fn zero(prec: usize) -> Self {
        Complex::from_real(Real::zero(prec))
    }

    pub fn one(prec: usize) -> Self {
        Complex::from_real(Real::one(prec))
    }

    pub fn add(&self, o: &Complex) -> Complex {
        Complex::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Complex) -> Complex {
        Complex::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> Complex {
        Complex::new(self.re.neg(), self.im.neg())
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        Complex::new(re, im)
    }

    pub fn scale(&self, k: &Real) -> Complex {
        Complex::new(self.re.mul(k), self.im.mul(k))
    }

    pub fn conj(&self) -> Complex {
        Complex::new(self.re.clone(), self.im.neg())
    }

    pub fn abs_sq(&self) -> Real {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn abs(&self) -> Result<Real> {
        if self.im.is_exact_zero() {
            return Ok(self.re.abs());
        }
        self.abs_sq().sqrt()
    }

    pub fn div(&self, o: &Complex) -> Result<Complex> {
        let den = o.abs_sq();
        let num = self.mul(&o.conj());
        Ok(Complex::new(num.re.div(&den)?, num.im.div(&den)?))
    }

    pub fn midpoint(&self) -> Complex {
        Complex::new(self.re.midpoint(), self.im.midpoint())
    }

    pub fn precision(&self) -> usize {
        self.re.precision().max(self.im.precision())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.mid_f64(), self.im.mid_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn integer_round_trip_is_exact() {
        for n in [0i64, 1, -1, 7, 1 << 40, -(1 << 62), i64::MAX] {
            let r = Real::from_i64(n, 128);
            assert_eq!(r.mid_rational(), rat(n, 1));
            assert!(r.rad_f64() == 0.0);
        }
        let big: BigInt = BigInt::from(3).pow(200u32);
        assert_eq!(Real::from_bigint(&big, 64).mid_rational(), BigRational::from_integer(big));
    }

    #[test]
    fn ln_of_two_encloses_reference() {
        let l = Real::ln_i64(2, 128).unwrap();
        // 0.693147180559945309417232121458176568...
        let r = rat(693147180559945309, 1_000_000_000_000_000_000);
        let diff = (l.mid_rational() - r).to_f64().unwrap().abs();
        assert!(diff < 1e-18);
        assert!(l.rad_f64() < 1e-36);
    }

    #[test]
    fn division_by_straddling_ball_fails() {
        let a = Real::one(64);
        let z = Real::with_radius(&Real::zero(64), &Real::from_f64(1e-3, 64));
        assert_eq!(a.div(&z).unwrap_err(), Error::DivisionByZero);
        assert!(z.ln().is_err());
    }

    #[test]
    fn sqrt_and_exp_are_consistent() {
        let two = Real::from_i64(2, 160);
        let s = two.sqrt().unwrap();
        let back = s.sqr().sub(&two);
        assert!(back.contains_zero());
        let e = Real::one(160).exp();
        assert!((e.mid_f64() - std::f64::consts::E).abs() < 1e-15);
        let l = e.ln().unwrap().sub(&Real::one(160));
        assert!(l.contains_zero());
        assert!(l.rad_f64() < 1e-40);
    }

    #[test]
    fn pos_part_handles_straddle() {
        let x = Real::with_radius(&Real::from_f64(1e-30, 128), &Real::from_f64(1e-20, 128));
        let p = x.pos_part();
        assert!(p.is_nonnegative());
        assert!(p.upper_f64() >= 1e-20);
        assert!(Real::from_i64(-3, 64).pos_part().is_exact_zero());
    }

    #[test]
    fn decimal_format_is_canonical() {
        assert_eq!(format_rational_sig(&rat(1, 3), 5), "3.3333e-1");
        assert_eq!(format_rational_sig(&rat(-9999, 1), 3), "-1.00e+4");
        assert_eq!(format_rational_sig(&rat(8, 1), 1), "8e+0");
        assert_eq!(format_rational_sig(&BigRational::zero(), 25), "0");
        let l = Real::ln_i64(2, 128).unwrap();
        assert_eq!(l.to_decimal(25), "6.931471805599453094172321e-1");
    }

    #[test]
    fn complex_division() {
        let p = 128;
        let i = Complex::new(Real::zero(p), Real::one(p));
        let q = Complex::one(p).div(&i).unwrap();
        assert!(q.re.contains_zero());
        assert!(q.im.add(&Real::one(p)).contains_zero());
    }
}
