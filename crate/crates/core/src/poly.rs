//! Dense univariate polynomials with exact integer or rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Integer polynomial, `coeffs[i]` is the coefficient of `x^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Builds a polynomial, stripping high zero coefficients.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonempty")
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn to_rational(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn derivative(&self) -> IntPolynomial {
        if self.degree() == 0 {
            return IntPolynomial::new(vec![]);
        }
        IntPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.to_rational().eval(x)
    }

    /// Rational roots, found by testing divisors of the constant and leading
    /// coefficients. Only intended for small coefficients.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let mut roots = Vec::new();
        if self.coeffs[0].is_zero() {
            roots.push(BigRational::zero());
        }
        let shift = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        let trimmed = IntPolynomial::new(self.coeffs[shift..].to_vec());
        if trimmed.degree() == 0 {
            return roots;
        }
        let (Some(ps), Some(qs)) = (small_divisors(&trimmed.coeffs[0]), small_divisors(trimmed.leading()))
        else {
            return roots;
        };
        for p in &ps {
            for q in &qs {
                for s in [1i32, -1] {
                    let r = BigRational::new(p * BigInt::from(s), q.clone());
                    if trimmed.eval_rational(&r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
        roots
    }

    /// Label-style rendering such as `x4-10x2+1`.
    pub fn label(&self) -> String {
        let mut out = String::new();
        for i in (0..=self.degree()).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if !out.is_empty() || c.is_negative() {
                out.push_str(sign);
            }
            let a = c.abs();
            if i == 0 || !a.is_one() {
                out.push_str(&a.to_string());
            }
            match i {
                0 => {}
                1 => out.push('x'),
                _ => out.push_str(&format!("x{i}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// The `n`-th cyclotomic polynomial.
    pub fn cyclotomic(n: u64) -> IntPolynomial {
        // x^n - 1 divided by all Phi_k for proper divisors k of n
        let mut num = vec![BigRational::zero(); n as usize + 1];
        num[0] = -BigRational::one();
        num[n as usize] = BigRational::one();
        let mut p = QPoly::new(num);
        for k in 1..n {
            if n % k == 0 {
                let (q, _) = p.divrem(&IntPolynomial::cyclotomic(k).to_rational());
                p = q;
            }
        }
        p.to_primitive()
    }
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let a = n.abs();
    if a.bits() > 40 {
        return None;
    }
    let v: u64 = a.try_into().ok()?;
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= v {
        if v % i == 0 {
            out.push(BigInt::from(i));
            if i * i != v {
                out.push(BigInt::from(v / i));
            }
        }
        i += 1;
    }
    Some(out)
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Rational polynomial, `coeffs[i]` is the coefficient of `x^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly::new(vec![])
    }

    pub fn one() -> Self {
        QPoly::new(vec![BigRational::one()])
    }

    /// `x - a`.
    pub fn linear(a: &BigRational) -> Self {
        QPoly::new(vec![-a.clone(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn leading(&self) -> &BigRational {
        self.coeffs.last().expect("nonempty")
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn scale(&self, k: &BigRational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, n: usize) -> QPoly {
        (0..n).fold(QPoly::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        if self.degree() < dd || self.is_zero() {
            return (QPoly::zero(), self.clone());
        }
        let lead = d.leading().clone();
        let mut q = vec![BigRational::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd.max(1));
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().recip();
        self.scale(&inv)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn derivative(&self) -> QPoly {
        if self.degree() == 0 {
            return QPoly::zero();
        }
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Squarefree part `f / gcd(f, f')`, monic.
    pub fn squarefree_part(&self) -> QPoly {
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Scales to coprime integer coefficients with positive leading term.
    pub fn to_primitive(&self) -> IntPolynomial {
        let den = self.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &den).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return IntPolynomial::new(ints);
        }
        if ints.last().is_some_and(Signed::is_negative) {
            g = -g;
        }
        IntPolynomial::new(ints.into_iter().map(|c| c / &g).collect())
    }

    /// Exact check that `self` divides `o`.
    pub fn divides(&self, o: &QPoly) -> bool {
        o.rem(self).is_zero()
    }
}

/// Checks that a monic integer polynomial is squarefree.
pub fn is_squarefree(p: &IntPolynomial) -> bool {
    let q = p.to_rational();
    q.gcd(&q.derivative()).degree() == 0
}

/// Polynomial discriminant of a monic integer polynomial, via the resultant
/// with its derivative computed by exact subresultant-free Euclid over Q.
pub fn discriminant(p: &IntPolynomial) -> Result<BigInt> {
    let f = p.to_rational();
    let d = f.degree();
    if d == 0 {
        return Err(Error::Malformed("constant polynomial".into()));
    }
    let res = resultant(&f, &f.derivative());
    let sign = if (d * (d - 1) / 2) % 2 == 0 { 1 } else { -1 };
    let disc = res * BigRational::from_integer(BigInt::from(sign)) / f.leading();
    if !disc.is_integer() {
        return Err(Error::Inconsistent("non-integral discriminant".into()));
    }
    Ok(disc.to_integer())
}

/// Resultant over Q by the Euclidean algorithm.
pub fn resultant(a: &QPoly, b: &QPoly) -> BigRational {
    if a.is_zero() || b.is_zero() {
        return BigRational::zero();
    }
    let (m, n) = (a.degree(), b.degree());
    if n == 0 {
        return b.leading().pow(m as i32);
    }
    if m < n {
        let s = if (m * n) % 2 == 0 { 1 } else { -1 };
        return resultant(b, a) * BigRational::from_integer(BigInt::from(s));
    }
    let r = a.rem(b);
    if r.is_zero() {
        return BigRational::zero();
    }
    // res(a, b) = (-1)^{mn} lc(b)^{m - deg r} res(b, r)
    let k = r.degree();
    let s = if (m * n) % 2 == 0 { 1 } else { -1 };
    BigRational::from_integer(BigInt::from(s)) * b.leading().pow((m - k) as i32) * resultant(b, &r)
}
