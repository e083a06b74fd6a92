//! Number fields given by a monic defining polynomial, their elements in the
//! power basis, and certified complex embeddings.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, QMatrix};
use crate::poly::{self, IntPolynomial, QPoly};
use crate::real::{Complex, Real};

/// Extra bits carried internally on top of the requested precision.
pub const GUARD_BITS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlaceKind {
    Real,
    Complex,
}

/// An archimedean place. For complex places `embedding_index` is the root
/// with positive imaginary part and `embedding_index + 1` its conjugate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Place {
    pub kind: PlaceKind,
    pub local_degree: usize,
    pub embedding_index: usize,
}

/// A certified root: the true root lies in the disk of radius `radius`
/// around `value`'s midpoint (the `value` ball itself also encloses it).
#[derive(Clone, Debug)]
pub struct Root {
    pub value: Complex,
    pub radius: Real,
    pub is_real: bool,
}

#[derive(Debug)]
pub struct NumberField {
    label: String,
    poly: IntPolynomial,
    discriminant: BigInt,
    r1: usize,
    r2: usize,
    integral_basis: QMatrix,
    basis_inverse: QMatrix,
    precision: usize,
    roots: Vec<Root>,
    root_powers: Vec<Vec<Complex>>,
    places: Vec<Place>,
    // theta^(d+k) in the power basis, k = 0..d-1
    reduction: Vec<Vec<BigRational>>,
}

pub type Field = Arc<NumberField>;

impl NumberField {
    /// Builds and validates a field. `precision` is the user-facing bit
    /// count; roots are certified with [`GUARD_BITS`] extra bits.
    pub fn new(
        label: &str,
        poly: IntPolynomial,
        discriminant: BigInt,
        signature: (usize, usize),
        integral_basis: QMatrix,
        precision: usize,
    ) -> Result<Field> {
        let d = poly.degree();
        if d == 0 {
            return Err(Error::Malformed(format!("{label}: constant defining polynomial")));
        }
        if !poly.is_monic() {
            return Err(Error::NotMonic(poly.leading().to_string()));
        }
        if !poly::is_squarefree(&poly) {
            return Err(Error::NotSquarefree);
        }
        if (2..=3).contains(&d) {
            if let Some(r) = poly.rational_roots().first() {
                return Err(Error::Reducible(r.to_string()));
            }
        }
        let (r1, r2) = signature;
        if r1 + 2 * r2 != d {
            return Err(Error::SignatureMismatch { r1, r2, real: usize::MAX });
        }
        if integral_basis.len() != d || integral_basis.iter().any(|r| r.len() != d) {
            return Err(Error::BadIntegralBasis(format!("expected a {d}x{d} matrix")));
        }
        if integral_basis[0].iter().enumerate().any(|(i, c)| *c != if i == 0 { BigRational::one() } else { BigRational::zero() }) {
            return Err(Error::BadIntegralBasis("first basis element is not 1".into()));
        }
        let basis_inverse =
            linalg::inverse(&integral_basis).map_err(|_| Error::BadIntegralBasis("singular matrix".into()))?;

        let roots = find_roots(&poly, precision + GUARD_BITS)?;
        let real = roots.iter().filter(|r| r.is_real).count();
        if real != r1 {
            return Err(Error::SignatureMismatch { r1, r2, real });
        }
        let mut places = Vec::with_capacity(r1 + r2);
        let mut i = 0;
        while i < d {
            if roots[i].is_real {
                places.push(Place { kind: PlaceKind::Real, local_degree: 1, embedding_index: i });
                i += 1;
            } else {
                places.push(Place { kind: PlaceKind::Complex, local_degree: 2, embedding_index: i });
                i += 2;
            }
        }
        let root_powers = roots
            .iter()
            .map(|r| {
                let mut pw = vec![Complex::one(precision + GUARD_BITS)];
                for k in 1..d {
                    let next = pw[k - 1].mul(&r.value);
                    pw.push(next);
                }
                pw
            })
            .collect();

        let reduction = reduction_table(&poly);
        let field = NumberField {
            label: label.to_string(),
            poly,
            discriminant,
            r1,
            r2,
            integral_basis,
            basis_inverse,
            precision,
            roots,
            root_powers,
            places,
            reduction,
        };
        let field = Arc::new(field);
        let computed = field.basis_discriminant();
        if computed != BigRational::from_integer(field.discriminant.clone()) {
            return Err(Error::DiscriminantMismatch {
                claimed: field.discriminant.to_string(),
                computed: computed.to_string(),
            });
        }
        Ok(field)
    }

    /// The rationals, defined by `x`.
    pub fn rationals(precision: usize) -> Field {
        NumberField::new("Q", IntPolynomial::from_i64(&[0, 1]), BigInt::one(), (1, 0), linalg::identity(1), precision)
            .expect("Q is valid")
    }

    /// Convenience constructor for fields whose ring of integers is the
    /// power basis order; the discriminant is taken from the polynomial.
    pub fn monogenic(coeffs: &[i64], precision: usize) -> Result<Field> {
        let poly = IntPolynomial::from_i64(coeffs);
        let d = poly.degree();
        let disc = poly::discriminant(&poly)?;
        let roots = find_roots(&poly, precision + GUARD_BITS)?;
        let r1 = roots.iter().filter(|r| r.is_real).count();
        NumberField::new(&poly.label(), poly, disc, (r1, (d - r1) / 2), linalg::identity(d), precision)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    /// Absolute discriminant `D_k`.
    pub fn abs_discriminant(&self) -> BigInt {
        num_traits::Signed::abs(&self.discriminant)
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.r1, self.r2)
    }

    pub fn unit_rank(&self) -> usize {
        self.r1 + self.r2 - 1
    }

    pub fn integral_basis(&self) -> &QMatrix {
        &self.integral_basis
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Precision used for internal ball computations.
    pub fn working_precision(&self) -> usize {
        self.precision + GUARD_BITS
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn element(self: &Arc<Self>, coords: Vec<BigRational>) -> Result<FieldElement> {
        FieldElement::new(self, coords)
    }

    pub fn from_i64(self: &Arc<Self>, coords: &[i64]) -> FieldElement {
        let mut c: Vec<BigRational> = coords.iter().map(|&x| linalg::rat(x)).collect();
        c.resize(self.degree(), BigRational::zero());
        FieldElement { field: self.clone(), coords: c }
    }

    pub fn rational(self: &Arc<Self>, q: BigRational) -> FieldElement {
        let mut c = vec![BigRational::zero(); self.degree()];
        c[0] = q;
        FieldElement { field: self.clone(), coords: c }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.rational(BigRational::one())
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        self.rational(BigRational::zero())
    }

    /// The generator `θ`.
    pub fn generator(self: &Arc<Self>) -> FieldElement {
        let mut c = vec![BigRational::zero(); self.degree()];
        if self.degree() == 1 {
            c[0] = -linalg::rat(1) * BigRational::from_integer(self.poly.coeffs()[0].clone());
        } else {
            c[1] = BigRational::one();
        }
        FieldElement { field: self.clone(), coords: c }
    }

    /// Element of the integral basis.
    pub fn basis_element(self: &Arc<Self>, j: usize) -> FieldElement {
        FieldElement { field: self.clone(), coords: self.integral_basis[j].clone() }
    }

    /// Coordinates of a power-basis vector in the integral basis.
    pub fn to_integral_coords(&self, coords: &[BigRational]) -> Vec<BigRational> {
        linalg::vec_mat(coords, &self.basis_inverse)
    }

    /// Determinant of the trace form on the integral basis.
    pub fn basis_discriminant(self: &Arc<Self>) -> BigRational {
        let d = self.degree();
        let basis: Vec<FieldElement> = (0..d).map(|j| self.basis_element(j)).collect();
        let gram: QMatrix =
            (0..d).map(|i| (0..d).map(|j| basis[i].mul(&basis[j]).trace()).collect()).collect();
        linalg::det(&gram)
    }

    fn reduce(&self, mut prod: Vec<BigRational>) -> Vec<BigRational> {
        let d = self.degree();
        for k in (d..prod.len()).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_zero() {
                continue;
            }
            for (i, r) in self.reduction[k - d].iter().enumerate() {
                if !r.is_zero() {
                    prod[i] += &c * r;
                }
            }
        }
        prod.truncate(d);
        prod.resize(d, BigRational::zero());
        prod
    }

    /// Pseudorandom element with numerators in `[-num, num]` and
    /// denominators in `[1, den]`.
    pub fn random_element<R: Rng>(self: &Arc<Self>, rng: &mut R, num: i64, den: i64) -> FieldElement {
        let coords = (0..self.degree())
            .map(|_| BigRational::new(BigInt::from(rng.gen_range(-num..=num)), BigInt::from(rng.gen_range(1..=den))))
            .collect();
        FieldElement { field: self.clone(), coords }
    }

    /// Pseudorandom nonzero algebraic integer with small integral-basis
    /// coordinates.
    pub fn random_integer<R: Rng>(self: &Arc<Self>, rng: &mut R, bound: i64) -> FieldElement {
        loop {
            let y: Vec<BigRational> = (0..self.degree()).map(|_| linalg::rat(rng.gen_range(-bound..=bound))).collect();
            let coords = linalg::vec_mat(&y, &self.integral_basis);
            let e = FieldElement { field: self.clone(), coords };
            if !e.is_zero() {
                return e;
            }
        }
    }
}

fn reduction_table(poly: &IntPolynomial) -> Vec<Vec<BigRational>> {
    let d = poly.degree();
    let c: Vec<BigRational> = poly.coeffs().iter().map(|x| BigRational::from_integer(x.clone())).collect();
    // theta^d = -(c_0 + ... + c_{d-1} theta^{d-1})
    let mut cur: Vec<BigRational> = c[..d].iter().map(|x| -x.clone()).collect();
    let mut out = Vec::with_capacity(d.saturating_sub(1));
    for _ in 0..d.saturating_sub(1).max(1) {
        out.push(cur.clone());
        let top = cur[d - 1].clone();
        let mut next = vec![BigRational::zero(); d];
        for i in (1..d).rev() {
            next[i] = cur[i - 1].clone();
        }
        for i in 0..d {
            next[i] -= &top * &c[i];
        }
        cur = next;
    }
    out
}

/// An element of a number field in power-basis coordinates.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    coords: Vec<BigRational>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "[{}]@{}", parts.join(", "), self.field.label)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.field, &other.field) && self.coords == other.coords
    }
}

impl FieldElement {
    pub fn new(field: &Field, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() != field.degree() {
            return Err(Error::LengthMismatch { expected: field.degree(), got: coords.len() });
        }
        Ok(FieldElement { field: field.clone(), coords })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn same_field(&self, o: &FieldElement) -> bool {
        Arc::ptr_eq(&self.field, &o.field)
    }

    pub fn add(&self, o: &FieldElement) -> FieldElement {
        debug_assert!(self.same_field(o));
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect();
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn sub(&self, o: &FieldElement) -> FieldElement {
        debug_assert!(self.same_field(o));
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect();
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|a| -a.clone()).collect() }
    }

    pub fn scale(&self, q: &BigRational) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|a| a * q).collect() }
    }

    pub fn mul(&self, o: &FieldElement) -> FieldElement {
        debug_assert!(self.same_field(o));
        let d = self.coords.len();
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        FieldElement { field: self.field.clone(), coords: self.field.reduce(prod) }
    }

    /// `self^n` for any integer `n` (negative powers need `self != 0`).
    pub fn pow(&self, n: i64) -> Result<FieldElement> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut result = self.field.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(result)
    }

    /// Matrix of multiplication by `self`: row `i` holds `self·θ^i`.
    pub fn multiplication_matrix(&self) -> QMatrix {
        let d = self.coords.len();
        let mut rows = Vec::with_capacity(d);
        let mut cur = self.clone();
        let theta = self.field.generator();
        for i in 0..d {
            rows.push(cur.coords.clone());
            if i + 1 < d {
                cur = cur.mul(&theta);
            }
        }
        rows
    }

    pub fn inverse(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let d = self.coords.len();
        let mut e0 = vec![BigRational::zero(); d];
        e0[0] = BigRational::one();
        let coords = linalg::solve_left(&self.multiplication_matrix(), &e0)?;
        Ok(FieldElement { field: self.field.clone(), coords })
    }

    pub fn div(&self, o: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(&o.inverse()?))
    }

    /// Characteristic polynomial of multiplication by `self`, monic of
    /// degree `d`, by the Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> QPoly {
        let a = self.multiplication_matrix();
        let d = a.len();
        let mut c = vec![BigRational::zero(); d + 1];
        c[d] = BigRational::one();
        let mut m = vec![vec![BigRational::zero(); d]; d];
        for k in 1..=d {
            // M_k = A M_{k-1} + c_{d-k+1} I
            let mut mk = linalg::mat_mul(&a, &m);
            for (i, row) in mk.iter_mut().enumerate() {
                row[i] += &c[d - k + 1];
            }
            let am = linalg::mat_mul(&a, &mk);
            let tr = (0..d).fold(BigRational::zero(), |s, i| s + &am[i][i]);
            c[d - k] = -tr / linalg::rat(k as i64);
            m = mk;
        }
        QPoly::new(c)
    }

    /// Primitive integer minimal polynomial with positive leading term.
    pub fn minimal_poly(&self) -> IntPolynomial {
        self.char_poly().squarefree_part().to_primitive()
    }

    pub fn norm_and_trace(&self) -> (BigRational, BigRational) {
        let cp = self.char_poly();
        let d = cp.degree();
        let sign = if d % 2 == 0 { linalg::rat(1) } else { linalg::rat(-1) };
        (sign * cp.coeff(0), -cp.coeff(d - 1))
    }

    pub fn norm(&self) -> BigRational {
        self.norm_and_trace().0
    }

    /// Trace straight from the multiplication matrix.
    pub fn trace(&self) -> BigRational {
        let m = self.multiplication_matrix();
        (0..m.len()).fold(BigRational::zero(), |s, i| s + &m[i][i])
    }

    /// Coordinates in the integral basis.
    pub fn integral_coords(&self) -> Vec<BigRational> {
        self.field.to_integral_coords(&self.coords)
    }

    pub fn is_integral(&self) -> bool {
        self.integral_coords().iter().all(|c| c.is_integer())
    }

    /// `σ_j(self)` for root index `j`, as a complex ball.
    pub fn embed(&self, j: usize) -> Complex {
        let p = self.field.working_precision();
        let pw = &self.field.root_powers[j];
        let mut acc = Complex::zero(p);
        for (c, z) in self.coords.iter().zip(pw) {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&z.scale(&Real::from_rational(c, p)));
        }
        if self.field.roots[j].is_real {
            acc.im = Real::zero(p);
        }
        acc
    }

    /// All `d` embeddings in root order.
    pub fn embeddings(&self) -> Vec<Complex> {
        (0..self.field.degree()).map(|j| self.embed(j)).collect()
    }

    /// `|σ_v(self)|` at an archimedean place.
    pub fn abs_at(&self, place: &Place) -> Result<Real> {
        self.embed(place.embedding_index).abs()
    }

    /// `log |σ_v(self)|`; errors for zero.
    pub fn log_abs_at(&self, place: &Place) -> Result<Real> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let z = self.embed(place.embedding_index);
        if place.kind == PlaceKind::Real {
            z.re.abs().ln()
        } else {
            Ok(z.abs_sq().ln()?.mul(&Real::from_f64(0.5, z.precision())))
        }
    }
}

// ---------------------------------------------------------------------------
// Root finding

fn f64_roots(poly: &IntPolynomial) -> Result<Vec<Complex64>> {
    let d = poly.degree();
    let lead = poly.leading().to_f64().unwrap_or(f64::MAX);
    let c: Vec<Complex64> =
        poly.coeffs().iter().map(|x| Complex64::new(x.to_f64().unwrap_or(f64::MAX) / lead, 0.0)).collect();
    let radius = (1..=d)
        .map(|k| c[d - k].norm().powf(1.0 / k as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4))
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            dp = dp * x + p;
            p = p * x + a;
        }
        (p, dp)
    };
    for _ in 0..2000 {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let n = p / dp;
            let s: Complex64 = (0..d).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = n / (Complex64::new(1.0, 0.0) - n * s);
            if w.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            return Ok(z);
        }
    }
    // the approximations are usually still good enough for polishing
    if z.iter().all(|x| x.is_finite()) {
        Ok(z)
    } else {
        Err(Error::NoConvergence(2000))
    }
}

fn eval_complex(c: &[Real], x: &Complex) -> Complex {
    let p = x.precision();
    let mut acc = Complex::zero(p);
    for a in c.iter().rev() {
        acc = acc.mul(x).add(&Complex::from_real(a.clone()));
    }
    acc
}

fn eval_with_derivative(c: &[Real], x: &Complex) -> (Complex, Complex) {
    let p = x.precision();
    let mut v = Complex::zero(p);
    let mut dv = Complex::zero(p);
    for a in c.iter().rev() {
        dv = dv.mul(x).add(&v);
        v = v.mul(x).add(&Complex::from_real(a.clone()));
    }
    (v, dv)
}

fn polish(c: &[Real], start: &[Complex], prec: usize) -> Vec<Complex> {
    let mut z: Vec<Complex> = start.iter().map(|s| {
        Complex::new(s.re.midpoint().with_precision(prec), s.im.midpoint().with_precision(prec))
    }).collect();
    let d = z.len();
    let tol = Real::from_f64(2f64.powi(-(prec as i32) + 4), prec);
    // a handful of simultaneous Aberth steps, then Newton to full precision
    for _ in 0..(prec / 8 + 20) {
        let mut moved = false;
        for i in 0..d {
            let (v, dv) = eval_with_derivative(c, &z[i]);
            let Ok(n) = v.div(&dv) else { continue };
            let mut s = Complex::zero(prec);
            for j in 0..d {
                if j != i {
                    if let Ok(t) = Complex::one(prec).div(&z[i].sub(&z[j])) {
                        s = s.add(&t);
                    }
                }
            }
            let den = Complex::one(prec).sub(&n.mul(&s));
            let Ok(w) = n.div(&den) else { continue };
            let w = w.midpoint();
            let size = w.abs_sq();
            let scale = z[i].abs_sq().max(&Real::one(prec));
            if size.cmp_mid(&tol.sqr().mul(&scale)) == Ordering::Greater {
                moved = true;
            }
            z[i] = z[i].sub(&w).midpoint();
        }
        if !moved {
            break;
        }
    }
    z
}

/// Inclusion radii `d·|p(z_i) / (a_d ∏_{j≠i} (z_i − z_j))|`, rounded up.
fn inclusion_radii(c: &[Real], z: &[Complex]) -> Result<Vec<Real>> {
    let d = z.len();
    let lead = c.last().expect("nonconstant").clone();
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let mut prod = Complex::from_real(lead.clone());
        for j in 0..d {
            if j != i {
                prod = prod.mul(&z[i].sub(&z[j]));
            }
        }
        let w = eval_complex(c, &z[i]).div(&prod)?;
        let r = w.abs_sq().sqrt()?.upper().mul_i64(d as i64).upper();
        out.push(r);
    }
    Ok(out)
}

fn disks_disjoint(z: &[Complex], r: &[Real]) -> bool {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let dist2 = z[i].sub(&z[j]).abs_sq();
            let sum = r[i].add(&r[j]);
            if !dist2.sub(&sum.sqr()).is_positive() {
                return false;
            }
        }
    }
    true
}

/// Certified roots of a squarefree integer polynomial. Roots are ordered:
/// real roots ascending, then conjugate pairs by ascending real part with
/// the member of positive imaginary part first. Each radius is at most
/// `2^(16 - precision)`.
pub fn find_roots(poly: &IntPolynomial, precision: usize) -> Result<Vec<Root>> {
    let d = poly.degree();
    if d == 0 {
        return Ok(vec![]);
    }
    let approx = f64_roots(poly)?;
    let target = Real::from_f64(2f64.powi(16 - precision as i32), precision);
    let mut wp = precision + 32;
    let mut z: Vec<Complex> =
        approx.iter().map(|a| Complex::new(Real::from_f64(a.re, wp), Real::from_f64(a.im, wp))).collect();
    for _ in 0..10 {
        let c: Vec<Real> = poly.coeffs().iter().map(|x| Real::from_bigint(x, wp)).collect();
        z = polish(&c, &z, wp);
        if let Some(roots) = certify(&c, &z, wp, &target)? {
            return Ok(roots);
        }
        wp += wp / 2;
    }
    Err(Error::UnresolvedRoots(wp))
}

fn certify(c: &[Real], z: &[Complex], wp: usize, target: &Real) -> Result<Option<Vec<Root>>> {
    let d = z.len();
    let snap = Real::from_f64(2f64.powi(-(wp as i32) / 2), wp);
    let mut reals: Vec<Complex> = Vec::new();
    let mut uppers: Vec<Complex> = Vec::new();
    let mut lowers: Vec<usize> = Vec::new();
    for (i, zi) in z.iter().enumerate() {
        let scale = zi.re.abs().max(&Real::one(wp));
        if zi.im.abs().cmp_mid(&snap.mul(&scale)) == Ordering::Less {
            reals.push(Complex::from_real(zi.re.midpoint()));
        } else if zi.im.mid_f64() > 0.0 {
            uppers.push(zi.midpoint());
        } else {
            lowers.push(i);
        }
    }
    if uppers.len() != lowers.len() {
        return Ok(None);
    }
    reals.sort_by(|a, b| a.re.cmp_mid(&b.re));
    uppers.sort_by(|a, b| match a.re.cmp_mid(&b.re) {
        Ordering::Equal => a.im.cmp_mid(&b.im),
        o => o,
    });
    let mut ordered = reals.clone();
    for u in &uppers {
        ordered.push(u.clone());
        ordered.push(u.conj());
    }
    debug_assert_eq!(ordered.len(), d);
    let radii = inclusion_radii(c, &ordered)?;
    if !disks_disjoint(&ordered, &radii) {
        return Ok(None);
    }
    if radii.iter().any(|r| r.cmp_mid(target) == Ordering::Greater) {
        return Ok(None);
    }
    let nreal = reals.len();
    Ok(Some(
        ordered
            .into_iter()
            .zip(radii)
            .enumerate()
            .map(|(i, (v, r))| {
                let is_real = i < nreal;
                let zero = Real::zero(wp);
                let value = Complex::new(
                    Real::with_radius(&v.re, &r),
                    if is_real { zero } else { Real::with_radius(&v.im, &r) },
                );
                Root { value, radius: r, is_real }
            })
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn qp(v: &[i64]) -> QPoly {
        QPoly::new(v.iter().map(|&x| linalg::rat(x)).collect())
    }

    fn sqrt2() -> Field {
        NumberField::monogenic(&[-2, 0, 1], 128).unwrap()
    }

    #[test]
    fn parse_small_fields() {
        let k = sqrt2();
        assert_eq!(k.signature(), (2, 0));
        assert_eq!(k.unit_rank(), 1);
        assert_eq!(k.places().len(), 2);
        let g = NumberField::monogenic(&[1, 0, 1], 128).unwrap();
        assert_eq!(g.signature(), (0, 1));
        assert_eq!(g.unit_rank(), 0);
        assert_eq!(g.places()[0].local_degree, 2);
        let c = NumberField::monogenic(&[-1, -2, 1, 1], 128).unwrap();
        assert_eq!(*c.discriminant(), BigInt::from(49));
        assert_eq!(c.unit_rank(), 2);
    }

    #[test]
    fn rejects_bad_data() {
        let p = IntPolynomial::from_i64(&[-2, 0, 1]);
        let e = NumberField::new("x", p.clone(), 8.into(), (0, 1), linalg::identity(2), 128).unwrap_err();
        assert!(matches!(e, Error::SignatureMismatch { real: 2, .. }));
        let e = NumberField::new("x", p.clone(), 9.into(), (2, 0), linalg::identity(2), 128).unwrap_err();
        assert!(matches!(e, Error::DiscriminantMismatch { .. }));
        let e = NumberField::new("x", IntPolynomial::from_i64(&[-2, 0, 2]), 8.into(), (2, 0), linalg::identity(2), 128)
            .unwrap_err();
        assert!(matches!(e, Error::NotMonic(_)));
        let sing = vec![vec![linalg::rat(1), linalg::rat(0)], vec![linalg::rat(2), linalg::rat(0)]];
        let e = NumberField::new("x", p, 8.into(), (2, 0), sing, 128).unwrap_err();
        assert!(matches!(e, Error::BadIntegralBasis(_)));
        let e = NumberField::monogenic(&[-1, 0, 1], 128).unwrap_err();
        assert!(matches!(e, Error::Reducible(_)));
    }

    #[test]
    fn roots_of_x2_minus_2() {
        let r = find_roots(&IntPolynomial::from_i64(&[-2, 0, 1]), 128).unwrap();
        assert!(r.iter().all(|x| x.is_real));
        assert!((r[0].value.re.mid_f64() + std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!((r[1].value.re.mid_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        let two = Real::from_i64(2, 200);
        assert!(r[1].value.re.sqr().sub(&two).contains_zero());
    }

    #[test]
    fn roots_of_x2_plus_1_form_a_pair() {
        let r = find_roots(&IntPolynomial::from_i64(&[1, 0, 1]), 128).unwrap();
        assert!(!r[0].is_real && !r[1].is_real);
        assert!(r[0].value.im.add(&Real::from_i64(-1, 128)).contains_zero());
        assert!(r[1].value.im.add(&Real::from_i64(1, 128)).contains_zero());
    }

    #[test]
    fn cube_root_of_two_against_bisection() {
        let r = find_roots(&IntPolynomial::from_i64(&[-2, 0, 0, 1]), 128).unwrap();
        assert_eq!(r.iter().filter(|x| x.is_real).count(), 1);
        // bisection oracle on exact rationals
        let (mut lo, mut hi) = (q(1, 1), q(2, 1));
        for _ in 0..100 {
            let mid = (&lo + &hi) / q(2, 1);
            if &mid * &mid * &mid < q(2, 1) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let enclosure = Real::from_rational(&lo, 200);
        let diff = r[0].value.re.sub(&enclosure);
        assert!(diff.abs().upper_f64() < 1e-29);
        assert!(r[0].radius.upper_f64() <= 2f64.powi(16 - 128));
        assert!(r[1].value.im.is_positive());
    }

    #[test]
    fn root_residual_bound() {
        for coeffs in [&[-1i64, -2, 1, 1][..], &[1, 1, 1, 1, 1], &[1, -1, 2, -2, 2, -1, 1], &[1, 0, -10, 0, 1]] {
            let p = IntPolynomial::from_i64(coeffs);
            let roots = find_roots(&p, 128).unwrap();
            let c: Vec<Real> = p.coeffs().iter().map(|x| Real::from_bigint(x, 192)).collect();
            for r in &roots {
                let m = r.value.midpoint();
                let (v, dv) = eval_with_derivative(&c, &m);
                let bound = dv.abs_sq().sqrt().unwrap().mul(&r.radius).mul_i64(2);
                assert!(v.abs_sq().sqrt().unwrap().sub(&bound).is_negative());
            }
        }
    }

    #[test]
    fn char_poly_examples() {
        let k = sqrt2();
        assert_eq!(k.from_i64(&[2]).char_poly(), qp(&[4, -4, 1]));
        assert_eq!(k.from_i64(&[0, 1]).char_poly(), qp(&[-2, 0, 1]));
        assert_eq!(k.from_i64(&[1, 1]).char_poly(), qp(&[-1, -2, 1]));
    }

    #[test]
    fn minimal_poly_examples() {
        let k = sqrt2();
        assert_eq!(k.rational(q(3, 2)).minimal_poly(), IntPolynomial::from_i64(&[-3, 2]));
        assert_eq!(k.zero().minimal_poly(), IntPolynomial::from_i64(&[0, 1]));
        // θ = √2 + √3 in x^4 - 10x^2 + 1 with the power-basis order; √2 = (θ^3 - 9θ)/2
        let l = NumberField::monogenic(&[1, 0, -10, 0, 1], 128).unwrap();
        let s2 = l.element(vec![q(0, 1), q(-9, 2), q(0, 1), q(1, 2)]).unwrap();
        assert_eq!(s2.minimal_poly(), IntPolynomial::from_i64(&[-2, 0, 1]));
        assert_eq!(s2.char_poly(), qp(&[-2, 0, 1]).pow(2));
    }

    #[test]
    fn norm_trace_examples() {
        let k = sqrt2();
        assert_eq!(k.from_i64(&[1, 1]).norm_and_trace(), (q(-1, 1), q(2, 1)));
        assert_eq!(k.one().norm_and_trace(), (q(1, 1), q(2, 1)));
        assert_eq!(k.from_i64(&[0, 1]).norm_and_trace(), (q(-2, 1), q(0, 1)));
    }

    #[test]
    fn inverse_round_trip() {
        let k = NumberField::monogenic(&[-1, -2, 1, 1], 128).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = k.random_element(&mut rng, 9, 5);
            if a.is_zero() {
                continue;
            }
            assert_eq!(a.mul(&a.inverse().unwrap()), k.one());
        }
    }

    fn fields() -> Vec<Field> {
        vec![
            sqrt2(),
            NumberField::monogenic(&[1, 0, 1], 128).unwrap(),
            NumberField::monogenic(&[-1, -2, 1, 1], 128).unwrap(),
            NumberField::monogenic(&[1, 1, 1, 1, 1], 128).unwrap(),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn norm_multiplicative_trace_additive(seed in any::<u64>(), which in 0usize..4) {
            let k = &fields()[which];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = k.random_element(&mut rng, 7, 4);
            let b = k.random_element(&mut rng, 7, 4);
            prop_assert_eq!(a.mul(&b).norm(), a.norm() * b.norm());
            prop_assert_eq!(a.add(&b).trace(), a.trace() + b.trace());
            prop_assert_eq!(a.trace(), a.norm_and_trace().1);
        }

        #[test]
        fn char_poly_of_scaled_element(seed in any::<u64>(), which in 0usize..4, n in -6i64..7, m in 1i64..5) {
            prop_assume!(n != 0);
            let k = &fields()[which];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = k.random_element(&mut rng, 7, 4);
            let s = q(n, m);
            let d = k.degree();
            // χ_{sα}(x) = s^d χ_α(x / s)
            let lhs = a.scale(&s).char_poly();
            let chi = a.char_poly();
            let rhs = QPoly::new((0..=d).map(|i| chi.coeff(i) * s.pow((d - i) as i32)).collect());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn minimal_poly_power_is_char_poly(seed in any::<u64>(), which in 0usize..4) {
            let k = &fields()[which];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = k.random_element(&mut rng, 5, 3);
            let mp = a.minimal_poly().to_rational().monic();
            let cp = a.char_poly();
            prop_assert!(mp.divides(&cp));
            prop_assert_eq!(k.degree() % mp.degree(), 0);
            prop_assert_eq!(mp.pow(k.degree() / mp.degree()), cp);
        }
    }
}
