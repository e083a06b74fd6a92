//! Weil heights of elements and Arakelov heights of vectors.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ideal;
use crate::margin::Margin;
use crate::nf::{find_roots, Field, FieldElement};
use crate::real::Real;

/// A nonempty list of elements of one field.
#[derive(Clone, Debug)]
pub struct FieldVector {
    field: Field,
    entries: Vec<FieldElement>,
}

impl FieldVector {
    pub fn new(field: &Field, entries: Vec<FieldElement>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::ZeroVector);
        }
        if entries.iter().any(|e| !Arc::ptr_eq(e.field(), field)) {
            return Err(Error::Inconsistent("vector entries live in different fields".into()));
        }
        Ok(FieldVector { field: field.clone(), entries })
    }

    /// Rows of power-basis coordinates.
    pub fn from_coords(field: &Field, rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let entries = rows.into_iter().map(|r| field.element(r)).collect::<Result<Vec<_>>>()?;
        FieldVector::new(field, entries)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldElement::is_zero)
    }

    /// `η·ξ`.
    pub fn scale(&self, eta: &FieldElement) -> FieldVector {
        FieldVector { field: self.field.clone(), entries: self.entries.iter().map(|e| e.mul(eta)).collect() }
    }
}

/// A height with its certified enclosure; `error_bound` is the ball radius.
#[derive(Clone, Debug)]
pub struct HeightValue {
    pub value: Real,
}

impl HeightValue {
    pub fn error_bound(&self) -> f64 {
        self.value.rad_f64()
    }

    pub fn to_f64(&self) -> f64 {
        self.value.mid_f64()
    }
}

/// `h(α)` from the archimedean embeddings of the ambient field plus the
/// leading coefficient of the primitive minimal polynomial.
pub fn weil_height_places(elem: &FieldElement) -> Result<HeightValue> {
    if elem.is_zero() {
        return Err(Error::ZeroElement);
    }
    let field = elem.field();
    let p = field.working_precision();
    let mut arch = Real::zero(p);
    for place in field.places() {
        let term = elem.log_abs_at(place)?.pos_part().mul_i64(place.local_degree as i64);
        arch = arch.add(&term);
    }
    let arch = arch.div(&Real::from_i64(field.degree() as i64, p))?;
    let f = elem.minimal_poly();
    let m = f.degree() as i64;
    let finite = Real::ln_bigint(&f.leading().abs(), p)?.div(&Real::from_i64(m, p))?;
    Ok(HeightValue { value: arch.add(&finite) })
}

/// `h(α) = (1/m) log M(f)` from the roots of the primitive minimal
/// polynomial `f`, found independently of the field's embeddings.
pub fn weil_height_mahler(elem: &FieldElement) -> Result<HeightValue> {
    if elem.is_zero() {
        return Err(Error::ZeroElement);
    }
    let p = elem.field().working_precision();
    let f = elem.minimal_poly();
    let m = f.degree();
    let lead = f.leading().abs();
    if m == 1 {
        let a0 = f.coeffs()[0].abs();
        let top = if a0 > lead { a0 } else { lead };
        return Ok(HeightValue { value: Real::ln_bigint(&top, p)? });
    }
    let roots = find_roots(&f, p)?;
    let mut sum = Real::ln_bigint(&lead, p)?;
    for r in &roots {
        let log_abs = r.value.abs_sq().ln()?.mul(&Real::from_f64(0.5, p));
        sum = sum.add(&log_abs.pos_part());
    }
    Ok(HeightValue { value: sum.div(&Real::from_i64(m as i64, p))? })
}

/// Weil height of a rational number: `log max(|p|, q)`.
pub fn rational_height(q: &BigRational, prec: usize) -> Result<Real> {
    if q.is_zero() {
        return Err(Error::ZeroElement);
    }
    let a = q.numer().abs();
    let b = q.denom().clone();
    Real::ln_bigint(if a > b { &a } else { &b }, prec)
}

/// `finite_part` computed with a caller-chosen clearing denominator `t`.
pub fn finite_part_with(vec: &FieldVector, t: &BigInt) -> Result<BigRational> {
    if vec.is_zero() {
        return Err(Error::ZeroVector);
    }
    let n = ideal::scaled_ideal_norm(vec, t)?;
    let d = vec.field().degree();
    Ok(BigRational::new(num_traits::pow(t.clone(), d), n))
}

/// `∏_{v∤∞} ‖ξ‖_v^{d_v}` as an exact rational, `t^d / N(J(tξ))`.
pub fn finite_part(vec: &FieldVector) -> Result<BigRational> {
    finite_part_with(vec, &ideal::clearing_denominator(vec))
}

/// `log H(ξ)`.
pub fn arakelov_height(vec: &FieldVector) -> Result<HeightValue> {
    if vec.is_zero() {
        return Err(Error::ZeroVector);
    }
    let field = vec.field();
    let p = field.working_precision();
    let half = Real::from_f64(0.5, p);
    let mut arch = Real::zero(p);
    for place in field.places() {
        let mut s = Real::zero(p);
        for x in vec.entries() {
            if !x.is_zero() {
                s = s.add(&x.embed(place.embedding_index).abs_sq());
            }
        }
        arch = arch.add(&s.ln()?.mul(&half).mul_i64(place.local_degree as i64));
    }
    let fin = Real::ln_rational(&finite_part(vec)?, p)?;
    let d = Real::from_i64(field.degree() as i64, p);
    Ok(HeightValue { value: arch.add(&fin).div(&d)? })
}

/// `(1, α, …, α^{M-1})`.
pub fn power_vector(elem: &FieldElement, m: usize) -> Result<FieldVector> {
    if m == 0 {
        return Err(Error::ZeroVector);
    }
    let mut entries = Vec::with_capacity(m);
    let mut cur = elem.field().one();
    for _ in 0..m {
        entries.push(cur.clone());
        cur = cur.mul(elem);
    }
    FieldVector::new(elem.field(), entries)
}

/// `log H(1, α, …, α^{M-1}) <= ½ log M + (M-1) h(α)`.
pub fn check_power_vector_height(elem: &FieldElement, m: usize) -> Result<Margin> {
    let lhs = arakelov_height(&power_vector(elem, m)?)?.value;
    let p = elem.field().working_precision();
    let h = if elem.is_zero() { Real::zero(p) } else { weil_height_places(elem)?.value };
    let rhs = Real::ln_i64(m as i64, p)?.mul(&Real::from_f64(0.5, p)).add(&h.mul_i64(m as i64 - 1));
    Ok(Margin::le(lhs, rhs))
}

/// Entries `α_1^{n_1} ⋯ α_M^{n_M}` for `0 <= n_m < N_m`, with `n_M`
/// varying fastest.
pub fn tensor_vector(field: &Field, generators: &[FieldElement], degrees: &[usize]) -> Result<FieldVector> {
    if generators.len() != degrees.len() {
        return Err(Error::LengthMismatch { expected: generators.len(), got: degrees.len() });
    }
    if degrees.contains(&0) {
        return Err(Error::ZeroVector);
    }
    let mut entries = vec![field.one()];
    for (g, &n) in generators.iter().zip(degrees) {
        let powers = power_vector(g, n)?;
        entries = entries.iter().flat_map(|e| powers.entries().iter().map(move |p| e.mul(p))).collect();
    }
    FieldVector::new(field, entries)
}

#[derive(Clone, Debug)]
pub struct TensorHeightReport {
    /// `log H(β) - Σ log H(a_m)`.
    pub difference: Real,
    pub multiplicative: bool,
    pub bound: Margin,
}

impl TensorHeightReport {
    pub fn holds(&self) -> bool {
        self.multiplicative && self.bound.holds
    }
}

pub fn check_tensor_height(field: &Field, generators: &[FieldElement], degrees: &[usize]) -> Result<TensorHeightReport> {
    let p = field.working_precision();
    let beta = arakelov_height(&tensor_vector(field, generators, degrees)?)?.value;
    let mut sum = Real::zero(p);
    let mut rhs = Real::zero(p);
    let mut total = 1i64;
    for (g, &n) in generators.iter().zip(degrees) {
        sum = sum.add(&arakelov_height(&power_vector(g, n)?)?.value);
        let h = if g.is_zero() { Real::zero(p) } else { weil_height_places(g)?.value };
        rhs = rhs.add(&h.mul_i64(n as i64 - 1));
        total *= n as i64;
    }
    rhs = rhs.add(&Real::ln_i64(total, p)?.mul(&Real::from_f64(0.5, p)));
    let difference = beta.sub(&sum);
    let multiplicative = difference.contains_zero();
    Ok(TensorHeightReport { difference, multiplicative, bound: Margin::le(beta, rhs) })
}

#[derive(Clone, Debug)]
pub struct DiscHeightReport {
    pub degree: usize,
    pub margin: Margin,
    /// The lower bound is not positive, so the check carries no content.
    pub vacuous: bool,
}

/// `h(α) >= log(D / m^m) / (2m(m-1))` with `D` the discriminant of `Q(α)`.
pub fn height_discriminant_lower(elem: &FieldElement, disc: &BigInt) -> Result<DiscHeightReport> {
    if elem.is_zero() {
        return Err(Error::ZeroElement);
    }
    let m = elem.minimal_poly().degree();
    if m < 2 {
        return Err(Error::RationalElement);
    }
    let p = elem.field().working_precision();
    let mm = BigInt::from(m).pow(m as u32);
    let num = Real::ln_rational(&BigRational::new(disc.abs(), mm), p)?;
    let bound = num.div(&Real::from_i64(2 * (m * (m - 1)) as i64, p))?;
    let vacuous = !bound.is_positive();
    let h = weil_height_places(elem)?.value;
    Ok(DiscHeightReport { degree: m, margin: Margin::le(bound, h), vacuous })
}
