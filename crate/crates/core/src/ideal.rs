//! Embedding matrices, trace forms, the functional `f_k` and lattice
//! indices of the module and fractional ideal generated by a vector.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::heights::{self, FieldVector};
use crate::linalg::{self, QMatrix, ZMatrix};
use crate::margin::Margin;
use crate::nf::Field;
use crate::real::{Complex, Real};

/// Entry `(i, j)` is `σ_j(β_i)`.
pub type EmbeddingMatrix = Vec<Vec<Complex>>;

fn require_square(vec: &FieldVector) -> Result<()> {
    let d = vec.field().degree();
    if vec.len() != d {
        return Err(Error::LengthMismatch { expected: d, got: vec.len() });
    }
    Ok(())
}

pub fn embedding_matrix(vec: &FieldVector) -> Result<EmbeddingMatrix> {
    require_square(vec)?;
    Ok(vec.entries().iter().map(|b| b.embeddings()).collect())
}

/// `|det M(β)|²` as a ball.
pub fn embedding_det_sq(vec: &FieldVector) -> Result<Real> {
    let m = embedding_matrix(vec)?;
    let d = m.len();
    let p = vec.field().working_precision();
    // det over C by elimination on complex balls
    let mut a = m;
    let mut det = Complex::one(p);
    for c in 0..d {
        let piv = (c..d).max_by(|&i, &j| a[i][c].abs_sq().cmp_mid(&a[j][c].abs_sq())).expect("nonempty");
        if a[piv][c].abs_sq().contains_zero() {
            return Ok(Real::zero(p));
        }
        if piv != c {
            a.swap(piv, c);
            det = det.neg();
        }
        let pv = a[c][c].clone();
        det = det.mul(&pv);
        for r in c + 1..d {
            let f = a[r][c].div(&pv)?;
            for k in c..d {
                let t = f.mul(&a[c][k]);
                a[r][k] = a[r][k].sub(&t);
            }
        }
    }
    Ok(det.abs_sq())
}

/// Exact `(Trace(β_i β_j))`.
pub fn gram_trace_matrix(vec: &FieldVector) -> Result<QMatrix> {
    require_square(vec)?;
    let e = vec.entries();
    let d = e.len();
    let mut g = vec![vec![BigRational::zero(); d]; d];
    for i in 0..d {
        for j in i..d {
            let t = e[i].mul(&e[j]).trace();
            g[j][i] = t.clone();
            g[i][j] = t;
        }
    }
    Ok(g)
}

/// Smallest positive integer `t` with every `t·ξ_i` integral.
pub fn clearing_denominator(vec: &FieldVector) -> BigInt {
    let coords: Vec<Vec<BigRational>> = vec.entries().iter().map(|e| e.integral_coords()).collect();
    linalg::common_denominator(coords.iter().flatten())
}

/// Integer rows spanning `J(t·ξ)`: the integral coordinates of every
/// product `t·ξ_i·ω_j`.
fn ideal_rows(vec: &FieldVector, t: &BigInt) -> Result<ZMatrix> {
    let field = vec.field();
    let d = field.degree();
    let tq = BigRational::from_integer(t.clone());
    let mut rows = Vec::with_capacity(vec.len() * d);
    for x in vec.entries() {
        if x.is_zero() {
            continue;
        }
        let tx = x.scale(&tq);
        for j in 0..d {
            let y = tx.mul(&field.basis_element(j)).integral_coords();
            if y.iter().any(|c| !c.is_integer()) {
                return Err(Error::Inconsistent("scaling does not clear denominators".into()));
            }
            rows.push(y.iter().map(|c| c.to_integer()).collect());
        }
    }
    Ok(rows)
}

/// Norm of the integral ideal generated by `t·ξ`.
pub fn scaled_ideal_norm(vec: &FieldVector, t: &BigInt) -> Result<BigInt> {
    if vec.is_zero() {
        return Err(Error::ZeroVector);
    }
    linalg::lattice_covolume(&ideal_rows(vec, t)?, vec.field().degree())
}

/// Norm of the fractional ideal `J(ξ)`.
pub fn ideal_norm(vec: &FieldVector) -> Result<BigRational> {
    let t = clearing_denominator(vec);
    let n = scaled_ideal_norm(vec, &t)?;
    let d = vec.field().degree() as u32;
    Ok(BigRational::new(n, num_traits::pow(t, d as usize)))
}

/// Exact `f_k(β) = |det Gram| · finite_part(β)²`, a positive integer.
pub fn f_k(vec: &FieldVector) -> Result<BigInt> {
    let g = gram_trace_matrix(vec)?;
    let det = linalg::det(&g).abs();
    if det.is_zero() {
        return Err(Error::DependentEntries);
    }
    let fp = heights::finite_part(vec)?;
    let value = det * &fp * &fp;
    if !value.is_integer() || !value.is_positive() {
        return Err(Error::Inconsistent(format!("f_k evaluated to non-integer {value}")));
    }
    Ok(value.to_integer())
}

/// `[J(β) : M(β)]` as an exact integer.
pub fn lattice_index(vec: &FieldVector) -> Result<BigInt> {
    require_square(vec)?;
    let t = clearing_denominator(vec);
    let tq = BigRational::from_integer(t.clone());
    let module: QMatrix = vec.entries().iter().map(|e| e.scale(&tq).integral_coords()).collect();
    let m_covol = linalg::det(&module).abs();
    if m_covol.is_zero() {
        return Err(Error::DependentEntries);
    }
    let j_covol = BigRational::from_integer(scaled_ideal_norm(vec, &t)?);
    let index = m_covol / j_covol;
    if !index.is_integer() {
        return Err(Error::Inconsistent(format!("non-integral lattice index {index}")));
    }
    Ok(index.to_integer())
}

#[derive(Clone, Debug)]
pub struct FkIdentityReport {
    pub f_k: BigInt,
    pub index: BigInt,
    pub discriminant: BigInt,
    /// `f_k == index² · D_k` exactly.
    pub identity_holds: bool,
    /// `log f_k <= 2d · log H(β)`.
    pub hadamard: Margin,
}

impl FkIdentityReport {
    pub fn holds(&self) -> bool {
        self.identity_holds && self.hadamard.holds
    }
}

pub fn verify_fk_identity(vec: &FieldVector) -> Result<FkIdentityReport> {
    let fk = f_k(vec)?;
    let index = lattice_index(vec)?;
    let field = vec.field();
    let disc = field.abs_discriminant();
    let identity_holds = fk == &index * &index * &disc;
    let p = field.working_precision();
    let log_h = heights::arakelov_height(vec)?.value;
    let rhs = log_h.mul_i64(2 * field.degree() as i64);
    let lhs = Real::ln_bigint(&fk, p)?;
    Ok(FkIdentityReport { f_k: fk, index, discriminant: disc, identity_holds, hadamard: Margin::le(lhs, rhs) })
}

/// `A·β` for an integer matrix `A`.
pub fn transform(vec: &FieldVector, a: &[Vec<i64>]) -> Result<FieldVector> {
    let field = vec.field();
    let entries = a
        .iter()
        .map(|row| {
            row.iter().zip(vec.entries()).fold(field.zero(), |acc, (&c, b)| {
                acc.add(&b.scale(&BigRational::from_integer(BigInt::from(c))))
            })
        })
        .collect();
    FieldVector::new(field, entries)
}

/// Determinant of a small integer matrix.
pub fn int_det(a: &[Vec<i64>]) -> BigInt {
    let q: QMatrix = a.iter().map(|r| r.iter().map(|&x| linalg::rat(x)).collect()).collect();
    let d = linalg::det(&q);
    debug_assert!(d.denom().is_one());
    d.to_integer()
}

/// Pseudorandom vector of `d` linearly independent elements.
pub fn random_independent_vector<R: rand::Rng>(field: &Field, rng: &mut R) -> FieldVector {
    loop {
        let entries = (0..field.degree()).map(|_| field.random_element(rng, 6, 3)).collect();
        let v = FieldVector::new(field, entries).expect("entries share the field");
        if !linalg::det(&gram_trace_matrix(&v).expect("same field")).is_zero() {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::NumberField;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q2() -> crate::nf::Field {
        NumberField::monogenic(&[-2, 0, 1], 128).unwrap()
    }

    fn vector(k: &crate::nf::Field, rows: &[&[i64]]) -> FieldVector {
        FieldVector::new(k, rows.iter().map(|r| k.from_i64(r)).collect()).unwrap()
    }

    #[test]
    fn embedding_matrix_of_power_basis() {
        let k = q2();
        let m = embedding_matrix(&vector(&k, &[&[1], &[0, 1]])).unwrap();
        let s = std::f64::consts::SQRT_2;
        assert!((m[0][0].re.mid_f64() - 1.0).abs() < 1e-30);
        assert!((m[1][0].re.mid_f64() + s).abs() < 1e-15);
        assert!((m[1][1].re.mid_f64() - s).abs() < 1e-15);
        let z = embedding_det_sq(&vector(&k, &[&[1], &[0]])).unwrap();
        assert!(z.contains_zero());
        assert!(embedding_matrix(&vector(&k, &[&[1]])).is_err());
    }

    #[test]
    fn gram_examples() {
        let k = q2();
        let g = gram_trace_matrix(&vector(&k, &[&[1], &[0, 1]])).unwrap();
        assert_eq!(g, vec![vec![linalg::rat(2), linalg::rat(0)], vec![linalg::rat(0), linalg::rat(4)]]);
        assert_eq!(linalg::det(&g), linalg::rat(8));
        let g = gram_trace_matrix(&vector(&k, &[&[1], &[0, 2]])).unwrap();
        assert_eq!(linalg::det(&g), linalg::rat(32));
        let g = gram_trace_matrix(&vector(&k, &[&[1, 1], &[1, 1]])).unwrap();
        assert!(linalg::det(&g).is_zero());
    }

    #[test]
    fn f_k_and_index_examples() {
        let k = q2();
        let b = vector(&k, &[&[1], &[0, 1]]);
        assert_eq!(f_k(&b).unwrap(), BigInt::from(8));
        assert_eq!(lattice_index(&b).unwrap(), BigInt::from(1));
        let b2 = vector(&k, &[&[1], &[0, 2]]);
        assert_eq!(f_k(&b2).unwrap(), BigInt::from(32));
        assert_eq!(lattice_index(&b2).unwrap(), BigInt::from(2));
        let alpha = k.element(vec![BigRational::new(3.into(), 7.into()), BigRational::new((-5).into(), 2.into())]).unwrap();
        let scaled = b.scale(&alpha);
        assert_eq!(f_k(&scaled).unwrap(), BigInt::from(8));
        assert_eq!(lattice_index(&scaled).unwrap(), BigInt::from(1));
        assert_eq!(f_k(&vector(&k, &[&[1], &[2]])).unwrap_err(), Error::DependentEntries);
    }

    #[test]
    fn fk_identity_examples() {
        let k = q2();
        let r = verify_fk_identity(&vector(&k, &[&[1], &[0, 1]])).unwrap();
        assert!(r.holds());
        // 8 <= H^4 = 9
        assert!((r.hadamard.rhs.mid_f64() - 9f64.ln()).abs() < 1e-12);
        let r = verify_fk_identity(&vector(&k, &[&[1], &[0, 2]])).unwrap();
        assert!(r.holds());
        assert_eq!(r.f_k, BigInt::from(32));
    }

    fn fields() -> Vec<crate::nf::Field> {
        vec![
            q2(),
            NumberField::monogenic(&[1, 0, 1], 128).unwrap(),
            NumberField::monogenic(&[-1, -2, 1, 1], 128).unwrap(),
            NumberField::monogenic(&[-2, 0, 0, 1], 128).unwrap(),
        ]
    }

    fn random_vector(k: &crate::nf::Field, rng: &mut ChaCha8Rng) -> FieldVector {
        loop {
            let entries = (0..k.degree()).map(|_| k.random_element(rng, 6, 3)).collect();
            let v = FieldVector::new(k, entries).unwrap();
            if !linalg::det(&gram_trace_matrix(&v).unwrap()).is_zero() {
                return v;
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn embedding_det_matches_gram(seed in any::<u64>(), which in 0usize..4) {
            let k = &fields()[which];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = random_vector(k, &mut rng);
            let g = linalg::det(&gram_trace_matrix(&v).unwrap()).abs();
            let e = embedding_det_sq(&v).unwrap();
            let diff = e.sub(&Real::from_rational(&g, 192));
            prop_assert!(diff.contains_zero() || diff.abs().upper_f64() < 1e-25 * (1.0 + e.mid_f64()));
        }

        #[test]
        fn f_k_scaling_and_transforms(seed in any::<u64>(), which in 0usize..4) {
            let k = &fields()[which];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = random_vector(k, &mut rng);
            let alpha = loop {
                let a = k.random_element(&mut rng, 9, 4);
                if !a.is_zero() { break a; }
            };
            let f = f_k(&v).unwrap();
            prop_assert_eq!(f_k(&v.scale(&alpha)).unwrap(), f.clone());
            prop_assert_eq!(lattice_index(&v.scale(&alpha)).unwrap(), lattice_index(&v).unwrap());
            let d = k.degree();
            let a: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| {
                if i == j { rng.gen_range(1..4) } else if j > i { rng.gen_range(-3..4) } else { 0 }
            }).collect()).collect();
            let det_a = int_det(&a);
            let w = transform(&v, &a).unwrap();
            // f_k(Aβ) N(J(Aβ))² = det(A)² f_k(β) N(J(β))²
            let nw = ideal_norm(&w).unwrap();
            let nv = ideal_norm(&v).unwrap();
            let lhs = BigRational::from_integer(f_k(&w).unwrap()) * &nw * &nw;
            let rhs = BigRational::from_integer(&det_a * &det_a * f.clone()) * &nv * &nv;
            prop_assert_eq!(lhs, rhs);
            // a unimodular change of basis keeps f_k
            let mut u = vec![vec![0i64; d]; d];
            for i in 0..d { u[i][i] = 1; }
            u[0][d - 1] = rng.gen_range(-4..5);
            prop_assert_eq!(f_k(&transform(&v, &u).unwrap()).unwrap(), f);
            let r = verify_fk_identity(&v).unwrap();
            prop_assert!(r.holds());
        }
    }

    use rand::Rng;
}
