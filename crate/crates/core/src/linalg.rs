//! Exact rational and integer linear algebra, plus ball-valued determinants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::real::Real;

pub type QMatrix = Vec<Vec<BigRational>>;
pub type ZMatrix = Vec<Vec<BigInt>>;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn identity(n: usize) -> QMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .filter(|(x, _)| !x.is_zero())
                        .fold(BigRational::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

pub fn vec_mat(v: &[BigRational], m: &QMatrix) -> Vec<BigRational> {
    let n = m.first().map_or(0, Vec::len);
    (0..n)
        .map(|j| {
            v.iter()
                .zip(m.iter())
                .filter(|(x, _)| !x.is_zero())
                .fold(BigRational::zero(), |acc, (x, row)| acc + x * &row[j])
        })
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = m.first().map_or(0, Vec::len);
    (0..n).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Determinant by fraction-tracking Gaussian elimination.
pub fn det(m: &QMatrix) -> BigRational {
    let n = m.len();
    let mut a = m.clone();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let piv = a[c][c].clone();
        d *= &piv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &piv;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    d
}

/// Row-reduced echelon rank.
pub fn rank(m: &QMatrix) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let piv = a[r][c].clone();
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &piv;
            for k in c..cols {
                let t = &f * &a[r][k];
                a[i][k] -= t;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

pub fn inverse(m: &QMatrix) -> Result<QMatrix> {
    let n = m.len();
    let mut a: QMatrix = m
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::DivisionByZero)?;
        a.swap(p, c);
        let inv = a[c][c].recip();
        for k in 0..2 * n {
            a[c][k] *= &inv;
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for k in 0..2 * n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `x · m = v` for a row vector `x` with `m` square and invertible.
pub fn solve_left(m: &QMatrix, v: &[BigRational]) -> Result<Vec<BigRational>> {
    Ok(vec_mat(v, &inverse(m)?))
}

/// Least common denominator of all entries.
pub fn common_denominator<'a>(entries: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    entries.into_iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()))
}

/// Hermite normal form of the integer row lattice spanned by `rows`, as
/// upper-triangular nonzero rows with positive pivots and reduced entries
/// above each pivot.
pub fn hnf(rows: &ZMatrix) -> ZMatrix {
    let mut a: ZMatrix = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut pr = 0;
    for c in 0..cols {
        if pr == a.len() {
            break;
        }
        loop {
            let best = (pr..a.len())
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(b) = best else { break };
            a.swap(pr, b);
            let piv = a[pr][c].clone();
            let mut done = true;
            for i in pr + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].div_floor(&piv);
                if !f.is_zero() {
                    for k in c..cols {
                        let t = &f * &a[pr][k];
                        a[i][k] -= t;
                    }
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[pr][c].is_zero() {
            continue;
        }
        if a[pr][c].is_negative() {
            for k in c..cols {
                a[pr][k] = -a[pr][k].clone();
            }
        }
        let piv = a[pr][c].clone();
        for i in 0..pr {
            let f = a[i][c].div_floor(&piv);
            if !f.is_zero() {
                for k in c..cols {
                    let t = &f * &a[pr][k];
                    a[i][k] -= t;
                }
            }
        }
        a.retain(|r| r.iter().any(|x| !x.is_zero()));
        pr += 1;
    }
    a.truncate(pr);
    a
}

/// Product of the diagonal of a square HNF, i.e. the covolume of a full
/// rank lattice. Errors if the lattice is not of full rank.
pub fn lattice_covolume(rows: &ZMatrix, dim: usize) -> Result<BigInt> {
    let h = hnf(rows);
    if h.len() != dim {
        return Err(Error::DependentEntries);
    }
    Ok((0..dim).fold(BigInt::one(), |p, i| p * &h[i][i]))
}

/// Determinant of a square ball matrix with partial pivoting on midpoints.
pub fn real_det(m: &[Vec<Real>]) -> Result<Real> {
    let n = m.len();
    let prec = m.first().and_then(|r| r.first()).map_or(crate::real::DEFAULT_PRECISION, Real::precision);
    let mut a = m.to_vec();
    let mut d = Real::one(prec);
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().cmp_mid(&a[j][c].abs()))
            .expect("nonempty");
        if a[p][c].contains_zero() {
            return Err(Error::SingularRegulator);
        }
        if p != c {
            a.swap(p, c);
            d = d.neg();
        }
        let piv = a[c][c].clone();
        d = d.mul(&piv);
        for r in c + 1..n {
            let f = a[r][c].div(&piv)?;
            for k in c..n {
                let t = f.mul(&a[c][k]);
                a[r][k] = a[r][k].sub(&t);
            }
        }
    }
    Ok(d)
}
