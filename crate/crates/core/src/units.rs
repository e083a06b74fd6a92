//! Unit systems, regulators, relative norms and relative regulators, and
//! searches for small multiplicatively independent units.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::heights::weil_height_places;
use crate::linalg::{self, QMatrix};
use crate::margin::Margin;
use crate::nf::{Field, FieldElement, Place, PlaceKind};
use crate::poly::IntPolynomial;
use crate::real::Real;

/// A fundamental system of units with the order of the torsion subgroup.
#[derive(Clone, Debug)]
pub struct UnitSystem {
    field: Field,
    units: Vec<FieldElement>,
    torsion_order: u64,
}

impl UnitSystem {
    /// Validates integrality, `|norm| = 1`, the unit count and independence.
    pub fn new(field: &Field, units: Vec<FieldElement>, torsion_order: u64) -> Result<Self> {
        let r = field.unit_rank();
        if units.len() != r {
            return Err(Error::UnitCount { expected: r, got: units.len() });
        }
        if torsion_order == 0 || torsion_order % 2 != 0 {
            return Err(Error::BadUnit(format!("torsion order {torsion_order} must be even and positive")));
        }
        for (j, u) in units.iter().enumerate() {
            if !Arc::ptr_eq(u.field(), field) {
                return Err(Error::BadUnit(format!("unit {j} belongs to another field")));
            }
            if !u.is_integral() {
                return Err(Error::BadUnit(format!("unit {j} is not an algebraic integer")));
            }
            let n = u.norm();
            if n.abs() != BigRational::one() {
                return Err(Error::BadUnit(format!("unit {j} has norm {n}")));
            }
        }
        let sys = UnitSystem { field: field.clone(), units, torsion_order };
        if r > 0 {
            regulator(&sys)?;
        }
        Ok(sys)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn units(&self) -> &[FieldElement] {
        &self.units
    }

    pub fn torsion_order(&self) -> u64 {
        self.torsion_order
    }

    pub fn rank(&self) -> usize {
        self.units.len()
    }
}

/// `d_w log ‖u‖_w`, the contribution of one archimedean place.
pub fn weighted_log(u: &FieldElement, place: &Place) -> Result<Real> {
    Ok(u.log_abs_at(place)?.mul_i64(place.local_degree as i64))
}

/// Rows `d_w log ‖u_j‖_w` over all places, one row per place.
pub fn log_matrix(units: &[FieldElement], field: &Field) -> Result<Vec<Vec<Real>>> {
    field.places().iter().map(|w| units.iter().map(|u| weighted_log(u, w)).collect()).collect()
}

/// Regulator with the place of index `dropped` removed.
pub fn regulator_dropping(units: &UnitSystem, dropped: usize) -> Result<Real> {
    let field = units.field();
    let p = field.working_precision();
    if units.rank() == 0 {
        return Ok(Real::one(p));
    }
    let mut m = log_matrix(units.units(), field)?;
    m.remove(dropped);
    let det = linalg::real_det(&m)?.abs();
    if !det.is_positive() {
        return Err(Error::SingularRegulator);
    }
    Ok(det)
}

/// `Reg(k)`; 1 for unit rank 0.
pub fn regulator(units: &UnitSystem) -> Result<Real> {
    let last = units.field().places().len() - 1;
    regulator_dropping(units, last)
}

/// A relative extension `l/k` with `k` embedded in `l` by a rational matrix
/// whose column `j` is the image of `θ_k^j` in the power basis of `l`.
#[derive(Clone, Debug)]
pub struct RelativeExtension {
    base: Field,
    top: Field,
    embedding: QMatrix,
    /// For each place of `l`, the index of the place of `k` below it.
    fibration: Vec<usize>,
    /// One place of `l` above each place of `k`.
    chosen: Vec<usize>,
    // a k-basis of l: exponents b_i with l = ⊕ k·θ_l^{b_i}
    k_basis: Vec<usize>,
    // inverse of the Q-basis matrix (θ_k^a θ_l^{b_i}) of l
    q_basis_inverse: QMatrix,
}

impl RelativeExtension {
    pub fn new(base: &Field, top: &Field, embedding: QMatrix) -> Result<Self> {
        let (dk, dl) = (base.degree(), top.degree());
        if dl % dk != 0 {
            return Err(Error::BadExtension(format!("degree {dk} does not divide {dl}")));
        }
        if embedding.len() != dl || embedding.iter().any(|r| r.len() != dk) {
            return Err(Error::BadExtension(format!("embedding matrix must be {dl}x{dk}")));
        }
        let columns = linalg::transpose(&embedding);
        let one = top.one();
        if top.element(columns[0].clone())? != one {
            return Err(Error::BadExtension("first column is not the image of 1".into()));
        }
        let image = if dk == 1 { top.rational(base.generator().coords()[0].clone()) } else { top.element(columns[1].clone())? };
        let mut power = one.clone();
        for (j, col) in columns.iter().enumerate() {
            if top.element(col.clone())? != power {
                return Err(Error::BadExtension(format!("column {j} is not the image of θ^{j}")));
            }
            power = power.mul(&image);
        }
        // f_k(image) = 0 in l
        let mut acc = top.zero();
        for c in base.poly().coeffs().iter().rev() {
            acc = acc.mul(&image).add(&top.rational(BigRational::from_integer(c.clone())));
        }
        if !acc.is_zero() {
            return Err(Error::BadExtension("image of the generator is not a root of the base polynomial".into()));
        }

        let fibration = fibre_map(base, top, &image)?;
        let n = dl / dk;
        for (v, pv) in base.places().iter().enumerate() {
            let total: usize =
                top.places().iter().zip(&fibration).filter(|(_, &f)| f == v).map(|(w, _)| w.local_degree).sum();
            if total != n * pv.local_degree {
                return Err(Error::BadExtension(format!("fibre over place {v} has local degree sum {total}")));
            }
        }
        let chosen = (0..base.places().len())
            .map(|v| fibration.iter().position(|&f| f == v).expect("nonempty fibre"))
            .collect();

        let (k_basis, q_basis) = relative_basis(base, top, &embedding)?;
        let q_basis_inverse = linalg::inverse(&q_basis)?;
        Ok(RelativeExtension {
            base: base.clone(),
            top: top.clone(),
            embedding,
            fibration,
            chosen,
            k_basis,
            q_basis_inverse,
        })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn top(&self) -> &Field {
        &self.top
    }

    pub fn relative_degree(&self) -> usize {
        self.top.degree() / self.base.degree()
    }

    pub fn relative_rank(&self) -> usize {
        self.top.unit_rank().saturating_sub(self.base.unit_rank())
    }

    pub fn fibration(&self) -> &[usize] {
        &self.fibration
    }

    pub fn chosen_places(&self) -> &[usize] {
        &self.chosen
    }

    /// Places of `l` above the place `v` of `k`.
    pub fn fibre(&self, v: usize) -> Vec<usize> {
        (0..self.fibration.len()).filter(|&w| self.fibration[w] == v).collect()
    }

    /// Replaces the chosen place above each place of `k`.
    pub fn with_chosen(&self, chosen: Vec<usize>) -> Result<Self> {
        if chosen.len() != self.base.places().len()
            || chosen.iter().enumerate().any(|(v, &w)| self.fibration.get(w) != Some(&v))
        {
            return Err(Error::BadExtension("chosen places do not lie over the base places".into()));
        }
        let mut out = self.clone();
        out.chosen = chosen;
        Ok(out)
    }

    /// Every admissible choice of one place per fibre.
    pub fn all_choices(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for v in 0..self.base.places().len() {
            let fibre = self.fibre(v);
            out = out
                .into_iter()
                .flat_map(|c: Vec<usize>| {
                    fibre.iter().map(move |&w| {
                        let mut c = c.clone();
                        c.push(w);
                        c
                    })
                })
                .collect();
        }
        out
    }

    /// Image of an element of `k` in `l`.
    pub fn embed(&self, a: &FieldElement) -> FieldElement {
        let coords = self
            .embedding
            .iter()
            .map(|row| row.iter().zip(a.coords()).fold(BigRational::zero(), |s, (m, c)| s + m * c))
            .collect();
        FieldElement::new(&self.top, coords).expect("degree checked")
    }

    /// Coordinates of `x ∈ l` over the `k`-basis, as elements of `k`.
    fn k_coords(&self, x: &FieldElement) -> Vec<FieldElement> {
        let dk = self.base.degree();
        let y = linalg::vec_mat(x.coords(), &self.q_basis_inverse);
        y.chunks(dk).map(|c| FieldElement::new(&self.base, c.to_vec()).expect("degree")).collect()
    }
}

/// Matches each place of `l` with the place of `k` whose root is the image
/// of `θ_k` under that embedding.
fn fibre_map(base: &Field, top: &Field, image: &FieldElement) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(top.places().len());
    for w in top.places() {
        let z = image.embed(w.embedding_index);
        let mut hits = Vec::new();
        for (v, pv) in base.places().iter().enumerate() {
            let mut cands = vec![base.roots()[pv.embedding_index].value.clone()];
            if pv.kind == PlaceKind::Complex {
                cands.push(base.roots()[pv.embedding_index + 1].value.clone());
            }
            if cands.iter().any(|c| z.sub(c).abs_sq().contains_zero()) {
                hits.push(v);
            }
        }
        match hits.as_slice() {
            [v] => out.push(*v),
            _ => return Err(Error::BadExtension("cannot match embeddings of the base field".into())),
        }
    }
    Ok(out)
}

/// Greedy choice of powers `θ_l^b` that form a `k`-basis of `l`, and the
/// corresponding Q-basis rows `ι(θ_k^a)·θ_l^b` (grouped by `b`).
fn relative_basis(base: &Field, top: &Field, embedding: &QMatrix) -> Result<(Vec<usize>, QMatrix)> {
    let (dk, dl) = (base.degree(), top.degree());
    let cols = linalg::transpose(embedding);
    let k_powers: Vec<FieldElement> = cols.iter().map(|c| top.element(c.clone())).collect::<Result<_>>()?;
    let theta = top.generator();
    let mut rows: QMatrix = Vec::new();
    let mut chosen = Vec::new();
    let mut tb = top.one();
    for b in 0..dl {
        let block: QMatrix = k_powers.iter().map(|kp| kp.mul(&tb).coords().to_vec()).collect();
        let mut trial = rows.clone();
        trial.extend(block.iter().cloned());
        if linalg::rank(&trial) == trial.len() {
            rows = trial;
            chosen.push(b);
            if rows.len() == dl {
                break;
            }
        }
        tb = tb.mul(&theta);
    }
    if rows.len() != dl || chosen.len() * dk != dl {
        return Err(Error::BadExtension("could not build a relative basis".into()));
    }
    Ok((chosen, rows))
}

/// Determinant over a number field by Gaussian elimination.
fn field_det(mut a: Vec<Vec<FieldElement>>, field: &Field) -> Result<FieldElement> {
    let n = a.len();
    let mut det = field.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Ok(field.zero());
        };
        if p != c {
            a.swap(p, c);
            det = det.neg();
        }
        let piv = a[c][c].clone();
        det = det.mul(&piv);
        let inv = piv.inverse()?;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].mul(&inv);
            for k in c..n {
                let t = f.mul(&a[c][k]);
                a[r][k] = a[r][k].sub(&t);
            }
        }
    }
    Ok(det)
}

/// `Norm_{l/k}(α)` as the determinant of multiplication by `α` on `l`
/// viewed as a `k`-vector space.
pub fn relative_norm(ext: &RelativeExtension, alpha: &FieldElement) -> Result<FieldElement> {
    if !Arc::ptr_eq(alpha.field(), &ext.top) {
        return Err(Error::BadExtension("element is not in the top field".into()));
    }
    let theta = ext.top.generator();
    let rows: Vec<Vec<FieldElement>> = ext
        .k_basis
        .iter()
        .map(|&b| {
            let e = theta.pow(b as i64).expect("nonnegative power");
            ext.k_coords(&alpha.mul(&e))
        })
        .collect();
    field_det(rows, &ext.base)
}

/// Euler's totient, small arguments only.
fn totient(n: u64) -> u64 {
    let (mut m, mut out, mut p) = (n, n, 2);
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

/// `α` is a root of unity: a fast check on the absolute values, then an
/// exact comparison of its minimal polynomial with cyclotomic polynomials.
pub fn is_torsion(alpha: &FieldElement) -> bool {
    if alpha.is_zero() || !alpha.is_integral() {
        return false;
    }
    let field = alpha.field();
    let p = field.working_precision();
    let slack = Real::one(p).add(&Real::from_f64(1e-20, p));
    for w in field.places() {
        match alpha.abs_at(w) {
            Ok(a) if !a.sub(&slack).is_positive() => {}
            _ => return false,
        }
    }
    let f = alpha.minimal_poly();
    let m = f.degree() as u64;
    // φ(n) >= sqrt(n/2), so φ(n) = m forces n <= 2m²
    (1..=2 * m * m + 2).filter(|&n| totient(n) == m).any(|n| IntPolynomial::cyclotomic(n) == f)
}

pub fn is_relative_unit(ext: &RelativeExtension, unit: &FieldElement) -> Result<bool> {
    Ok(is_torsion(&relative_norm(ext, unit)?))
}

/// `Reg(E_{l/k}) = |det M_{l/k}|` with rows over the places of `l` other
/// than the chosen ones.
pub fn relative_regulator(ext: &RelativeExtension, rel_units: &[FieldElement]) -> Result<Real> {
    let r = ext.relative_rank();
    if r == 0 {
        return Err(Error::ZeroRelativeRank);
    }
    if rel_units.len() != r {
        return Err(Error::UnitCount { expected: r, got: rel_units.len() });
    }
    for (j, u) in rel_units.iter().enumerate() {
        if !u.is_integral() || u.norm().abs() != BigRational::one() {
            return Err(Error::BadUnit(format!("relative unit {j} is not a unit")));
        }
        if !is_relative_unit(ext, u)? {
            return Err(Error::BadUnit(format!("unit {j} has non-torsion relative norm")));
        }
    }
    let rows: Vec<Vec<Real>> = ext
        .top
        .places()
        .iter()
        .enumerate()
        .filter(|(w, _)| !ext.chosen.contains(w))
        .map(|(_, pw)| rel_units.iter().map(|u| weighted_log(u, pw)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let det = linalg::real_det(&rows)?.abs();
    if !det.is_positive() {
        return Err(Error::SingularRegulator);
    }
    Ok(det)
}

/// Result of a search for small independent products of given units.
#[derive(Clone, Debug)]
pub struct UnitSearch {
    /// Exponent vectors of the selected products.
    pub exponents: Vec<Vec<i64>>,
    /// `d·h(β_i)` for each selected product.
    pub weighted_heights: Vec<Real>,
    /// `∏ d·h(β_i)`; 1 for the empty product.
    pub product: Real,
    /// `r!·Reg`.
    pub bound: Real,
    /// `None` when the box did not contain enough independent products.
    pub margin: Option<Margin>,
}

impl UnitSearch {
    pub fn certified(&self) -> bool {
        self.margin.as_ref().is_some_and(|m| m.holds)
    }
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// Enumerates `∏ g_i^{e_i}` with `|e_i| <= bound`, selects independent ones
/// greedily by ascending `d·h`, and compares the product with `r!·reg`.
pub fn search_small_products(field: &Field, generators: &[FieldElement], reg: &Real, bound: i64) -> Result<UnitSearch> {
    let r = generators.len();
    let p = field.working_precision();
    let rhs = reg.mul_i64(factorial(r));
    if r == 0 {
        let one = Real::one(p);
        return Ok(UnitSearch {
            exponents: vec![],
            weighted_heights: vec![],
            product: one.clone(),
            bound: rhs.clone(),
            margin: Some(Margin::le(one, rhs)),
        });
    }
    let logs = log_matrix(generators, field)?;
    let mut candidates: Vec<(i128, Vec<i64>, Real)> = Vec::new();
    let mut e = vec![-bound; r];
    loop {
        // one representative of each pair {β, β⁻¹}
        if let Some(first) = e.iter().find(|&&x| x != 0) {
            if *first > 0 {
                let mut dh = Real::zero(p);
                for row in &logs {
                    let l = row.iter().zip(&e).fold(Real::zero(p), |s, (x, &k)| s.add(&x.mul_i64(k)));
                    dh = dh.add(&l.pos_part());
                }
                let key = (dh.mid_f64() * (1u64 << 40) as f64).round() as i128;
                candidates.push((key, e.clone(), dh));
            }
        }
        let mut i = r;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if e[i] < bound {
                e[i] += 1;
                break;
            }
            e[i] = -bound;
            if i == 0 {
                i = usize::MAX;
                break;
            }
        }
        if i == usize::MAX {
            break;
        }
    }
    candidates.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    let mut chosen: Vec<Vec<i64>> = Vec::new();
    let mut heights = Vec::new();
    for (_, ex, dh) in candidates {
        let mut trial: QMatrix = chosen.iter().map(|c| c.iter().map(|&x| linalg::rat(x)).collect()).collect();
        trial.push(ex.iter().map(|&x| linalg::rat(x)).collect());
        if linalg::rank(&trial) == trial.len() {
            chosen.push(ex);
            heights.push(dh);
            if chosen.len() == r {
                break;
            }
        }
    }
    let product = heights.iter().fold(Real::one(p), |a, h| a.mul(h));
    let margin = (chosen.len() == r).then(|| Margin::le(product.clone(), rhs.clone()));
    Ok(UnitSearch { exponents: chosen, weighted_heights: heights, product, bound: rhs, margin })
}

/// Search for `r(k)` small independent units, compared with `r!·Reg(k)`.
pub fn search_small_units(units: &UnitSystem, bound: i64) -> Result<UnitSearch> {
    let reg = regulator(units)?;
    search_small_products(units.field(), units.units(), &reg, bound)
}

/// The product element `∏ g_i^{e_i}`.
pub fn unit_product(generators: &[FieldElement], exponents: &[i64], field: &Field) -> Result<FieldElement> {
    generators.iter().zip(exponents).try_fold(field.one(), |acc, (g, &e)| Ok(acc.mul(&g.pow(e)?)))
}

/// `∏ (d_k h(β_i)) · ∏ (d_l h(ψ_j)) <= r(l)!·Reg(l)`.
pub fn check_combined_bound(
    ext: &RelativeExtension,
    base_units: &[FieldElement],
    rel_units: &[FieldElement],
    reg_l: &Real,
) -> Result<Margin> {
    if ext.relative_rank() == 0 {
        return Err(Error::ZeroRelativeRank);
    }
    let p = ext.top.working_precision();
    let mut lhs = Real::one(p);
    for b in base_units {
        lhs = lhs.mul(&weil_height_places(b)?.value.mul_i64(ext.base.degree() as i64));
    }
    for s in rel_units {
        lhs = lhs.mul(&weil_height_places(s)?.value.mul_i64(ext.top.degree() as i64));
    }
    Ok(Margin::le(lhs, reg_l.mul_i64(factorial(ext.top.unit_rank()))))
}

/// Parses `"p/q"` strings into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| Error::Malformed(format!("bad rational {s:?}")))?;
    let d: BigInt = d.parse().map_err(|_| Error::Malformed(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Malformed(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}
