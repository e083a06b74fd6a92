//! Explicit regulator lower bounds and their verification against computed
//! regulators.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heights::{height_discriminant_lower, weil_height_places};
use crate::nf::Field;
use crate::real::Real;
use crate::towers::{rho, SubfieldLattice};
use crate::units::{regulator, UnitSystem};

/// Regulator floor used throughout, rounded down with a small allowance.
pub fn friedman_floor() -> BigRational {
    BigRational::new(BigInt::from(2051), BigInt::from(10000))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    FriedmanFloor,
    Quadratic,
    Silverman,
    RhoBound,
    TowerBound,
    AmorosoExplicit,
    SmallDiscRho,
    SmallDiscTower,
    DiscHeight,
    Voutier,
}

impl TheoremId {
    pub const ALL: [TheoremId; 10] = [
        TheoremId::FriedmanFloor,
        TheoremId::Quadratic,
        TheoremId::Silverman,
        TheoremId::RhoBound,
        TheoremId::TowerBound,
        TheoremId::AmorosoExplicit,
        TheoremId::SmallDiscRho,
        TheoremId::SmallDiscTower,
        TheoremId::DiscHeight,
        TheoremId::Voutier,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::FriedmanFloor => "friedman-floor",
            TheoremId::Quadratic => "quadratic",
            TheoremId::Silverman => "silverman",
            TheoremId::RhoBound => "rho-bound",
            TheoremId::TowerBound => "tower-bound",
            TheoremId::AmorosoExplicit => "amoroso-explicit",
            TheoremId::SmallDiscRho => "small-disc-rho",
            TheoremId::SmallDiscTower => "small-disc-tower",
            TheoremId::DiscHeight => "disc-height",
            TheoremId::Voutier => "voutier",
        }
    }

    pub fn parse(s: &str) -> Option<TheoremId> {
        TheoremId::ALL.into_iter().find(|t| t.as_str() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    Vacuous,
    HypothesisFailed,
    Failed,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Vacuous => "vacuous",
            Verdict::HypothesisFailed => "hypothesis-failed",
            Verdict::Failed => "failed",
        }
    }
}

/// What the bound is compared with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    Regulator,
    /// `h(θ)` for the field generator.
    Height,
    /// The smallest `d·h(u)` over the fundamental units.
    WeightedUnitHeight,
}

/// Which small constant `γ_d` a bound uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaChoice {
    /// `d^{-d}`
    DegreePower,
    /// `d^{-d^{log₂ d}/2}`
    Tower,
    /// `d^{-d^{log₂ 8d}}`
    Silverman,
}

/// `log γ_d^{-1}` for the chosen constant.
pub fn log_gamma_inv(choice: GammaChoice, d: usize, prec: usize) -> Result<Real> {
    let ln_d = Real::ln_i64(d as i64, prec)?;
    let ln_2 = Real::ln_i64(2, prec)?;
    let dd = Real::from_i64(d as i64, prec);
    Ok(match choice {
        GammaChoice::DegreePower => ln_d.mul(&dd),
        GammaChoice::Tower => {
            let log2_d = ln_d.div(&ln_2)?;
            ln_d.mul(&log2_d).exp().mul(&ln_d).div(&Real::from_i64(2, prec))?
        }
        GammaChoice::Silverman => {
            let log2_8d = Real::ln_i64(8 * d as i64, prec)?.div(&ln_2)?;
            ln_d.mul(&log2_8d).exp().mul(&ln_d)
        }
    })
}

/// Field data the bounds depend on.
#[derive(Clone, Debug)]
pub struct Invariants {
    pub degree: usize,
    /// Absolute discriminant.
    pub disc: BigInt,
    pub unit_rank: usize,
    pub rho: usize,
    pub real_places: usize,
}

impl Invariants {
    pub fn new(degree: usize, disc: &BigInt, unit_rank: usize, rho: usize) -> Self {
        Invariants { degree, disc: disc.abs(), unit_rank, rho, real_places: 0 }
    }

    pub fn from_field(field: &Field, lattice: &SubfieldLattice) -> Self {
        let mut inv = Invariants::new(field.degree(), field.discriminant(), field.unit_rank(), rho(lattice));
        inv.real_places = field.signature().0;
        inv
    }

    /// The rank criterion `ρ = r`.
    pub fn is_cm(&self) -> bool {
        self.rho == self.unit_rank
    }

    /// `γ_d·D > 1`, decided exactly by comparing `ln D` with `ln γ^{-1}`.
    pub fn gamma_regime(&self, choice: GammaChoice, prec: usize) -> Result<Option<bool>> {
        if self.degree < 2 {
            return Ok(None);
        }
        if choice == GammaChoice::DegreePower {
            let dd = BigInt::from(self.degree).pow(self.degree as u32);
            return Ok(Some(self.disc > dd));
        }
        let diff = Real::ln_bigint(&self.disc, prec)?.sub(&log_gamma_inv(choice, self.degree, prec)?);
        Ok(diff.cmp_certified(&Real::zero(prec)).map(|o| o.is_gt()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    /// `None` when the theorem does not care.
    pub cm: Option<bool>,
    /// `γ_d·D > 1`.
    pub gamma_regime: Option<bool>,
    pub degree_ok: bool,
    pub satisfied: bool,
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub hypotheses: Hypotheses,
    pub bound: Option<Real>,
    pub quantity: Quantity,
    pub value: Real,
    /// `value − bound`.
    pub margin: Option<Real>,
    pub verdict: Verdict,
    pub note: Option<String>,
}

impl BoundReport {
    fn assess(
        theorem: TheoremId,
        hypotheses: Hypotheses,
        bound: Option<Real>,
        quantity: Quantity,
        value: &Real,
        note: Option<String>,
    ) -> BoundReport {
        let margin = bound.as_ref().map(|b| value.sub(b));
        let verdict = if !hypotheses.satisfied {
            Verdict::HypothesisFailed
        } else {
            match (&bound, &margin) {
                (Some(b), _) if !b.is_positive() => Verdict::Vacuous,
                (Some(_), Some(m)) if !m.is_negative() => Verdict::Verified,
                _ => Verdict::Failed,
            }
        };
        BoundReport { theorem, hypotheses, bound, quantity, value: value.clone(), margin, verdict, note }
    }

    pub fn is_failure(&self) -> bool {
        self.verdict == Verdict::Failed
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// `(2r)!/(r!)³`.
fn central_ratio(r: usize) -> BigRational {
    BigRational::new(factorial(2 * r), factorial(r).pow(3))
}

/// `¼ (log log d / log d)³`; negative at `d = 2`.
pub fn voutier_constant(d: usize, prec: usize) -> Result<Real> {
    if d < 2 {
        return Err(Error::Inapplicable(format!("degree {d} < 2")));
    }
    let ln_d = Real::ln_i64(d as i64, prec)?;
    let ratio = ln_d.ln()?.div(&ln_d)?;
    ratio.powi(3).div(&Real::from_i64(4, prec))
}

/// `log(γ_d D)`.
fn log_gamma_d(inv: &Invariants, choice: GammaChoice, prec: usize) -> Result<Real> {
    Ok(Real::ln_bigint(&inv.disc, prec)?.sub(&log_gamma_inv(choice, inv.degree, prec)?))
}

/// `2^{-4d²} (log γ_d D)^{r-ρ}` with `γ_d = d^{-d^{log₂ 8d}}`.
pub fn silverman_bound(inv: &Invariants, reg: &Real, prec: usize) -> Result<BoundReport> {
    let d = inv.degree;
    let degree_ok = d >= 2;
    let regime = inv.gamma_regime(GammaChoice::Silverman, prec)?;
    let hyp = Hypotheses { cm: None, gamma_regime: regime, degree_ok, satisfied: degree_ok && regime == Some(true) };
    let bound = if hyp.satisfied {
        let scale = Real::from_i64(2, prec).powi((4 * d * d) as u32).recip()?;
        Some(scale.mul(&log_gamma_d(inv, GammaChoice::Silverman, prec)?.powi((inv.unit_rank - inv.rho) as u32)))
    } else {
        None
    };
    Ok(BoundReport::assess(TheoremId::Silverman, hyp, bound, Quantity::Regulator, reg, None))
}

fn nonquadratic_hypotheses(inv: &Invariants, choice: GammaChoice, prec: usize) -> Result<(Hypotheses, Option<String>)> {
    let degree_ok = inv.degree >= 3;
    let cm = inv.is_cm();
    let regime = if degree_ok { inv.gamma_regime(choice, prec)? } else { None };
    let note = if !degree_ok {
        Some("inapplicable: degree below 3".to_string())
    } else if cm {
        Some("inapplicable: CM field".to_string())
    } else {
        None
    };
    let satisfied = degree_ok && !cm && regime == Some(true);
    Ok((Hypotheses { cm: Some(cm), gamma_regime: regime, degree_ok, satisfied }, note))
}

/// `((2r)!/(r!)³) (log log d / (2 log d))^{3ρ} (log(γ_d D)/(4d))^{r-ρ}`, `γ_d = d^{-d}`.
pub fn rho_bound(inv: &Invariants, reg: &Real, prec: usize) -> Result<BoundReport> {
    let (hyp, note) = nonquadratic_hypotheses(inv, GammaChoice::DegreePower, prec)?;
    let bound = if hyp.satisfied {
        let (d, r, rho) = (inv.degree, inv.unit_rank, inv.rho);
        let ln_d = Real::ln_i64(d as i64, prec)?;
        let first = ln_d.ln()?.div(&ln_d.mul_i64(2))?.powi((3 * rho) as u32);
        let second = log_gamma_d(inv, GammaChoice::DegreePower, prec)?.div(&Real::from_i64(4 * d as i64, prec))?;
        Some(Real::from_rational(&central_ratio(r), prec).mul(&first).mul(&second.powi((r - rho) as u32)))
    } else {
        None
    };
    Ok(BoundReport::assess(TheoremId::RhoBound, hyp, bound, Quantity::Regulator, reg, note))
}

/// `(0.2/r!) (2d log(γ_d D) / ((d-2) d^{log₂ d}))^{r-ρ}`, `γ_d = d^{-d^{log₂ d}/2}`.
pub fn tower_bound(inv: &Invariants, reg: &Real, prec: usize) -> Result<BoundReport> {
    let (hyp, note) = nonquadratic_hypotheses(inv, GammaChoice::Tower, prec)?;
    let bound = if hyp.satisfied {
        let (d, r, rho) = (inv.degree, inv.unit_rank, inv.rho);
        let ln_d = Real::ln_i64(d as i64, prec)?;
        let d_log2d = ln_d.mul(&ln_d.div(&Real::ln_i64(2, prec)?)?).exp();
        let inner = log_gamma_d(inv, GammaChoice::Tower, prec)?
            .mul_i64(2 * d as i64)
            .div(&d_log2d.mul_i64(d as i64 - 2))?;
        let lead = BigRational::new(BigInt::one(), BigInt::from(5) * factorial(r));
        Some(Real::from_rational(&lead, prec).mul(&inner.powi((r - rho) as u32)))
    } else {
        None
    };
    Ok(BoundReport::assess(TheoremId::TowerBound, hyp, bound, Quantity::Regulator, reg, note))
}

fn amoroso_value(inv: &Invariants, log_factor: &Real, prec: usize) -> Result<Real> {
    let (d, r, rho) = (inv.degree, inv.unit_rank, inv.rho);
    let denom = log_factor.mul_i64(1050 * (rho as i64).pow(5)).powi((rho * rho * (rho + 1) * (rho + 1)) as u32);
    let d_pow = Real::from_bigint(&BigInt::from(d).pow((rho - 1) as u32), prec);
    let tail = log_gamma_d(inv, GammaChoice::DegreePower, prec)?.div(&Real::from_i64(4 * d as i64, prec))?;
    Real::from_rational(&central_ratio(r), prec).mul(&d_pow).div(&denom).map(|x| x.mul(&tail.powi((r - rho) as u32)))
}

/// The Amoroso and David explicit form, with the factor in the denominator read
/// as `1050 ρ⁵ log(1.5 d)`. The reading `1050 ρ⁵ (log 1.5) d` is reported
/// in the note.
pub fn amoroso_explicit_bound(inv: &Invariants, reg: &Real, prec: usize) -> Result<BoundReport> {
    let (mut hyp, mut note) = nonquadratic_hypotheses(inv, GammaChoice::DegreePower, prec)?;
    if inv.rho == 0 {
        hyp.satisfied = false;
        note = Some("inapplicable: no subfield of positive unit rank".to_string());
    }
    let bound = if hyp.satisfied {
        let d = Real::from_i64(inv.degree as i64, prec);
        let three_halves = Real::from_rational(&BigRational::new(3.into(), 2.into()), prec);
        let main = amoroso_value(inv, &three_halves.mul(&d).ln()?, prec)?;
        let alt = amoroso_value(inv, &three_halves.ln()?.mul(&d), prec)?;
        note = Some(format!("alternative reading (log 1.5)·d gives {}", alt.to_decimal(25)));
        Some(main)
    } else {
        None
    };
    Ok(BoundReport::assess(TheoremId::AmorosoExplicit, hyp, bound, Quantity::Regulator, reg, note))
}

/// `½ log(D/4)` for a real quadratic field.
pub fn quadratic_bound(inv: &Invariants, reg: &Real, prec: usize) -> Result<BoundReport> {
    let ok = inv.degree == 2 && inv.real_places == 2;
    let hyp = Hypotheses { cm: None, gamma_regime: None, degree_ok: ok, satisfied: ok };
    let bound = if ok {
        let q = BigRational::new(inv.disc.clone(), 4.into());
        Some(Real::ln_rational(&q, prec)?.div(&Real::from_i64(2, prec))?)
    } else {
        None
    };
    let note = (!ok).then(|| "inapplicable: not a real quadratic field".to_string());
    Ok(BoundReport::assess(TheoremId::Quadratic, hyp, bound, Quantity::Regulator, reg, note))
}

/// In the regime `γ_d D <= 1`: `log D < 5 log(γ_d^{-1}) Reg`, reported as
/// `Reg` against `log D / (5 log γ_d^{-1})`.
pub fn small_disc_bound(inv: &Invariants, choice: GammaChoice, reg: &Real, prec: usize) -> Result<BoundReport> {
    let id = match choice {
        GammaChoice::Tower => TheoremId::SmallDiscTower,
        _ => TheoremId::SmallDiscRho,
    };
    let degree_ok = inv.degree >= 2;
    let regime = if degree_ok { inv.gamma_regime(choice, prec)? } else { None };
    let satisfied = degree_ok && regime == Some(false);
    let hyp = Hypotheses { cm: None, gamma_regime: regime, degree_ok, satisfied };
    let bound = if satisfied {
        let lg = log_gamma_inv(choice, inv.degree, prec)?;
        Some(Real::ln_bigint(&inv.disc, prec)?.div(&lg.mul_i64(5))?)
    } else {
        None
    };
    let note = satisfied.then(|| {
        // the regime alone gives bound <= 1/5, below the floor
        "bound <= 1/5 in this regime".to_string()
    });
    Ok(BoundReport::assess(id, hyp, bound, Quantity::Regulator, reg, note))
}

/// `Reg >= 0.2052 - 1e-4`.
pub fn friedman_floor_bound(reg: &Real, prec: usize) -> BoundReport {
    let hyp = Hypotheses { cm: None, gamma_regime: None, degree_ok: true, satisfied: true };
    let bound = Real::from_rational(&friedman_floor(), prec);
    BoundReport::assess(TheoremId::FriedmanFloor, hyp, Some(bound), Quantity::Regulator, reg, None)
}

/// `h(θ) >= log(D/d^d) / (2d(d-1))` for the field generator.
pub fn disc_height_bound(field: &Field) -> Result<BoundReport> {
    let degree_ok = field.degree() >= 2;
    let hyp = Hypotheses { cm: None, gamma_regime: None, degree_ok, satisfied: degree_ok };
    if !degree_ok {
        let z = Real::zero(field.working_precision());
        return Ok(BoundReport::assess(TheoremId::DiscHeight, hyp, None, Quantity::Height, &z, None));
    }
    let rep = height_discriminant_lower(&field.generator(), &field.abs_discriminant())?;
    let m = rep.margin;
    Ok(BoundReport::assess(TheoremId::DiscHeight, hyp, Some(m.lhs), Quantity::Height, &m.rhs, None))
}

/// `d·h(u) >= ¼ (log log d / log d)³` for every fundamental unit; the
/// smallest `d·h(u)` is reported.
pub fn voutier_bound(units: &UnitSystem) -> Result<BoundReport> {
    let field = units.field();
    let d = field.degree();
    let p = field.working_precision();
    let ok = d >= 2 && units.rank() > 0;
    let hyp = Hypotheses { cm: None, gamma_regime: None, degree_ok: ok, satisfied: ok };
    if !ok {
        return Ok(BoundReport::assess(TheoremId::Voutier, hyp, None, Quantity::WeightedUnitHeight, &Real::zero(p), None));
    }
    let mut least: Option<Real> = None;
    for u in units.units() {
        let dh = weil_height_places(u)?.value.mul_i64(d as i64);
        least = Some(match least {
            Some(l) if l.cmp_mid(&dh).is_le() => l,
            _ => dh,
        });
    }
    let least = least.expect("rank > 0");
    let c = voutier_constant(d, p)?;
    Ok(BoundReport::assess(TheoremId::Voutier, hyp, Some(c), Quantity::WeightedUnitHeight, &least, None))
}

/// Every bound that has something to say about the field, ordered by
/// theorem id. Reports whose hypotheses fail are included with that verdict.
pub fn verify_field(field: &Field, lattice: &SubfieldLattice, units: &UnitSystem) -> Result<Vec<BoundReport>> {
    let p = field.working_precision();
    let reg = regulator(units)?;
    let inv = Invariants::from_field(field, lattice);
    let mut out = vec![friedman_floor_bound(&reg, p)];
    if inv.degree == 2 && inv.real_places == 2 {
        out.push(quadratic_bound(&inv, &reg, p)?);
    }
    out.push(silverman_bound(&inv, &reg, p)?);
    out.push(rho_bound(&inv, &reg, p)?);
    out.push(tower_bound(&inv, &reg, p)?);
    if inv.degree >= 3 && inv.rho >= 1 {
        out.push(amoroso_explicit_bound(&inv, &reg, p)?);
    }
    if inv.gamma_regime(GammaChoice::DegreePower, p)? == Some(false) {
        out.push(small_disc_bound(&inv, GammaChoice::DegreePower, &reg, p)?);
    }
    if inv.degree >= 3 && inv.gamma_regime(GammaChoice::Tower, p)? == Some(false) {
        out.push(small_disc_bound(&inv, GammaChoice::Tower, &reg, p)?);
    }
    out.push(disc_height_bound(field)?);
    if units.rank() > 0 {
        out.push(voutier_bound(units)?);
    }
    out.sort_by_key(|r| r.theorem);
    Ok(out)
}
