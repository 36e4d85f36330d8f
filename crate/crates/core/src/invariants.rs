//! Numerical invariants of the prototype fibrations `S(A,d)` with fibre
//! genus 2 or 3, as closed forms in `Δ_d`, plus the bookkeeping that ties
//! them together (Noether, Riemann–Hurwitz, Euler sums over singular
//! fibres, slope and Arakelov bounds, base change and moduli dimensions).
//!
//! Every value is computed as an exact rational and then required to be an
//! integer. The genus-3 values assume the fixed abelian surface is
//! irreducible as a polarized variety, so no fibres split off an elliptic
//! component.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::modular::{delta, integral, modular_data, ModularError};
use crate::numeric::{big_dec, big_dec_opt, rational_str};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantsError {
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error("identity violated: {0}")]
    IdentityViolation(String),
    #[error("no cover of degree {n} from genus {b_tilde} to genus {b}")]
    InfeasibleCover { n: u64, b_tilde: BigInt, b: BigInt },
    #[error("cover degree must be positive")]
    InvalidCoverDegree,
    #[error("base genus must be at least 2, got {0}")]
    InvalidBaseGenus(BigInt),
    #[error("base genus {given} does not match g(B) = {expected}")]
    BaseGenusMismatch { given: BigInt, expected: BigInt },
    #[error("slope is undefined: chi equals (b-1)(g-1)")]
    DegenerateSlope,
    #[error("fibre genus {0} is not supported")]
    UnsupportedGenus(u32),
    #[error("ramification order must be at least 1, got {0}")]
    InvalidOrder(u64),
}

impl InvariantsError {
    pub fn code(&self) -> &'static str {
        match self {
            InvariantsError::Modular(e) => e.code(),
            InvariantsError::IdentityViolation(_) => "IdentityViolation",
            InvariantsError::InfeasibleCover { .. } => "InfeasibleCover",
            InvariantsError::InvalidCoverDegree => "InvalidCoverDegree",
            InvariantsError::InvalidBaseGenus(_) => "InvalidBaseGenus",
            InvariantsError::BaseGenusMismatch { .. } => "BaseGenusMismatch",
            InvariantsError::DegenerateSlope => "DegenerateSlope",
            InvariantsError::UnsupportedGenus(_) => "UnsupportedGenus",
            InvariantsError::InvalidOrder(_) => "InvalidOrder",
        }
    }
}

/// Invariants of `S(A,d)`. Optional fields are only defined for genus 3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    pub g: u32,
    pub d: u64,
    #[serde(with = "rational_str")]
    pub delta: BigRational,
    /// Genus of `X(d)`.
    #[serde(with = "big_dec")]
    pub modular_genus: BigInt,
    /// Number of cusps `t(d)` of `X(d)`.
    #[serde(with = "big_dec")]
    pub cusps: BigInt,
    /// `g(X(d))` for genus 2, `g(B(A,d))` for genus 3.
    #[serde(with = "big_dec")]
    pub base_genus: BigInt,
    #[serde(with = "big_dec")]
    pub s: BigInt,
    #[serde(with = "big_dec")]
    pub c2: BigInt,
    #[serde(with = "big_dec")]
    pub chi: BigInt,
    #[serde(rename = "K2", with = "big_dec")]
    pub k2: BigInt,
    #[serde(with = "big_dec_opt")]
    pub tau: Option<BigInt>,
    #[serde(rename = "H", with = "big_dec_opt")]
    pub h: Option<BigInt>,
    #[serde(with = "big_dec_opt")]
    pub lambda: Option<BigInt>,
    #[serde(with = "big_dec_opt")]
    pub delta0: Option<BigInt>,
    #[serde(with = "big_dec_opt")]
    pub delta1: Option<BigInt>,
    /// Set when `χ ≤ 0` or `K² ≤ 0`: the formulas still evaluate but the
    /// surface cannot be of general type.
    pub general_type_preconditions_fail: bool,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn qi(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// `(a·d + b)·Δ`, required integral.
fn lin(name: &'static str, d: u64, dl: &BigRational, a: i64, b: i64) -> Result<BigInt, ModularError> {
    integral(name, d, (q(a) * q(d as i64) + q(b)) * dl)
}

pub fn invariants_g2(d: u64) -> Result<SurfaceInvariants, InvariantsError> {
    let m = modular_data(d)?;
    let dl = &m.delta;
    let s = lin("s", d, dl, 5, -6)?;
    let c2 = lin("c2", d, dl, 9, -18)?;
    let chi = lin("chi", d, dl, 2, -6)?;
    let k2 = lin("K2", d, dl, 15, -54)?;
    let inv = SurfaceInvariants {
        g: 2,
        d,
        delta: dl.clone(),
        modular_genus: m.genus.clone(),
        cusps: m.cusps.clone(),
        base_genus: m.genus,
        general_type_preconditions_fail: !chi.is_positive() || !k2.is_positive(),
        s,
        c2,
        chi,
        k2,
        tau: None,
        h: None,
        lambda: None,
        delta0: None,
        delta1: None,
    };
    ensure_identities(&inv)?;
    Ok(inv)
}

pub fn invariants_g3(d: u64) -> Result<SurfaceInvariants, InvariantsError> {
    let m = modular_data(d)?;
    let dl = &m.delta;
    let base_genus = integral("g(B)", d, (q(20) * q(d as i64) - q(36)) * dl + BigRational::one())?;
    let c2 = lin("c2", d, dl, 160, -264)?;
    let chi = lin("chi", d, dl, 42, -72)?;
    let k2 = lin("K2", d, dl, 344, -600)?;
    let tau = lin("tau", d, dl, 8, -24)?;
    let lambda = lin("lambda", d, dl, 2, 0)?;
    let delta0 = lin("delta0", d, dl, 0, 24)?;
    let h = lin("H", d, dl, 36, -48)?;
    let inv = SurfaceInvariants {
        g: 3,
        d,
        delta: dl.clone(),
        modular_genus: m.genus,
        cusps: m.cusps,
        base_genus,
        s: BigInt::zero(),
        general_type_preconditions_fail: !chi.is_positive() || !k2.is_positive(),
        c2,
        chi,
        k2,
        tau: Some(tau),
        h: Some(h),
        lambda: Some(lambda),
        delta0: Some(delta0),
        delta1: Some(BigInt::zero()),
    };
    ensure_identities(&inv)?;
    Ok(inv)
}

pub fn invariants(g: u32, d: u64) -> Result<SurfaceInvariants, InvariantsError> {
    match g {
        2 => invariants_g2(d),
        3 => invariants_g3(d),
        _ => Err(InvariantsError::UnsupportedGenus(g)),
    }
}

/// One row per level in `range`.
pub fn invariants_table(g: u32, range: std::ops::RangeInclusive<u64>) -> Result<Vec<SurfaceInvariants>, InvariantsError> {
    range.map(|d| invariants(g, d)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
}

/// Every relation the invariants are expected to satisfy.
pub fn check_identities(inv: &SurfaceInvariants) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    let mut push = |name, holds| out.push(IdentityCheck { name, holds });

    let dl = &inv.delta;
    let dq = q(inv.d as i64);
    let c2 = qi(&inv.c2);
    let chi = qi(&inv.chi);
    let k2 = qi(&inv.k2);
    let t = qi(&inv.cusps);
    let gx = qi(&inv.modular_genus);
    let gb = qi(&inv.base_genus);

    push("noether", &k2 + &c2 == q(12) * &chi);
    push("cusp_count", t == q(12) * dl);
    push("modular_genus", gx == (&dq - q(6)) * dl + q(1));
    push("euler_fibre_sum", euler_fibre_sum_check(inv));

    match inv.g {
        2 => {
            let s = qi(&inv.s);
            push("c2_from_fibres", c2 == &s + &t + q(4) * &gx - q(4));
            push("chi_from_base", chi == q(2) * &gx - q(2) + &t / q(2));
            push("k2_from_chi", k2 == q(6) * &chi + q(3) * &gx - q(3));
            push("common_defect", &s + &t == (q(5) * &dq + q(6)) * dl);
        }
        3 => {
            let (Some(tau), Some(h), Some(lambda), Some(d0), Some(d1)) =
                (&inv.tau, &inv.h, &inv.lambda, &inv.delta0, &inv.delta1)
            else {
                push("genus3_fields_present", false);
                return out;
            };
            let (tau, h, lambda, d0, d1) = (qi(tau), qi(h), qi(lambda), qi(d0), qi(d1));
            push("index", q(3) * &tau == &k2 - q(2) * &c2);
            push("index_closed_form", tau == (q(8) * &dq - q(24)) * dl);
            push("index_sign", tau.is_positive() == (inv.d > 3));
            push("riemann_hurwitz", q(2) * (&gb - q(1)) == q(2) * (q(2) * &gx - q(2)) + &h);
            push("chi_from_base", chi == q(2) * (&gb - q(1)) + q(2) * &dq * dl);
            push("lambda_closed_form", lambda == q(2) * &dq * dl);
            push("delta0_twice_cusps", d0 == q(2) * &t);
            push("delta1_vanishes", d1.is_zero());
            push("hyperelliptic_count", h == q(18) * &lambda - q(2) * &d0 - q(3) * &d1);
            push("arakelov_margin", &k2 - q(16) * (&gb - q(1)) == (q(24) * &dq - q(24)) * dl);
            push("unique_fibration", unique_fibration_criterion(&inv.k2, 3));
        }
        _ => push("supported_genus", false),
    }
    out
}

fn ensure_identities(inv: &SurfaceInvariants) -> Result<(), InvariantsError> {
    let failed: Vec<&str> = check_identities(inv).iter().filter(|c| !c.holds).map(|c| c.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(InvariantsError::IdentityViolation(format!("g = {}, d = {}: {}", inv.g, inv.d, failed.join(", "))))
    }
}

/// Total Euler defect of the singular fibres equals
/// `c₂ − χ_top(F)·χ_top(base)`. In genus 3 every cusp of `X(d)` contributes
/// 2; in genus 2 each of the `s + t` singular fibres contributes 1.
pub fn euler_fibre_sum_check(inv: &SurfaceInvariants) -> bool {
    let e_fibre = BigInt::from(2) - BigInt::from(2 * inv.g);
    let e_base = BigInt::from(2) - BigInt::from(2) * &inv.base_genus;
    let total = &inv.c2 - e_fibre * e_base;
    match inv.g {
        3 => total == BigInt::from(2) * &inv.cusps,
        2 => total == &inv.s + &inv.cusps,
        _ => false,
    }
}

/// The `λ` with `K² = λχ + (8 − λ)(b−1)(g−1)`.
pub fn slope(inv: &SurfaceInvariants, b: &BigInt, g: u32) -> Result<BigRational, InvariantsError> {
    let bg = (b - 1) * BigInt::from(g as i64 - 1);
    let den: BigInt = &inv.chi - &bg;
    if den.is_zero() {
        return Err(InvariantsError::DegenerateSlope);
    }
    Ok(BigRational::new(&inv.k2 - BigInt::from(8) * bg, den))
}

/// `K² ≥ 8(b−1)(g−1)`.
pub fn arakelov_holds(inv: &SurfaceInvariants, b: &BigInt, g: u32) -> bool {
    inv.k2 >= BigInt::from(8) * (b - 1) * BigInt::from(g as i64 - 1)
}

/// `K² > 4(g−1)²`, which forces the fibration to be unique.
pub fn unique_fibration_criterion(k2: &BigInt, g: u32) -> bool {
    let g1 = BigInt::from(g as i64 - 1);
    k2 > &(BigInt::from(4) * &g1 * &g1)
}

/// `K²` of the pullback along a degree-`n` cover `B̃ → B(A,d)` of genus `b̃`:
/// `n·K² + 8(b̃ − 1 + n·b − n)`.
pub fn pullback_k2(base: &SurfaceInvariants, n: u64, b_tilde: &BigInt, b: &BigInt) -> Result<BigInt, InvariantsError> {
    if n == 0 {
        return Err(InvariantsError::InvalidCoverDegree);
    }
    if b != &base.base_genus {
        return Err(InvariantsError::BaseGenusMismatch { given: b.clone(), expected: base.base_genus.clone() });
    }
    let nb = BigInt::from(n);
    if BigInt::from(2) * b_tilde - 2 < &nb * (BigInt::from(2) * b - 2) {
        return Err(InvariantsError::InfeasibleCover { n, b_tilde: b_tilde.clone(), b: b.clone() });
    }
    Ok(&nb * &base.k2 + BigInt::from(8) * (b_tilde - 1 + &nb * b - &nb))
}

/// Dimension of the moduli of fibrations of fibre genus `g` over a base of
/// genus `b` that factor through a degree-`m` map to the prototype's base.
pub fn moduli_dimension(g: u32, b: &BigInt, m: u64, d: u64) -> Result<BigInt, InvariantsError> {
    if m == 0 {
        return Err(InvariantsError::InvalidCoverDegree);
    }
    if b < &BigInt::from(2) {
        return Err(InvariantsError::InvalidBaseGenus(b.clone()));
    }
    let m = BigInt::from(m);
    match g {
        2 => {
            let gx = invariants_g2(d)?.base_genus;
            Ok(BigInt::from(2) * b - 2 - m * (BigInt::from(2) * gx - 2) + 1)
        }
        3 => {
            let gb = invariants_g3(d)?.base_genus;
            Ok(BigInt::from(2) * b - m * (BigInt::from(2) * gb - 2) + 3)
        }
        _ => Err(InvariantsError::UnsupportedGenus(g)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FibreVariant {
    /// Genus 3: an irreducible genus-2 curve with one node.
    Genus2WithNode,
    /// Genus 3: a smooth genus-2 curve meeting a smooth rational curve in two points.
    Genus2PlusRationalTwoNodes,
    /// Genus 2: two elliptic curves meeting in a node.
    TwoEllipticOneNode,
    /// Genus 2: an elliptic curve with a node.
    EllipticWithNode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularFibreType {
    pub genus: u32,
    pub variant: FibreVariant,
    /// `χ_top(F′) − χ_top(F)`.
    pub euler_defect: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibreTypes {
    pub genus: u32,
    pub types: Vec<SingularFibreType>,
    /// Defect of a singular hyperelliptic fibre, genus 3 only.
    pub hyperelliptic_defect: Option<u32>,
    pub semistable: bool,
}

pub fn fibre_types(g: u32) -> Result<FibreTypes, InvariantsError> {
    let ty = |variant| SingularFibreType { genus: g, variant, euler_defect: 1 };
    match g {
        3 => Ok(FibreTypes {
            genus: 3,
            types: vec![ty(FibreVariant::Genus2WithNode), ty(FibreVariant::Genus2PlusRationalTwoNodes)],
            hyperelliptic_defect: Some(2),
            semistable: true,
        }),
        2 => Ok(FibreTypes {
            genus: 2,
            types: vec![ty(FibreVariant::TwoEllipticOneNode), ty(FibreVariant::EllipticWithNode)],
            hyperelliptic_defect: None,
            semistable: true,
        }),
        _ => Err(InvariantsError::UnsupportedGenus(g)),
    }
}

/// Euler defect of the fibre over a point where the base change ramifies
/// with order `e` over a cusp.
pub fn ramified_cusp_defect(e: u64) -> Result<u64, InvariantsError> {
    if e == 0 {
        return Err(InvariantsError::InvalidOrder(e));
    }
    Ok(e)
}

/// Outcome of running [`check_identities`] over a range of levels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Recomputes both tables from `Δ_d` directly (bypassing the constructors'
/// own assertion) and runs every identity.
pub fn check_range(range: std::ops::RangeInclusive<u64>) -> Result<CheckReport, InvariantsError> {
    let mut report = CheckReport { checked: 0, failures: Vec::new() };
    for d in range {
        delta(d)?;
        for g in [2u32, 3] {
            match invariants(g, d) {
                Ok(inv) => {
                    for c in check_identities(&inv) {
                        report.checked += 1;
                        if !c.holds {
                            report.failures.push(format!("g={g} d={d} {}", c.name));
                        }
                    }
                    if g == 3 && !arakelov_holds(&inv, &inv.base_genus, 3) {
                        report.failures.push(format!("g=3 d={d} arakelov"));
                    }
                    report.checked += usize::from(g == 3);
                }
                Err(e @ InvariantsError::Modular(ModularError::LevelTooSmall(_))) => return Err(e),
                Err(e) => report.failures.push(format!("g={g} d={d} {e}")),
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn genus_two_values() {
        let i4 = invariants_g2(4).unwrap();
        assert_eq!((i4.s.clone(), i4.c2.clone(), i4.chi.clone(), i4.k2.clone()), (b(7), b(9), b(1), b(3)));
        assert!(!i4.general_type_preconditions_fail);
        let i5 = invariants_g2(5).unwrap();
        assert_eq!((i5.s, i5.c2, i5.chi, i5.k2), (b(19), b(27), b(4), b(21)));
        let i3 = invariants_g2(3).unwrap();
        assert_eq!((i3.s, i3.c2, i3.chi, i3.k2), (b(3), b(3), b(0), b(-3)));
        assert!(i3.general_type_preconditions_fail);
    }

    #[test]
    fn genus_three_values() {
        let i3 = invariants_g3(3).unwrap();
        assert_eq!(i3.base_genus, b(9));
        assert_eq!((i3.c2.clone(), i3.chi.clone(), i3.k2.clone()), (b(72), b(18), b(144)));
        assert_eq!((i3.tau.clone(), i3.h.clone(), i3.lambda.clone()), (Some(b(0)), Some(b(20)), Some(b(2))));
        let i4 = invariants_g3(4).unwrap();
        assert_eq!(i4.base_genus, b(23));
        assert_eq!((i4.c2, i4.chi, i4.k2, i4.tau, i4.h), (b(188), b(48), b(388), Some(b(4)), Some(b(48))));
    }

    #[test]
    fn level_too_small() {
        assert!(matches!(invariants_g3(2), Err(InvariantsError::Modular(ModularError::LevelTooSmall(2)))));
        assert!(invariants_g2(1).is_err());
    }

    #[test]
    fn euler_sum() {
        let mut i3 = invariants_g3(3).unwrap();
        assert!(euler_fibre_sum_check(&i3));
        assert!(euler_fibre_sum_check(&invariants_g3(4).unwrap()));
        i3.c2 += 1;
        assert!(!euler_fibre_sum_check(&i3));
    }

    #[test]
    fn slopes() {
        let i4 = invariants_g3(4).unwrap();
        assert_eq!(slope(&i4, &b(23), 3).unwrap(), BigRational::from_integer(b(9)));
        let i3 = invariants_g3(3).unwrap();
        assert_eq!(slope(&i3, &b(9), 3).unwrap(), BigRational::from_integer(b(8)));
        let mut fake = i3.clone();
        fake.chi = b(16);
        assert_eq!(slope(&fake, &b(9), 3), Err(InvariantsError::DegenerateSlope));
    }

    #[test]
    fn arakelov() {
        assert!(arakelov_holds(&invariants_g3(3).unwrap(), &b(9), 3));
        let i5 = invariants_g3(5).unwrap();
        assert_eq!((i5.k2.clone(), i5.base_genus.clone()), (b(1120), b(65)));
        assert!(arakelov_holds(&i5, &b(65), 3));
        let mut fake = invariants_g2(5).unwrap();
        fake.k2 = b(0);
        assert!(!arakelov_holds(&fake, &b(2), 2));
    }

    #[test]
    fn uniqueness() {
        assert!(unique_fibration_criterion(&b(144), 3));
        assert!(!unique_fibration_criterion(&b(4), 2));
        assert!(unique_fibration_criterion(&b(17), 3));
    }

    #[test]
    fn pullback() {
        let i3 = invariants_g3(3).unwrap();
        assert_eq!(pullback_k2(&i3, 2, &b(17), &b(9)).unwrap(), b(544));
        assert_eq!(pullback_k2(&i3, 1, &b(9), &b(9)).unwrap(), b(144 + 8 * 16));
        assert_eq!(pullback_k2(&i3, 0, &b(17), &b(9)), Err(InvariantsError::InvalidCoverDegree));
        assert!(matches!(pullback_k2(&i3, 2, &b(16), &b(9)), Err(InvariantsError::InfeasibleCover { .. })));
        assert!(matches!(pullback_k2(&i3, 1, &b(9), &b(8)), Err(InvariantsError::BaseGenusMismatch { .. })));
    }

    #[test]
    fn moduli() {
        assert_eq!(moduli_dimension(2, &b(5), 1, 7).unwrap(), b(5));
        assert_eq!(moduli_dimension(3, &b(17), 1, 3).unwrap(), b(21));
        assert_eq!(moduli_dimension(2, &b(5), 0, 7), Err(InvariantsError::InvalidCoverDegree));
        assert!(moduli_dimension(3, &b(17), 1, 2).is_err());
    }

    #[test]
    fn fibres() {
        let f3 = fibre_types(3).unwrap();
        assert_eq!(f3.types.iter().map(|t| t.euler_defect).collect::<Vec<_>>(), vec![1, 1]);
        assert_eq!(f3.hyperelliptic_defect, Some(2));
        assert!(f3.semistable);
        assert_eq!(fibre_types(2).unwrap().types[0].variant, FibreVariant::TwoEllipticOneNode);
        assert_eq!(fibre_types(4), Err(InvariantsError::UnsupportedGenus(4)));
    }

    #[test]
    fn ramified_defect() {
        assert_eq!(ramified_cusp_defect(1).unwrap(), 1);
        assert_eq!(ramified_cusp_defect(3).unwrap(), 3);
        assert_eq!(ramified_cusp_defect(0), Err(InvariantsError::InvalidOrder(0)));
    }

    #[test]
    fn full_range_passes() {
        let r = check_range(3..=100).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.checked > 1000);
    }
}
