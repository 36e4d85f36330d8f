//! Principal congruence subgroups `Γ(d)`, the four complements of `±1` in
//! `Γ(2)`, and the numerical data of the modular curve `X(d)`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::lattice::IntMatrix;
use crate::numeric::{big_dec, rational_str};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModularError {
    #[error("level {0} is too small")]
    LevelTooSmall(u64),
    #[error("{quantity} is not an integer for d = {d}: {value}")]
    NonIntegralResult { quantity: &'static str, d: u64, value: String },
    #[error("invalid irregular-cusp set: {0}")]
    InvalidCuspSet(String),
    #[error("only the cusp at infinity is supported, got {0}")]
    UnsupportedCusp(String),
    #[error("matrix is not in Γ(2)")]
    NotInGamma2,
}

impl ModularError {
    pub fn code(&self) -> &'static str {
        match self {
            ModularError::LevelTooSmall(_) => "LevelTooSmall",
            ModularError::NonIntegralResult { .. } => "NonIntegralResult",
            ModularError::InvalidCuspSet(_) => "InvalidCuspSet",
            ModularError::UnsupportedCusp(_) => "UnsupportedCusp",
            ModularError::NotInGamma2 => "NotInGamma2",
        }
    }
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `Δ_d = d²/24 · ∏_{p | d} (1 - 1/p²)`, exactly.
pub fn delta(d: u64) -> Result<BigRational, ModularError> {
    if d < 2 {
        return Err(ModularError::LevelTooSmall(d));
    }
    let mut acc = BigRational::new(BigInt::from(d) * BigInt::from(d), BigInt::from(24));
    for p in prime_divisors(d) {
        let p2 = BigInt::from(p) * BigInt::from(p);
        acc *= BigRational::new(&p2 - 1, p2);
    }
    Ok(acc)
}

pub(crate) fn integral(quantity: &'static str, d: u64, v: BigRational) -> Result<BigInt, ModularError> {
    if v.is_integer() {
        Ok(v.to_integer())
    } else {
        Err(ModularError::NonIntegralResult { quantity, d, value: v.to_string() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModularCurveData {
    pub d: u64,
    #[serde(with = "rational_str")]
    pub delta: BigRational,
    #[serde(with = "big_dec")]
    pub genus: BigInt,
    #[serde(with = "big_dec")]
    pub cusps: BigInt,
}

/// Genus and cusp count of `X(d)` for `d ≥ 3`.
pub fn modular_data(d: u64) -> Result<ModularCurveData, ModularError> {
    if d < 3 {
        return Err(ModularError::LevelTooSmall(d));
    }
    let delta = delta(d)?;
    let dd = BigRational::from_integer(BigInt::from(d));
    let six = BigRational::from_integer(BigInt::from(6));
    let genus = integral("g(X(d))", d, (&dd - six) * &delta + BigRational::one())?;
    let cusps = integral("t(d)", d, BigRational::from_integer(BigInt::from(12)) * &delta)?;
    Ok(ModularCurveData { d, delta, genus, cusps })
}

/// `det m = 1` and `m ≡ I (mod d)`.
pub fn gamma_d_contains(m: &IntMatrix, d: u64) -> bool {
    if m.rows() != 2 || m.cols() != 2 || d == 0 {
        return false;
    }
    if !m.det().map(|x| x.is_one()).unwrap_or(false) {
        return false;
    }
    let d = BigInt::from(d);
    let id = IntMatrix::identity(2);
    (0..2).all(|i| (0..2).all(|j| (&m[(i, j)] - &id[(i, j)]).is_multiple_of(&d)))
}

/// The three cusps of `X(2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Cusp {
    Zero,
    One,
    Infinity,
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cusp::Zero => "0",
            Cusp::One => "1",
            Cusp::Infinity => "inf",
        })
    }
}

impl std::str::FromStr for Cusp {
    type Err = ModularError;
    fn from_str(s: &str) -> Result<Self, ModularError> {
        match s.trim() {
            "0" => Ok(Cusp::Zero),
            "1" => Ok(Cusp::One),
            "inf" | "infinity" | "∞" => Ok(Cusp::Infinity),
            other => Err(ModularError::InvalidCuspSet(format!("unknown cusp {other:?}"))),
        }
    }
}

/// A set `S ⊆ {0, 1, ∞}` of order 1 or 3, naming one complement `Γ(2)_S`
/// of `±1` in `Γ(2)`.
///
/// `Γ(2)/±1` is free on `A = [[1,2],[0,1]]` and `B = [[1,0],[2,1]]`, so a
/// complement is the kernel of a character `χ` with `χ(-I) = -1`, fixed by
/// the signs `χ(A) = ε_∞` and `χ(B) = ε_0`. The stabilizer of a cusp in the
/// complement is generated by a parabolic element of trace `+2` (regular) or
/// `-2` (irregular); the parabolic generators `A`, `B`, `-AB⁻¹` at
/// `∞`, `0`, `1` give irregular sets `{1}`, `{∞}`, `{0}`, `{0,1,∞}` for
/// `(ε_∞, ε_0) = (+,+), (-,+), (+,-), (-,-)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IrregularCusps(BTreeSet<Cusp>);

impl IrregularCusps {
    pub fn new(cusps: &[Cusp]) -> Result<Self, ModularError> {
        let set: BTreeSet<Cusp> = cusps.iter().copied().collect();
        if set.len() != cusps.len() {
            return Err(ModularError::InvalidCuspSet("repeated cusp".into()));
        }
        if set.len() != 1 && set.len() != 3 {
            return Err(ModularError::InvalidCuspSet(format!(
                "S must have order 1 or 3, got {}",
                set.len()
            )));
        }
        Ok(IrregularCusps(set))
    }

    /// The four admissible sets.
    pub fn all() -> Vec<IrregularCusps> {
        vec![
            IrregularCusps::new(&[Cusp::Zero]).unwrap(),
            IrregularCusps::new(&[Cusp::One]).unwrap(),
            IrregularCusps::new(&[Cusp::Infinity]).unwrap(),
            IrregularCusps::new(&[Cusp::Zero, Cusp::One, Cusp::Infinity]).unwrap(),
        ]
    }

    pub fn contains(&self, c: Cusp) -> bool {
        self.0.contains(&c)
    }

    pub fn cusps(&self) -> impl Iterator<Item = Cusp> + '_ {
        self.0.iter().copied()
    }

    /// `(χ(A), χ(B))` as `±1`.
    fn character_signs(&self) -> (i8, i8) {
        let eps_inf = if self.contains(Cusp::Infinity) { -1 } else { 1 };
        let eps_zero = if self.contains(Cusp::Zero) { -1 } else { 1 };
        (eps_inf, eps_zero)
    }
}

impl std::str::FromStr for IrregularCusps {
    type Err = ModularError;
    fn from_str(s: &str) -> Result<Self, ModularError> {
        let cusps: Result<Vec<Cusp>, _> = s
            .trim_matches(|c| c == '{' || c == '}')
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(str::parse)
            .collect();
        IrregularCusps::new(&cusps?)
    }
}

impl fmt::Display for IrregularCusps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Generators of `Γ(2)` modulo `±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gamma2Generator {
    /// `[[1,2],[0,1]]`
    A,
    /// `[[1,0],[2,1]]`
    B,
}

impl Gamma2Generator {
    pub fn power(self, k: &BigInt) -> IntMatrix {
        let two_k = k * 2;
        let mut m = IntMatrix::identity(2);
        match self {
            Gamma2Generator::A => m[(0, 1)] = two_k,
            Gamma2Generator::B => m[(1, 0)] = two_k,
        }
        m
    }
}

/// `m = sign · g₁^{k₁} ⋯ g_n^{k_n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gamma2Word {
    pub sign: i8,
    pub letters: Vec<(Gamma2Generator, BigInt)>,
}

impl Gamma2Word {
    pub fn evaluate(&self) -> IntMatrix {
        let mut acc = IntMatrix::identity(2);
        for (g, k) in &self.letters {
            acc = &acc * &g.power(k);
        }
        if self.sign < 0 {
            acc = -&acc;
        }
        acc
    }

    fn exponent_sum(&self, which: Gamma2Generator) -> BigInt {
        self.letters.iter().filter(|(g, _)| *g == which).map(|(_, k)| k.clone()).sum()
    }
}

/// Nearest value to `x` in `x + 2·m·Z`; `|result| < |m|` when the parities
/// of `x` and `m` differ.
fn reduce_mod_twice(x: &BigInt, m: &BigInt) -> (BigInt, BigInt) {
    let two_m = m * 2;
    let q = x.div_floor(&two_m);
    let mut r = x - &q * &two_m;
    let mut k = -q;
    if (&r - &two_m).abs() < r.abs() {
        r -= &two_m;
        k -= 1;
    }
    if (&r + &two_m).abs() < r.abs() {
        r += &two_m;
        k += 1;
    }
    (r, k)
}

/// Writes an element of `Γ(2)` as `±` a word in `A`, `B`.
pub fn gamma2_decompose(m: &IntMatrix) -> Result<Gamma2Word, ModularError> {
    if !gamma_d_contains(m, 2) {
        return Err(ModularError::NotInGamma2);
    }
    let mut cur = m.clone();
    // Left multiplications applied so far, in order.
    let mut applied: Vec<(Gamma2Generator, BigInt)> = Vec::new();
    while !cur[(1, 0)].is_zero() {
        let (a, c) = (cur[(0, 0)].clone(), cur[(1, 0)].clone());
        let (generator, k) = if a.abs() > c.abs() {
            (Gamma2Generator::A, reduce_mod_twice(&a, &c).1)
        } else {
            (Gamma2Generator::B, reduce_mod_twice(&c, &a).1)
        };
        cur = &generator.power(&k) * &cur;
        applied.push((generator, k));
    }
    // cur = ±[[1, b], [0, 1]]
    let sign: i8 = if cur[(0, 0)].is_positive() { 1 } else { -1 };
    let b = if sign > 0 { cur[(0, 1)].clone() } else { -&cur[(0, 1)] };
    let mut letters: Vec<(Gamma2Generator, BigInt)> =
        applied.into_iter().map(|(g, k)| (g, -k)).collect();
    if !b.is_zero() {
        letters.push((Gamma2Generator::A, b / 2));
    }
    let word = Gamma2Word { sign, letters };
    debug_assert_eq!(&word.evaluate(), m);
    Ok(word)
}

/// Membership in the complement `Γ(2)_S` of `±1`.
pub fn gamma2_complement_contains(m: &IntMatrix, s: &IrregularCusps) -> bool {
    let Ok(word) = gamma2_decompose(m) else {
        return false;
    };
    let (eps_a, eps_b) = s.character_signs();
    let odd = |k: BigInt| k.is_odd();
    let mut chi = word.sign;
    if eps_a < 0 && odd(word.exponent_sum(Gamma2Generator::A)) {
        chi = -chi;
    }
    if eps_b < 0 && odd(word.exponent_sum(Gamma2Generator::B)) {
        chi = -chi;
    }
    chi == 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CuspRegularity {
    Regular,
    Irregular,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspRegularityCase {
    pub variant: CuspRegularity,
    pub stabilizer_generator: IntMatrix,
}

/// Regularity of `∞` for `Γ(2)_S` and the generator of its stabilizer.
pub fn cusp_case(s: &IrregularCusps, cusp: Cusp) -> Result<CuspRegularityCase, ModularError> {
    if cusp != Cusp::Infinity {
        return Err(ModularError::UnsupportedCusp(cusp.to_string()));
    }
    Ok(if s.contains(Cusp::Infinity) {
        CuspRegularityCase {
            variant: CuspRegularity::Irregular,
            stabilizer_generator: IntMatrix::from_rows(&[[-1, 2], [0, -1]]),
        }
    } else {
        CuspRegularityCase {
            variant: CuspRegularity::Regular,
            stabilizer_generator: IntMatrix::from_rows(&[[1, 2], [0, 1]]),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta(3).unwrap(), q(1, 3));
        assert_eq!(delta(4).unwrap(), q(1, 2));
        assert_eq!(delta(11).unwrap(), q(5, 1));
        assert_eq!(delta(2).unwrap(), q(1, 8));
        assert_eq!(delta(1), Err(ModularError::LevelTooSmall(1)));
    }

    #[test]
    fn classical_curves() {
        let check = |d, g: i64, t: i64| {
            let m = modular_data(d).unwrap();
            assert_eq!((m.genus, m.cusps), (BigInt::from(g), BigInt::from(t)), "d = {d}");
        };
        check(5, 0, 12);
        check(7, 3, 24);
        check(11, 26, 60);
        assert_eq!(modular_data(5).unwrap().delta, q(1, 1));
        assert_eq!(modular_data(2), Err(ModularError::LevelTooSmall(2)));
    }

    #[test]
    fn prime_levels() {
        for p in [3u64, 5, 7, 11, 13, 101, 199] {
            assert_eq!(delta(p).unwrap(), q((p * p - 1) as i64, 24));
        }
    }

    #[test]
    fn gamma_d_examples() {
        for d in 2..10 {
            assert!(gamma_d_contains(&IntMatrix::identity(2), d));
            assert!(gamma_d_contains(&IntMatrix::from_rows(&[[1, d as i64], [0, 1]]), d));
        }
        assert!(!gamma_d_contains(&IntMatrix::from_rows(&[[1, 1], [0, 1]]), 3));
        // det 1 fails even when congruent
        assert!(!gamma_d_contains(&IntMatrix::from_rows(&[[4, 0], [0, 1]]), 3));
        assert!(!gamma_d_contains(&IntMatrix::identity(3), 3));
    }

    #[test]
    fn decomposition_round_trips() {
        let m = IntMatrix::from_rows(&[[5, 2], [2, 1]]);
        let w = gamma2_decompose(&m).unwrap();
        assert_eq!(w.evaluate(), m);
        let m = IntMatrix::from_rows(&[[-3, 2], [-2, 1]]);
        assert_eq!(gamma2_decompose(&m).unwrap().evaluate(), m);
        assert_eq!(gamma2_decompose(&IntMatrix::from_rows(&[[1, 1], [0, 1]])), Err(ModularError::NotInGamma2));
    }

    #[test]
    fn complement_examples() {
        let neg = -&IntMatrix::identity(2);
        let irregular = IntMatrix::from_rows(&[[-1, 2], [0, -1]]);
        for s in IrregularCusps::all() {
            assert!(gamma2_complement_contains(&IntMatrix::identity(2), &s));
            assert!(!gamma2_complement_contains(&neg, &s));
            assert_eq!(gamma2_complement_contains(&irregular, &s), s.contains(Cusp::Infinity), "{s}");
        }
    }

    #[test]
    fn complement_stabilizers_match_regularity() {
        // Parabolic generators at 0 and 1 with trace +2.
        let at_zero = IntMatrix::from_rows(&[[1, 0], [2, 1]]);
        let at_one = IntMatrix::from_rows(&[[3, -2], [2, -1]]);
        let at_inf = IntMatrix::from_rows(&[[1, 2], [0, 1]]);
        for s in IrregularCusps::all() {
            for (cusp, gen) in [(Cusp::Zero, &at_zero), (Cusp::One, &at_one), (Cusp::Infinity, &at_inf)] {
                // The regular representative lies in Γ(2)_S iff the cusp is regular.
                assert_eq!(gamma2_complement_contains(gen, &s), !s.contains(cusp), "{s} at {cusp}");
                assert_eq!(gamma2_complement_contains(&-gen, &s), s.contains(cusp));
            }
        }
    }

    #[test]
    fn cusp_sets() {
        assert!(IrregularCusps::new(&[Cusp::Zero, Cusp::One]).is_err());
        assert!(IrregularCusps::new(&[]).is_err());
        assert!(IrregularCusps::new(&[Cusp::Zero, Cusp::Zero, Cusp::One]).is_err());
        let s: IrregularCusps = "{0,1,inf}".parse().unwrap();
        assert_eq!(s.to_string(), "{0,1,inf}");
    }

    #[test]
    fn cusp_cases() {
        let s_inf: IrregularCusps = "inf".parse().unwrap();
        let c = cusp_case(&s_inf, Cusp::Infinity).unwrap();
        assert_eq!(c.variant, CuspRegularity::Irregular);
        assert_eq!(c.stabilizer_generator, IntMatrix::from_rows(&[[-1, 2], [0, -1]]));
        let s0: IrregularCusps = "0".parse().unwrap();
        let c = cusp_case(&s0, Cusp::Infinity).unwrap();
        assert_eq!(c.variant, CuspRegularity::Regular);
        assert_eq!(c.stabilizer_generator, IntMatrix::from_rows(&[[1, 2], [0, 1]]));
        let all: IrregularCusps = "0,1,inf".parse().unwrap();
        assert_eq!(cusp_case(&all, Cusp::Infinity).unwrap().variant, CuspRegularity::Irregular);
        assert!(matches!(cusp_case(&all, Cusp::Zero), Err(ModularError::UnsupportedCusp(_))));
    }
}
