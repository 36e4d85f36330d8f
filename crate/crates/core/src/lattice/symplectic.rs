//! Elements of `Sp(2g, Z)` and invariants that separate conjugacy classes.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::matrix::IntMatrix;
use super::snf::invariant_factors;
use super::LatticeError;

/// `mᵀ J m == J` for the standard `J = [[0, I_g], [-I_g, 0]]`.
pub fn is_symplectic(m: &IntMatrix, g: usize) -> Result<bool, LatticeError> {
    if m.rows() != 2 * g || m.cols() != 2 * g {
        return Err(LatticeError::DimensionMismatch(format!(
            "expected {}x{}, got {}x{}",
            2 * g,
            2 * g,
            m.rows(),
            m.cols()
        )));
    }
    let j = IntMatrix::standard_symplectic(g);
    Ok(&(&m.transpose() * &j) * m == j)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticMatrix {
    m: IntMatrix,
    g: usize,
}

impl SymplecticMatrix {
    pub fn new(m: IntMatrix) -> Result<Self, LatticeError> {
        if !m.is_square() || !m.rows().is_multiple_of(2) {
            return Err(LatticeError::DimensionMismatch("symplectic matrices are 2g x 2g".into()));
        }
        let g = m.rows() / 2;
        if !is_symplectic(&m, g)? {
            return Err(LatticeError::NotSymplectic);
        }
        Ok(SymplecticMatrix { m, g })
    }

    pub fn identity(g: usize) -> Self {
        SymplecticMatrix { m: IntMatrix::identity(2 * g), g }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    /// `m⁻¹ = -J mᵀ J`.
    pub fn inverse(&self) -> Self {
        let j = IntMatrix::standard_symplectic(self.g);
        let inv = -&(&(&j * &self.m.transpose()) * &j);
        SymplecticMatrix { m: inv, g: self.g }
    }

    pub fn compose(&self, other: &SymplecticMatrix) -> Result<Self, LatticeError> {
        if self.g != other.g {
            return Err(LatticeError::DimensionMismatch("genus mismatch".into()));
        }
        Ok(SymplecticMatrix { m: &self.m * &other.m, g: self.g })
    }

    /// `p⁻¹ · self · p`.
    pub fn conjugate_by(&self, p: &SymplecticMatrix) -> Result<Self, LatticeError> {
        p.inverse().compose(self)?.compose(p)
    }

    /// The transvection `x ↦ x + ω(x, v) v` where `ω(x, y) = xᵀ J y`.
    pub fn transvection(v: &[BigInt]) -> Self {
        assert!(v.len().is_multiple_of(2) && !v.is_empty());
        let g = v.len() / 2;
        let j = IntMatrix::standard_symplectic(g);
        let col = IntMatrix::from_columns(&[v.to_vec()]).expect("nonempty");
        let m = &IntMatrix::identity(2 * g) - &(&(&col * &col.transpose()) * &j);
        SymplecticMatrix { m, g }
    }
}

/// Coefficients of `det(xI - m)`, constant term first, via Faddeev–LeVerrier.
///
/// Every division in the recursion is exact over the integers.
pub fn characteristic_polynomial(m: &IntMatrix) -> Vec<BigInt> {
    assert!(m.is_square());
    let n = m.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let id = IntMatrix::identity(n);
    let mut aux = IntMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A·M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A·M_k)/k
        aux = &(m * &aux) + &id.scale(&coeffs[n - k + 1]);
        let t = (m * &aux).trace();
        coeffs[n - k] = -t / BigInt::from(k);
    }
    coeffs
}

pub fn poly_eval(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Multiplicity of the integer root `r` in the polynomial.
pub fn root_multiplicity(coeffs: &[BigInt], r: &BigInt) -> usize {
    let mut p = coeffs.to_vec();
    let mut count = 0;
    while p.len() > 1 && poly_eval(&p, r).is_zero() {
        // Synthetic division by (x - r).
        let deg = p.len() - 1;
        let mut q = vec![BigInt::zero(); deg];
        let mut carry = BigInt::zero();
        for i in (0..deg).rev() {
            carry = &carry * r + &p[i + 1];
            q[i] = carry.clone();
        }
        p = q;
        count += 1;
    }
    count
}

/// Renders `x^6 - 2x^5 + 1` style text.
pub fn format_polynomial(coeffs: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c < &BigInt::zero();
        let abs = if neg { -c } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        if abs.is_one() && i > 0 {
            out.push_str(&mono);
        } else {
            out.push_str(&abs.to_string());
            out.push_str(&mono);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Conjugation invariants of a symplectic matrix.
///
/// Any two matrices with different records are not conjugate in `GL(2g, Z)`
/// and hence not in `Sp(2g, Z)`. Equal records prove nothing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyInvariants {
    /// `det(xI - m)`, constant term first.
    #[serde(serialize_with = "crate::numeric::big_dec_vec::serialize")]
    pub char_poly: Vec<BigInt>,
    /// `(m - I)` is nilpotent.
    pub unipotent: bool,
    /// Invariant factors of `m - I`.
    #[serde(serialize_with = "crate::numeric::big_dec_vec::serialize")]
    pub snf_m_minus_i: Vec<BigInt>,
    /// Invariant factors of `m² - I`.
    #[serde(serialize_with = "crate::numeric::big_dec_vec::serialize")]
    pub snf_m2_minus_i: Vec<BigInt>,
}

pub fn conjugacy_invariants(m: &SymplecticMatrix) -> ConjugacyInvariants {
    let a = m.matrix();
    let n = a.rows();
    let id = IntMatrix::identity(n);
    let n1 = a - &id;
    let n2 = &(a * a) - &id;
    ConjugacyInvariants {
        char_poly: characteristic_polynomial(a),
        unipotent: n1.pow(n as u32).is_zero(),
        snf_m_minus_i: invariant_factors(&n1),
        snf_m2_minus_i: invariant_factors(&n2),
    }
}

/// Validates a raw matrix and computes its invariants.
pub fn conjugacy_invariants_of(m: &IntMatrix) -> Result<ConjugacyInvariants, LatticeError> {
    Ok(conjugacy_invariants(&SymplecticMatrix::new(m.clone())?))
}
