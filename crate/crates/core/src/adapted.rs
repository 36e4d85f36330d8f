//! Adapted bases of a principally polarized lattice `U` containing a
//! type-`(1,…,1,d)` sublattice `U_A` and its type-`(d)` orthogonal
//! complement `U_E`.
//!
//! An adapted basis is an ordered list
//! `u₁, …, u_g, u_{g+1}, …, u_{2g-2}, u_{2g+1}, u_{2g+2}` of `U` such that,
//! with the derived vectors `u_{2g-1} = d·u_{2g+1} - u_g` and
//! `u_{2g} = d·u_{2g+2} - u_{g-1}`,
//!
//! * `u₁, …, u_{g-1}, u_{g+1}, …, u_{2g-1}` is a symplectic basis of `U_A`
//!   of type `(1,…,1,d)`, and
//! * `u_g, u_{2g}` is a symplectic basis of `U_E` of type `(d)`.
//!
//! The construction splits `U_A ⊕ U_E` symplectically, picks generators
//! `v₁, v₂` of `U/(U_A ⊕ U_E) ≅ (Z/d)²` whose `U_E`-components are exactly
//! `e_E/d` and `f_E/d`, decomposes `d·vᵢ = aᵢ + bᵢ`, and then moves the
//! `aᵢ` by `d·U_A` until they form a symplectic pair of the `d`-plane.
//!
//! On `U_A ⊕ U_E` the form has type `(1,…,1,d,d)`: Pfaffian `d²` and
//! determinant `d⁴`.
//!
//! Two adapted bases related by `M ∈ SL₂(Z)` acting on `(u_g, u_{2g})` are
//! both adapted exactly when `M ∈ Γ(d)`; see [`change_basis`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{
    column_lattice_basis, frobenius_basis, lattice_coordinates, lattice_coordinates_matrix,
    polarization_type, smith, solve_integral, AlternatingForm, IntMatrix, LatticeError, PolarizationType,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdaptedBasisError {
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("U/(U_A + U_E) is not (Z/d)^2: invariant factors {0}")]
    QuotientNotBicyclic(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix does not have determinant 1")]
    NotUnimodular,
    #[error("basis change does not give an adapted basis: {0}")]
    NotAdapted(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

impl AdaptedBasisError {
    pub fn code(&self) -> &'static str {
        match self {
            AdaptedBasisError::InvariantViolation(_) => "InvariantViolation",
            AdaptedBasisError::QuotientNotBicyclic(_) => "QuotientNotBicyclic",
            AdaptedBasisError::DimensionMismatch(_) => "DimensionMismatch",
            AdaptedBasisError::NotUnimodular => "NotUnimodular",
            AdaptedBasisError::NotAdapted(_) => "NotAdapted",
            AdaptedBasisError::Lattice(e) => e.code(),
        }
    }
}

fn violation(msg: impl Into<String>) -> AdaptedBasisError {
    AdaptedBasisError::InvariantViolation(msg.into())
}

/// Input: `U`, `U_A`, `U_E` as column generators in ambient coordinates, and
/// the alternating form on the ambient lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdaptedBasisProblem {
    pub g: usize,
    pub d: u64,
    #[serde(rename = "U")]
    pub u: IntMatrix,
    pub form: IntMatrix,
    #[serde(rename = "U_A")]
    pub u_a: IntMatrix,
    #[serde(rename = "U_E")]
    pub u_e: IntMatrix,
}

/// A problem whose invariants have been checked, in `U`-coordinates.
#[derive(Clone, Debug)]
pub struct ValidatedProblem {
    pub g: usize,
    pub d: u64,
    /// Ambient basis of `U` (columns).
    pub u_basis: IntMatrix,
    /// The form in `U`-coordinates; principal.
    pub form_u: AlternatingForm,
    /// Basis of `U_A` in `U`-coordinates.
    pub u_a: IntMatrix,
    /// Basis of `U_E` in `U`-coordinates.
    pub u_e: IntMatrix,
}

impl AdaptedBasisProblem {
    pub fn ambient_dim(&self) -> usize {
        self.form.rows()
    }

    pub fn validate(&self) -> Result<ValidatedProblem, AdaptedBasisError> {
        let (g, d) = (self.g, self.d);
        if g < 2 {
            return Err(violation(format!("genus must be at least 2, got {g}")));
        }
        if d < 2 {
            return Err(violation(format!("degree must be at least 2, got {d}")));
        }
        let n = self.ambient_dim();
        let form = AlternatingForm::new(self.form.clone())?;
        for (name, m) in [("U", &self.u), ("U_A", &self.u_a), ("U_E", &self.u_e)] {
            if m.rows() != n {
                return Err(AdaptedBasisError::DimensionMismatch(format!(
                    "{name} generators have length {}, ambient dimension is {n}",
                    m.rows()
                )));
            }
        }
        let u_basis = column_lattice_basis(&self.u);
        if u_basis.cols() != 2 * g {
            return Err(violation(format!("U has rank {}, expected {}", u_basis.cols(), 2 * g)));
        }
        let ua_gens = lattice_coordinates_matrix(&u_basis, &self.u_a)
            .ok_or_else(|| violation("U_A is not contained in U"))?;
        let ue_gens = lattice_coordinates_matrix(&u_basis, &self.u_e)
            .ok_or_else(|| violation("U_E is not contained in U"))?;
        let u_a = column_lattice_basis(&ua_gens);
        let u_e = column_lattice_basis(&ue_gens);
        if u_a.cols() != 2 * (g - 1) {
            return Err(violation(format!("U_A has rank {}, expected {}", u_a.cols(), 2 * (g - 1))));
        }
        if u_e.cols() != 2 {
            return Err(violation(format!("U_E has rank {}, expected 2", u_e.cols())));
        }
        if u_a.hstack(&u_e)?.rank() != 2 * g {
            return Err(violation("U_A and U_E intersect nontrivially"));
        }
        let form_u = form.restrict(&u_basis)?;
        let ty_u = polarization_type(&form_u).map_err(|e| violation(format!("form on U: {e}")))?;
        if !ty_u.is_principal() {
            return Err(violation(format!("form on U has type {ty_u}, expected principal")));
        }
        let ty_a = polarization_type(&form_u.restrict(&u_a)?)
            .map_err(|e| violation(format!("form on U_A: {e}")))?;
        let want_a = PolarizationType::coprincipal(g - 1, d);
        if ty_a != want_a {
            return Err(violation(format!("form on U_A has type {ty_a}, expected {want_a}")));
        }
        let ty_e = polarization_type(&form_u.restrict(&u_e)?)
            .map_err(|e| violation(format!("form on U_E: {e}")))?;
        let want_e = PolarizationType::coprincipal(1, d);
        if ty_e != want_e {
            return Err(violation(format!("form on U_E has type {ty_e}, expected {want_e}")));
        }
        let cross = &(&u_a.transpose() * form_u.gram()) * &u_e;
        if !cross.is_zero() {
            return Err(violation("U_A and U_E are not orthogonal"));
        }
        Ok(ValidatedProblem { g, d, u_basis, form_u, u_a, u_e })
    }

    /// Applies the unimodular ambient change of coordinates `x ↦ P x`,
    /// transporting the form so that all pairings are preserved.
    pub fn recoordinatize(&self, p: &IntMatrix) -> Result<AdaptedBasisProblem, AdaptedBasisError> {
        let pinv = p.inverse_unimodular().ok_or(AdaptedBasisError::NotUnimodular)?;
        Ok(AdaptedBasisProblem {
            g: self.g,
            d: self.d,
            u: p.checked_mul(&self.u)?,
            form: &(&pinv.transpose() * &self.form) * &pinv,
            u_a: p.checked_mul(&self.u_a)?,
            u_e: p.checked_mul(&self.u_e)?,
        })
    }
}

impl ValidatedProblem {
    /// Type of the form on `U_A ⊕ U_E`; `(1,…,1,d,d)` for valid input.
    pub fn direct_sum_type(&self) -> Result<PolarizationType, AdaptedBasisError> {
        let sum = self.u_a.hstack(&self.u_e)?;
        Ok(polarization_type(&self.form_u.restrict(&sum)?)?)
    }

    pub fn direct_sum_determinant(&self) -> Result<BigInt, AdaptedBasisError> {
        let sum = self.u_a.hstack(&self.u_e)?;
        Ok(self.form_u.restrict(&sum)?.gram().det()?)
    }
}

/// The `2g` stored vectors of an adapted basis, in ambient coordinates.
///
/// Column order: `u₁, …, u_g, u_{g+1}, …, u_{2g-2}, u_{2g+1}, u_{2g+2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdaptedBasis {
    pub g: usize,
    pub d: u64,
    pub vectors: IntMatrix,
}

/// Column of the stored matrix holding `u_index`, if it is stored.
fn stored_column(g: usize, index: usize) -> Option<usize> {
    match index {
        i if (1..=2 * g - 2).contains(&i) => Some(i - 1),
        i if i == 2 * g + 1 => Some(2 * g - 2),
        i if i == 2 * g + 2 => Some(2 * g - 1),
        _ => None,
    }
}

fn lin(a: &BigInt, x: &[BigInt], b: &BigInt, y: &[BigInt]) -> Vec<BigInt> {
    x.iter().zip(y).map(|(p, q)| a * p + b * q).collect()
}

impl AdaptedBasis {
    /// `u_index` for `1 ≤ index ≤ 2g+2`, derived vectors included.
    pub fn u(&self, index: usize) -> Vec<BigInt> {
        let g = self.g;
        assert!((1..=2 * g + 2).contains(&index), "u index {index} out of range");
        let d = BigInt::from(self.d);
        let m1 = -BigInt::one();
        if let Some(c) = stored_column(g, index) {
            self.vectors.column(c)
        } else if index == 2 * g - 1 {
            lin(&d, &self.u(2 * g + 1), &m1, &self.u(g))
        } else {
            lin(&d, &self.u(2 * g + 2), &m1, &self.u(g - 1))
        }
    }

    /// `u₁, …, u_{g-1}, u_{g+1}, …, u_{2g-1}` as columns.
    pub fn abelian_part(&self) -> IntMatrix {
        let g = self.g;
        let idx: Vec<usize> = (1..g).chain(g + 1..2 * g).collect();
        IntMatrix::from_columns(&idx.iter().map(|&i| self.u(i)).collect::<Vec<_>>()).expect("g >= 2")
    }

    /// `u_g, u_{2g}` as columns.
    pub fn elliptic_part(&self) -> IntMatrix {
        IntMatrix::from_columns(&[self.u(self.g), self.u(2 * self.g)]).expect("nonempty")
    }

    pub fn transform(&self, p: &IntMatrix) -> Result<AdaptedBasis, AdaptedBasisError> {
        Ok(AdaptedBasis { g: self.g, d: self.d, vectors: p.checked_mul(&self.vectors)? })
    }

    /// Copy with two stored vectors exchanged (1-based u indices).
    pub fn with_swapped(&self, i: usize, j: usize) -> AdaptedBasis {
        let (ci, cj) = (
            stored_column(self.g, i).expect("stored index"),
            stored_column(self.g, j).expect("stored index"),
        );
        let mut order: Vec<usize> = (0..2 * self.g).collect();
        order.swap(ci, cj);
        AdaptedBasis { g: self.g, d: self.d, vectors: self.vectors.select_columns(&order) }
    }
}

/// Outcome of checking each defining property of an adapted basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdaptedBasisReport {
    pub spans_u: bool,
    pub abelian_symplectic: bool,
    pub elliptic_symplectic: bool,
}

impl AdaptedBasisReport {
    pub fn passed(&self) -> bool {
        self.spans_u && self.abelian_symplectic && self.elliptic_symplectic
    }
}

fn spans_exactly(basis_of_lattice: &IntMatrix, candidates: &IntMatrix) -> bool {
    candidates.cols() == basis_of_lattice.cols()
        && lattice_coordinates_matrix(basis_of_lattice, candidates).is_some_and(|c| c.is_unimodular())
}

pub fn verify_adapted_basis(
    p: &AdaptedBasisProblem,
    b: &AdaptedBasis,
) -> Result<AdaptedBasisReport, AdaptedBasisError> {
    let n = p.ambient_dim();
    if b.g != p.g || b.d != p.d || b.vectors.rows() != n || b.vectors.cols() != 2 * p.g {
        return Err(AdaptedBasisError::DimensionMismatch(format!(
            "basis is {}x{} for (g, d) = ({}, {}); problem expects {}x{} for ({}, {})",
            b.vectors.rows(),
            b.vectors.cols(),
            b.g,
            b.d,
            n,
            2 * p.g,
            p.g,
            p.d
        )));
    }
    let v = p.validate()?;
    let form = AlternatingForm::new(p.form.clone())?;
    let ambient_ua = v.u_basis.checked_mul(&v.u_a)?;
    let ambient_ue = v.u_basis.checked_mul(&v.u_e)?;

    let spans_u = spans_exactly(&v.u_basis, &b.vectors);

    let abelian = b.abelian_part();
    let abelian_symplectic = spans_exactly(&ambient_ua, &abelian)
        && form.restrict(&abelian)? == AlternatingForm::standard(&PolarizationType::coprincipal(p.g - 1, p.d));

    let elliptic = b.elliptic_part();
    let elliptic_symplectic = spans_exactly(&ambient_ue, &elliptic)
        && form.restrict(&elliptic)? == AlternatingForm::standard(&PolarizationType::coprincipal(1, p.d));

    Ok(AdaptedBasisReport { spans_u, abelian_symplectic, elliptic_symplectic })
}

pub fn is_adapted_basis(p: &AdaptedBasisProblem, b: &AdaptedBasis) -> Result<bool, AdaptedBasisError> {
    verify_adapted_basis(p, b).map(|r| r.passed())
}

/// Builds an adapted basis for a valid problem.
pub fn construct_adapted_basis(p: &AdaptedBasisProblem) -> Result<AdaptedBasis, AdaptedBasisError> {
    let v = p.validate()?;
    let g = v.g;
    let d = BigInt::from(v.d);

    // Symplectic bases of U_A and U_E, in U-coordinates.
    let fa = frobenius_basis(&v.form_u.restrict(&v.u_a)?)?;
    let fe = frobenius_basis(&v.form_u.restrict(&v.u_e)?)?;
    let ua = &v.u_a * &fa.basis;
    let ue = &v.u_e * &fe.basis;
    // Columns: e₁..e_{g-1}, f₁..f_{g-1}, e, f.
    let sum = ua.hstack(&ue)?;
    let pair_e = g - 2; // index of e_{g-1}, the d-pair of U_A
    let pair_f = 2 * g - 3; // index of f_{g-1}

    let s = smith(&sum);
    let factors = s.invariant_factors();
    let mut expected = vec![BigInt::one(); 2 * g - 2];
    expected.extend([d.clone(), d.clone()]);
    if factors != expected {
        let shown: Vec<String> = factors.iter().map(|x| x.to_string()).collect();
        return Err(AdaptedBasisError::QuotientNotBicyclic(shown.join(",")));
    }
    // v₁, v₂ ∈ U with E-components e_E/d and f_E/d. Since U is unimodular
    // and U_E is saturated, v is pinned down modulo U_A by its pairings with
    // e_E and f_E: π_E(v) = ((v, f_E)·e_E − (v, e_E)·f_E)/d.
    let (e_e, f_e) = (ue.column(0), ue.column(1));
    let gram = v.form_u.gram();
    let functionals = IntMatrix::from_columns(&[gram.apply(&e_e), gram.apply(&f_e)])?.transpose();
    let m1 = -BigInt::one();
    let (zero, one) = (BigInt::zero(), BigInt::one());
    let mut gens = Vec::with_capacity(2);
    for target in [[&zero, &one], [&m1, &zero]] {
        // ((v, e_E), (v, f_E)): (0, 1) for v₁ and (-1, 0) for v₂.
        let rhs: Vec<BigInt> = target.iter().map(|x| (*x).clone()).collect();
        let mut vq = solve_integral(&functionals, &rhs).ok_or_else(|| violation("U_E is not saturated in U"))?;
        let dv: Vec<BigInt> = vq.iter().map(|x| x * &d).collect();
        let coeffs = lattice_coordinates(&sum, &dv).ok_or_else(|| violation("d·v is not in U_A + U_E"))?;
        // Clear the U_A-component outside the d-pair plane.
        for i in 0..2 * g - 2 {
            if i == pair_e || i == pair_f || coeffs[i].is_zero() {
                continue;
            }
            if !coeffs[i].is_multiple_of(&d) {
                return Err(violation("U_A-component of d·v is not in d·U_A^∨"));
            }
            let q = &coeffs[i] / &d;
            for (r, x) in vq.iter_mut().enumerate() {
                *x -= &q * &sum[(r, i)];
            }
        }
        gens.push((vq, coeffs[pair_e].clone(), coeffs[pair_f].clone(), coeffs[2 * g - 2].clone(), coeffs[2 * g - 1].clone()));
    }
    let expected_e = [(BigInt::one(), BigInt::zero()), (BigInt::zero(), BigInt::one())];
    for (k, gen) in gens.iter().enumerate() {
        if (gen.3.clone(), gen.4.clone()) != expected_e[k] {
            return Err(violation("U_E-component of d·v does not match its pairings"));
        }
    }

    let plane_e = ua.column(pair_e);
    let plane_f = ua.column(pair_f);
    // v += (x·e_A + y·f_A)
    let shift = |vq: &mut Vec<BigInt>, x: &BigInt, y: &BigInt| {
        for ((t, e), f) in vq.iter_mut().zip(&plane_e).zip(&plane_f) {
            *t += x * e + y * f;
        }
    };

    // a = p·e_A + q·f_A: pick representatives mod d with gcd(p, q) = 1.
    let (mut v1, p0, q0, _, _) = gens[0].clone();
    let (mut v2, pp0, qq0, _, _) = gens[1].clone();
    let mut qa = q0.mod_floor(&d);
    if qa.is_zero() {
        qa = d.clone();
    }
    let base_p = p0.mod_floor(&d);
    let pa = (0u64..)
        .map(|k| &base_p + &d * BigInt::from(k))
        .find(|pa| pa.gcd(&qa).is_one())
        .expect("gcd(p, q, d) = 1 guarantees a coprime representative");
    shift(&mut v1, &((&pa - &p0) / &d), &((&qa - &q0) / &d));

    // a' = p'·e_A + q'·f_A with p'q − q'p = 1 and a' ≡ a'₀ (mod d).
    let det: BigInt = &pp0 * &qa - &qq0 * &pa - 1;
    if !det.is_multiple_of(&d) {
        return Err(violation("components of d·v₁, d·v₂ do not pair to d modulo d²"));
    }
    let eg = qa.extended_gcd(&pa);
    let (s_q, s_p) = if eg.gcd.is_one() { (eg.x, eg.y) } else { (-eg.x, -eg.y) };
    // s_q·q + s_p·p = 1, so (p'_s, q'_s) = (s_q, −s_p) has p'q − q'p = 1.
    let (ps, qs) = (s_q.clone(), -s_p.clone());
    let t = (&s_p * (&pp0 - &ps) + &s_q * (&qq0 - &qs)).mod_floor(&d);
    let pp = &ps + &t * &pa;
    let qq = &qs + &t * &qa;
    if !(&pp - &pp0).is_multiple_of(&d) || !(&qq - &qq0).is_multiple_of(&d) {
        return Err(violation("cannot lift the d-pair to a symplectic basis"));
    }
    shift(&mut v2, &((&pp - &pp0) / &d), &((&qq - &qq0) / &d));

    let a_prime: Vec<BigInt> = plane_e.iter().zip(&plane_f).map(|(e, f)| &pp * e + &qq * f).collect();
    let b = e_e.clone();

    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(2 * g);
    cols.extend((0..g - 2).map(|r| ua.column(r)));
    cols.push(a_prime);
    cols.push(b);
    cols.extend((0..g - 2).map(|r| ua.column(g - 1 + r)));
    cols.push(v1);
    cols.push(v2);
    let coords = IntMatrix::from_columns(&cols)?;
    let basis = AdaptedBasis { g, d: v.d, vectors: &v.u_basis * &coords };

    let report = verify_adapted_basis(p, &basis)?;
    if !report.passed() {
        return Err(violation(format!("constructed basis failed verification: {report:?}")));
    }
    Ok(basis)
}

/// Replaces `(u_g, u_{2g})` by `M·(u_g, u_{2g})` and recomputes
/// `u_{2g+1}' = (u_g' + u_{2g-1})/d`, `u_{2g+2}' = (u_{2g}' + u_{g-1})/d`.
///
/// Succeeds exactly when `M ∈ Γ(d)`.
pub fn change_basis(
    p: &AdaptedBasisProblem,
    b: &AdaptedBasis,
    m: &IntMatrix,
) -> Result<AdaptedBasis, AdaptedBasisError> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(AdaptedBasisError::DimensionMismatch("M must be 2x2".into()));
    }
    if !m.det()?.is_one() {
        return Err(AdaptedBasisError::NotUnimodular);
    }
    let g = b.g;
    let d = BigInt::from(b.d);
    let (al, be, ga, de) = (&m[(0, 0)], &m[(0, 1)], &m[(1, 0)], &m[(1, 1)]);

    // Everything in coordinates relative to the stored vectors of b.
    let unit = |i: usize| -> Vec<BigInt> {
        let mut e = vec![BigInt::zero(); 2 * g];
        e[stored_column(g, i).expect("stored")] = BigInt::one();
        e
    };
    let m1 = -BigInt::one();
    let one = BigInt::one();
    let u_g = unit(g);
    let u_gm1 = unit(g - 1);
    let u_2g = lin(&d, &unit(2 * g + 2), &m1, &u_gm1);
    let u_2gm1 = lin(&d, &unit(2 * g + 1), &m1, &u_g);
    let new_g = lin(al, &u_g, be, &u_2g);
    let new_2g = lin(ga, &u_g, de, &u_2g);
    let x1 = lin(&one, &new_g, &one, &u_2gm1);
    let x2 = lin(&one, &new_2g, &one, &u_gm1);
    if x1.iter().chain(&x2).any(|x| !x.is_multiple_of(&d)) {
        return Err(AdaptedBasisError::NotAdapted(format!("(u_g' + u_{{2g-1}})/{d} or (u_{{2g}}' + u_{{g-1}})/{d} is not in U")));
    }
    let mut coords = IntMatrix::identity(2 * g);
    let mut set_col = |i: usize, v: &[BigInt]| {
        let c = stored_column(g, i).expect("stored");
        for (r, x) in v.iter().enumerate() {
            coords[(r, c)] = x.clone();
        }
    };
    set_col(g, &new_g);
    set_col(2 * g + 1, &x1.iter().map(|x| x / &d).collect::<Vec<_>>());
    set_col(2 * g + 2, &x2.iter().map(|x| x / &d).collect::<Vec<_>>());
    let out = AdaptedBasis { g, d: b.d, vectors: &b.vectors * &coords };
    let report = verify_adapted_basis(p, &out)?;
    if !report.passed() {
        return Err(AdaptedBasisError::NotAdapted(format!("{report:?}")));
    }
    Ok(out)
}

/// The standard configuration in ambient coordinates `α₁..α_g, β₁..β_g`
/// with the standard principal form, together with its known adapted basis.
///
/// `u_r = α_r (r ≤ g-2)`, `u_{2g+2} = α_{g-1}`, `u_{2g+1} = α_g`,
/// `u_{g+r} = β_r`, `u_{g-1} = d·α_{g-1} - β_g`, `u_g = d·α_g - β_{g-1}`.
pub fn canonical_configuration(g: usize, d: u64) -> (AdaptedBasisProblem, AdaptedBasis) {
    assert!(g >= 2 && d >= 2, "need g >= 2 and d >= 2");
    let n = 2 * g;
    let dd = BigInt::from(d);
    let e = |i: usize| -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); n];
        v[i] = BigInt::one();
        v
    };
    let alpha = |r: usize| e(r - 1);
    let beta = |r: usize| e(g + r - 1);
    let m1 = -BigInt::one();
    let mut u: Vec<Vec<BigInt>> = vec![Vec::new(); 2 * g + 3];
    for r in 1..=g.saturating_sub(2) {
        u[r] = alpha(r);
    }
    u[2 * g + 2] = alpha(g - 1);
    u[2 * g + 1] = alpha(g);
    for r in 1..=g {
        u[g + r] = beta(r);
    }
    u[g - 1] = lin(&dd, &alpha(g - 1), &m1, &beta(g));
    u[g] = lin(&dd, &alpha(g), &m1, &beta(g - 1));

    let stored: Vec<Vec<BigInt>> = (1..=2 * g - 2).chain([2 * g + 1, 2 * g + 2]).map(|i| u[i].clone()).collect();
    let ua: Vec<Vec<BigInt>> = (1..g).chain(g + 1..2 * g).map(|i| u[i].clone()).collect();
    let problem = AdaptedBasisProblem {
        g,
        d,
        u: IntMatrix::identity(n),
        form: IntMatrix::standard_symplectic(g),
        u_a: IntMatrix::from_columns(&ua).expect("g >= 2"),
        u_e: IntMatrix::from_columns(&[u[g].clone(), u[2 * g].clone()]).expect("nonempty"),
    };
    let basis = AdaptedBasis { g, d, vectors: IntMatrix::from_columns(&stored).expect("nonempty") };
    (problem, basis)
}
