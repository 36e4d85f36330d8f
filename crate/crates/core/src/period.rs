//! The family of principally polarized abelian varieties `J(z)`, `z ∈ ℍ`,
//! containing a fixed `(g-1)`-dimensional `A` with period matrix
//! `(Z, diag(1,…,1,d))`.
//!
//! The lattice `U(z) ⊂ C^g` is spanned by the sections
//!
//! ```text
//! u_r      = (Z_r, 0)              u_{g+r} = (δ_r e_r, 0)     r < g
//! u_g      = (0, z)                u_{2g}  = (0, 1)
//! u_{2g+1} = (0,…,0,d,z)/d         u_{2g+2} = (Z_{g-1}, 1)/d
//! ```
//!
//! so that `u_{2g+1} = (u_{2g-1} + u_g)/d` and `u_{2g+2} = (u_{g-1} + u_{2g})/d`.
//! With respect to the symplectic basis `α_r = u_r (r ≤ g-2)`,
//! `α_{g-1} = u_{2g+2}`, `α_g = u_{2g+1}`, `β_r = u_{g+r}`, the normalized
//! period matrix `T(z) = β⁻¹α` has `T_{g,g-1} = 1/d`, `T_{g,r} = 0` for
//! `r < g-1`, and `T_{g,g} = z/d`. This normalization is the one for which
//! `T(z+d) = M·T(z)` with `M = I_{2g} + E_{g,2g}`.
//!
//! Integral facts (the `Γ(d)`-action on lattice bases) are computed exactly;
//! analytic facts are checked in binary64 against the tolerance carried by
//! [`PeriodData`].

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{
    conjugacy_invariants, polarization_type, AlternatingForm, ConjugacyInvariants, IntMatrix,
    LatticeError, PolarizationType, SymplecticMatrix,
};
use crate::modular::{gamma_d_contains, CuspRegularity};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PeriodError {
    #[error("invalid period data: {0}")]
    InvalidPeriodData(String),
    #[error("Riemann relations violated: {0}")]
    RiemannRelationViolation(String),
    #[error("matrix is not in Γ({0})")]
    NotInGammaD(u64),
    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

impl PeriodError {
    pub fn code(&self) -> &'static str {
        match self {
            PeriodError::InvalidPeriodData(_) => "InvalidPeriodData",
            PeriodError::RiemannRelationViolation(_) => "RiemannRelationViolation",
            PeriodError::NotInGammaD(_) => "NotInGammaD",
            PeriodError::UnsupportedCombination(_) => "UnsupportedCombination",
            PeriodError::DimensionMismatch(_) => "DimensionMismatch",
            PeriodError::Internal(_) => "Internal",
            PeriodError::Lattice(e) => e.code(),
        }
    }
}

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, PeriodError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(PeriodError::DimensionMismatch("complex matrix must be nonempty and rectangular".into()));
        }
        Ok(CMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_columns(cols: &[Vec<Complex64>]) -> Self {
        let n = cols[0].len();
        let mut m = CMatrix::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = *x;
            }
        }
        m
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        let mut out = CMatrix::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out[(i, j)] = Complex64::new(m[(i, j)].to_f64().unwrap_or(f64::NAN), 0.0);
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<Complex64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        let mut m = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "complex matrix dimensions must agree");
        let mut m = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..rhs.cols {
                    m[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        m
    }

    pub fn add(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn imag(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|z| z.im).collect()).collect()
    }

    /// Inverse by Gaussian elimination with partial pivoting.
    pub fn inverse(&self) -> Option<CMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = CMatrix::identity(n);
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm()))?;
            if a[(piv, col)].norm() < 1e-300 {
                return None;
            }
            for j in 0..n {
                a.data.swap(col * n + j, piv * n + j);
                inv.data.swap(col * n + j, piv * n + j);
            }
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let f = a[(i, col)];
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let (x, y) = (a[(col, j)], inv[(col, j)]);
                    a[(i, j)] -= f * x;
                    inv[(i, j)] -= f * y;
                }
            }
        }
        Some(inv)
    }

    pub fn to_json(&self) -> Vec<Vec<[String; 2]>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|z| [z.re.to_string(), z.im.to_string()]).collect())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Smallest pivot of a symmetric-pivoted Cholesky factorization; positive
/// definite within `tol` iff the result exceeds `tol`.
pub fn min_cholesky_pivot(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut min_pivot = f64::INFINITY;
    for k in 0..n {
        // Largest remaining diagonal entry.
        let p = (k..n).max_by(|&i, &j| a[perm[i]][perm[i]].total_cmp(&a[perm[j]][perm[j]])).unwrap();
        perm.swap(k, p);
        let pk = perm[k];
        let pivot = a[pk][pk];
        min_pivot = min_pivot.min(pivot);
        if pivot <= 0.0 {
            return pivot;
        }
        let l = pivot.sqrt();
        for &pi in &perm[k + 1..] {
            a[pi][pk] /= l;
        }
        for i in k + 1..n {
            for j in k + 1..=i {
                let (pi, pj) = (perm[i], perm[j]);
                let v = a[pi][pk] * a[pj][pk];
                a[pi][pj] -= v;
                if pi != pj {
                    a[pj][pi] = a[pi][pj];
                }
            }
        }
    }
    min_pivot
}

/// `(Z, z, d)` with a tolerance for the analytic checks.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodData {
    pub g: usize,
    pub d: u64,
    /// `(g-1) × (g-1)` period matrix of `A` in `ℍ_{g-1}`.
    pub big_z: CMatrix,
    pub z: Complex64,
    pub tol: f64,
}

impl PeriodData {
    pub fn new(g: usize, d: u64, big_z: CMatrix, z: Complex64, tol: f64) -> Result<Self, PeriodError> {
        let p = PeriodData { g, d, big_z, z, tol };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), PeriodError> {
        let bad = |m: String| Err(PeriodError::InvalidPeriodData(m));
        if self.g < 2 {
            return bad(format!("genus must be at least 2, got {}", self.g));
        }
        if self.d < 2 {
            return bad(format!("degree must be at least 2, got {}", self.d));
        }
        if !(self.tol >= 0.0) {
            return bad("tolerance must be a nonnegative number".into());
        }
        if self.big_z.rows() != self.g - 1 || self.big_z.cols() != self.g - 1 {
            return bad(format!(
                "Z must be {0}x{0}, got {1}x{2}",
                self.g - 1,
                self.big_z.rows(),
                self.big_z.cols()
            ));
        }
        let asym = self.big_z.sub(&self.big_z.transpose()).max_norm();
        if asym > self.tol {
            return bad(format!("Z is not symmetric (defect {asym:e})"));
        }
        if min_cholesky_pivot(&self.big_z.imag()) <= self.tol {
            return bad("Im Z is not positive definite".into());
        }
        if !(self.z.im > self.tol) {
            return bad(format!("Im z = {} is not positive", self.z.im));
        }
        Ok(())
    }

    pub fn with_z(&self, z: Complex64) -> PeriodData {
        PeriodData { z, ..self.clone() }
    }
}

/// The `2g+2` sections `u₁(z), …, u_{2g+2}(z)`; index 0 holds `u₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSections {
    pub g: usize,
    pub u: Vec<Vec<Complex64>>,
}

impl LatticeSections {
    /// `u_index`, 1-based.
    pub fn get(&self, index: usize) -> &[Complex64] {
        &self.u[index - 1]
    }

    /// Stored adapted-basis vectors `u₁..u_{2g-2}, u_{2g+1}, u_{2g+2}`.
    pub fn adapted_basis(&self) -> Vec<Vec<Complex64>> {
        let g = self.g;
        (1..=2 * g - 2).chain([2 * g + 1, 2 * g + 2]).map(|i| self.get(i).to_vec()).collect()
    }
}

pub fn lattice_sections(p: &PeriodData) -> Result<LatticeSections, PeriodError> {
    p.validate()?;
    let g = p.g;
    let d = p.d as f64;
    let zero = Complex64::zero();
    let mut u = vec![vec![zero; g]; 2 * g + 2];
    for r in 0..g - 1 {
        for c in 0..g - 1 {
            u[r][c] = p.big_z[(r, c)];
        }
        u[g + r][r] = Complex64::new(if r == g - 2 { d } else { 1.0 }, 0.0);
    }
    u[g - 1][g - 1] = p.z;
    u[2 * g - 1][g - 1] = Complex64::one();
    u[2 * g][g - 2] = Complex64::one();
    u[2 * g][g - 1] = p.z / d;
    for c in 0..g - 1 {
        u[2 * g + 1][c] = p.big_z[(g - 2, c)] / d;
    }
    u[2 * g + 1][g - 1] = Complex64::new(1.0 / d, 0.0);
    Ok(LatticeSections { g, u })
}

/// Normalized period matrix with respect to `α₁..α_g, β₁..β_g`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodMatrix {
    pub t: CMatrix,
    pub basis_labels: Vec<String>,
}

impl PeriodMatrix {
    /// Last row without its diagonal entry: `(0, …, 0, 1/d)`.
    pub fn z21(&self) -> Vec<Complex64> {
        let g = self.t.rows();
        self.t.row(g - 1)[..g - 1].to_vec()
    }

    pub fn symmetry_defect(&self) -> f64 {
        self.t.sub(&self.t.transpose()).max_norm()
    }

    pub fn min_imaginary_pivot(&self) -> f64 {
        min_cholesky_pivot(&self.t.imag())
    }
}

fn basis_labels(g: usize) -> Vec<String> {
    let mut labels = Vec::with_capacity(2 * g);
    for r in 1..=g {
        let src = match r {
            r if r == g - 1 => format!("u{}", 2 * g + 2),
            r if r == g => format!("u{}", 2 * g + 1),
            r => format!("u{r}"),
        };
        labels.push(format!("alpha{r}={src}"));
    }
    for r in 1..=g {
        labels.push(format!("beta{r}=u{}", g + r));
    }
    labels
}

/// Columns `α₁..α_g` and `β₁..β_g` as vectors in `C^g`.
fn symplectic_frame(s: &LatticeSections) -> (CMatrix, CMatrix) {
    let g = s.g;
    let alpha: Vec<Vec<Complex64>> = (1..=g)
        .map(|r| match r {
            r if r == g - 1 => s.get(2 * g + 2).to_vec(),
            r if r == g => s.get(2 * g + 1).to_vec(),
            r => s.get(r).to_vec(),
        })
        .collect();
    let beta: Vec<Vec<Complex64>> = (1..=g).map(|r| s.get(g + r).to_vec()).collect();
    (CMatrix::from_columns(&alpha), CMatrix::from_columns(&beta))
}

pub fn period_matrix(p: &PeriodData) -> Result<PeriodMatrix, PeriodError> {
    let s = lattice_sections(p)?;
    let (alpha, beta) = symplectic_frame(&s);
    let binv = beta.inverse().ok_or_else(|| PeriodError::Internal("β-periods are singular".into()))?;
    let t = binv.mul(&alpha);
    let out = PeriodMatrix { t, basis_labels: basis_labels(p.g) };

    let asym = out.symmetry_defect();
    if asym > p.tol {
        return Err(PeriodError::RiemannRelationViolation(format!("T - Tᵀ has max-norm {asym:e}")));
    }
    let pivot = out.min_imaginary_pivot();
    if pivot <= p.tol {
        return Err(PeriodError::RiemannRelationViolation(format!(
            "Im T is not positive definite (smallest pivot {pivot:e})"
        )));
    }
    let g = p.g;
    let mut expected = vec![Complex64::zero(); g - 1];
    expected[g - 2] = Complex64::new(1.0 / p.d as f64, 0.0);
    let z21 = out.z21();
    if z21.iter().zip(&expected).any(|(a, b)| (a - b).norm() > p.tol) {
        return Err(PeriodError::Internal(format!("unexpected off-diagonal block {z21:?}")));
    }
    Ok(out)
}

/// `M·T = (aT + b)(cT + e)⁻¹` for `M = [[a, b], [c, e]]` in `g × g` blocks.
pub fn symplectic_action(m: &IntMatrix, t: &CMatrix) -> Result<CMatrix, PeriodError> {
    let g = t.rows();
    if m.rows() != 2 * g || m.cols() != 2 * g || t.cols() != g {
        return Err(PeriodError::DimensionMismatch(format!(
            "cannot act by {}x{} on {}x{}",
            m.rows(),
            m.cols(),
            t.rows(),
            t.cols()
        )));
    }
    let lo: Vec<usize> = (0..g).collect();
    let hi: Vec<usize> = (g..2 * g).collect();
    let a = CMatrix::from_int(&m.submatrix(&lo, &lo));
    let b = CMatrix::from_int(&m.submatrix(&lo, &hi));
    let c = CMatrix::from_int(&m.submatrix(&hi, &lo));
    let e = CMatrix::from_int(&m.submatrix(&hi, &hi));
    let num = a.mul(t).add(&b);
    let den = c.mul(t).add(&e);
    let den_inv = den.inverse().ok_or_else(|| PeriodError::DimensionMismatch("cT + e is singular".into()))?;
    Ok(num.mul(&den_inv))
}

/// Result of letting `M ∈ Γ(d)` act on the family.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaAction {
    /// Same `Z`, with `z' = (αz + β)/(γz + δ)`.
    pub data: PeriodData,
    /// Integral matrix in adapted-basis coordinates
    /// (`u₁..u_g, u_{g+1}..u_{2g-2}, u_{2g+1}, u_{2g+2}`): column `j` holds
    /// the coordinates of `φ(b_j(z))` in the basis `b(Mz)`, where `φ` fixes
    /// the `A`-coordinates and divides the last one by `γz + δ`.
    pub l: IntMatrix,
}

/// Columns `u₁..u_{2g}` in adapted-basis coordinates.
fn sections_in_adapted_coords(g: usize, d: &BigInt) -> IntMatrix {
    let n = 2 * g;
    let mut k = IntMatrix::zeros(n, n);
    // stored index → column: u_i (i ≤ 2g-2) at i-1, u_{2g+1} at 2g-2, u_{2g+2} at 2g-1
    for i in 0..2 * g - 2 {
        k[(i, i)] = BigInt::one();
    }
    // u_{2g-1} = d·u_{2g+1} - u_g
    k[(2 * g - 2, 2 * g - 2)] = d.clone();
    k[(g - 1, 2 * g - 2)] = -BigInt::one();
    // u_{2g} = d·u_{2g+2} - u_{g-1}
    k[(2 * g - 1, 2 * g - 1)] = d.clone();
    k[(g - 2, 2 * g - 1)] = -BigInt::one();
    k
}

/// `d` times the adapted-basis vectors in `u₁..u_{2g}` coordinates.
fn adapted_in_section_coords_scaled(g: usize, d: &BigInt) -> IntMatrix {
    let n = 2 * g;
    let mut c = IntMatrix::zeros(n, n);
    for i in 0..2 * g - 2 {
        c[(i, i)] = d.clone();
    }
    // u_{2g+1} = (u_{2g-1} + u_g)/d
    c[(2 * g - 2, 2 * g - 2)] = BigInt::one();
    c[(g - 1, 2 * g - 2)] = BigInt::one();
    // u_{2g+2} = (u_{g-1} + u_{2g})/d
    c[(g - 2, 2 * g - 1)] = BigInt::one();
    c[(2 * g - 1, 2 * g - 1)] = BigInt::one();
    c
}

/// The exact change-of-basis matrix of the `Γ(d)`-action, without the
/// membership precondition; `None` when the action is not integral.
pub fn action_matrix(g: usize, d: u64, m: &IntMatrix) -> Option<IntMatrix> {
    let dd = BigInt::from(d);
    let (al, be, ga, de) = (&m[(0, 0)], &m[(0, 1)], &m[(1, 0)], &m[(1, 1)]);
    let n = 2 * g;
    let mut r = IntMatrix::identity(n);
    r[(g - 1, g - 1)] = de.clone();
    r[(n - 1, g - 1)] = -be;
    r[(g - 1, n - 1)] = -ga;
    r[(n - 1, n - 1)] = al.clone();
    let k = sections_in_adapted_coords(g, &dd);
    let c = adapted_in_section_coords_scaled(g, &dd);
    let scaled = &(&k * &r) * &c;
    let mut l = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let x = &scaled[(i, j)];
            if !x.is_multiple_of(&dd) {
                return None;
            }
            l[(i, j)] = x / &dd;
        }
    }
    Some(l)
}

fn mobius(m: &IntMatrix, z: Complex64) -> Complex64 {
    let f = |i, j| m[(i, j)].to_f64().unwrap_or(f64::NAN);
    (z * f(0, 0) + f(0, 1)) / (z * f(1, 0) + f(1, 1))
}

pub fn gamma_action(p: &PeriodData, m: &IntMatrix) -> Result<GammaAction, PeriodError> {
    p.validate()?;
    if !gamma_d_contains(m, p.d) {
        return Err(PeriodError::NotInGammaD(p.d));
    }
    let l = action_matrix(p.g, p.d, m).ok_or(PeriodError::NotInGammaD(p.d))?;
    let z2 = mobius(m, p.z);
    let data = p.with_z(z2);

    // U(z) → U(Mz) under φ, checked numerically.
    let before = lattice_sections(p)?.adapted_basis();
    let after = lattice_sections(&data)?.adapted_basis();
    let f = |i, j| m[(i, j)].to_f64().unwrap_or(f64::NAN);
    let automorphy = p.z * f(1, 0) + f(1, 1);
    let g = p.g;
    let scale = 1.0 + p.z.norm() + z2.norm() + p.big_z.max_norm();
    for (j, b) in before.iter().enumerate() {
        let mut img = b.clone();
        img[g - 1] /= automorphy;
        let mut rebuilt = vec![Complex64::zero(); g];
        for (i, a) in after.iter().enumerate() {
            let c = l[(i, j)].to_f64().unwrap_or(f64::NAN);
            for k in 0..g {
                rebuilt[k] += a[k] * c;
            }
        }
        let err = img.iter().zip(&rebuilt).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        if err > p.tol.max(f64::EPSILON) * scale * 16.0 {
            return Err(PeriodError::Internal(format!("lattice map fails at basis vector {j}: {err:e}")));
        }
    }
    Ok(GammaAction { data, l })
}

/// A monodromy matrix around a cusp.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyMatrix {
    pub m: SymplecticMatrix,
    pub case: CuspRegularity,
}

/// The irregular `d = 2`, `g = 3` monodromy at `∞`.
pub fn irregular_d2_matrix() -> IntMatrix {
    IntMatrix::from_rows(&[
        [1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, -1],
        [0, 0, -1, 0, 1, -1],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, -1],
    ])
}

/// `I_{2g} + E_{g,2g}` (1-based indices).
pub fn regular_monodromy_matrix(g: usize) -> IntMatrix {
    &IntMatrix::identity(2 * g) + &IntMatrix::unit(2 * g, 2 * g, g - 1, 2 * g - 1)
}

pub fn monodromy_at_cusp(g: usize, d: u64, case: CuspRegularity) -> Result<MonodromyMatrix, PeriodError> {
    if g < 2 || d < 2 {
        return Err(PeriodError::UnsupportedCombination(format!("g = {g}, d = {d}")));
    }
    let m = match case {
        CuspRegularity::Regular => regular_monodromy_matrix(g),
        CuspRegularity::Irregular if d == 2 && g == 3 => irregular_d2_matrix(),
        CuspRegularity::Irregular => {
            return Err(PeriodError::UnsupportedCombination(format!(
                "irregular cusps exist only for d = 2 (matrix available for g = 3); got g = {g}, d = {d}"
            )))
        }
    };
    Ok(MonodromyMatrix { m: SymplecticMatrix::new(m)?, case })
}

/// `max |T(z+d) - M·T(z)|` for the given data.
pub fn monodromy_defect(p: &PeriodData, m: &MonodromyMatrix) -> Result<f64, PeriodError> {
    let t0 = period_matrix(p)?;
    let t1 = period_matrix(&p.with_z(p.z + p.d as f64))?;
    let acted = symplectic_action(m.m.matrix(), &t0.t)?;
    Ok(acted.sub(&t1.t).max_norm())
}

/// The type-`(1,…,1,d,d)` form on `u₁..u_{2g}` (pairs `(u_r, u_{g+r})`)
/// restricted to `⟨u₁..u_{g-1}, u_{g+1}..u_{2g-1}⟩`.
pub fn abelian_restriction_type(g: usize, d: u64) -> Result<PolarizationType, PeriodError> {
    if g < 2 || d < 1 {
        return Err(PeriodError::UnsupportedCombination(format!("g = {g}, d = {d}")));
    }
    let mut divs = vec![1u64; g];
    divs[g - 2] = d;
    divs[g - 1] = d;
    let full = AlternatingForm::standard(&PolarizationType::from_u64s(&divs)?);
    let idx: Vec<usize> = (0..g - 1).chain(g..2 * g - 1).collect();
    let sub = full.restrict(&IntMatrix::identity(2 * g).select_columns(&idx))?;
    Ok(polarization_type(&sub)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Distinction {
    /// Provably not conjugate; lists the invariants that differ.
    Distinguished { differing: Vec<String> },
    Inconclusive,
}

pub fn distinguish(a: &ConjugacyInvariants, b: &ConjugacyInvariants) -> Distinction {
    let mut differing = Vec::new();
    if a.char_poly != b.char_poly {
        differing.push("char_poly".to_string());
    }
    if a.unipotent != b.unipotent {
        differing.push("unipotent".to_string());
    }
    if a.snf_m_minus_i != b.snf_m_minus_i {
        differing.push("snf_m_minus_i".to_string());
    }
    if a.snf_m2_minus_i != b.snf_m2_minus_i {
        differing.push("snf_m2_minus_i".to_string());
    }
    if differing.is_empty() {
        Distinction::Inconclusive
    } else {
        Distinction::Distinguished { differing }
    }
}

pub fn distinguish_monodromies(a: &SymplecticMatrix, b: &SymplecticMatrix) -> Result<Distinction, PeriodError> {
    if a.genus() != b.genus() {
        return Err(PeriodError::DimensionMismatch(format!(
            "{0}x{0} against {1}x{1}",
            2 * a.genus(),
            2 * b.genus()
        )));
    }
    Ok(distinguish(&conjugacy_invariants(a), &conjugacy_invariants(b)))
}

/// JSON shape for complex matrices: rows of `["re", "im"]` string pairs
/// (plain numbers are accepted on input).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexEntry {
    Pair([String; 2]),
    Numbers([f64; 2]),
    Real(f64),
}

impl ComplexEntry {
    pub fn value(&self) -> Result<Complex64, PeriodError> {
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| PeriodError::InvalidPeriodData(format!("not a number: {s:?}")))
        };
        match self {
            ComplexEntry::Pair([re, im]) => Ok(Complex64::new(parse(re)?, parse(im)?)),
            ComplexEntry::Numbers([re, im]) => Ok(Complex64::new(*re, *im)),
            ComplexEntry::Real(re) => Ok(Complex64::new(*re, 0.0)),
        }
    }
}

pub fn parse_complex_matrix(json: &str) -> Result<CMatrix, PeriodError> {
    let rows: Vec<Vec<ComplexEntry>> =
        serde_json::from_str(json).map_err(|e| PeriodError::InvalidPeriodData(format!("bad Z: {e}")))?;
    let rows: Result<Vec<Vec<Complex64>>, PeriodError> =
        rows.iter().map(|r| r.iter().map(ComplexEntry::value).collect()).collect();
    CMatrix::from_rows(rows?)
}

/// Parses `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64, PeriodError> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| PeriodError::InvalidPeriodData(format!("expected re,im, got {s:?}")))?;
    let f = |x: &str| {
        x.trim()
            .parse::<f64>()
            .map_err(|_| PeriodError::InvalidPeriodData(format!("not a number: {x:?}")))
    };
    Ok(Complex64::new(f(re)?, f(im)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i() -> Complex64 {
        Complex64::new(0.0, 1.0)
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    fn data(g: usize, d: u64, zdiag: Complex64, z: Complex64) -> PeriodData {
        let mut big_z = CMatrix::zeros(g - 1, g - 1);
        for r in 0..g - 1 {
            big_z[(r, r)] = zdiag;
        }
        PeriodData::new(g, d, big_z, z, DEFAULT_TOLERANCE).unwrap()
    }

    #[test]
    fn sections_genus_three() {
        let s = lattice_sections(&data(3, 3, i(), i())).unwrap();
        let zero = Complex64::zero();
        let one = Complex64::one();
        let expect = |idx: usize, v: [Complex64; 3]| {
            for (a, b) in s.get(idx).iter().zip(v) {
                assert!(close(*a, b), "u{idx}: {:?}", s.get(idx));
            }
        };
        expect(6, [zero, zero, one]);
        expect(7, [zero, one, i() / 3.0]);
        expect(8, [zero, i() / 3.0, one / 3.0]);
        expect(5, [zero, Complex64::new(3.0, 0.0), zero]);
    }

    #[test]
    fn sections_genus_two() {
        let s = lattice_sections(&data(2, 2, i() * 2.0, i())).unwrap();
        let zero = Complex64::zero();
        let one = Complex64::one();
        let expect = |idx: usize, v: [Complex64; 2]| {
            for (a, b) in s.get(idx).iter().zip(v) {
                assert!(close(*a, b), "u{idx}: {:?}", s.get(idx));
            }
        };
        expect(1, [i() * 2.0, zero]);
        expect(2, [zero, i()]);
        expect(3, [Complex64::new(2.0, 0.0), zero]);
        expect(4, [zero, one]);
        expect(5, [one, i() / 2.0]);
        expect(6, [i(), one / 2.0]);
    }

    #[test]
    fn section_relations_hold() {
        for (g, d) in [(2, 2), (3, 3), (3, 5), (4, 4)] {
            let s = lattice_sections(&data(g, d, i() * 1.5, Complex64::new(0.3, 0.7))).unwrap();
            let df = d as f64;
            for k in 0..g {
                assert!(close(s.get(2 * g + 1)[k] * df - s.get(g)[k], s.get(2 * g - 1)[k]));
                assert!(close(s.get(2 * g + 2)[k] * df - s.get(g - 1)[k], s.get(2 * g)[k]));
            }
        }
    }

    #[test]
    fn period_matrix_structure() {
        let t = period_matrix(&data(3, 3, i(), i())).unwrap();
        assert!(t.symmetry_defect() < 1e-12);
        let im = t.t.imag();
        let want = [[1.0, 0.0, 0.0], [0.0, 1.0 / 9.0, 0.0], [0.0, 0.0, 1.0 / 3.0]];
        for r in 0..3 {
            for c in 0..3 {
                assert!((im[r][c] - want[r][c]).abs() < 1e-12);
            }
        }
        assert!(close(t.z21()[1], Complex64::new(1.0 / 3.0, 0.0)));
        assert!(close(t.t[(2, 2)], i() / 3.0));
        assert_eq!(t.basis_labels[1], "alpha2=u8");
    }

    #[test]
    fn invalid_data() {
        let big_z = CMatrix::from_rows(vec![vec![i()]]).unwrap();
        assert!(matches!(
            PeriodData::new(2, 3, big_z.clone(), Complex64::new(1.0, 0.0), 1e-9),
            Err(PeriodError::InvalidPeriodData(_))
        ));
        let flat = CMatrix::from_rows(vec![vec![Complex64::new(1.0, 0.0)]]).unwrap();
        assert!(PeriodData::new(2, 3, flat, i(), 1e-9).is_err());
        let nonsym = CMatrix::from_rows(vec![vec![i(), Complex64::new(1.0, 0.0)], vec![Complex64::zero(), i()]]).unwrap();
        assert!(PeriodData::new(3, 3, nonsym, i(), 1e-9).is_err());
        assert!(PeriodData::new(3, 3, big_z, i(), 1e-9).is_err());
    }

    #[test]
    fn regular_monodromy_shifts_t() {
        for (g, d) in [(2, 3), (3, 3), (3, 4), (2, 5)] {
            let p = data(g, d, i() * 1.2, Complex64::new(-0.4, 0.9));
            let m = monodromy_at_cusp(g, d, CuspRegularity::Regular).unwrap();
            assert!(monodromy_defect(&p, &m).unwrap() < 1e-12);
        }
    }

    #[test]
    fn irregular_matrix_reproduces_t_at_z_plus_two() {
        let p = data(3, 2, i() * 0.8, Complex64::new(0.25, 1.3));
        let m = monodromy_at_cusp(3, 2, CuspRegularity::Irregular).unwrap();
        assert!(monodromy_defect(&p, &m).unwrap() < 1e-12);
    }

    #[test]
    fn unsupported_monodromy() {
        assert!(matches!(
            monodromy_at_cusp(3, 3, CuspRegularity::Irregular),
            Err(PeriodError::UnsupportedCombination(_))
        ));
        assert!(monodromy_at_cusp(2, 2, CuspRegularity::Irregular).is_err());
    }

    #[test]
    fn identity_action() {
        let p = data(3, 4, i(), Complex64::new(0.1, 2.0));
        let act = gamma_action(&p, &IntMatrix::identity(2)).unwrap();
        assert!(act.l.is_identity());
        assert_eq!(act.data, p);
    }

    #[test]
    fn translation_action_is_inverse_transpose_of_monodromy() {
        for (g, d) in [(2, 3), (3, 4)] {
            let p = data(g, d, i(), Complex64::new(0.1, 2.0));
            let t = IntMatrix::from_rows(&[[1, d as i64], [0, 1]]);
            let act = gamma_action(&p, &t).unwrap();
            assert!(close(act.data.z, p.z + d as f64));
            // Change of basis from the adapted basis to the α/β frame.
            let frame = adapted_to_symplectic(g, d);
            let frame_inv = frame.inverse_unimodular().unwrap();
            let n = &(&frame * &act.l) * &frame_inv;
            let n_inv_t = n.inverse_unimodular().unwrap().transpose();
            assert_eq!(n_inv_t, regular_monodromy_matrix(g));
        }
    }

    /// Columns: adapted-basis vectors in α/β coordinates.
    fn adapted_to_symplectic(g: usize, d: u64) -> IntMatrix {
        let n = 2 * g;
        let mut m = IntMatrix::zeros(n, n);
        for r in 0..g - 2 {
            m[(r, r)] = BigInt::one();
            m[(g + r, g + r)] = BigInt::one();
        }
        // u_{g-1} = d·α_{g-1} - β_g, u_g = d·α_g - β_{g-1}
        m[(g - 2, g - 2)] = BigInt::from(d);
        m[(n - 1, g - 2)] = -BigInt::one();
        m[(g - 1, g - 1)] = BigInt::from(d);
        m[(n - 2, g - 1)] = -BigInt::one();
        // u_{2g+1} = α_g, u_{2g+2} = α_{g-1}
        m[(g - 1, n - 2)] = BigInt::one();
        m[(g - 2, n - 1)] = BigInt::one();
        m
    }

    #[test]
    fn non_member_rejected() {
        let p = data(3, 3, i(), i());
        let s = IntMatrix::from_rows(&[[0, -1], [1, 0]]);
        assert_eq!(gamma_action(&p, &s), Err(PeriodError::NotInGammaD(3)));
        assert!(action_matrix(3, 3, &s).is_none());
    }

    #[test]
    fn restriction_type() {
        assert_eq!(abelian_restriction_type(3, 5).unwrap(), PolarizationType::from_u64s(&[1, 5]).unwrap());
        assert_eq!(abelian_restriction_type(2, 4).unwrap(), PolarizationType::from_u64s(&[4]).unwrap());
    }

    #[test]
    fn discrimination_at_level_two() {
        let reg = monodromy_at_cusp(3, 2, CuspRegularity::Regular).unwrap();
        let irr = monodromy_at_cusp(3, 2, CuspRegularity::Irregular).unwrap();
        match distinguish_monodromies(&reg.m, &irr.m).unwrap() {
            Distinction::Distinguished { differing } => assert!(differing.contains(&"unipotent".to_string())),
            Distinction::Inconclusive => panic!("should be distinguished"),
        }
        assert_eq!(distinguish_monodromies(&reg.m, &reg.m).unwrap(), Distinction::Inconclusive);
    }

    #[test]
    fn parse_inputs() {
        let m = parse_complex_matrix(r#"[[["0","1"],[0.5,0]],[["0.5","0"],2]]"#).unwrap();
        assert_eq!(m[(0, 0)], i());
        assert_eq!(m[(1, 1)], Complex64::new(2.0, 0.0));
        assert_eq!(parse_complex("1.5,-2").unwrap(), Complex64::new(1.5, -2.0));
        assert!(parse_complex("1.5").is_err());
    }

    #[test]
    fn cholesky_pivots() {
        assert!(min_cholesky_pivot(&[vec![2.0, 1.0], vec![1.0, 2.0]]) > 0.0);
        assert!(min_cholesky_pivot(&[vec![1.0, 2.0], vec![2.0, 1.0]]) <= 0.0);
    }
}
