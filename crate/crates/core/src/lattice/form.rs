//! Alternating forms over the integers and their Frobenius normal form.
//!
//! A nondegenerate alternating Gram matrix `G` of size `2g` admits a
//! unimodular `P` with `PᵀGP = [[0, D], [-D, 0]]`, `D = diag(d₁, …, d_g)` and
//! `d₁ | d₂ | … | d_g`. The chain `(d₁, …, d_g)` is the polarization type.
//!
//! The reduction is the classical one: pivot on a pairing of minimal
//! absolute value, clear every other basis vector against the pivot pair,
//! and recurse on the orthogonal complement. Equal-magnitude pivots are
//! chosen by lowest `(row, col)` so the output basis is deterministic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::LatticeError;

/// An antisymmetric integer Gram matrix with zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingForm {
    gram: IntMatrix,
}

impl AlternatingForm {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        if !gram.is_square() {
            return Err(LatticeError::NotAlternating("Gram matrix is not square".into()));
        }
        let n = gram.rows();
        for i in 0..n {
            if !gram[(i, i)].is_zero() {
                return Err(LatticeError::NotAlternating(format!("nonzero diagonal entry at {i}")));
            }
            for j in i + 1..n {
                if gram[(i, j)] != -&gram[(j, i)] {
                    return Err(LatticeError::NotAlternating(format!(
                        "entries ({i},{j}) and ({j},{i}) are not opposite"
                    )));
                }
            }
        }
        Ok(AlternatingForm { gram })
    }

    /// The standard block form `[[0, D], [-D, 0]]` of a given type.
    pub fn standard(ty: &PolarizationType) -> Self {
        let g = ty.len();
        let mut gram = IntMatrix::zeros(2 * g, 2 * g);
        for (i, d) in ty.divisors().iter().enumerate() {
            gram[(i, g + i)] = d.clone();
            gram[(g + i, i)] = -d;
        }
        AlternatingForm { gram }
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        self.gram.pairing(x, y)
    }

    /// Gram matrix `Bᵀ G B` of the columns of `basis`.
    pub fn restrict(&self, basis: &IntMatrix) -> Result<AlternatingForm, LatticeError> {
        if basis.rows() != self.dim() {
            return Err(LatticeError::DimensionMismatch(format!(
                "basis vectors have length {}, form has dimension {}",
                basis.rows(),
                self.dim()
            )));
        }
        let g = &(&basis.transpose() * &self.gram) * basis;
        AlternatingForm::new(g)
    }
}

/// An elementary-divisor chain `d₁ | d₂ | … | d_g`, all positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct PolarizationType(Vec<BigInt>);

impl PolarizationType {
    pub fn new(divisors: Vec<BigInt>) -> Result<Self, LatticeError> {
        if divisors.is_empty() {
            return Err(LatticeError::InvalidType("empty divisor chain".into()));
        }
        if let Some(d) = divisors.iter().find(|d| !d.is_positive()) {
            return Err(LatticeError::InvalidType(format!("divisor {d} is not positive")));
        }
        for w in divisors.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(LatticeError::InvalidType(format!("{} does not divide {}", w[0], w[1])));
            }
        }
        Ok(PolarizationType(divisors))
    }

    pub fn from_u64s(divisors: &[u64]) -> Result<Self, LatticeError> {
        PolarizationType::new(divisors.iter().map(|&d| BigInt::from(d)).collect())
    }

    /// `(1, …, 1, d)` of length `len`.
    pub fn coprincipal(len: usize, d: u64) -> Self {
        assert!(len > 0 && d > 0);
        let mut v = vec![BigInt::one(); len];
        v[len - 1] = BigInt::from(d);
        PolarizationType(v)
    }

    pub fn principal(len: usize) -> Self {
        PolarizationType::coprincipal(len, 1)
    }

    pub fn divisors(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_principal(&self) -> bool {
        self.0.iter().all(One::is_one)
    }

    /// The product of the divisors; equals `|det|^{1/2}` of the Gram matrix.
    pub fn pfaffian(&self) -> BigInt {
        self.0.iter().product()
    }
}

impl TryFrom<Vec<BigInt>> for PolarizationType {
    type Error = LatticeError;
    fn try_from(v: Vec<BigInt>) -> Result<Self, LatticeError> {
        PolarizationType::new(v)
    }
}

impl From<PolarizationType> for Vec<BigInt> {
    fn from(t: PolarizationType) -> Self {
        t.0
    }
}

impl TryFrom<Vec<String>> for PolarizationType {
    type Error = LatticeError;
    fn try_from(v: Vec<String>) -> Result<Self, LatticeError> {
        let parsed = v
            .iter()
            .map(|s| s.trim().parse::<BigInt>().map_err(|_| LatticeError::Parse(format!("not an integer: {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        PolarizationType::new(parsed)
    }
}

impl From<PolarizationType> for Vec<String> {
    fn from(t: PolarizationType) -> Self {
        t.0.iter().map(BigInt::to_string).collect()
    }
}

impl fmt::Display for PolarizationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A symplectic basis of a form together with its type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusBasis {
    /// Columns `e₁, …, e_g, f₁, …, f_g`.
    pub basis: IntMatrix,
    pub ty: PolarizationType,
}

struct Reducer {
    gram: Vec<Vec<BigInt>>,
    basis: IntMatrix,
    n: usize,
}

impl Reducer {
    fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.gram.swap(i, j);
        for row in &mut self.gram {
            row.swap(i, j);
        }
        for r in 0..self.n {
            let t = self.basis[(r, i)].clone();
            self.basis[(r, i)] = self.basis[(r, j)].clone();
            self.basis[(r, j)] = t;
        }
    }

    /// Moves vector `from` to position `to ≤ from`, keeping the others in order.
    fn move_to(&mut self, from: usize, to: usize) {
        for k in (to..from).rev() {
            self.swap(k, k + 1);
        }
    }

    fn negate(&mut self, i: usize) {
        for x in &mut self.gram[i] {
            *x = -&*x;
        }
        for row in &mut self.gram {
            row[i] = -&row[i];
        }
        for r in 0..self.n {
            self.basis[(r, i)] = -&self.basis[(r, i)];
        }
    }

    /// v_k += c * v_l
    fn add(&mut self, k: usize, l: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.n {
            let t = c * &self.gram[l][j];
            self.gram[k][j] += t;
        }
        for i in 0..self.n {
            let t = c * &self.gram[i][l];
            self.gram[i][k] += t;
        }
        for r in 0..self.n {
            let t = c * &self.basis[(r, l)];
            self.basis[(r, k)] += t;
        }
    }

    fn min_pairing(&self, from: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in from..self.n {
            for j in i + 1..self.n {
                if self.gram[i][j].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| self.gram[i][j].abs() < self.gram[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn reduce_pair(&mut self, p: usize) -> Result<(), LatticeError> {
        let (e, f) = (2 * p, 2 * p + 1);
        loop {
            let (i, j) = self.min_pairing(e).ok_or(LatticeError::Degenerate)?;
            self.move_to(i, e);
            self.move_to(j, f);
            if self.gram[e][f].is_negative() {
                self.negate(f);
            }
            let m = self.gram[e][f].clone();

            let mut clean = true;
            for k in f + 1..self.n {
                let qa = self.gram[k][f].div_floor(&m);
                let qb = self.gram[k][e].div_floor(&m);
                self.add(k, e, &-qa);
                self.add(k, f, &qb);
                if !self.gram[k][e].is_zero() || !self.gram[k][f].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let offender = (f + 1..self.n)
                .find(|&k| (k + 1..self.n).any(|l| !self.gram[k][l].is_multiple_of(&m)));
            match offender {
                Some(k) => self.add(e, k, &BigInt::one()),
                None => return Ok(()),
            }
        }
    }
}

fn check_reducible(form: &AlternatingForm) -> Result<usize, LatticeError> {
    let n = form.dim();
    if !n.is_multiple_of(2) {
        return Err(LatticeError::OddDimension(n));
    }
    if form.gram().det()?.is_zero() {
        return Err(LatticeError::Degenerate);
    }
    Ok(n / 2)
}

/// Symplectic basis `e₁..e_g, f₁..f_g` with `(eᵢ, fⱼ) = dᵢδᵢⱼ` and all other
/// pairings zero.
pub fn frobenius_basis(form: &AlternatingForm) -> Result<FrobeniusBasis, LatticeError> {
    let g = check_reducible(form)?;
    let n = 2 * g;
    let mut r = Reducer {
        gram: (0..n).map(|i| form.gram().row(i)).collect(),
        basis: IntMatrix::identity(n),
        n,
    };
    for p in 0..g {
        r.reduce_pair(p)?;
    }
    let divisors: Vec<BigInt> = (0..g).map(|p| r.gram[2 * p][2 * p + 1].clone()).collect();
    let order: Vec<usize> = (0..g).map(|p| 2 * p).chain((0..g).map(|p| 2 * p + 1)).collect();
    let basis = r.basis.select_columns(&order);
    Ok(FrobeniusBasis { basis, ty: PolarizationType::new(divisors)? })
}

pub fn polarization_type(form: &AlternatingForm) -> Result<PolarizationType, LatticeError> {
    frobenius_basis(form).map(|fb| fb.ty)
}

/// The `d` of a type `(1, …, 1, d)`; `1` for principal types.
pub fn associated_degree(ty: &PolarizationType) -> Result<BigInt, LatticeError> {
    let divs = ty.divisors();
    let (last, rest) = divs.split_last().expect("types are nonempty");
    if rest.iter().any(|d| !d.is_one()) {
        return Err(LatticeError::NotCoprincipal(ty.to_string()));
    }
    Ok(last.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(rows: &[&[i64]]) -> AlternatingForm {
        AlternatingForm::new(IntMatrix::from_rows(rows)).unwrap()
    }

    fn ty(v: &[u64]) -> PolarizationType {
        PolarizationType::from_u64s(v).unwrap()
    }

    #[test]
    fn planes() {
        assert_eq!(polarization_type(&form(&[&[0, 1], &[-1, 0]])).unwrap(), ty(&[1]));
        assert_eq!(polarization_type(&form(&[&[0, 5], &[-5, 0]])).unwrap(), ty(&[5]));
        assert_eq!(polarization_type(&form(&[&[0, -5], &[5, 0]])).unwrap(), ty(&[5]));
    }

    #[test]
    fn standard_form_gives_identity_basis() {
        let std = AlternatingForm::new(IntMatrix::standard_symplectic(3)).unwrap();
        let fb = frobenius_basis(&std).unwrap();
        assert!(fb.basis.is_identity());
        assert!(fb.ty.is_principal());
    }

    #[test]
    fn scaled_plane_basis() {
        let fb = frobenius_basis(&form(&[&[0, 7], &[-7, 0]])).unwrap();
        let e = fb.basis.column(0);
        let f = fb.basis.column(1);
        assert_eq!(form(&[&[0, 7], &[-7, 0]]).pair(&e, &f), BigInt::from(7));
    }

    #[test]
    fn coprime_blocks_merge() {
        // diag blocks of type (2) and (3) together have type (1, 6).
        let f = form(&[&[0, 0, 2, 0], &[0, 0, 0, 3], &[-2, 0, 0, 0], &[0, -3, 0, 0]]);
        let fb = frobenius_basis(&f).unwrap();
        assert_eq!(fb.ty, ty(&[1, 6]));
        let g = f.restrict(&fb.basis).unwrap();
        assert_eq!(g, AlternatingForm::standard(&fb.ty));
        assert!(fb.basis.is_unimodular());
    }

    #[test]
    fn overlapping_pairings() {
        let f = form(&[&[0, 2, 4, 1], &[-2, 0, 3, 6], &[-4, -3, 0, 2], &[-1, -6, -2, 0]]);
        let fb = frobenius_basis(&f).unwrap();
        assert_eq!(f.restrict(&fb.basis).unwrap(), AlternatingForm::standard(&fb.ty));
        assert_eq!(fb.ty.pfaffian().pow(2), f.gram().det().unwrap());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            AlternatingForm::new(IntMatrix::from_rows(&[[0, 1], [1, 0]])),
            Err(LatticeError::NotAlternating(_))
        ));
        assert!(matches!(
            AlternatingForm::new(IntMatrix::from_rows(&[[1, 1], [-1, 0]])),
            Err(LatticeError::NotAlternating(_))
        ));
        let odd = form(&[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 0]]);
        assert_eq!(polarization_type(&odd), Err(LatticeError::OddDimension(3)));
        let degenerate = form(&[&[0, 1, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
        assert_eq!(polarization_type(&degenerate), Err(LatticeError::Degenerate));
    }

    #[test]
    fn associated_degrees() {
        assert_eq!(associated_degree(&ty(&[1, 1, 1])).unwrap(), BigInt::from(1));
        assert_eq!(associated_degree(&ty(&[1, 1, 4])).unwrap(), BigInt::from(4));
        assert!(matches!(associated_degree(&ty(&[1, 2, 4])), Err(LatticeError::NotCoprincipal(_))));
    }

    #[test]
    fn type_validation() {
        assert!(PolarizationType::from_u64s(&[2, 3]).is_err());
        assert!(PolarizationType::from_u64s(&[0]).is_err());
        assert!(PolarizationType::from_u64s(&[]).is_err());
        assert_eq!(ty(&[1, 1, 3]).to_string(), "(1,1,3)");
    }
}
