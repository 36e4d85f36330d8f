//! Smith normal form with unimodular transforms, and a few lattice helpers
//! built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `left * input * right == diag`, with `left`, `right` unimodular and the
/// nonzero diagonal entries positive and dividing each other in order.
#[derive(Clone, Debug)]
pub struct Smith {
    pub left: IntMatrix,
    pub diag: IntMatrix,
    pub right: IntMatrix,
}

impl Smith {
    /// Diagonal entries, zeros included, of length `min(rows, cols)`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.diag.rows().min(self.diag.cols());
        (0..k).map(|i| self.diag[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().iter().filter(|d| !d.is_zero()).count()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    left: Vec<Vec<BigInt>>,
    right: Vec<Vec<BigInt>>,
    m: usize,
    n: usize,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.left.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        for row in &mut self.right {
            row.swap(i, j);
        }
    }

    /// row[i] -= q * row[j]
    fn sub_row(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.n {
            let t = q * &self.a[j][c];
            self.a[i][c] -= t;
        }
        for c in 0..self.m {
            let t = q * &self.left[j][c];
            self.left[i][c] -= t;
        }
    }

    /// col[i] -= q * col[j]
    fn sub_col(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.m {
            let t = q * &self.a[r][j];
            self.a[r][i] -= t;
        }
        for r in 0..self.n {
            let t = q * &self.right[r][j];
            self.right[r][i] -= t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        for x in &mut self.left[i] {
            *x = -&*x;
        }
    }
}

fn to_matrix(rows: Vec<Vec<BigInt>>) -> IntMatrix {
    IntMatrix::from_big_rows(rows).expect("nonempty rectangular work matrix")
}

pub fn smith(input: &IntMatrix) -> Smith {
    let (m, n) = (input.rows(), input.cols());
    let mut w = Work {
        a: (0..m).map(|i| input.row(i)).collect(),
        left: (0..m).map(|i| IntMatrix::identity(m).row(i)).collect(),
        right: (0..n).map(|i| IntMatrix::identity(n).row(i)).collect(),
        m,
        n,
    };
    for t in 0..m.min(n) {
        'pivot: loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if w.a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| w.a[i][j].abs() < w.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'pivot;
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                let q = w.a[i][t].div_floor(&w.a[t][t]);
                w.sub_row(i, t, &q);
                if !w.a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = w.a[t][j].div_floor(&w.a[t][t]);
                w.sub_col(j, t, &q);
                if !w.a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Pivot must divide the rest; otherwise fold an offending row in.
            let p = w.a[t][t].clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !w.a[i][j].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    w.sub_row(t, i, &minus_one);
                }
                None => break 'pivot,
            }
        }
        if t < m && t < n && w.a[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    Smith { left: to_matrix(w.left), diag: to_matrix(w.a), right: to_matrix(w.right) }
}

/// Invariant factors of `m` (nonzero and zero), via [`smith`].
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    smith(m).invariant_factors()
}

/// A `Z`-basis (as columns) of the lattice spanned by the columns of `gens`.
pub fn column_lattice_basis(gens: &IntMatrix) -> IntMatrix {
    let s = smith(gens);
    let r = s.rank();
    // gens * right = left^{-1} * diag, so the lattice is spanned by the
    // first r columns of left^{-1} scaled by the divisors.
    let linv = s.left.inverse_unimodular().expect("smith transform is unimodular");
    let mut cols = Vec::with_capacity(r);
    for j in 0..r {
        let d = &s.diag[(j, j)];
        cols.push(linv.column(j).iter().map(|x| x * d).collect::<Vec<_>>());
    }
    IntMatrix::from_columns(&cols).expect("rank is positive")
}

/// Integer solution `x` of `basis * x = v` when `basis` has independent
/// columns; `None` if `v` is not in the lattice (or not in its span).
pub fn lattice_coordinates(basis: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let s = smith(basis);
    let r = s.rank();
    if r != basis.cols() {
        return None;
    }
    // basis = left^{-1} diag right^{-1}; solve diag * y = left * v, x = right * y.
    let lv = s.left.apply(v);
    let mut y = Vec::with_capacity(basis.cols());
    for (i, lvi) in lv.iter().enumerate() {
        if i < r {
            let d = &s.diag[(i, i)];
            if !lvi.is_multiple_of(d) {
                return None;
            }
            y.push(lvi / d);
        } else if !lvi.is_zero() {
            return None;
        }
    }
    Some(s.right.apply(&y))
}

/// Some integer solution of `m·x = t`, if one exists.
pub fn solve_integral(m: &IntMatrix, t: &[BigInt]) -> Option<Vec<BigInt>> {
    let s = smith(m);
    let r = s.rank();
    let lt = s.left.apply(t);
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, x) in lt.iter().enumerate() {
        if i < r {
            let d = &s.diag[(i, i)];
            if !x.is_multiple_of(d) {
                return None;
            }
            y[i] = x / d;
        } else if !x.is_zero() {
            return None;
        }
    }
    Some(s.right.apply(&y))
}

/// Coordinates of every column of `vs` in `basis`.
pub fn lattice_coordinates_matrix(basis: &IntMatrix, vs: &IntMatrix) -> Option<IntMatrix> {
    let cols: Option<Vec<Vec<BigInt>>> =
        vs.columns().iter().map(|v| lattice_coordinates(basis, v)).collect();
    IntMatrix::from_columns(&cols?).ok()
}
