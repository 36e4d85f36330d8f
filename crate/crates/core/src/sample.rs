//! Random generators for tests, examples and the acceptance suite.
//!
//! All generators take an explicit RNG so that runs are reproducible from a
//! seed.

use num_bigint::BigInt;
use rand::Rng;

use crate::lattice::{AlternatingForm, IntMatrix, PolarizationType, SymplecticMatrix};

/// Product of `steps` elementary row operations and sign flips.
pub fn unimodular<R: Rng + ?Sized>(rng: &mut R, n: usize, steps: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n == 1 {
        if rng.gen_bool(0.5) {
            m[(0, 0)] = BigInt::from(-1);
        }
        return m;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let k = BigInt::from(rng.gen_range(-2i64..=2));
        for c in 0..n {
            let add = &m[(j, c)] * &k;
            m[(i, c)] += add;
        }
        if rng.gen_ratio(1, 8) {
            for c in 0..n {
                m[(i, c)] = -&m[(i, c)];
            }
        }
    }
    m
}

/// Product of `steps` transvections `x ↦ x + (xᵀJv)v` with small `v`.
pub fn symplectic<R: Rng + ?Sized>(rng: &mut R, g: usize, steps: usize) -> SymplecticMatrix {
    let mut m = SymplecticMatrix::identity(g);
    for _ in 0..steps {
        let v: Vec<BigInt> = (0..2 * g).map(|_| BigInt::from(rng.gen_range(-1i64..=1))).collect();
        let t = SymplecticMatrix::transvection(&v);
        m = m.compose(&t).expect("same genus");
    }
    m
}

/// Generators `S = [[0,-1],[1,0]]` and `T = [[1,1],[0,1]]` of `SL₂(ℤ)`.
pub fn sl2_generator(index: usize) -> IntMatrix {
    match index % 4 {
        0 => IntMatrix::from_rows(&[[0, -1], [1, 0]]),
        1 => IntMatrix::from_rows(&[[0, 1], [-1, 0]]),
        2 => IntMatrix::from_rows(&[[1, 1], [0, 1]]),
        _ => IntMatrix::from_rows(&[[1, -1], [0, 1]]),
    }
}

/// A word of length at most `max_len` in `S^{±1}`, `T^{±1}`.
pub fn sl2_word<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> IntMatrix {
    let len = rng.gen_range(0..=max_len);
    (0..len).fold(IntMatrix::identity(2), |acc, _| &acc * &sl2_generator(rng.gen_range(0..4)))
}

/// A random element of `Γ(d)`: conjugates of `T^{±d}` by short words.
pub fn gamma_d_element<R: Rng + ?Sized>(rng: &mut R, d: u64, factors: usize) -> IntMatrix {
    let d = d as i64;
    let mut m = IntMatrix::identity(2);
    for _ in 0..factors {
        let w = sl2_word(rng, 3);
        let winv = w.inverse_unimodular().expect("SL2 word");
        let e = if rng.gen_bool(0.5) { d } else { -d };
        let t = IntMatrix::from_rows(&[[1, e], [0, 1]]);
        m = &m * &(&(&w * &t) * &winv);
    }
    m
}

/// The standard form of type `ty` in a random unimodular basis.
pub fn form_of_type<R: Rng + ?Sized>(rng: &mut R, ty: &PolarizationType, steps: usize) -> (AlternatingForm, IntMatrix) {
    let std = AlternatingForm::standard(ty);
    let p = unimodular(rng, std.dim(), steps);
    let gram = &(&p.transpose() * std.gram()) * &p;
    (AlternatingForm::new(gram).expect("congruent to a nondegenerate form"), p)
}
