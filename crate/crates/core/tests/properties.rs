use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use irrfib::adapted::{canonical_configuration, change_basis, construct_adapted_basis, is_adapted_basis};
use irrfib::invariants::{invariants_g2, invariants_g3};
use irrfib::lattice::{
    conjugacy_invariants, frobenius_basis, is_symplectic, polarization_type, AlternatingForm, PolarizationType,
};
use irrfib::modular::{delta, gamma2_complement_contains, gamma_d_contains, CuspRegularity, IrregularCusps};
use irrfib::period::{action_matrix, gamma_action, monodromy_at_cusp, period_matrix, CMatrix, PeriodData};
use irrfib::sample;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A divisor chain of length `g` with entries at most `bound`.
fn random_type(r: &mut ChaCha8Rng, g: usize, bound: u64) -> PolarizationType {
    let mut divs = Vec::with_capacity(g);
    let mut cur = 1u64;
    for _ in 0..g {
        let mult = r.gen_range(1..=3u64);
        if cur * mult <= bound {
            cur *= mult;
        }
        divs.push(cur);
    }
    PolarizationType::from_u64s(&divs).unwrap()
}

fn random_period_data(r: &mut ChaCha8Rng, g: usize, d: u64) -> PeriodData {
    let n = g - 1;
    let mut z = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let re = r.gen_range(-1.0..1.0);
            let im = if i == j { r.gen_range(1.0..2.0) } else { r.gen_range(-0.3..0.3) };
            z[(i, j)] = Complex64::new(re, im);
            z[(j, i)] = z[(i, j)];
        }
    }
    let w = Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(0.5..2.0));
    PeriodData::new(g, d, z, w, 1e-9).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn polarization_type_is_a_congruence_invariant(seed in any::<u64>(), g in 1usize..=4) {
        let mut r = rng(seed);
        let ty = random_type(&mut r, g, 12);
        let (form, _) = sample::form_of_type(&mut r, &ty, 12);
        let fb = frobenius_basis(&form).unwrap();
        prop_assert_eq!(&fb.ty, &ty);
        prop_assert_eq!(form.restrict(&fb.basis).unwrap(), AlternatingForm::standard(&ty));
        prop_assert!(fb.basis.is_unimodular());
        let p = ty.pfaffian();
        prop_assert_eq!(form.gram().det().unwrap(), &p * &p);
        let q = sample::unimodular(&mut r, 2 * g, 8);
        let moved = AlternatingForm::new(&(&q.transpose() * form.gram()) * &q).unwrap();
        prop_assert_eq!(polarization_type(&moved).unwrap(), ty);
    }

    #[test]
    fn symplectic_group_is_closed(seed in any::<u64>(), g in 1usize..=3) {
        let mut r = rng(seed);
        let a = sample::symplectic(&mut r, g, 6);
        let b = sample::symplectic(&mut r, g, 6);
        prop_assert!(is_symplectic(a.inverse().matrix(), g).unwrap());
        prop_assert!(is_symplectic(&(a.matrix() * b.matrix()), g).unwrap());
        prop_assert!((a.matrix() * a.inverse().matrix()).is_identity());
    }

    #[test]
    fn conjugacy_invariants_survive_conjugation(seed in any::<u64>(), g in 1usize..=3) {
        let mut r = rng(seed);
        let m = sample::symplectic(&mut r, g, 5);
        let p = sample::symplectic(&mut r, g, 5);
        let c = m.conjugate_by(&p).unwrap();
        prop_assert_eq!(conjugacy_invariants(&m), conjugacy_invariants(&c));
    }

    #[test]
    fn principal_congruence_subgroup_is_closed(seed in any::<u64>(), d in 2u64..=9) {
        let mut r = rng(seed);
        let a = sample::gamma_d_element(&mut r, d, 2);
        let b = sample::gamma_d_element(&mut r, d, 2);
        prop_assert!(gamma_d_contains(&a, d) && gamma_d_contains(&b, d));
        prop_assert!(gamma_d_contains(&(&a * &b), d));
        prop_assert!(gamma_d_contains(&a.inverse_unimodular().unwrap(), d));
    }

    #[test]
    fn complements_contain_exactly_one_sign(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = sample::gamma_d_element(&mut r, 2, 3);
        let neg = -&m;
        for s in IrregularCusps::all() {
            prop_assert!(gamma2_complement_contains(&m, &s) ^ gamma2_complement_contains(&neg, &s));
        }
    }

    #[test]
    fn change_basis_succeeds_exactly_on_gamma_d(seed in any::<u64>(), g in 2usize..=3, d in 2u64..=7) {
        let mut r = rng(seed);
        let (canon, _) = canonical_configuration(g, d);
        let problem = canon.recoordinatize(&sample::unimodular(&mut r, 2 * g, 10)).unwrap();
        let basis = construct_adapted_basis(&problem).unwrap();
        prop_assert!(is_adapted_basis(&problem, &basis).unwrap());
        let m = if r.gen_bool(0.4) { sample::gamma_d_element(&mut r, d, 2) } else { sample::sl2_word(&mut r, 8) };
        prop_assert_eq!(change_basis(&problem, &basis, &m).is_ok(), gamma_d_contains(&m, d));
        prop_assert_eq!(action_matrix(g, d, &m).is_some(), gamma_d_contains(&m, d));
    }

    #[test]
    fn gamma_action_is_a_cocycle(seed in any::<u64>(), g in 2usize..=3, d in 3u64..=5) {
        let mut r = rng(seed);
        let p = random_period_data(&mut r, g, d);
        let m1 = sample::gamma_d_element(&mut r, d, 1);
        let m2 = sample::gamma_d_element(&mut r, d, 1);
        let a2 = gamma_action(&p, &m2).unwrap();
        let a1 = gamma_action(&a2.data, &m1).unwrap();
        let a12 = gamma_action(&p, &(&m1 * &m2)).unwrap();
        prop_assert_eq!(&a12.l, &(&a1.l * &a2.l));
        prop_assert!((a12.data.z - a1.data.z).norm() < 1e-6 * (1.0 + a12.data.z.norm()));
        prop_assert!(a12.l.is_unimodular());
    }

    #[test]
    fn riemann_relations_hold(seed in any::<u64>(), g in 2usize..=3, d in 2u64..=8) {
        let mut r = rng(seed);
        let p = random_period_data(&mut r, g, d);
        let t = period_matrix(&p).unwrap();
        prop_assert!(t.symmetry_defect() < 1e-9);
        prop_assert!(t.min_imaginary_pivot() > 0.0);
    }
}

#[test]
fn monodromy_matrices_are_symplectic() {
    for g in 2..=4 {
        for d in 2..=6 {
            let m = monodromy_at_cusp(g, d, CuspRegularity::Regular).unwrap();
            assert!(is_symplectic(m.m.matrix(), g).unwrap());
        }
    }
    let irr = monodromy_at_cusp(3, 2, CuspRegularity::Irregular).unwrap();
    assert!(is_symplectic(irr.m.matrix(), 3).unwrap());
}

#[test]
fn delta_at_primes() {
    for p in [2u64, 3, 5, 7, 11, 13, 101, 199] {
        assert_eq!(delta(p).unwrap(), BigRational::new(BigInt::from(p * p - 1), BigInt::from(24)));
    }
}

#[test]
fn invariants_are_integral_up_to_200() {
    for d in 3..=200 {
        invariants_g2(d).unwrap();
        invariants_g3(d).unwrap();
    }
}
