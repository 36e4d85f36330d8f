//! At level 2 the cusp at infinity can be regular or irregular; the two
//! monodromy matrices are not conjugate in Sp(6, Z).

use irrfib::lattice::{conjugacy_invariants, format_polynomial};
use irrfib::modular::CuspRegularity;
use irrfib::period::{distinguish_monodromies, monodromy_at_cusp, monodromy_defect, CMatrix, PeriodData};
use num_complex::Complex64;

fn main() {
    let regular = monodromy_at_cusp(3, 2, CuspRegularity::Regular).unwrap();
    let irregular = monodromy_at_cusp(3, 2, CuspRegularity::Irregular).unwrap();

    let z_a = CMatrix::from_rows(vec![
        vec![Complex64::new(0.1, 1.0), Complex64::new(0.2, 0.0)],
        vec![Complex64::new(0.2, 0.0), Complex64::new(-0.3, 0.9)],
    ])
    .unwrap();
    let p = PeriodData::new(3, 2, z_a, Complex64::new(0.4, 1.1), 1e-9).unwrap();

    for (name, m) in [("regular", &regular), ("irregular", &irregular)] {
        let inv = conjugacy_invariants(&m.m);
        println!("{name}:\n{}", m.m.matrix());
        println!("  char poly {}", format_polynomial(&inv.char_poly));
        println!("  unipotent {}  SNF(M-I) {:?}", inv.unipotent, inv.snf_m_minus_i);
        println!("  |T(z+2) - M.T(z)| = {:e}", monodromy_defect(&p, m).unwrap());
    }
    println!("{:?}", distinguish_monodromies(&regular.m, &irregular.m).unwrap());
}
