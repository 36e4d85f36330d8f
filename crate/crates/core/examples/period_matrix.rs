//! Normalized period matrix of J(z) and the shift z -> z + d.

use irrfib::period::{lattice_sections, period_matrix, CMatrix, PeriodData};
use num_complex::Complex64;

fn main() {
    let i = Complex64::new(0.0, 1.0);
    let z_a = CMatrix::from_rows(vec![vec![i * 1.2, Complex64::new(0.3, 0.1)], vec![Complex64::new(0.3, 0.1), i]]).unwrap();
    let p = PeriodData::new(3, 3, z_a, Complex64::new(0.25, 0.8), 1e-9).unwrap();

    for (k, u) in lattice_sections(&p).unwrap().u.iter().enumerate() {
        println!("u{:<2} = {:?}", k + 1, u);
    }
    let t = period_matrix(&p).unwrap();
    println!("{:?}", t.basis_labels);
    for r in 0..3 {
        println!("{:?}", t.t.row(r));
    }
    println!("|T - T^t| = {:e}, min pivot of Im T = {:.4}", t.symmetry_defect(), t.min_imaginary_pivot());

    let shifted = period_matrix(&p.with_z(p.z + 3.0)).unwrap();
    println!("T(z+3) - T(z) =");
    for r in 0..3 {
        println!("{:?}", shifted.t.sub(&t.t).row(r));
    }
}
