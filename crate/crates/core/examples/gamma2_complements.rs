//! The four complements of {±1} in Γ(2), labelled by their irregular cusps.

use irrfib::lattice::IntMatrix;
use irrfib::modular::{cusp_case, gamma2_complement_contains, gamma2_decompose, Cusp, IrregularCusps};

fn main() {
    let samples = [
        IntMatrix::from_rows(&[[1, 2], [0, 1]]),
        IntMatrix::from_rows(&[[1, 0], [2, 1]]),
        IntMatrix::from_rows(&[[3, -2], [2, -1]]),
        IntMatrix::from_rows(&[[-1, 2], [0, -1]]),
        IntMatrix::from_rows(&[[5, 2], [2, 1]]),
    ];
    for s in IrregularCusps::all() {
        let case = cusp_case(&s, Cusp::Infinity).unwrap();
        println!("S = {s}: infinity is {:?}, stabilizer {:?}", case.variant, case.stabilizer_generator.to_i64_rows().unwrap());
        for m in &samples {
            println!("  {:?} in complement: {}", m.to_i64_rows().unwrap(), gamma2_complement_contains(m, &s));
        }
    }
    println!("{:?}", gamma2_decompose(&samples[4]).unwrap());
}
