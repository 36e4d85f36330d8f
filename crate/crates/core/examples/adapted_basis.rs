//! Build an adapted basis for a lattice given in random coordinates, then
//! move it by elements of SL2(Z).

use irrfib::adapted::{canonical_configuration, change_basis, construct_adapted_basis, verify_adapted_basis};
use irrfib::lattice::IntMatrix;
use irrfib::sample;
use rand::SeedableRng;

fn main() {
    let (g, d) = (3, 4);
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    let (canonical, _) = canonical_configuration(g, d);
    let problem = canonical.recoordinatize(&sample::unimodular(&mut rng, 2 * g, 15)).unwrap();

    let basis = construct_adapted_basis(&problem).unwrap();
    println!("stored vectors u1..u4, u7, u8 as columns:\n{}", basis.vectors);
    println!("{:?}", verify_adapted_basis(&problem, &basis).unwrap());

    let in_level = IntMatrix::from_rows(&[[1 + d as i64, d as i64], [-(d as i64), 1 - d as i64]]);
    let outside = IntMatrix::from_rows(&[[1, 1], [0, 1]]);
    for m in [in_level, outside] {
        let verdict = match change_basis(&problem, &basis, &m) {
            Ok(_) => "adapted".to_string(),
            Err(e) => format!("rejected ({})", e.code()),
        };
        println!("M = {:?}: {verdict}", m.to_i64_rows().unwrap());
    }
}
