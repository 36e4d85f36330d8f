//! Invariants of the genus-3 prototype surfaces, with slope and the
//! Arakelov margin.

use irrfib::invariants::{arakelov_holds, fibre_types, invariants_g3, moduli_dimension, slope};
use irrfib::numeric::format_rational;

fn main() {
    println!("d\tg(B)\tc2\tchi\tK2\ttau\tH\tslope\tarakelov");
    for d in 3..=12 {
        let inv = invariants_g3(d).unwrap();
        let b = &inv.base_genus;
        println!(
            "{d}\t{b}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            inv.c2,
            inv.chi,
            inv.k2,
            inv.tau.as_ref().unwrap(),
            inv.h.as_ref().unwrap(),
            format_rational(&slope(&inv, b, 3).unwrap()),
            arakelov_holds(&inv, b, 3),
        );
    }
    println!("{:?}", fibre_types(3).unwrap());
    let b = num_bigint::BigInt::from(17);
    println!("moduli dimension (g=3, d=3, m=1, b=17): {}", moduli_dimension(3, &b, 1, 3).unwrap());
}
