use irrfib::modular::modular_data;
use irrfib::numeric::format_rational;

fn main() {
    println!("d\tDelta\tg(X(d))\tcusps");
    for d in 3..=15 {
        let m = modular_data(d).unwrap();
        println!("{d}\t{}\t{}\t{}", format_rational(&m.delta), m.genus, m.cusps);
    }
}
