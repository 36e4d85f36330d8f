//! Recover the type of an alternating form written in a scrambled basis.

use irrfib::lattice::{associated_degree, frobenius_basis, AlternatingForm, PolarizationType};
use irrfib::sample;
use rand::SeedableRng;

fn main() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(1);
    let ty = PolarizationType::from_u64s(&[1, 1, 5]).unwrap();
    let (form, _) = sample::form_of_type(&mut rng, &ty, 20);
    println!("Gram matrix:\n{}", form.gram());

    let fb = frobenius_basis(&form).unwrap();
    println!("type {}  associated degree {}", fb.ty, associated_degree(&fb.ty).unwrap());
    println!("symplectic basis (columns e1..e3, f1..f3):\n{}", fb.basis);
    assert_eq!(form.restrict(&fb.basis).unwrap(), AlternatingForm::standard(&ty));
}
