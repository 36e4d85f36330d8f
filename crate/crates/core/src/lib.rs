//! Exact symplectic lattice algebra and numerical invariants for fibred
//! surfaces of maximal irregularity whose fixed part has type `(1,…,1,d)`.
//!
//! * [`lattice`]: integer matrices, Smith normal form, alternating forms, `Sp(2g, ℤ)`.
//! * [`modular`]: `Γ(d)`, the curves `X(d)`, and the index-2 subgroups of `Γ(2)`.
//! * [`adapted`]: bases adapted to a sublattice `U_A ⊕ U_E ⊂ U` and the `Γ(d)`-action on them.
//! * [`period`]: the period family `J(z)`, its normalized period matrix and monodromy.
//! * [`invariants`]: Chern numbers, index and related counts of the prototype surfaces.
//! * [`cli`]: the `irrfib` command-line front end.

pub mod adapted;
pub mod cli;
pub mod invariants;
pub mod lattice;
pub mod modular;
pub mod numeric;
pub mod period;
pub mod sample;
