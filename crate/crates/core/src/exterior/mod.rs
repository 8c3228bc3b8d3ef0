//! Exterior algebras over Z and integer lattice computations.

mod algebra;
mod lattice;

pub use algebra::{mask_wedge_sign, sort_with_sign, ExtElement};
pub use lattice::{
    homology_of_pair, invariant_factors, kernel_basis, lattice_coordinates, row_echelon, smith_form,
    AbelianGroupDescriptor, IntMatrix, SmithForm,
};
