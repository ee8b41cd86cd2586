//! The symmetric group algebra `Q[S_b]`, Young symmetrizers and the signed
//! group `(Z/2)^b x| S_b`.

mod algebra;
mod perm;
mod signed;
mod young;

pub use algebra::{GroupAlgebraElement, SignConvention};
pub use perm::Permutation;
pub use signed::{alt_signed_group, SignedAlgebraElement, SignedGroupElement};
pub use young::{
    hook_length_dimension, partitions, standard_tableaux, ShapeMode, YoungShape,
};
