//! Matrices over `Z/ellZ`, the groups they generate and their subgroup lattices.

mod group;
mod lattice;
mod mat2;
mod twist;

pub use group::{conjugate, fixed_space, fixes_nonzero_vector, generated_order, FixedSpace, MatGroup, Subgroup};
pub use lattice::{all_subgroups, subgroup_classes, SubgroupClass, SubgroupLattice};
pub use mat2::{Mat2, Spectral};
pub use twist::twists;
