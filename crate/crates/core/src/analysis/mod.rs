//! Static checks on compiled machines.

mod coloring;
mod conflicts;

pub use coloring::{check_coloring, resolve_colors, ColoringViolation, InterleaveSpec, SpecError};
pub use conflicts::{
    find_weight_conflicts, is_functional, reachable_pairs, ConflictTarget, ConflictWitness,
    Functionality,
};
