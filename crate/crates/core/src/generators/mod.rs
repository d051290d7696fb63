//! Word generators for the families studied by the analysis tools.

pub mod automatic;
pub mod concat;
pub mod folding;
pub mod perturbed;
pub mod theta;

pub use automatic::{
    baum_sweet_morphic_stream, baum_sweet_stream, rudin_shapiro_morphic_stream,
    rudin_shapiro_stream,
};
pub use concat::{concat_family_stream, BlockSource, ConcatFamily};
pub use folding::{paperfolding_stream, FoldingSystem, Instructions};
pub use perturbed::{
    perturbed_symmetry_stream, Mode, PerturbedSymmetry, PerturbedSystem, Schedule,
};
pub use theta::{davison_stream, floor_n_theta, verify_floor_identities, DavisonParams};
