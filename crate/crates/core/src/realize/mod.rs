//! Realizing prescribed monodromy by a Fuchsian system and descending it to R(z).

pub mod pipeline;
pub mod refine;
pub mod system;
pub mod targets;

pub use pipeline::{expected_block_image, realize_and_descend, PipelineOptions, PipelineReport, Realization};
pub use refine::{refine, residue_ansatz, Ansatz, BranchChoice, RefineOptions, Refinement};
pub use system::{FuchsianSystem, RENDER_DIGITS};
pub use targets::{symmetrize_targets, Symmetrized, TargetData};
