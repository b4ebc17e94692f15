//! Lifted MRD and linkage constructions of covering Grassmannian codes, the
//! lower bounds they give, and the packing/covering duality.

mod build;
mod code;
pub mod linkage;
mod registry;

pub use build::{build_plan, construction_1, construction_1_size, construction_2, construction_3, DEFAULT_MAX_BLOCKS};
pub use code::PackingCode;
pub use linkage::{
    best_linked_plan, dualize_covering, dualize_packing, lifted_plan, linkage_lower, linkage_plan, linked_plan,
    mrd_size, packing_lower, translate_count, LinkagePlan,
};
pub use registry::{Constructed, Construction, ConstructionRegistry, DualLinkage, LiftedMrd, Linkage, Request, Target};
