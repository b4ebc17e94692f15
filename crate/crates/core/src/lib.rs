pub mod bounds;
pub mod codefile;
pub mod constructions;
pub mod divisible;
pub mod error;
pub mod gf;
pub mod ilp;
pub mod oracle;
pub mod params;
pub mod qcalc;
pub mod rankmetric;
pub mod table;

pub use error::{Error, Result};
pub use params::{CoveringParams, PackingParams};
