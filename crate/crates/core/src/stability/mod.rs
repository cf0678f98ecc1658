mod cheeger;
mod global;
mod homs;
mod profile;
mod spectral;
mod vanishing;

pub use cheeger::*;
pub use global::*;
pub use homs::{enumerate_homomorphisms, Budget, DEFAULT_GUARD};
pub use profile::*;
pub use spectral::*;
pub use vanishing::*;
