//! Exact algorithms for 2-level configurations: pairs of spanning vector sets
//! whose pairwise inner products are all 0 or 1, and the maximal rank-d 0/1
//! matrices they factor.

pub mod binmat;
pub mod canon;
pub mod compress;
pub mod config;
pub mod corrcone;
pub mod enumerate;
pub mod error;
pub mod exactlin;
pub mod geom;
pub mod stabset;
pub mod store;

pub use binmat::{BinaryMatrix, ParseError};
pub use canon::{canonical_form, CanonicalForm};
pub use config::{closure, maximal_completion, Configuration, Side, SlackMatrix};
pub use error::{Error, Result};
