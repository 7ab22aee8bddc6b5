//! Conjugacy classes of reciprocal elements in the Hecke groups
//! `Z2 * Zp`: word arithmetic, exhaustive class census, closed-form counts
//! and the growth rate of reciprocal classes.

pub mod census;
pub mod cyclic;
pub mod error;
pub mod formulas;
pub mod ledger;
pub mod params;
pub mod reciprocal;
pub mod spectral;
pub mod verify;
pub mod word;

pub use census::{census, census_with_threads, enumerate_classes, CensusRow, CensusTable};
pub use cyclic::CyclicWord;
pub use error::{Error, Result};
pub use formulas::Mode;
pub use params::GroupParams;
pub use reciprocal::{classify, Category, ReciprocalInfo};
pub use word::{ElementOrder, InvolutionType, Syllable, Word};
