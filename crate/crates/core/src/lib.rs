pub mod combinat;
pub mod conjugacy;
pub mod coxeter;
pub mod cuspdata;
pub mod cuspidal;
pub mod error;
pub mod exact;
pub mod iss;
pub mod repr;
pub mod signatures;

pub use error::{Error, Result};
