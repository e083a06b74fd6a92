pub mod bounds;
pub mod error;
pub mod heights;
pub mod ideal;
pub mod io;
pub mod linalg;
pub mod margin;
pub mod nf;
pub mod poly;
pub mod real;
pub mod towers;
pub mod units;

pub use error::{Error, Result};
