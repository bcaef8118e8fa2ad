pub mod error;
pub mod exec;
pub mod fixed_points;
pub mod gibbs;
pub mod maps;
pub mod padic;
pub mod symbolic;

pub use error::{Error, Result};
pub use exec::Exec;
pub use maps::{MapParams, ParamSource};
