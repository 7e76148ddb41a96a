//! Numerical toolkit for the elliptic quantum group `U_{q,p}(ŝl₂)` at `c = 0`.

pub mod cgkit;
pub mod dynrep;
pub mod error;
pub mod limits;
pub mod report;
pub mod rmatrix;
pub mod sampling;
pub mod series;
pub mod suites;
pub mod theta;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use theta::ModularParams;
