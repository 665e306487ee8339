//! Numerical kernels: endpoint-singular quadrature and the incomplete
//! elliptic integral of the first kind.

mod elliptic;
mod quadrature;

pub use elliptic::{elliptic_f, elliptic_f_degrees};
pub use quadrature::{singular_quadrature, SingularIntegrandSpec};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialError {
    #[error("argument out of domain: {0}")]
    OutOfDomain(String),
    #[error("integral does not converge: {0}")]
    NonIntegrable(String),
}
