//! Shared numerical infrastructure and the verification suite.

pub mod grid;
pub mod quadrature;
pub mod report;
pub mod suite;

pub use grid::{derivative, Grid, GridFunction, GridMap};
pub use quadrature::{inner_product, inner_product_real, integrate, integrate_with_breaks};
pub use report::VerificationReport;
pub use suite::{run_suite, SuiteConfig};
