//! Exact Grassmann algebra, super Lie algebras, super differential forms and
//! parallel transport of relative super connections on coordinate
//! superdomains, with the N=1 D=4 supergravity Cartan layer on top.

pub mod cartan;
pub mod clifford;
pub mod config;
pub mod error;
pub mod forms;
pub mod grassmann;
pub mod poly;
pub mod random;
pub mod report;
pub mod scalar;
pub mod suites;
pub mod superfield;
pub mod superlie;
pub mod superlinalg;
pub mod transport;

pub use error::{Error, Result};
