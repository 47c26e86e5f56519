//! Topology synthesis of large-deformation, contact-aided compliant mechanisms.
//!
//! The design domain is a honeycomb of hexagonal cells. Negative circular
//! masks remove material and may carry rigid circular contact surfaces. Each
//! candidate continuum is smoothed, analysed with nonlinear polygonal finite
//! elements (mean value coordinates, neo-Hookean material) including
//! augmented-Lagrange self and mutual contact, and scored by comparing the
//! traced output path against a specified path with Fourier shape
//! descriptors. A stochastic hill climber evolves the mask parameters.

pub mod app;
pub mod contact;
pub mod design;
pub mod error;
pub mod fem;
pub mod fsd;
pub mod geom;
pub mod mesh;
pub mod optimizer;
pub mod problem;
pub mod smoothing;
pub mod svg;

pub use error::{Error, Result};
pub use geom::Vec2;
