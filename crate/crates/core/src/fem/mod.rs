//! Large-deformation polygonal finite elements.

pub mod material;
pub mod model;
pub mod mvc;
pub mod quadrature;
pub mod solver;

pub use material::{cauchy_stress, Kinematics, MaterialParams};
pub use model::{Assembly, FeModel};
pub use mvc::{mvc_shape, MvcShape};
pub use quadrature::{fan_quadrature, TriangleRule};
pub use solver::{solve, SolveOptions, SolveState, StepRecord};
