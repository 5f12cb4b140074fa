//! Euler elements, 3-graded Lie algebras, wedge geometry and finite-dimensional
//! standard subspaces.

pub mod causal;
pub mod cones;
pub mod liealg;
pub mod linalg;
pub mod models;
pub mod nets;
pub mod par;
pub mod rootsys;
pub mod stdsp;
pub mod wedgespace;
