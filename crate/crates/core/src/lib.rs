//! Geometric measure of entanglement `E_sin² = 1 − Λmax²` for multipartite
//! pure states and for several families of mixed states.

pub mod bipartite;
pub mod cli;
pub mod curve;
pub mod error;
pub mod io;
pub mod mixed;
pub mod random;
pub mod solver;
pub mod states;
pub mod symmetric;

pub use error::{Error, Result};
pub use solver::{entanglement_eigenvalue, SolveOptions, SolveResult};
pub use states::{build, FamilySpec, ProductState, PureState};
