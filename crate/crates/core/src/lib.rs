//! Patch products, patchworks, wall embeddings and extremal-function enumeration
//! for minor-closed and topological-minor-closed graph classes.

pub mod canon;
pub mod decomposition;
pub mod enumerate;
pub mod error;
pub mod extremal;
pub mod graph;
pub mod linkage;
pub mod minor;
pub mod patch;
pub mod patchwork;
pub mod rational;
pub mod topo;
pub mod topo_density;
pub mod wall;

pub use error::{Error, Result};
pub use graph::{generators, Graph};
pub use minor::{find_minor_model, Model};
pub use rational::{fmt_rational, parse_rational, rat, Rational};
pub use topo::{find_topo_embedding, Embedding};
