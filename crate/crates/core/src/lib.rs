//! Polar-action data: validation, Coxeter developments, torus actions, constructions and
//! billiard Morse counts.

pub mod billiard;
pub mod constructions;
pub mod corpus;
pub mod coxeter;
pub mod error;
pub mod groups;
pub mod io;
pub mod polar_data;
pub mod render;
pub mod torus_actions;

pub use error::{Error, Result};
