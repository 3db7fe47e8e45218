//! Serendipity and tensor-product finite element exterior calculus on cubical meshes.

pub mod assemble;
pub mod cli;
pub mod error;
pub mod mesh;
pub mod poly;
pub mod refelem;
pub mod solve;

pub use error::{Error, Result};
