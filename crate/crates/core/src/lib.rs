#![no_std]

extern crate alloc;

pub mod algebra;
pub mod error;
pub mod gen;
pub mod linalg;
pub mod modules;
pub mod theory;
pub mod tolerance;

pub use error::{Error, Result};
