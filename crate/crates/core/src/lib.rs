//! Multivalued processes as computable objects: sampled sets, pullback
//! ω-limits, attractor construction and the dissipativity, flattening,
//! closedness and invariance diagnostics around them.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod inclusion;
pub mod metric;
mod par;
pub mod process;
pub mod report;
pub mod runner;
pub mod sets;
pub mod systems;

pub use par::init_thread_pool;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
