// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod disk_space;
pub mod error;
pub mod functions;
pub mod gammakit;
pub mod m2_space;
pub mod mellin_bergman;
pub mod quad;
pub mod sequences;
pub mod verify;
