#![no_std]
// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
extern crate alloc;

pub mod constants;
pub mod dielectric;
pub mod elastic;
pub mod error;
pub mod lifshitz;
pub mod quadrature;
pub mod roots;
pub mod smalld;
pub mod stability;

pub use dielectric::{DielectricModel, LayerStack};
pub use error::{Error, Result};
pub use lifshitz::{Estimate, QuadratureSpec, VacuumQuantities};
