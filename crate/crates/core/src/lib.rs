//! Exact-arithmetic toolkit for cylinder measures on digit expansions, block
//! operator matrices `J_n(A)`, shift models and a small noncommutative
//! identity check.

pub mod bellring;
pub mod certificate;
pub mod error;
pub mod exact;
pub mod measures;
pub mod oplab;
pub mod shiftlab;
pub mod suite;
pub mod weights;
pub mod words;

pub use error::{Error, Result};
pub use exact::Q;
