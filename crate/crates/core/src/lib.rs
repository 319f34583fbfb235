//! Computations around the Peterson hit problem and the Singer transfer
//! over GF(2).

pub mod action;
pub mod dual;
pub mod error;
pub mod gf2;
pub mod hit;
pub mod io;
pub mod lambda;
pub mod poly;

pub use error::{Error, Result};
