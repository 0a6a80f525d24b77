//! Exact symbolic verification of the differential calculus on the quantum
//! group SL_q(2,R), its U_h(1) cosets and the quantum plane.

pub mod cli;
pub mod coeff;
pub mod coset;
pub mod error;
pub mod ncalg;

pub use coeff::{q_number, QRat};
pub use error::{Error, Result};
pub use ncalg::{NCExpr, RewriteSystem};
pub mod group;
pub mod verify;
pub mod qplane;
pub mod symops;
pub mod wznw;
