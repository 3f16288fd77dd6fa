//! Local intersection numbers of linear cycles on projective space, computed
//! at a finite prime with exact p-adic lattice arithmetic and at the infinite
//! place with the symmetric space of SL(n, ℂ).

pub mod arch;
pub mod arith;
pub mod building;
pub mod cli;
pub mod error;
pub mod generate;
pub mod io;
pub mod nonarch;
pub mod run;
pub mod selftest;
pub mod symspace;

pub use error::{Error, Hypothesis, Result};
