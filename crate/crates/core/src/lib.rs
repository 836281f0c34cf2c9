//! Pascal-adic transformation toolkit: the word triangle `B_{n,k}`, ergodic-sum
//! curves and their renormalizations, the self-affine limit curves `M_p`,
//! the cutting-and-stacking model of the transformation, dyadic observables
//! with the polynomial `P^g`, and the Conway sequence.

pub mod acceptance;
pub mod blocks;
pub mod conway;
pub mod curves;
pub mod dyadicg;
pub mod error;
pub mod exactnum;
pub mod selfaffine;
pub mod towers;

pub use error::{Error, Result};
pub use exactnum::{Polynomial, Rational};
