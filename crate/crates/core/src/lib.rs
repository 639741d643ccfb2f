//! Braid relations for involution words in twisted Coxeter systems.
//!
//! The crate computes, with exact arithmetic, finite sets of word relations
//! that span and preserve the sets of involution words of every twisted
//! involution in a finite or affine twisted Coxeter system. The pipeline runs
//! from the geometric representation ([`coxeter`]) through symbolic braid
//! systems ([`braidsys`]) and the tree/forest algorithms ([`engine`]), with
//! brute-force oracles ([`involutions`], [`rewriting`]) to check the results.

#![allow(clippy::needless_range_loop)]

pub mod braidsys;
pub mod coxeter;
pub mod error;
pub mod families;
pub mod feasibility;
pub mod involutions;
pub mod json;
pub mod numfield;
pub mod parabolic;
pub mod report;
pub mod rewriting;

pub mod engine;

pub use coxeter::{Gen, GroupElement, TwistedSystem, Word};
pub use error::{Error, Result};
pub use numfield::{FieldElement, LinearPoly};
