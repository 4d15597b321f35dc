//! Binary codes attached to functions on GF(2^n), their automorphism
//! groups, and equivalence certificates for APN functions.
//!
//! The pipeline: `gf2n` does field arithmetic, `funcspace` evaluates and
//! classifies functions (differential uniformity, algebraic degree),
//! `lincode` builds the attached length-2^n code and decides code equality
//! and affine witnesses, `permgrp` provides exact permutation-group
//! machinery and the automorphism search, and `family` packages the
//! trinomial family with its inequivalence certificates. `cli` is the
//! command-line surface over all of it.

pub(crate) mod bitrow;
pub mod cli;
pub mod error;
pub mod family;
pub mod funcspace;
pub mod gf2n;
pub mod lincode;
pub mod permgrp;

pub use error::{Error, Result};
