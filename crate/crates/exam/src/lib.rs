//! Strong evaluation of untyped lambda-terms by abstract machines that
//! split the search for redexes into scheduled jobs.
//!
//! The crate provides:
//!
//! - [`syntax`]: terms, names, multi-contexts, addresses, substitution;
//! - [`mod@parse`]: the concrete term syntax;
//! - [`strategies`]: machine-free reference reducers (weak head, leftmost,
//!   external, least level) and redex enumerators, used as oracles;
//! - [`mam`]: a machine for weak head reduction with a stack and a single
//!   global environment;
//! - [`bmam`]: its extension to strong normal forms via backtracking;
//! - [`exam`]: the jumping machine for strong evaluation, parametric over a
//!   pool of named jobs, with read-back, invariant validators, the overhead
//!   measure, and diamond closure;
//! - [`pools`]: the pool interface with set, stack, least-level, fair and
//!   interactive templates;
//! - [`trace`]: labelled transition traces and their serialization;
//! - [`gen`]: a seeded random term generator;
//! - [`check`]: executable property suites tying machines to strategies.
//!
//! See the `examples/` directory for runnable tours of each capability, and
//! the `exam` binary for a command-line front end.

pub mod bmam;
pub mod check;
pub mod exam;
pub mod gen;
pub mod mam;
pub mod parse;
pub mod pools;
pub mod strategies;
pub mod syntax;
pub mod trace;

pub use parse::parse;
pub use syntax::{Address, HoleName, MultiCtx, Name, NameSupply, Term};
