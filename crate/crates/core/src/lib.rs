//! Exact-arithmetic cake cutting.
//!
//! The cake is the unit interval; each player holds a non-atomic measure
//! over it, represented as a piecewise-constant density with rational
//! breakpoints. A mediator interacts with the players only through eval
//! and cut queries, every one of which is recorded in a ledger. On top of
//! this sit the classic division procedures (cut-and-choose, last
//! diminisher, the divide-and-conquer halving protocol, the three-player
//! envy-free procedure, Kuhn's allocation rounds) and the round-based
//! procedures that additionally guarantee equal treatment of equals or
//! full input-order symmetry, plus exact verifiers for every fairness
//! notion involved.

pub mod allocation;
pub mod cake;
pub mod error;
pub mod instance;
pub mod io;
pub mod oracle;
pub mod orders;
pub mod protocols;
pub mod rational;
pub mod valuation;
pub mod verify;

pub use cake::{Interval, Subcake};
pub use error::{Error, Result};
pub use oracle::{GapCache, Oracle, QueryKind, QueryLedger, QueryRecord};
pub use rational::{format_rational, int, parse_rational, rat, Rational};
pub use valuation::Valuation;
