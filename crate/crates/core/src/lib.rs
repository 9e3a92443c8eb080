//! Exact solution counts for diagonal equations over finite fields.

pub mod arith;
pub mod characters;
pub mod counting;
pub mod cyclotomic;
pub mod extremal;
pub mod gf;
pub mod grid;
pub mod oracle;
pub mod par;
