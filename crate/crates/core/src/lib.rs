//! Invariants of fully augmented pretzel link complements: exact cyclotomic
//! trace fields, high-precision volumes and lengths, crushtacean symmetry
//! criteria, and the classification procedures built on them.

pub mod arith;
pub mod exactfield;
pub mod tracefield;
pub mod hypgeom;
pub mod crushtacean;
pub mod classify;
pub mod report;
pub mod cache;
pub mod verify;
