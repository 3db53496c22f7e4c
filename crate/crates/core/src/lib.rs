//! Alexander invariants, Nakanishi and MQ index bounds for knots, and
//! free-group witness machinery for commutator splitting.

pub mod fox;
pub mod freegroup;
pub mod indices;
pub mod laurent;
pub mod notation;
pub mod par;
pub mod tables;

pub use par::Exec;
