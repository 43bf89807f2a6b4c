//! Exact enumeration of parking functions on trees.

pub mod asymptotics;
pub mod brute;
pub mod catalog;
pub mod closed_forms;
pub mod error;
pub mod families;
pub mod kind;
pub mod numeric;
pub mod parking;
pub mod series;
