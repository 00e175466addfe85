//! Core engine for redescription mining over a pair of aligned data tables.
//!
//! A redescription is a pair of queries, one per table, that describe nearly
//! the same set of entities; its quality is the Jaccard index of the two
//! query supports. This crate provides the data model (tables, literals,
//! queries, support bitsets), the minhash/Hamming LSH machinery, the
//! LSH-accelerated initial-pair miner and greedy extender, and exhaustive
//! baselines used for validation and benchmarking.

pub mod bitset;
pub mod data;
pub mod error;
pub mod extend;
pub mod lsh;
pub mod pairs;
pub mod query;

pub use bitset::Bitset;
pub use data::{AttributeColumn, Bucketing, ColumnData, DataTable, Schema, Side, Tables};
pub use error::Error;
pub use query::{Connective, Constraints, Literal, Partition, Predicate, Query, Redescription};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
