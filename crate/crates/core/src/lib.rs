//! Exact partition statistics and Ramanujan-type congruence checks.
//!
//! - [`partition`]: partitions, enumeration, rank, crank.
//! - [`count`]: `p(n)` exactly and modulo `m`.
//! - [`qseries`]: truncated power series and the crank generating product.
//! - [`tables`]: rank/crank histograms, residue classes and the classical verifiers.
//! - [`congruence`]: theta, Legendre symbols, `S_l`, and the instance checkers and
//!   progression scanner for the modern congruence theorems.

pub mod congruence;
pub mod count;
pub mod error;
pub mod partition;
pub mod qseries;
pub mod report;
pub mod tables;

pub use count::{
    partition_count, partition_counts, partition_counts_mod, CountValue, ResidueTable,
};
pub use error::{Error, Result};
pub use partition::{congruent, crank, enumerate_partitions, rank, Partition};
pub use qseries::{
    crank_generating_series, euler_partition_series, series_invert, series_multiply,
    BivariateSeries, TruncatedSeries,
};

pub use report::{CongruenceReport, Instance, Summary, Verdict};
pub use tables::{build_stat_table, class_counts, ClassVector, Method, StatKind, StatTable};
