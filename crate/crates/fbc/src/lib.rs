//! Finite fractional Brauer configurations (f-BCs).
//!
//! The crate models f-BCs, their walks and homotopy, coverings and universal covers,
//! and computes fundamental-group presentations along two independent routes:
//! the quiver-with-relations route ([`quiver`]) and the Brauer configuration
//! reduction route ([`pipeline`]).

pub mod builders;
pub mod config;
pub mod coverings;
pub mod format;
pub mod groups;
pub mod pipeline;
pub mod quiver;
pub mod walks;

pub use config::{Angle, Fbc, FbcClass, Partition, RawFbc, Violation};
pub use walks::{Step, Walk};
