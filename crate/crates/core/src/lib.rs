//! Rigorous enumeration of planar central configurations of the equal-mass
//! n-body problem by interval branch and prune.
//!
//! A normalized central configuration satisfies
//! `q_i = sum_{j != i} m_j (q_i - q_j) / |q_i - q_j|^3` with the centre of
//! mass at the origin. After removing rotations and translations the
//! remaining square system is searched for all zeros: boxes are discarded by
//! a battery of exclusion tests and zeros are certified with the Krawczyk
//! operator. Certified zeros are then merged up to rotation, reflection and
//! relabelling, and each class is tested for reflection symmetry.

pub mod bounds;
pub mod classify;
pub mod exclusion;
pub mod force;
pub mod interval;
pub mod krawczyk;
pub mod model;
pub mod reduced;
pub mod search;
pub mod verify;

pub use interval::{Interval, IntervalError, IntervalMatrix, IntervalVector};
pub use model::{BodyBox, ConfigurationBox, Masses, ScalarEnclosures};
pub use reduced::ReducedBox;
pub use search::{SearchConfig, SearchOutput, SearchStats, SolutionBox};
