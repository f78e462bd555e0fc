//! Conifold transitions between toric Calabi–Yau hypersurfaces: reflexive
//! polytopes, conifold and Hodge data, topological invariants, periods,
//! Picard–Fuchs operators and genus-0 instanton numbers.

pub mod lattice;
pub mod polytope;
pub mod conifold;
pub mod topology;
pub mod series;
pub mod period;
pub mod pfops;
pub mod gw;
pub mod io;
pub mod pipeline;
pub mod samples;

pub use conifold::{ConifoldError, ConifoldReport, HodgeData, HodgePair, TwoFaceClass};
pub use gw::{GwData, GwError, MirrorMap};
pub use io::{IoError, Orientation, Report, Role};
pub use lattice::{IntMatrix, LatticeError, Rational};
pub use period::{PeriodError, Support};
pub use pfops::{DiffOperator, FrobeniusBasis, PfError};
pub use pipeline::{analyze_text, AnalyzeOptions};
pub use polytope::{LatticePolytope, Point, PolytopeError, ReflexivePair};
pub use series::{RationalSeries, SeriesError};
pub use topology::{TopologyData, TopologyError};

/// Any error raised by the library.
#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Conifold(#[from] ConifoldError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Period(#[from] PeriodError),
    #[error(transparent)]
    Pf(#[from] PfError),
    #[error(transparent)]
    Gw(#[from] GwError),
    #[error(transparent)]
    Io(#[from] IoError),
}
