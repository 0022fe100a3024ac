//! Exact computation with continuous valuations on finite T0 spaces.
//!
//! Finite T0 spaces are finite posets whose open sets are the up-sets. On
//! such spaces every continuous valuation is a finite combination of Dirac
//! masses, integrals are finite layer-cake sums, and the valuation monad,
//! its Kleisli extension and its barycentre algebras can be checked exactly.

pub mod algebra;
pub mod cone;
pub mod enumerate;
pub mod error;
pub mod ext;
pub mod integral;
pub mod lang;
pub mod laws;
pub mod monad;
pub mod space;
pub mod valuation;

pub use error::{Error, Result};
pub use ext::{parse_rational, rat, ExtRat, Rational};
pub use integral::{integrate, LscFun};
pub use monad::{Kernel, MetaValuation};
pub use space::{
    check_lattice, load_space, product_space, ContinuousMap, FinLattice, FinSpace, PointSet,
};
pub use valuation::{Measure, SimpleValuation, ValuationTable, Violation};
