//! Jets, higher Schwarzian derivatives and the integral operators built on them.

pub mod automorphic;
pub mod exact;
pub mod identities;
pub mod integral_ops;
pub mod jet;
pub mod maps;
pub mod norms;
pub mod ode;
pub mod quadrature;
pub mod symbolic;

pub use jet::{Jet, JetError};
pub use maps::{AnalyticFn, HyperbolicDomain, MapError, Moebius};
pub use symbolic::{CompiledExpr, DiffExpr, Series, SymbolicError};
