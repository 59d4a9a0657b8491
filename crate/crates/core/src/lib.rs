//! CSS code surgery as colimits of chain complexes over F2.
//!
//! A CSS code is a length-2 chain complex `C_1 → C_0 → C_{-1}` with
//! `∂_0 = P_Zᵀ` and `∂_{-1} = P_X`. Merges of codes along logical operators
//! are pushouts of such complexes, and the fault-tolerant variant glues in a
//! tensor-product "sandwich" between the two codes.

pub mod chain;
pub mod codemap;
pub mod colimit;
pub mod csscode;
pub mod cubical;
pub mod f2linalg;
pub mod io;
pub mod stabsim;
pub mod surgery;

pub use chain::{ChainComplex, ChainError, ChainMap};
pub use csscode::{CodeMetrics, CssCode, Kind, SearchBudget, WeightProfile};
pub use f2linalg::{BitVec, F2Matrix};
