//! Exact q-characters and (q,t)-characters of simple modules over quantum
//! loop algebras of classical type, the freezing operator between ranks, and
//! twisted q-characters obtained by folding.
//!
//! Everything is computed in the skeletal setting: spectral parameters are
//! integer powers of `q`, so `Y_{i,p}` is indexed by a node and an integer.

pub mod acceptance;
pub mod cartan;
pub mod engine;
pub mod freeze;
pub mod error;
pub mod kl;
pub mod laurent;
pub mod monomial;
pub mod order;
pub mod text;
pub mod sl2core;
pub mod tfm;
pub mod torus;
pub mod twisted;

pub use cartan::{cartan_data, CartanData, Family, GammaTable, LieType, Node};
pub use engine::{Engine, DEFAULT_CAP};
pub use error::{Error, Result};
pub use laurent::HalfLaurent;
pub use monomial::{Monomial, Var};
pub use torus::{PointedElement, TorusElement};
