//! Exact-arithmetic engine for smoothed partial zeta values of totally real
//! fields, Stickelberger elements, augmentation-ideal order-of-vanishing
//! certificates, and conjectural Gross-Stark units to finite p-adic
//! precision.
//!
//! Everything is computed over exact rationals; no floating point is used
//! anywhere. See the `pipeline` module for the fixture-driven entry points
//! used by the `shintani` command-line tool and the acceptance suite.

pub mod abelian;
pub mod bernoulli;
pub mod cyclotomic;
pub mod error;
pub mod fixture;
pub mod field;
pub mod groupring;
pub mod grossstark;
pub mod lattice;
pub mod matrix;
pub mod pairing;
pub mod pipeline;
pub mod rat;
pub mod report;
pub mod rayclass;
pub mod shintani;
pub mod stickelberger;
pub mod stepfn;
pub mod trunc;

pub use abelian::{AbelianGroup, GroupElem};
pub use error::CoreError;
pub use groupring::GroupRingElement;
pub use rat::{QQ, ZZ};
