//! Cooperative trace repair of Reed-Solomon codes over GF(p^(st)) with
//! subsymbols in GF(p^s), for one, two and three erasures.

pub mod cli;
pub mod error;
pub mod field;
pub mod linalg;
pub mod repair;
pub mod report;
pub mod rs;
pub mod simnet;

pub use error::{Error, Result};
pub use field::{Elem, SubElem, Tower};
pub use repair::{classify, plan, Branch, FailurePattern, RepairPlan};
pub use rs::{Codeword, Message, RsCode};
pub use simnet::{run_repair, sweep, verify_against_oracle, MessageSource, Transcript};
