//! Channel codes: Reed-Solomon, LDPC, and the parity search that sizes them.

pub mod gf;
pub mod ldpc;
pub mod optimize;
pub mod rs;

pub use gf::GaloisField;
pub use ldpc::{LdpcCode, LdpcDecoded};
pub use optimize::{optimize_parity, write_plans_csv, Evaluation, ParityPlan, PlanOutcome};
pub use rs::{RsCode, RsDecoded};
