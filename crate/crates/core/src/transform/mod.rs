//! Circuit transforms: measured reduction factors applied to profiles and a
//! local peephole canceller for explicit gate lists.

mod peephole;
mod reduction;

pub use peephole::peephole_cancel;
pub use reduction::{apply_reduction, ReductionFactors};
