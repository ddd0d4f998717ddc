//! The two inverse constructions: unique representation bases for the
//! integers, and asymptotic bases of order `h` whose unordered
//! representation function is a prescribed `f`.
//!
//! Both build an increasing chain of finite sets one step at a time and
//! check after every step the invariants their correctness argument relies
//! on. A failed check is reported as [`crate::Error::Internal`].

mod fundrep;
mod target;
mod urb;

pub use fundrep::{
    fundrep_build, fundrep_step, verify_fundrep, FundRepState, FundRepStep, FundRepVerification,
};
pub use target::{schedule_targets, Schedule, TargetFn, TargetValue};
pub use urb::{
    sparsity_checkpoints, urb_build, urb_step, verify_urb, Checkpoint, Phi, Sparsity, UrbState,
    UrbStep, UrbVerification, DEFAULT_SEARCH_BUDGET,
};
