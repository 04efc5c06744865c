//! LTL and TCL front-ends, each with its own reference semantics and a
//! translation into TEL.

mod block;
mod ltl;
mod tcl;

pub use block::{block_closed, block_open};
pub use ltl::{ltl_eval, ltl_to_tel, Ltl};
pub use tcl::{tcl_eval, tcl_to_tel, AllenKind, Tcl};
