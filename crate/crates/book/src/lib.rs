//! The chapters of the guide in `book/src`, one module each, so that
//! `cargo test --doc` runs every snippet.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/jump-processes.md")]
pub mod jump_processes {}
#[doc = include_str!("../../../book/src/mclennan.md")]
pub mod mclennan {}
#[doc = include_str!("../../../book/src/limits.md")]
pub mod limits {}
#[doc = include_str!("../../../book/src/path-space.md")]
pub mod path_space {}
#[doc = include_str!("../../../book/src/response.md")]
pub mod response {}
#[doc = include_str!("../../../book/src/lattice-gas.md")]
pub mod lattice_gas {}
#[doc = include_str!("../../../book/src/rlc.md")]
pub mod rlc {}
#[doc = include_str!("../../../book/src/diffusion.md")]
pub mod diffusion {}
#[doc = include_str!("../../../book/src/coupling.md")]
pub mod coupling {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
