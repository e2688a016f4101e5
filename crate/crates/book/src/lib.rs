//! Guide chapters, one module each, so that `cargo test` runs their listings.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/bohr.md")]
pub mod bohr {}

#[doc = include_str!("../../../book/src/spaces.md")]
pub mod spaces {}

#[doc = include_str!("../../../book/src/hardy.md")]
pub mod hardy {}

#[doc = include_str!("../../../book/src/random.md")]
pub mod random {}

#[doc = include_str!("../../../book/src/constants.md")]
pub mod constants {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
