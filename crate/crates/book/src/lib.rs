//! Compiles every chapter of the guide in `book/src` as documentation so
//! that its code samples run under `cargo test`.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}

#[doc = include_str!("../../../book/src/graphs.md")]
mod graphs {}

#[doc = include_str!("../../../book/src/fit.md")]
mod fit {}

#[doc = include_str!("../../../book/src/coloring.md")]
mod coloring {}

#[doc = include_str!("../../../book/src/arrows.md")]
mod arrows {}

#[doc = include_str!("../../../book/src/regularity.md")]
mod regularity {}

#[doc = include_str!("../../../book/src/witness.md")]
mod witness {}

#[doc = include_str!("../../../book/src/cli.md")]
mod cli {}
