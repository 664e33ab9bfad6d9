//! The narrative guide, compiled so its code blocks run as doc-tests.
//!
//! The chapters live in `book/src` (buildable with `mdbook build book`);
//! including them here means `cargo test --doc` executes every snippet,
//! so the book and the library cannot drift apart.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/root-systems.md")]
pub mod root_systems {}

#[doc = include_str!("../../../book/src/affine-weyl-groups.md")]
pub mod affine_weyl_groups {}

#[doc = include_str!("../../../book/src/blocks-and-weights.md")]
pub mod blocks_and_weights {}

#[doc = include_str!("../../../book/src/kazhdan-lusztig.md")]
pub mod kazhdan_lusztig {}

#[doc = include_str!("../../../book/src/ext-formulas.md")]
pub mod ext_formulas {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli_reference {}
