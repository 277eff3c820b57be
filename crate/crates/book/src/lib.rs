//! Guide chapters, compiled as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/fields-and-polynomials.md")]
pub mod fields_and_polynomials {}
#[doc = include_str!("../../../book/src/nonsingularity.md")]
pub mod nonsingularity {}
#[doc = include_str!("../../../book/src/tangent-sections.md")]
pub mod tangent_sections {}
#[doc = include_str!("../../../book/src/lines.md")]
pub mod lines {}
#[doc = include_str!("../../../book/src/bounds.md")]
pub mod bounds {}
#[doc = include_str!("../../../book/src/search.md")]
pub mod search {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
