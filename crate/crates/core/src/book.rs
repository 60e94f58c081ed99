//! The guide's code blocks, compiled and run as doc-tests. One module per
//! chapter so a failure points at its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}

#[doc = include_str!("../../../book/src/random-space.md")]
mod random_space {}

#[doc = include_str!("../../../book/src/basis.md")]
mod basis {}

#[doc = include_str!("../../../book/src/propagation.md")]
mod propagation {}

#[doc = include_str!("../../../book/src/indicator.md")]
mod indicator {}

#[doc = include_str!("../../../book/src/burgers.md")]
mod burgers {}

#[doc = include_str!("../../../book/src/reference.md")]
mod reference {}

#[doc = include_str!("../../../book/src/experiments.md")]
mod experiments {}
