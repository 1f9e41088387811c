pub mod algebra;
pub mod certificate;
pub mod error;
pub mod gosper;
pub mod oracle;
pub mod ore;
pub mod parse;
pub mod term;
pub mod wz;
pub mod zeilberger;

pub use error::{Error, ParseError, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/terms.md")]
    mod terms {}
    #[doc = include_str!("../../../book/src/gosper.md")]
    mod gosper {}
    #[doc = include_str!("../../../book/src/telescoping.md")]
    mod telescoping {}
    #[doc = include_str!("../../../book/src/wz.md")]
    mod wz {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
}
