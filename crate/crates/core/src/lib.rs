pub mod channel;
pub mod error;
pub mod link;
pub mod quadrature;
pub mod sim;
pub mod special;
pub mod sum;
pub mod units;
pub mod validate;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/special-functions.md")]
    mod special_functions {}
    #[doc = include_str!("../../../book/src/channel-models.md")]
    mod channel_models {}
    #[doc = include_str!("../../../book/src/link-analytics.md")]
    mod link_analytics {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
}
