//! Gamma, generalized hypergeometric and Meijer-G functions.

pub mod contour;
pub mod gamma;
pub mod hypergeometric;
pub mod meijer;

pub use contour::meijer_g_oracle;
pub use gamma::{gamma, ln_gamma, rgamma, SignedLog};
pub use hypergeometric::gen_hypergeometric;
pub use meijer::{meijer_g, meijer_g_with, Evaluation, MeijerGOptions, MeijerGSpec, Method};
