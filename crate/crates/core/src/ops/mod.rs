//! Raw numerical kernels: convolution, pooling, and matrix products.
//!
//! These are pure functions of their inputs. The stateful layer wrappers in
//! [`crate::layers`] add caching and parameter management on top.

mod conv;
mod matmul;
mod pool;

pub use conv::{conv2d_backward, conv2d_valid};
pub use matmul::matmul;
pub(crate) use matmul::{addmm, addmm_at, transpose};
pub use pool::{maxpool2d, maxpool2d_backward, ArgmaxMap};
