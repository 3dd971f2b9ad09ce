//! Stateful layer types with forward and backward passes.
//!
//! Each layer owns its parameters and, after a training-mode forward pass,
//! whatever it needs to run the matching backward pass. Backward passes
//! return plain chain-rule gradients (summed over the batch); the 1/N
//! averaging lives in the loss gradient, so the learning rate is stable
//! under batch-size changes.

mod activation;
mod batchnorm;
mod conv;
mod dense;
mod flatten;
mod init;
mod pool;

pub use activation::{relu, relu_backward, softmax_rows, Relu, Softmax};
pub use batchnorm::BatchNorm;
pub use conv::Conv2d;
pub use dense::Dense;
pub use flatten::{flatten, unflatten, Flatten};
pub use init::he_gaussian;
pub use pool::MaxPool;

/// Whether a forward pass is part of training or inference.
///
/// Training-mode forwards cache intermediates for the backward pass and let
/// batch normalization use (and update) batch statistics; inference-mode
/// forwards are pure functions of the input and the stored state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Train,
    Infer,
}
