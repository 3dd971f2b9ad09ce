#![forbid(unsafe_code)]

//! From-scratch CNN micro-framework for 7-class facial-expression
//! recognition.
//!
//! The crate provides a dense [`Tensor`] type, hand-written forward and
//! backward kernels for every layer of a factorized-convolution network
//! (3×1/1×3 convolutions, 2×2 max pooling, batch normalization, dense
//! layers), an Adam optimizer with weight decay, a manifest-driven image
//! pipeline, and training/evaluation harnesses. Everything is CPU-only and
//! deterministic for a fixed seed.
//!
//! Two precisions share one code path: `f32` for training and `f64` for
//! verification, where every backward pass can be checked against central
//! finite differences.
//!
//! ```
//! use fer_core::{build_fer_model, Mode, Tensor};
//!
//! let mut model = build_fer_model::<f32>(42);
//! let image = Tensor::zeros([1, 48, 48, 1]);
//! let probs = model.forward(image, Mode::Infer)?;
//! assert_eq!(probs.shape(), &[1, 7]);
//! let total: f32 = probs.data().iter().sum();
//! assert!((total - 1.0).abs() < 1e-6);
//! # Ok::<(), fer_core::Error>(())
//! ```
//!
//! A rendered guide lives in the `book/` directory of the repository; its
//! chapters are also compiled as doctests (see [`guide`]).

mod error;
mod scalar;
mod tensor;

pub mod ops;
pub mod rng;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use tensor::Tensor;
