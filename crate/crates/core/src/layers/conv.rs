//! Convolution layer.

use crate::error::{Error, Result};
use crate::layers::{he_gaussian, Mode};
use crate::ops::{conv2d_backward, conv2d_valid};
use crate::rng::seeded;
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// Stride-1 valid convolution with learnable kernels and per-channel bias.
///
/// Kernels are `[kh, kw, cin, cout]`. In training mode the forward pass
/// keeps the input, which the backward pass consumes.
pub struct Conv2d<E: Scalar> {
    pub kernels: Tensor<E>,
    pub bias: Tensor<E>,
    cached_input: Option<Tensor<E>>,
}

/// Gradients produced by [`Conv2d::backward`].
pub struct Conv2dGrads<E: Scalar> {
    pub input: Tensor<E>,
    pub kernels: Tensor<E>,
    pub bias: Tensor<E>,
}

impl<E: Scalar> Conv2d<E> {
    /// Zero-initialized layer; call [`Conv2d::init_params`] before training.
    pub fn new(kh: usize, kw: usize, cin: usize, cout: usize) -> Self {
        Conv2d {
            kernels: Tensor::zeros([kh, kw, cin, cout]),
            bias: Tensor::zeros([cout]),
            cached_input: None,
        }
    }

    /// He-Gaussian kernels (fan-in = kh·kw·cin), zero bias.
    pub fn init_params(&mut self, seed: u64) {
        let &[kh, kw, cin, cout] = self.kernels.shape() else {
            unreachable!("kernels are rank-4 by construction")
        };
        let mut rng = seeded(seed, 0);
        let data = he_gaussian(&mut rng, kh * kw * cin, kh * kw * cin * cout);
        self.kernels = Tensor::new([kh, kw, cin, cout], data).expect("shape matches draw");
        self.bias = Tensor::zeros([cout]);
    }

    pub fn forward(&mut self, input: Tensor<E>, mode: Mode) -> Result<Tensor<E>> {
        let out = conv2d_valid(&input, &self.kernels, &self.bias)?;
        self.cached_input = match mode {
            Mode::Train => Some(input),
            Mode::Infer => None,
        };
        Ok(out)
    }

    /// Inference-only forward that leaves the layer untouched.
    pub fn forward_infer(&self, input: &Tensor<E>) -> Result<Tensor<E>> {
        conv2d_valid(input, &self.kernels, &self.bias)
    }

    /// Consumes the cached input from the preceding training forward.
    pub fn backward(&mut self, grad_out: &Tensor<E>) -> Result<Conv2dGrads<E>> {
        let input = self.cached_input.take().ok_or_else(|| {
            Error::invalid("conv backward called without a preceding training-mode forward")
        })?;
        let (input_grad, kernel_grad, bias_grad) =
            conv2d_backward(&input, &self.kernels, grad_out)?;
        Ok(Conv2dGrads {
            input: input_grad,
            kernels: kernel_grad,
            bias: bias_grad,
        })
    }

    pub fn has_cached_input(&self) -> bool {
        self.cached_input.is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_parameters_give_zero_output() {
        let mut layer = Conv2d::<f32>::new(3, 1, 1, 4);
        let out = layer
            .forward(Tensor::filled([1, 5, 5, 1], 2.0), Mode::Infer)
            .unwrap();
        assert!(out.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn phase_one_shape() {
        let mut layer = Conv2d::<f32>::new(3, 1, 1, 64);
        layer.init_params(0);
        let out = layer
            .forward(Tensor::zeros([1, 48, 48, 1]), Mode::Train)
            .unwrap();
        assert_eq!(out.shape(), &[1, 46, 48, 64]);
        assert!(layer.has_cached_input());
    }

    #[test]
    fn backward_requires_training_forward() {
        let mut layer = Conv2d::<f64>::new(1, 1, 1, 1);
        let grad = Tensor::zeros([1, 2, 2, 1]);
        assert!(layer.backward(&grad).is_err());

        layer
            .forward(Tensor::zeros([1, 2, 2, 1]), Mode::Infer)
            .unwrap();
        assert!(layer.backward(&grad).is_err(), "infer mode must not cache");

        layer
            .forward(Tensor::zeros([1, 2, 2, 1]), Mode::Train)
            .unwrap();
        assert!(layer.backward(&grad).is_ok());
        assert!(layer.backward(&grad).is_err(), "cache is consumed");
    }

    #[test]
    fn init_is_seed_deterministic_with_zero_bias() {
        let mut a = Conv2d::<f32>::new(3, 1, 8, 16);
        let mut b = Conv2d::<f32>::new(3, 1, 8, 16);
        a.init_params(77);
        b.init_params(77);
        assert_eq!(a.kernels.data(), b.kernels.data());
        assert!(a.bias.data().iter().all(|&v| v == 0.0));
    }
}
