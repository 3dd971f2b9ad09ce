//! Dense row-major tensors.
//!
//! A [`Tensor`] is a shape plus a flat buffer. Image batches use the
//! `[batch, height, width, channel]` axis order, so the channel axis is the
//! fastest-moving one; the convolution kernels depend on that layout.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense N-dimensional array of real numbers, stored row-major.
///
/// Invariants: every dimension is at least 1 and `data.len()` equals the
/// product of the dimensions.
#[derive(Clone, PartialEq)]
pub struct Tensor<E: Scalar = f32> {
    shape: Vec<usize>,
    data: Vec<E>,
}

impl<E: Scalar> Tensor<E> {
    /// Builds a tensor from a shape and matching flat data.
    pub fn new(shape: impl Into<Vec<usize>>, data: Vec<E>) -> Result<Self> {
        let shape = shape.into();
        if shape.is_empty() || shape.iter().any(|&d| d == 0) {
            return Err(Error::invalid(format!(
                "tensor dimensions must all be at least 1, got {shape:?}"
            )));
        }
        let expected: usize = shape.iter().product();
        if data.len() != expected {
            return Err(Error::shape(
                "Tensor::new data length",
                expected,
                data.len(),
            ));
        }
        Ok(Tensor { shape, data })
    }

    /// All-zeros tensor. Panics if any dimension is 0 (a programming error,
    /// not a data error).
    pub fn zeros(shape: impl Into<Vec<usize>>) -> Self {
        Self::filled(shape, E::zero())
    }

    /// Constant tensor.
    pub fn filled(shape: impl Into<Vec<usize>>, value: E) -> Self {
        let shape = shape.into();
        assert!(
            !shape.is_empty() && shape.iter().all(|&d| d >= 1),
            "tensor dimensions must all be at least 1, got {shape:?}"
        );
        let len = shape.iter().product();
        Tensor {
            shape,
            data: vec![value; len],
        }
    }

    /// Tensor whose element at flat index `i` is `f(i)`.
    pub fn from_fn(shape: impl Into<Vec<usize>>, mut f: impl FnMut(usize) -> E) -> Self {
        let mut out = Self::zeros(shape);
        for (i, v) in out.data.iter_mut().enumerate() {
            *v = f(i);
        }
        out
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    /// Total number of elements.
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [E] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<E> {
        self.data
    }

    /// Reinterprets the buffer under a new shape of identical volume.
    pub fn reshape(self, shape: impl Into<Vec<usize>>) -> Result<Self> {
        Tensor::new(shape, self.data)
    }

    /// The four dimensions of a rank-4 tensor, or an error naming `context`.
    pub fn dims4(&self, context: &str) -> Result<(usize, usize, usize, usize)> {
        match self.shape[..] {
            [n, h, w, c] => Ok((n, h, w, c)),
            _ => Err(Error::shape(context, "rank-4 [n,h,w,c]", &self.shape)),
        }
    }

    /// The two dimensions of a rank-2 tensor, or an error naming `context`.
    pub fn dims2(&self, context: &str) -> Result<(usize, usize)> {
        match self.shape[..] {
            [r, c] => Ok((r, c)),
            _ => Err(Error::shape(context, "rank-2 [rows,cols]", &self.shape)),
        }
    }

    /// Flat offset of `[n, h, w, c]` in a rank-4 tensor.
    #[inline(always)]
    pub fn idx4(&self, n: usize, h: usize, w: usize, c: usize) -> usize {
        debug_assert_eq!(self.rank(), 4);
        ((n * self.shape[1] + h) * self.shape[2] + w) * self.shape[3] + c
    }

    /// Element at a multi-index; for tests and small-scale inspection.
    pub fn at(&self, index: &[usize]) -> E {
        assert_eq!(index.len(), self.rank(), "index rank mismatch");
        let mut flat = 0;
        for (i, (&ix, &dim)) in index.iter().zip(&self.shape).enumerate() {
            assert!(ix < dim, "index {ix} out of bounds for axis {i} (dim {dim})");
            flat = flat * dim + ix;
        }
        self.data[flat]
    }

    /// Elementwise map into a new tensor.
    pub fn map(&self, f: impl Fn(E) -> E) -> Self {
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Elementwise combination of two same-shaped tensors.
    pub fn zip_map(&self, other: &Self, f: impl Fn(E, E) -> E) -> Result<Self> {
        if self.shape != other.shape {
            return Err(Error::shape("zip_map", &self.shape, &other.shape));
        }
        Ok(Tensor {
            shape: self.shape.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Casts every element through `f64` into another precision.
    pub fn cast<F: Scalar>(&self) -> Tensor<F> {
        Tensor {
            shape: self.shape.clone(),
            data: self.data.iter().map(|&v| F::from_f64(v.to_f64())).collect(),
        }
    }

    /// True if every element is finite.
    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

impl<E: Scalar> std::fmt::Debug for Tensor<E> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Tensor<{}>{:?}", E::NAME, self.shape)?;
        if self.len() <= 16 {
            write!(f, " {:?}", self.data)
        } else {
            write!(f, " [{} elements]", self.len())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_validates_length() {
        let err = Tensor::<f32>::new([2, 3], vec![0.0; 5]).unwrap_err();
        assert!(err.to_string().contains("expected 6"));
        assert!(Tensor::<f32>::new([2, 3], vec![0.0; 6]).is_ok());
    }

    #[test]
    fn new_rejects_zero_dimension() {
        assert!(Tensor::<f32>::new([2, 0], vec![]).is_err());
        assert!(Tensor::<f32>::new([] as [usize; 0], vec![]).is_err());
    }

    #[test]
    fn indexing_is_row_major_nhwc() {
        // Shape [1,2,3,4]: channel moves fastest, then width, then height.
        let t = Tensor::<f32>::from_fn([1, 2, 3, 4], |i| i as f32);
        assert_eq!(t.at(&[0, 0, 0, 0]), 0.0);
        assert_eq!(t.at(&[0, 0, 0, 3]), 3.0);
        assert_eq!(t.at(&[0, 0, 1, 0]), 4.0);
        assert_eq!(t.at(&[0, 1, 0, 0]), 12.0);
        assert_eq!(t.idx4(0, 1, 2, 3), 23);
    }

    #[test]
    fn reshape_preserves_order() {
        let t = Tensor::<f64>::from_fn([2, 6], |i| i as f64);
        let r = t.clone().reshape([3, 4]).unwrap();
        assert_eq!(r.data(), t.data());
        assert!(r.clone().reshape([5, 5]).is_err());
    }

    #[test]
    fn cast_round_trips_small_integers() {
        let t = Tensor::<f32>::from_fn([4], |i| i as f32);
        let d: Tensor<f64> = t.cast();
        let back: Tensor<f32> = d.cast();
        assert_eq!(back.data(), t.data());
    }
}
