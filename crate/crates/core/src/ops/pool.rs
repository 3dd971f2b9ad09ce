//! 2×2 max pooling with stride 2.
//!
//! Windows are disjoint; a trailing odd row or column is dropped (no
//! padding). The forward pass records where each window maximum came from so
//! the backward pass can route gradients without re-scanning, and ties break
//! toward the lowest row-major index to keep the backward pass deterministic.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// Provenance of each pooled value: the flat within-sample index of the
/// window maximum, as produced by a specific forward call.
#[derive(Clone, Debug)]
pub struct ArgmaxMap {
    input_shape: [usize; 4],
    output_shape: [usize; 4],
    indices: Vec<u32>,
}

impl ArgmaxMap {
    pub fn input_shape(&self) -> [usize; 4] {
        self.input_shape
    }

    pub fn output_shape(&self) -> [usize; 4] {
        self.output_shape
    }
}

/// Max over disjoint 2×2 windows, plus the argmax map for the backward pass.
pub fn maxpool2d<E: Scalar>(input: &Tensor<E>) -> Result<(Tensor<E>, ArgmaxMap)> {
    let (n, h, w, c) = input.dims4("maxpool2d input")?;
    if h < 2 || w < 2 {
        return Err(Error::shape(
            "maxpool2d spatial extent (needs at least a 2×2 window)",
            "[n,≥2,≥2,c]",
            input.shape(),
        ));
    }
    let (oh, ow) = (h / 2, w / 2);
    let mut out = Tensor::zeros([n, oh, ow, c]);
    let mut indices = vec![0u32; n * oh * ow * c];

    let in_stride = h * w * c;
    let out_stride = oh * ow * c;
    out.data_mut()
        .par_chunks_mut(out_stride)
        .zip(indices.par_chunks_mut(out_stride))
        .zip(input.data().par_chunks(in_stride))
        .for_each(|((out_n, idx_n), in_n)| {
            for i in 0..oh {
                for j in 0..ow {
                    let base = (i * ow + j) * c;
                    for ch in 0..c {
                        let mut best_idx = ((2 * i) * w + 2 * j) * c + ch;
                        let mut best = in_n[best_idx];
                        // Row-major candidate order; strict comparison keeps
                        // the first (lowest) index on ties.
                        for (di, dj) in [(0, 1), (1, 0), (1, 1)] {
                            let idx = ((2 * i + di) * w + 2 * j + dj) * c + ch;
                            if in_n[idx] > best {
                                best = in_n[idx];
                                best_idx = idx;
                            }
                        }
                        out_n[base + ch] = best;
                        idx_n[base + ch] = best_idx as u32;
                    }
                }
            }
        });

    let map = ArgmaxMap {
        input_shape: [n, h, w, c],
        output_shape: [n, oh, ow, c],
        indices,
    };
    Ok((out, map))
}

/// Routes `grad_out` back to each window's recorded argmax position; every
/// other input position receives zero.
pub fn maxpool2d_backward<E: Scalar>(map: &ArgmaxMap, grad_out: &Tensor<E>) -> Result<Tensor<E>> {
    if grad_out.shape() != map.output_shape {
        return Err(Error::shape(
            "maxpool2d_backward grad_out (stale or mismatched argmax map?)",
            map.output_shape,
            grad_out.shape(),
        ));
    }
    let [_, h, w, c] = map.input_shape;
    let [_, oh, ow, oc] = map.output_shape;
    let in_stride = h * w * c;
    let out_stride = oh * ow * oc;

    let mut grad_input = Tensor::zeros(map.input_shape.to_vec());
    grad_input
        .data_mut()
        .par_chunks_mut(in_stride)
        .zip(grad_out.data().par_chunks(out_stride))
        .zip(map.indices.par_chunks(out_stride))
        .for_each(|((gin_n, gout_n), idx_n)| {
            for (&g, &idx) in gout_n.iter().zip(idx_n) {
                gin_n[idx as usize] += g;
            }
        });
    Ok(grad_input)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_field_pools_to_the_constant() {
        let input = Tensor::<f32>::filled([1, 4, 4, 1], 3.5);
        let (out, _) = maxpool2d(&input).unwrap();
        assert_eq!(out.shape(), &[1, 2, 2, 1]);
        assert!(out.data().iter().all(|&v| v == 3.5));
    }

    #[test]
    fn odd_trailing_row_and_column_are_dropped() {
        let input = Tensor::<f32>::zeros([1, 23, 23, 64]);
        let (out, _) = maxpool2d(&input).unwrap();
        assert_eq!(out.shape(), &[1, 11, 11, 64]);
    }

    #[test]
    fn rejects_inputs_smaller_than_a_window() {
        assert!(maxpool2d(&Tensor::<f32>::zeros([1, 1, 4, 1])).is_err());
        assert!(maxpool2d(&Tensor::<f32>::zeros([1, 4, 1, 1])).is_err());
    }

    #[test]
    fn backward_routes_one_unit_per_window() {
        // Distinct values: each window has a unique maximum.
        let input = Tensor::<f64>::from_fn([1, 4, 4, 1], |i| (i * 7 % 16) as f64);
        let (out, map) = maxpool2d(&input).unwrap();
        let grad_out = Tensor::<f64>::filled(out.shape().to_vec(), 1.0);
        let gin = maxpool2d_backward(&map, &grad_out).unwrap();
        let ones = gin.data().iter().filter(|&&v| v == 1.0).count();
        let zeros = gin.data().iter().filter(|&&v| v == 0.0).count();
        assert_eq!(ones, 4);
        assert_eq!(zeros, 12);
    }

    #[test]
    fn ties_route_to_the_top_left_element() {
        let input = Tensor::<f64>::filled([1, 2, 2, 1], 5.0);
        let (_, map) = maxpool2d(&input).unwrap();
        let grad_out = Tensor::<f64>::filled([1, 1, 1, 1], 1.0);
        let gin = maxpool2d_backward(&map, &grad_out).unwrap();
        assert_eq!(gin.data(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn backward_rejects_mismatched_map() {
        let (_, map) = maxpool2d(&Tensor::<f64>::zeros([1, 4, 4, 2])).unwrap();
        let wrong = Tensor::<f64>::zeros([1, 2, 2, 3]);
        assert!(maxpool2d_backward(&map, &wrong).is_err());
    }
}
