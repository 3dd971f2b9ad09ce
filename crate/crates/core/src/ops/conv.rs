//! Valid (unpadded) 2-D convolution, forward and backward.
//!
//! Layout is `[batch, height, width, channel]` with stride 1 and no padding,
//! so the output spatial size is `input − kernel + 1` on each axis. Kernels
//! are stored `[kh, kw, cin, cout]`.
//!
//! Rather than materializing an im2col buffer, the convolution is evaluated
//! as one small matrix product per kernel tap and output row: for a fixed
//! tap `(a, b)` and output row `i`, the input pixels form a contiguous
//! `(out_w × cin)` block and the tap weights a `(cin × cout)` block, so the
//! accumulation is a plain `addmm` over slices. Samples are processed in
//! parallel; each writes only its own output slice, so results do not depend
//! on thread scheduling.

use rayon::prelude::*;

use super::matmul::{addmm, addmm_at, transpose};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

struct ConvDims {
    n: usize,
    h: usize,
    w: usize,
    cin: usize,
    kh: usize,
    kw: usize,
    cout: usize,
    oh: usize,
    ow: usize,
}

fn check_dims<E: Scalar>(
    input: &Tensor<E>,
    kernels: &Tensor<E>,
    bias: Option<&Tensor<E>>,
) -> Result<ConvDims> {
    let (n, h, w, cin) = input.dims4("conv2d input")?;
    let (kh, kw, kcin, cout) = kernels.dims4("conv2d kernels")?;
    if kcin != cin {
        return Err(Error::shape(
            "conv2d channel agreement",
            format!("kernels [{kh},{kw},{cin},{cout}] for input {:?}", input.shape()),
            kernels.shape(),
        ));
    }
    if kh > h || kw > w {
        return Err(Error::shape(
            "conv2d spatial extent (valid convolution needs kernel ≤ input)",
            format!("kernel at most [{h},{w}]"),
            format!("[{kh},{kw}] on input {:?}", input.shape()),
        ));
    }
    if let Some(bias) = bias {
        if bias.shape() != [cout] {
            return Err(Error::shape("conv2d bias", [cout], bias.shape()));
        }
    }
    Ok(ConvDims {
        n,
        h,
        w,
        cin,
        kh,
        kw,
        cout,
        oh: h - kh + 1,
        ow: w - kw + 1,
    })
}

/// Stride-1 valid convolution:
/// `out[n,i,j,o] = bias[o] + Σ_{a,b,c} input[n,i+a,j+b,c] · kernels[a,b,c,o]`.
pub fn conv2d_valid<E: Scalar>(
    input: &Tensor<E>,
    kernels: &Tensor<E>,
    bias: &Tensor<E>,
) -> Result<Tensor<E>> {
    let d = check_dims(input, kernels, Some(bias))?;
    let mut out = Tensor::zeros([d.n, d.oh, d.ow, d.cout]);

    let in_stride = d.h * d.w * d.cin;
    let out_stride = d.oh * d.ow * d.cout;
    out.data_mut()
        .par_chunks_mut(out_stride)
        .zip(input.data().par_chunks(in_stride))
        .for_each(|(out_n, in_n)| {
            for pixel in out_n.chunks_exact_mut(d.cout) {
                pixel.copy_from_slice(bias.data());
            }
            for a in 0..d.kh {
                for b in 0..d.kw {
                    let tap = &kernels.data()
                        [(a * d.kw + b) * d.cin * d.cout..][..d.cin * d.cout];
                    for i in 0..d.oh {
                        let src = &in_n[((i + a) * d.w + b) * d.cin..][..d.ow * d.cin];
                        let dst = &mut out_n[i * d.ow * d.cout..][..d.ow * d.cout];
                        addmm(dst, src, tap, d.ow, d.cin, d.cout);
                    }
                }
            }
        });
    Ok(out)
}

/// Exact partial derivatives of `Σ (grad_out ⊙ conv2d_valid(input, kernels, bias))`
/// with respect to the input, the kernels, and the bias.
pub fn conv2d_backward<E: Scalar>(
    input: &Tensor<E>,
    kernels: &Tensor<E>,
    grad_out: &Tensor<E>,
) -> Result<(Tensor<E>, Tensor<E>, Tensor<E>)> {
    let d = check_dims(input, kernels, None)?;
    let expected = [d.n, d.oh, d.ow, d.cout];
    if grad_out.shape() != expected {
        return Err(Error::shape("conv2d_backward grad_out", expected, grad_out.shape()));
    }

    // Bias gradient: plain sum of grad_out over batch and space.
    let mut grad_bias = Tensor::zeros([d.cout]);
    for row in grad_out.data().chunks_exact(d.cout) {
        for (g, &v) in grad_bias.data_mut().iter_mut().zip(row) {
            *g += v;
        }
    }

    let in_stride = d.h * d.w * d.cin;
    let out_stride = d.oh * d.ow * d.cout;

    // Input gradient: per tap, the transposed weights route each grad_out
    // row back onto the (shifted) input block it came from.
    let taps_t: Vec<Vec<E>> = (0..d.kh * d.kw)
        .map(|t| transpose(&kernels.data()[t * d.cin * d.cout..][..d.cin * d.cout], d.cin, d.cout))
        .collect();
    let mut grad_input = Tensor::zeros(input.shape().to_vec());
    grad_input
        .data_mut()
        .par_chunks_mut(in_stride)
        .zip(grad_out.data().par_chunks(out_stride))
        .for_each(|(gin_n, gout_n)| {
            for a in 0..d.kh {
                for b in 0..d.kw {
                    let tap_t = &taps_t[a * d.kw + b];
                    for i in 0..d.oh {
                        let g = &gout_n[i * d.ow * d.cout..][..d.ow * d.cout];
                        let dst = &mut gin_n[((i + a) * d.w + b) * d.cin..][..d.ow * d.cin];
                        addmm(dst, g, tap_t, d.ow, d.cout, d.cin);
                    }
                }
            }
        });

    // Kernel gradient: accumulated over a fixed number of sample blocks so
    // the summation order (and hence the result) is independent of the
    // thread pool.
    let blocks = d.n.min(8);
    let per_block = d.n.div_ceil(blocks);
    let partials: Vec<Vec<E>> = (0..blocks)
        .into_par_iter()
        .map(|blk| {
            let mut acc = vec![E::zero(); kernels.len()];
            let lo = blk * per_block;
            let hi = ((blk + 1) * per_block).min(d.n);
            for n in lo..hi {
                let in_n = &input.data()[n * in_stride..][..in_stride];
                let gout_n = &grad_out.data()[n * out_stride..][..out_stride];
                for a in 0..d.kh {
                    for b in 0..d.kw {
                        let tap_acc = &mut acc[(a * d.kw + b) * d.cin * d.cout..][..d.cin * d.cout];
                        for i in 0..d.oh {
                            let src = &in_n[((i + a) * d.w + b) * d.cin..][..d.ow * d.cin];
                            let g = &gout_n[i * d.ow * d.cout..][..d.ow * d.cout];
                            addmm_at(tap_acc, src, g, d.ow, d.cin, d.cout);
                        }
                    }
                }
            }
            acc
        })
        .collect();
    let mut grad_kernels = Tensor::zeros(kernels.shape().to_vec());
    for partial in partials {
        for (g, v) in grad_kernels.data_mut().iter_mut().zip(partial) {
            *g += v;
        }
    }

    Ok((grad_input, grad_kernels, grad_bias))
}
