//! Matrix-product kernels.
//!
//! Everything here works on densely packed row-major slices. The inner loops
//! run along contiguous rows of the right-hand operand and the output, which
//! is what lets the compiler vectorize them; the convolution in
//! [`super::conv`] is built on the same kernels.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// `c (m×p) += a (m×k) · b (k×p)`.
pub(crate) fn addmm<E: Scalar>(c: &mut [E], a: &[E], b: &[E], m: usize, k: usize, p: usize) {
    debug_assert_eq!(a.len(), m * k);
    debug_assert_eq!(b.len(), k * p);
    debug_assert_eq!(c.len(), m * p);
    for (a_row, c_row) in a.chunks_exact(k).zip(c.chunks_exact_mut(p)) {
        for (&coeff, b_row) in a_row.iter().zip(b.chunks_exact(p)) {
            for (out, &bv) in c_row.iter_mut().zip(b_row) {
                *out = *out + coeff * bv;
            }
        }
    }
}

/// `c (k×p) += aᵀ · b` where `a` is `(m×k)` and `b` is `(m×p)`.
pub(crate) fn addmm_at<E: Scalar>(c: &mut [E], a: &[E], b: &[E], m: usize, k: usize, p: usize) {
    debug_assert_eq!(a.len(), m * k);
    debug_assert_eq!(b.len(), m * p);
    debug_assert_eq!(c.len(), k * p);
    for (a_row, b_row) in a.chunks_exact(k).zip(b.chunks_exact(p)) {
        for (&coeff, c_row) in a_row.iter().zip(c.chunks_exact_mut(p)) {
            for (out, &bv) in c_row.iter_mut().zip(b_row) {
                *out = *out + coeff * bv;
            }
        }
    }
}

/// Row-major transpose of an `(rows×cols)` slice.
pub(crate) fn transpose<E: Scalar>(mat: &[E], rows: usize, cols: usize) -> Vec<E> {
    debug_assert_eq!(mat.len(), rows * cols);
    let mut out = vec![E::zero(); mat.len()];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = mat[r * cols + c];
        }
    }
    out
}

/// Standard matrix product of two rank-2 tensors.
pub fn matmul<E: Scalar>(a: &Tensor<E>, b: &Tensor<E>) -> Result<Tensor<E>> {
    let (m, k) = a.dims2("matmul lhs")?;
    let (k2, p) = b.dims2("matmul rhs")?;
    if k != k2 {
        return Err(Error::shape(
            "matmul inner dimensions",
            format!("[{m},{k}]·[{k},?]"),
            format!("[{m},{k}]·[{k2},{p}]"),
        ));
    }
    let mut out = Tensor::zeros([m, p]);
    // Output rows are independent, so parallelizing over row blocks is
    // deterministic. Small products are not worth the scheduling cost.
    const PAR_THRESHOLD: usize = 1 << 16;
    if m * k * p >= PAR_THRESHOLD && m > 1 {
        use rayon::prelude::*;
        let rows_per_block = m.div_ceil(2 * rayon::current_num_threads().max(1)).max(1);
        out.data_mut()
            .par_chunks_mut(rows_per_block * p)
            .zip(a.data().par_chunks(rows_per_block * k))
            .for_each(|(c_block, a_block)| {
                let rows = a_block.len() / k;
                addmm(c_block, a_block, b.data(), rows, k, p);
            });
    } else {
        addmm(out.data_mut(), a.data(), b.data(), m, k, p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_worked_product() {
        // [[1,2],[3,4]] · [[5],[6]] = [[17],[39]]
        let a = Tensor::<f64>::new([2, 2], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let b = Tensor::<f64>::new([2, 1], vec![5.0, 6.0]).unwrap();
        let c = matmul(&a, &b).unwrap();
        assert_eq!(c.shape(), &[2, 1]);
        assert_eq!(c.data(), &[17.0, 39.0]);
    }

    #[test]
    fn identity_is_neutral() {
        let a = Tensor::<f64>::from_fn([3, 4], |i| (i as f64) * 0.5 - 3.0);
        let id = Tensor::<f64>::from_fn([4, 4], |i| if i % 5 == 0 { 1.0 } else { 0.0 });
        let c = matmul(&a, &id).unwrap();
        assert_eq!(c.data(), a.data());
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let a = Tensor::<f32>::zeros([2, 3]);
        let b = Tensor::<f32>::zeros([4, 2]);
        assert!(matmul(&a, &b).is_err());
    }

    #[test]
    fn transpose_round_trip() {
        let m: Vec<f64> = (0..12).map(|i| i as f64).collect();
        let t = transpose(&m, 3, 4);
        assert_eq!(t[0], 0.0);
        assert_eq!(t[1], 4.0); // old (1,0)
        assert_eq!(transpose(&t, 4, 3), m);
    }
}
