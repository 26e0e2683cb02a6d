//! Strided amplitude kernels.
//!
//! Qudit 0 is the most significant base-`d` digit of an amplitude index, so
//! qudit `q` of an `n`-qudit register has stride `d^(n-1-q)`. Gates are never
//! lifted to the full `d^n x d^n` space: every output amplitude is a dot product
//! of one row of a small block with the `d^k` input amplitudes that share its
//! non-target digits.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

/// Below this many amplitudes the kernels stay on the calling thread.
const PARALLEL_THRESHOLD: usize = 1 << 14;

pub(crate) fn strides(dim: usize, n_qudits: usize) -> Vec<usize> {
    let mut out = vec![1usize; n_qudits];
    for q in (0..n_qudits.saturating_sub(1)).rev() {
        out[q] = out[q + 1] * dim;
    }
    out
}

#[inline]
fn digit(index: usize, stride: usize, dim: usize) -> usize {
    (index / stride) % dim
}

/// Applies a multiplexed operator: when the control qudits read the base-`d`
/// value `v`, `blocks[v]` acts on the targets (`None` is the identity).
///
/// With no controls, `blocks` holds a single entry and this is plain gate
/// application. Targets are ordered most significant first within the block.
pub(crate) fn apply_multiplexed(
    amplitudes: &[Complex64],
    dim: usize,
    n_qudits: usize,
    controls: &[usize],
    targets: &[usize],
    blocks: &[Option<DMatrix<Complex64>>],
) -> Vec<Complex64> {
    let stride = strides(dim, n_qudits);
    let target_strides: Vec<usize> = targets.iter().map(|&t| stride[t]).collect();
    let control_strides: Vec<usize> = controls.iter().map(|&c| stride[c]).collect();
    let local_dim = dim.pow(targets.len() as u32);

    // offset of each local basis state relative to the zero-digit base index
    let offsets: Vec<usize> = (0..local_dim)
        .map(|local| {
            let mut rem = local;
            let mut off = 0;
            for &s in target_strides.iter().rev() {
                off += (rem % dim) * s;
                rem /= dim;
            }
            off
        })
        .collect();

    let compute = |i: usize| -> Complex64 {
        let mut block_index = 0;
        for &s in &control_strides {
            block_index = block_index * dim + digit(i, s, dim);
        }
        match &blocks[block_index] {
            None => amplitudes[i],
            Some(m) => {
                let mut local = 0;
                let mut base = i;
                for &s in &target_strides {
                    let dg = digit(i, s, dim);
                    local = local * dim + dg;
                    base -= dg * s;
                }
                let mut acc = Complex64::new(0.0, 0.0);
                for (col, &off) in offsets.iter().enumerate() {
                    acc += m[(local, col)] * amplitudes[base + off];
                }
                acc
            }
        }
    };

    let len = amplitudes.len();
    if len >= PARALLEL_THRESHOLD {
        (0..len).into_par_iter().map(compute).collect()
    } else {
        (0..len).map(compute).collect()
    }
}

/// Marginal outcome probabilities of one qudit.
pub(crate) fn marginal(amplitudes: &[Complex64], dim: usize, stride: usize) -> Vec<f64> {
    let mut probs = vec![0.0; dim];
    for (i, a) in amplitudes.iter().enumerate() {
        probs[digit(i, stride, dim)] += a.norm_sqr();
    }
    probs
}
