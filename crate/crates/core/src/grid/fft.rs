//! FFT plans for the periodic grid. 2D transforms run row/column passes;
//! with the `parallel` feature the independent lines are processed on rayon.

use crate::util::par;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

pub struct FftPlans {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FftPlans {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftPlans").field("n", &self.n).finish()
    }
}

impl FftPlans {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        FftPlans { n, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }

    pub fn forward_1d(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.n);
        self.forward.process(buf);
    }

    pub fn inverse_1d(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.n);
        self.inverse.process(buf);
    }

    pub fn forward_2d(&self, buf: &mut [Complex64]) {
        self.transform_2d(buf, true);
    }

    pub fn inverse_2d(&self, buf: &mut [Complex64]) {
        self.transform_2d(buf, false);
    }

    fn transform_2d(&self, buf: &mut [Complex64], fwd: bool) {
        let n = self.n;
        debug_assert_eq!(buf.len(), n * n);
        let plan = if fwd { &self.forward } else { &self.inverse };
        // rows
        par::for_each_chunk(buf, n, |_, row| {
            let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
            plan.process_with_scratch(row, &mut scratch);
        });
        transpose_square(buf, n);
        // columns (now rows)
        par::for_each_chunk(buf, n, |_, row| {
            let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
            plan.process_with_scratch(row, &mut scratch);
        });
        transpose_square(buf, n);
    }
}

fn transpose_square(buf: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            buf.swap(i * n + j, j * n + i);
        }
    }
}
