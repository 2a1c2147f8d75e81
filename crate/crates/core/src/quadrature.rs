//! Globally adaptive Gauss–Kronrod (7/15) integration on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

pub const DEFAULT_MAX_INTERVALS: usize = 2000;

#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (k, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kron += w * pair;
        if k % 2 == 1 {
            gauss += WG[k / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kron * half,
        error: ((kron - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`, bisecting the
/// worst segment until the summed error estimate drops below `tol`.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64, max_intervals: usize) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    let mut heap = BinaryHeap::new();
    heap.push(kronrod(&f, a, b));
    loop {
        let error: f64 = heap.iter().map(|s| s.error).sum();
        if error <= tol {
            // sum in interval order so the result does not depend on heap layout
            let mut segs = heap.into_vec();
            segs.sort_by(|x, y| x.a.total_cmp(&y.a));
            let value = segs.iter().map(|s| s.value).sum();
            return Ok(Estimate {
                value,
                error,
                intervals: segs.len(),
            });
        }
        if heap.len() >= max_intervals {
            return Err(Error::QuadratureNotConverged {
                error,
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(kronrod(&f, worst.a, mid));
        heap.push(kronrod(&f, mid, worst.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polynomials_are_exact() {
        let est = integrate(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, 1e-13, 10).unwrap();
        assert_abs_diff_eq!(est.value, 10.5 - 9.0, epsilon = 1e-13);
        assert_eq!(est.intervals, 1);
    }

    #[test]
    fn gaussian_half_line() {
        let est = integrate(|x: f64| (-x * x).exp(), 0.0, 10.0, 1e-13, 500).unwrap();
        assert_abs_diff_eq!(est.value, std::f64::consts::PI.sqrt() / 2.0, epsilon = 1e-13);
    }

    #[test]
    fn reports_non_convergence() {
        let res = integrate(|x: f64| (1.0 / x).sin(), 1e-9, 1.0, 1e-14, 8);
        assert!(matches!(res, Err(Error::QuadratureNotConverged { intervals: 8, .. })));
    }
}
