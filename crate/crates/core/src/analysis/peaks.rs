use crate::scalar::Scalar;

/// A dominant excursion of a periodic signal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Peak<T> {
    /// Sample index of the largest magnitude within the excursion.
    pub index: usize,
    /// Signed value at `index`.
    pub value: T,
}

/// Dominant peaks of one period of `signal`.
///
/// A peak is a maximal run of samples with `|signal| > factor * median|signal|`,
/// treating the samples as periodic so a run may wrap around the ends. Each
/// run reports its largest-magnitude sample.
pub fn switching_peaks<T: Scalar>(signal: &[T], factor: T) -> Vec<Peak<T>> {
    let n = signal.len();
    if n == 0 {
        return Vec::new();
    }
    let mut mags: Vec<T> = signal.iter().map(|v| v.abs()).collect();
    mags.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let median = if n % 2 == 1 {
        mags[n / 2]
    } else {
        (mags[n / 2 - 1] + mags[n / 2]) / (T::one() + T::one())
    };
    let threshold = factor * median;
    let above = |k: usize| signal[k % n].abs() > threshold;
    // start scanning just after a quiet sample so no run is split at the seam
    let Some(start) = (0..n).find(|&k| !above(k)) else {
        return Vec::new();
    };
    let mut peaks = Vec::new();
    let mut k = start + 1;
    while k <= start + n {
        if above(k) {
            let mut best = k % n;
            while k <= start + n && above(k) {
                if signal[k % n].abs() > signal[best].abs() {
                    best = k % n;
                }
                k += 1;
            }
            peaks.push(Peak {
                index: best,
                value: signal[best],
            });
        }
        k += 1;
    }
    peaks.sort_by_key(|p| p.index);
    peaks
}
