//! Safeguarded scalar root finding.

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RootError<T> {
    /// `f(lo)` and `f(hi)` have the same strict sign.
    NotBracketed { f_lo: T, f_hi: T },
    /// The bracket collapsed to adjacent floats (or the iteration budget ran
    /// out) before the residual met the tolerance.
    Stalled { x: T, residual: T },
}

/// Newton iteration kept inside a bisection bracket.
///
/// `f` returns the value and derivative at a point. Any Newton step that
/// would leave the current bracket, or that has a zero or non-finite
/// derivative, is replaced by bisection. Terminates when `|f(x)| <= tol`.
pub fn newton_bisect<T, F>(
    mut f: F,
    lo: T,
    hi: T,
    guess: T,
    tol: T,
    max_iter: usize,
) -> Result<T, RootError<T>>
where
    T: Scalar,
    F: FnMut(T) -> (T, T),
{
    let (f_lo, _) = f(lo);
    if f_lo.abs() <= tol {
        return Ok(lo);
    }
    let (f_hi, _) = f(hi);
    if f_hi.abs() <= tol {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(RootError::NotBracketed { f_lo, f_hi });
    }
    // orient so that f(neg) < 0 < f(pos)
    let (mut neg, mut pos) = if f_lo < T::zero() { (lo, hi) } else { (hi, lo) };
    let inside = |x: T, a: T, b: T| x > a.min(b) && x < a.max(b);
    let mut x = if inside(guess, neg, pos) {
        guess
    } else {
        (neg + pos) / (T::one() + T::one())
    };
    let mut best = (x, T::infinity());
    for _ in 0..max_iter {
        let (fx, dfx) = f(x);
        if fx.abs() < best.1 {
            best = (x, fx.abs());
        }
        if fx.abs() <= tol {
            return Ok(x);
        }
        if fx < T::zero() {
            neg = x;
        } else {
            pos = x;
        }
        let mid = (neg + pos) / (T::one() + T::one());
        if mid == neg || mid == pos {
            break;
        }
        let step = fx / dfx;
        let newton = x - step;
        x = if dfx != T::zero() && step.is_finite() && inside(newton, neg, pos) {
            newton
        } else {
            mid
        };
    }
    Err(RootError::Stalled {
        x: best.0,
        residual: best.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = newton_bisect(|x: f64| (x * x - 2.0, 2.0 * x), 0.0, 2.0, 1.0, 1e-15, 100).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bisection_rescues_flat_derivative() {
        // Newton from 0 hits a zero derivative; bracket still converges
        let r = newton_bisect(|x: f64| (x.powi(3) - 1.0, 3.0 * x * x), -1.0, 3.0, 0.0, 1e-14, 200)
            .unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decreasing_functions_work() {
        let r = newton_bisect(|x: f64| (1.0 - x, -1.0), -5.0, 5.0, 4.0, 1e-15, 50).unwrap();
        assert_eq!(r, 1.0);
    }

    #[test]
    fn unbracketed_is_an_error() {
        let e = newton_bisect(|x: f64| (x * x + 1.0, 2.0 * x), -1.0, 1.0, 0.0, 1e-12, 50);
        assert!(matches!(e, Err(RootError::NotBracketed { .. })));
    }

    #[test]
    fn impossible_tolerance_stalls() {
        let e = newton_bisect(|x: f64| (x - 0.1, 1.0), 0.0, 1.0, 0.5, 0.0, 500);
        match e {
            Err(RootError::Stalled { x, residual }) => {
                assert!((x - 0.1).abs() < 1e-16);
                assert!(residual < 1e-16);
            }
            Ok(x) => assert_eq!(x, 0.1),
            other => panic!("{other:?}"),
        }
    }
}
