//! Bracketed root finding for monotone scalar maps.

/// Iteration cap for [`bisect_increasing`].
pub const MAX_ITERATIONS: usize = 200;

/// Why a bracketed solve could not produce a root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BisectFailure {
    /// `target` is not between `f(lo)` and `f(hi)`; carries `(f(lo), f(hi))`.
    NotBracketed(f64, f64),
    /// The bracket did not shrink below the tolerance in time.
    NoConvergence,
}

/// Solves `f(x) = target` on `[lo, hi]` for a strictly increasing `f`.
///
/// Halves the bracket until it is narrower than `tol`, then takes one secant
/// step inside the final bracket. For piecewise-linear `f` this lands on the
/// exact root whenever the last bracket sits inside a single segment.
pub fn bisect_increasing<F>(
    f: F,
    target: f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64, BisectFailure>
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if !(target >= f_lo && target <= f_hi) {
        return Err(BisectFailure::NotBracketed(f_lo, f_hi));
    }
    if target == f_lo {
        return Ok(lo);
    }
    if target == f_hi {
        return Ok(hi);
    }
    for _ in 0..MAX_ITERATIONS {
        if hi - lo < tol {
            let x = lo + (target - f_lo) / (f_hi - f_lo) * (hi - lo);
            return Ok(x.clamp(lo, hi));
        }
        let mid = lo + (hi - lo) / 2.0;
        let f_mid = f(mid);
        if f_mid == target {
            return Ok(mid);
        }
        if f_mid < target {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    Err(BisectFailure::NoConvergence)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cube_root() {
        let x = bisect_increasing(|x| x * x * x, 2.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((x - 2f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn exact_for_piecewise_linear() {
        let f = |x: f64| if x < 1.0 { x } else { 1.0 + 3.0 * (x - 1.0) };
        let x = bisect_increasing(f, 1.6, 0.0, 2.0, 1e-9).unwrap();
        assert!((x - 1.2).abs() < 1e-15);
    }

    #[test]
    fn endpoints_are_returned_exactly() {
        assert_eq!(bisect_increasing(|x| x, 0.3, 0.3, 0.9, 1e-9), Ok(0.3));
        assert_eq!(bisect_increasing(|x| x, 0.9, 0.3, 0.9, 1e-9), Ok(0.9));
    }

    #[test]
    fn rejects_unbracketed_target() {
        assert_eq!(
            bisect_increasing(|x| x, 2.0, 0.0, 1.0, 1e-9),
            Err(BisectFailure::NotBracketed(0.0, 1.0))
        );
        assert!(bisect_increasing(|x| x, f64::NAN, 0.0, 1.0, 1e-9).is_err());
    }

    #[test]
    fn zero_tolerance_does_not_converge() {
        assert_eq!(
            bisect_increasing(|x| x * x, 2.0, 0.0, 2.0, 0.0),
            Err(BisectFailure::NoConvergence)
        );
    }
}
