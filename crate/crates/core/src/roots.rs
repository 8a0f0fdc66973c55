//! Bracketed scalar root finding (Brent's method).
//!
//! Every iterate stays inside the current bracket, so `f` is never
//! evaluated outside the initial interval `[a, b]`.

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("no sign change on [{a}, {b}]: f(a) = {fa}, f(b) = {fb}")]
    NoBracket { a: f64, b: f64, fa: f64, fb: f64 },
    #[error("function is not finite at x = {x}")]
    NotFinite { x: f64 },
    #[error("maximum number of iterations reached (best estimate {x})")]
    MaxIter { x: f64 },
}

/// Termination controls for [`find_root_with`].
///
/// Iteration stops once the bracket half-width drops below
/// `0.5 * (xtol_abs + xtol_rel * |x|)` or `|f(x)| <= ftol`.
#[derive(Debug, Clone, Copy)]
pub struct RootOptions<T> {
    pub xtol_abs: T,
    pub xtol_rel: T,
    pub ftol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for RootOptions<T> {
    fn default() -> Self {
        Self {
            xtol_abs: T::lit(1e-12),
            xtol_rel: T::lit(1e-12),
            ftol: T::zero(),
            max_iter: 200,
        }
    }
}

/// Finds `x*` in `[a, b]` with `|f(x*)| <= tol` or a final bracket no wider
/// than `tol * max(1, |x*|)`.
pub fn find_root<T, F>(f: F, a: T, b: T, tol: T) -> Result<T, RootError>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let opts = RootOptions {
        xtol_abs: tol,
        xtol_rel: tol,
        ftol: tol,
        max_iter: 200,
    };
    find_root_with(f, a, b, &opts)
}

pub fn find_root_with<T, F>(mut f: F, a: T, b: T, opts: &RootOptions<T>) -> Result<T, RootError>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut fa = f(a);
    let mut fb = f(b);
    if !fa.is_finite() {
        return Err(RootError::NotFinite { x: a.as_f64() });
    }
    if !fb.is_finite() {
        return Err(RootError::NotFinite { x: b.as_f64() });
    }
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NoBracket {
            a: a.as_f64(),
            b: b.as_f64(),
            fa: fa.as_f64(),
            fb: fb.as_f64(),
        });
    }

    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let half = T::lit(0.5);
    let eps = T::epsilon();

    let mut c = b;
    let mut fc = fb;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..opts.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * eps * b.abs() + half * (opts.xtol_abs + opts.xtol_rel * b.abs());
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb == T::zero() || fb.abs() <= opts.ftol {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qq * (qq - r) - (b - a) * (r - T::one()));
                q = (qq - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = three * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b = b + d;
        } else {
            b = b + tol1.abs() * xm.signum();
        }
        fb = f(b);
        if !fb.is_finite() {
            return Err(RootError::NotFinite { x: b.as_f64() });
        }
    }
    Err(RootError::MaxIter { x: b.as_f64() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::Cell;

    #[test]
    fn linear_root() {
        let x = find_root(|x: f64| x, -1.0, 2.0, 1e-12).unwrap();
        assert!(x.abs() <= 1e-12);
    }

    #[test]
    fn sqrt_two() {
        let x = find_root(|x: f64| x * x - 2.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((x - std::f64::consts::SQRT_2).abs() < 1e-8);
    }

    #[test]
    fn cosine_root() {
        let x = find_root(|x: f64| x.cos(), 0.0, 3.0, 1e-12).unwrap();
        assert!((x - std::f64::consts::FRAC_PI_2).abs() < 1e-8);
    }

    #[test]
    fn no_bracket() {
        let err = find_root(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, RootError::NoBracket { .. }));
    }

    #[test]
    fn stays_inside_bracket() {
        let lo = 0.3;
        let hi = 7.0;
        let outside = Cell::new(false);
        let f = |x: f64| {
            if x < lo || x > hi {
                outside.set(true);
            }
            (x - 0.31).powi(3) + 1e-3 * (x - 0.31)
        };
        let x = find_root(f, lo, hi, 1e-14).unwrap();
        assert!(!outside.get());
        assert!((x - 0.31).abs() < 1e-6);
    }

    #[test]
    fn works_in_f32() {
        let x = find_root(|x: f32| x * x - 2.0, 0.0f32, 2.0, 1e-6).unwrap();
        assert!((x - std::f32::consts::SQRT_2).abs() < 1e-5);
    }

    #[test]
    fn scale_free_tolerance() {
        // Roots far below unit scale need a purely relative x tolerance.
        let opts = RootOptions {
            xtol_abs: 0.0,
            xtol_rel: 1e-14,
            ftol: 0.0,
            max_iter: 500,
        };
        let x = find_root_with(|x: f64| x - 3e-40, 0.0, 1e-39, &opts).unwrap();
        assert!((x - 3e-40).abs() < 1e-52);
    }
}
