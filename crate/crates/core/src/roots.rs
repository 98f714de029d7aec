//! Bracketed scalar root finding (Brent's method).

/// Outcome of a bracketed solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Root {
    Converged(f64),
    /// Iteration cap reached; carries the best estimate.
    Exhausted(f64),
}

/// Finds a root of `f` in `[a, b]` where `fa = f(a)` and `fb = f(b)` have
/// opposite signs. Stops once the bracket is narrower than `rel_tol * |x|`
/// (never below a few ulps) or `f` vanishes.
pub(crate) fn brent<F, E>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    rel_tol: f64,
    max_iter: usize,
) -> Result<Root, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    debug_assert!(fa.signum() != fb.signum() || fa == 0.0 || fb == 0.0);
    if fa == 0.0 {
        return Ok(Root::Converged(a));
    }
    if fb == 0.0 {
        return Ok(Root::Converged(b));
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..max_iter {
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

        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * rel_tol * b.abs();
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(Root::Converged(b));
        }

        if e.abs() >= tol && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, or secant when a == c
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Ok(Root::Exhausted(b))
}
