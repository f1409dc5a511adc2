//! Bracketed scalar minimisation over positive arguments.
//!
//! The search runs in `u = ln x`: a downhill walk in geometric steps finds a
//! bracket, then Brent's parabolic/golden-section iteration polishes it.

use crate::error::{Error, Result};

const GOLDEN: f64 = 0.381_966_011_250_105_1;

/// Which end of the search range a minimum ran into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarMinimum {
    pub x: f64,
    pub fx: f64,
    pub evaluations: usize,
    /// Set when no interior minimum exists inside the search range.
    pub boundary: Option<Boundary>,
}

#[derive(Debug, Clone, Copy)]
pub struct MinimizeOptions {
    /// Relative tolerance on the minimiser.
    pub x_rel_tol: f64,
    /// Smallest and largest admissible `x`.
    pub x_range: (f64, f64),
    pub max_iter: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            x_rel_tol: 1e-10,
            x_range: (1e-30, 1e30),
            max_iter: 500,
        }
    }
}

/// Minimises `f` over `x > 0`, starting the bracket search at `x0`.
pub fn minimize_positive<F>(f: F, x0: f64, opts: MinimizeOptions) -> Result<ScalarMinimum>
where
    F: Fn(f64) -> f64,
{
    if !(x0 > 0.0 && x0.is_finite()) {
        return Err(Error::Bracket(format!("initial point must be positive, got {x0}")));
    }
    let (lo, hi) = (opts.x_range.0.ln(), opts.x_range.1.ln());
    let mut evals = 0usize;
    let mut g = |u: f64| {
        evals += 1;
        f(u.exp())
    };

    // Bracket search; the step doubles each time the walk keeps descending,
    // and the walk restarts with a wider first step if it stalls.
    let mut bracket = None;
    for &first_step in &[0.1, 1.0, 5.0] {
        let u0 = x0.ln().clamp(lo, hi);
        let f0 = g(u0);
        let (fp, fm) = (g((u0 + first_step).min(hi)), g((u0 - first_step).max(lo)));
        let dir = if fm < f0 && fm <= fp { -1.0 } else if fp < f0 { 1.0 } else { 0.0 };
        if dir == 0.0 {
            bracket = Some((u0 - first_step, u0, u0 + first_step));
            break;
        }
        let mut a = u0;
        let mut b = u0 + dir * first_step;
        let mut fb = if dir > 0.0 { fp } else { fm };
        let mut step = first_step;
        loop {
            step *= 2.0;
            let c = b + dir * step;
            if c <= lo || c >= hi {
                let edge = if dir > 0.0 { hi } else { lo };
                let fe = g(edge);
                if fe <= fb {
                    let boundary = if dir > 0.0 { Boundary::Upper } else { Boundary::Lower };
                    return Ok(ScalarMinimum {
                        x: edge.exp(),
                        fx: fe,
                        evaluations: evals,
                        boundary: Some(boundary),
                    });
                }
                bracket = Some(ordered(a, b, edge));
                break;
            }
            let fc = g(c);
            if !fc.is_finite() {
                break;
            }
            if fc > fb {
                bracket = Some(ordered(a, b, c));
                break;
            }
            a = b;
            b = c;
            fb = fc;
        }
        if bracket.is_some() {
            break;
        }
    }
    let (a, b, c) = bracket.ok_or_else(|| {
        Error::Bracket("objective is not finite along the search direction".into())
    })?;
    let (u, fu, iters) = brent(&mut g, a, b, c, opts.x_rel_tol, opts.max_iter);
    if iters >= opts.max_iter {
        return Err(Error::NotConverged(format!(
            "Brent iteration stopped after {iters} steps"
        )));
    }
    Ok(ScalarMinimum {
        x: u.exp(),
        fx: fu,
        evaluations: evals,
        boundary: None,
    })
}

fn ordered(a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    if a < c {
        (a, b, c)
    } else {
        (c, b, a)
    }
}

/// Brent minimisation on `[a, c]` with interior guess `b`. The tolerance is
/// absolute in `u`, hence relative in `x`.
fn brent<G: FnMut(f64) -> f64>(
    g: &mut G,
    a: f64,
    b: f64,
    c: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64, usize) {
    let (mut a, mut c) = (a.min(c), a.max(c));
    let mut x = b;
    let mut w = b;
    let mut v = b;
    let mut fx = g(x);
    let mut fw = fx;
    let mut fv = fx;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    for iter in 0..max_iter {
        let xm = 0.5 * (a + c);
        let tol1 = 0.5 * tol + 1e-14;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (c - a) {
            return (x, fx, iter);
        }
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            e = d;
            if p.abs() >= (0.5 * q * etemp).abs() || p <= q * (a - x) || p >= q * (c - x) {
                e = if x >= xm { a - x } else { c - x };
                d = GOLDEN * e;
            } else {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || c - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
            }
        } else {
            e = if x >= xm { a - x } else { c - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = g(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                c = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                c = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, fx, max_iter)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_minimum_of_reciprocal_plus_linear() {
        // a/x + b x has its minimum at sqrt(a/b)
        let (a, b) = (1e14, 1.0);
        let m = minimize_positive(|x| a / x + b * x, 1.0, Default::default()).unwrap();
        assert!(m.boundary.is_none());
        assert!((m.x / 1e7 - 1.0).abs() < 1e-9, "{}", m.x);
    }

    #[test]
    fn monotone_objective_reports_lower_boundary() {
        let m = minimize_positive(|x| x + 3.0, 10.0, Default::default()).unwrap();
        assert_eq!(m.boundary, Some(Boundary::Lower));
    }

    #[test]
    fn decreasing_objective_reports_upper_boundary() {
        let m = minimize_positive(|x| 1.0 / x, 10.0, Default::default()).unwrap();
        assert_eq!(m.boundary, Some(Boundary::Upper));
    }

    #[test]
    fn rejects_nonpositive_start() {
        assert!(matches!(
            minimize_positive(|x| x, 0.0, Default::default()),
            Err(Error::Bracket(_))
        ));
    }

    #[test]
    fn start_far_from_minimum() {
        let m = minimize_positive(|x| (x.ln() - 3.0).powi(2), 1e-20, Default::default()).unwrap();
        assert!((m.x.ln() - 3.0).abs() < 1e-6);
    }
}
