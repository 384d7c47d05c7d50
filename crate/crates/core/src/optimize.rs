//! One-dimensional maximization: Brent's parabolic/golden-section search and
//! a brute-force grid scan used to check it.

/// Location and value of a maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

const GOLDEN: f64 = 0.381_966_011_250_105_1;

/// Maximizes `f` on `[lo, hi]` with Brent's method. Converges to a local
/// maximum; `x_tol` is the absolute tolerance on the abscissa.
pub fn brent_maximize<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, x_tol: f64) -> Maximum {
    let (mut a, mut b) = if lo < hi { (lo, hi) } else { (hi, lo) };
    let mut evaluations = 0;
    let mut g = |x: f64| {
        evaluations += 1;
        -f(x)
    };

    let mut x = a + GOLDEN * (b - a);
    let mut w = x;
    let mut v = x;
    let mut fx = g(x);
    let mut fw = fx;
    let mut fv = fx;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for _ in 0..500 {
        let m = 0.5 * (a + b);
        let tol1 = x_tol / 3.0 + f64::EPSILON.sqrt() * 1e-3 * x.abs();
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }

        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            } else {
                q = -q;
            }
            if p.abs() < (0.5 * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if x < m { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x < m { b - x } else { a - x };
            d = GOLDEN * e;
        }

        let u = if d.abs() >= tol1 {
            x + d
        } else if d > 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = g(u);

        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
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
                b = u;
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

    Maximum {
        x,
        value: -fx,
        evaluations,
    }
}

/// Evaluates `f` on `n` evenly spaced points of `[lo, hi]` (both ends
/// included) and returns the best one.
pub fn grid_maximize<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, n: usize) -> Maximum {
    assert!(n >= 2, "grid scan needs at least two points");
    let step = (hi - lo) / (n - 1) as f64;
    let mut best = Maximum {
        x: lo,
        value: f64::NEG_INFINITY,
        evaluations: n,
    };
    for i in 0..n {
        let x = if i == n - 1 { hi } else { lo + step * i as f64 };
        let value = f(x);
        if value > best.value {
            best.x = x;
            best.value = value;
        }
    }
    best
}
