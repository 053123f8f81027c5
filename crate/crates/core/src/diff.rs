//! Numerical differentiation of closed-form radial functions.

/// Ridders' extrapolated central difference of `f` at `r`.
///
/// `step` is the initial half-width; it is shrunk geometrically and the
/// Neville tableau entry with the smallest error estimate is returned as
/// `(derivative, error_estimate)`. A tableau that stalls with a poor estimate
/// is restarted from a quarter of the step, a few times at most.
pub fn ridders<F: Fn(f64) -> f64>(f: F, r: f64, step: f64) -> (f64, f64) {
    const RESTARTS: usize = 4;
    const GOOD: f64 = 1e-11;

    let mut best = ridders_once(&f, r, step);
    let mut hh = step;
    for _ in 0..RESTARTS {
        if best.1 <= GOOD * best.0.abs().max(1.0) {
            break;
        }
        hh *= 0.25;
        let next = ridders_once(&f, r, hh);
        if next.1 < best.1 {
            best = next;
        }
    }
    best
}

fn ridders_once<F: Fn(f64) -> f64>(f: &F, r: f64, step: f64) -> (f64, f64) {
    const CON: f64 = 1.4;
    const CON2: f64 = CON * CON;
    const NTAB: usize = 10;
    const SAFE: f64 = 2.0;

    let mut a = [[0.0f64; NTAB]; NTAB];
    let mut hh = step;
    a[0][0] = (f(r + hh) - f(r - hh)) / (2.0 * hh);
    let mut best = a[0][0];
    let mut err = f64::MAX;
    for i in 1..NTAB {
        hh /= CON;
        a[0][i] = (f(r + hh) - f(r - hh)) / (2.0 * hh);
        let mut fac = CON2;
        for j in 1..=i {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= CON2;
            let errt = (a[j][i] - a[j - 1][i])
                .abs()
                .max((a[j][i] - a[j - 1][i - 1]).abs());
            if errt <= err {
                err = errt;
                best = a[j][i];
            }
        }
        if (a[i][i] - a[i - 1][i - 1]).abs() >= SAFE * err {
            break;
        }
    }
    (best, err)
}

/// Default initial step at `r`: small relative to `r` so `r - step` stays in
/// the radial domain, and capped for large `r`.
#[inline]
pub fn default_step(r: f64) -> f64 {
    (0.05 * r).min(0.2)
}

/// `f'(r)` for a closed form on `(0, ∞)`.
pub fn derivative<F: Fn(f64) -> f64>(f: F, r: f64) -> f64 {
    ridders(f, r, default_step(r)).0
}

/// Central differences on uniformly spaced samples, second-order one-sided at
/// both ends.
pub fn grid_derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut d = vec![0.0; n];
    if n < 3 {
        if n == 2 {
            let s = (values[1] - values[0]) / h;
            d[0] = s;
            d[1] = s;
        }
        return d;
    }
    for i in 1..n - 1 {
        d[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    d
}
