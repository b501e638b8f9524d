//! Deterministic one- and multi-dimensional maximizers.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section maximization on `[lo, hi]`; returns `(x, f(x), evaluations)`.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64, usize) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut evals = 2;
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        evals += 1;
    }
    if fc >= fd {
        (c, fc, evals)
    } else {
        (d, fd, evals)
    }
}

/// Nelder–Mead maximization from `x0` with initial steps `step`. Stops when the
/// simplex diameter drops below `tol` or after `max_evals` evaluations, then
/// restarts once from the best vertex.
pub fn nelder_mead_max<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    step: &[f64],
    tol: f64,
    max_evals: usize,
) -> (Vec<f64>, f64, usize) {
    let mut evals = 0;
    let mut best = (x0.to_vec(), f64::NEG_INFINITY);
    let mut start = x0.to_vec();
    for _ in 0..2 {
        let (x, fx, n) = nelder_mead_run(&mut f, &start, step, tol, max_evals);
        evals += n;
        if fx > best.1 {
            best = (x.clone(), fx);
        }
        start = x;
    }
    (best.0, best.1, evals)
}

fn nelder_mead_run<F: FnMut(&[f64]) -> f64>(
    f: &mut F,
    x0: &[f64],
    step: &[f64],
    tol: f64,
    max_evals: usize,
) -> (Vec<f64>, f64, usize) {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step[i];
        let fx = f(&x);
        simplex.push((x, fx));
    }
    let mut evals = n + 1;
    let toward = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect() };
    loop {
        // descending by value; stable sort keeps earlier vertices first on ties
        simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if diameter < tol || evals >= max_evals {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let xr = toward(&centroid, &worst.0, -1.0);
        let fr = f(&xr);
        evals += 1;
        if fr > simplex[0].1 {
            let xe = toward(&centroid, &worst.0, -2.0);
            let fe = f(&xe);
            evals += 1;
            simplex[n] = if fe > fr { (xe, fe) } else { (xr, fr) };
        } else if fr > simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr > worst.1 {
                let xc = toward(&centroid, &xr, 0.5);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = toward(&centroid, &worst.0, 0.5);
                let fc = f(&xc);
                (xc, fc)
            };
            evals += 1;
            if fc > fr.max(worst.1) {
                simplex[n] = (xc, fc);
            } else {
                let x0 = simplex[0].0.clone();
                for v in simplex.iter_mut().skip(1) {
                    v.0 = toward(&x0, &v.0, 0.5);
                    v.1 = f(&v.0);
                    evals += 1;
                }
            }
        }
    }
    simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    let (x, fx) = simplex.swap_remove(0);
    (x, fx, evals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, fx, _) = golden_max(|x| -(x - 0.3).powi(2), -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9);
        assert!(fx.abs() < 1e-18);
    }

    #[test]
    fn nelder_mead_finds_quadratic_peak() {
        let f = |x: &[f64]| -(x[0] - 1.0).powi(2) - 3.0 * (x[1] + 0.5).powi(2) - (x[0] - 1.0) * (x[1] + 0.5);
        let (x, fx, _) = nelder_mead_max(f, &[0.0, 0.0], &[0.1, 0.1], 1e-10, 10_000);
        assert!((x[0] - 1.0).abs() < 1e-8 && (x[1] + 0.5).abs() < 1e-8, "{x:?}");
        assert!(fx > -1e-15);
    }

    #[test]
    fn nelder_mead_handles_rosenbrock() {
        let f = |x: &[f64]| -((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2));
        let (x, _, _) = nelder_mead_max(f, &[-1.2, 1.0], &[0.1, 0.1], 1e-12, 50_000);
        assert!((x[0] - 1.0).abs() < 1e-6 && (x[1] - 1.0).abs() < 1e-6, "{x:?}");
    }
}
