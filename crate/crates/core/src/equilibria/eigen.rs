//! Closed-form eigenvalue solvers for the 2x2 and 3x3 Jacobians that appear
//! in the stability analysis. The matrices are tiny, so the characteristic
//! polynomial is solved directly (quadratic formula, Cardano/trigonometric
//! cubic) followed by a Newton refinement pass instead of pulling in a
//! general eigensolver.

use num_complex::Complex64;

/// Eigenvalues of a real 2x2 matrix, sorted by descending real part
/// (imaginary part breaks ties).
pub fn eig2(m: &[[f64; 2]; 2]) -> [Complex64; 2] {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let mut roots = quadratic_roots(tr, det);
    sort_desc(&mut roots);
    [roots[0], roots[1]]
}

/// Roots of `x^2 - tr*x + det`, using the q-trick so the smaller root stays
/// accurate when `det` is near zero (the marginal-stability regime).
fn quadratic_roots(tr: f64, det: f64) -> Vec<Complex64> {
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let q = 0.5 * (tr + tr.signum() * sq);
        if q == 0.0 {
            // tr = 0 and det = 0 (or disc = 0 with tr = 0).
            let r = 0.5 * sq;
            vec![Complex64::new(r, 0.0), Complex64::new(-r, 0.0)]
        } else {
            vec![Complex64::new(q, 0.0), Complex64::new(det / q, 0.0)]
        }
    } else {
        let re = 0.5 * tr;
        let im = 0.5 * (-disc).sqrt();
        vec![Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

fn sort_desc(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap()
            .then(b.im.partial_cmp(&a.im).unwrap())
    });
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Eigenvalues of a real 3x3 matrix, sorted by descending real part.
///
/// The characteristic polynomial `x^3 + a x^2 + b x + c` is solved in closed
/// form; its real roots are then polished with two Newton steps and the
/// remaining complex pair recovered by exact deflation.
pub fn eig3(m: &[[f64; 3]; 3]) -> [Complex64; 3] {
    let tr = m[0][0] + m[1][1] + m[2][2];
    // Sum of principal 2x2 minors.
    let minors = (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        + (m[0][0] * m[2][2] - m[0][2] * m[2][0])
        + (m[0][0] * m[1][1] - m[0][1] * m[1][0]);
    let det = det3(m);

    let a = -tr;
    let b = minors;
    let c = -det;
    let mut roots = cubic_roots(a, b, c);
    sort_desc(&mut roots);
    [roots[0], roots[1], roots[2]]
}

/// All roots of `x^3 + a x^2 + b x + c` with real coefficients.
fn cubic_roots(a: f64, b: f64, c: f64) -> Vec<Complex64> {
    // Depressed form t^3 + p t + q with x = t - a/3.
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let half_q = 0.5 * q;
    let disc = half_q * half_q + (p / 3.0).powi(3);

    // The discriminant scales like the sixth power of the root magnitude
    // (p like its square, q like its cube); the degeneracy threshold must
    // use the same scaling or it misfires on very large or small spectra.
    let root_scale = p.abs().sqrt().max(q.abs().cbrt());
    if root_scale == 0.0 {
        return vec![Complex64::new(-shift, 0.0); 3];
    }
    let tol = 1e-14 * root_scale.powi(6);

    let raw: Vec<Complex64> = if disc > tol {
        // One real root; avoid cancellation by computing the larger cube
        // root first and recovering the partner from u*v = -p/3.
        let s = disc.sqrt();
        let u = if -half_q + s >= half_q + s {
            (-half_q + s).cbrt()
        } else {
            -(half_q + s).cbrt()
        };
        let v = if u != 0.0 { -p / (3.0 * u) } else { 0.0 };
        let t_real = u + v;
        let re = -t_real / 2.0;
        let im = (3.0f64).sqrt() / 2.0 * (u - v);
        vec![
            Complex64::new(t_real - shift, 0.0),
            Complex64::new(re - shift, im),
            Complex64::new(re - shift, -im),
        ]
    } else {
        // Three real roots (disc < 0), or a near-degenerate spectrum
        // (|disc| within tolerance): the trigonometric form with a clamped
        // argument degrades gracefully to the repeated-root limits.
        let mp3 = (-p / 3.0).max(0.0);
        let r = 2.0 * mp3.sqrt();
        let arg = if r == 0.0 {
            0.0
        } else {
            (3.0 * q / (p * r)).clamp(-1.0, 1.0)
        };
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| {
                let t = r * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
                Complex64::new(t - shift, 0.0)
            })
            .collect()
    };

    refine_cubic(a, b, c, raw)
}

/// Newton-polish the real roots, then rebuild any complex pair by deflating
/// the refined real root out of the cubic.
fn refine_cubic(a: f64, b: f64, c: f64, roots: Vec<Complex64>) -> Vec<Complex64> {
    let poly = |x: f64| ((x + a) * x + b) * x + c;
    let dpoly = |x: f64| (3.0 * x + 2.0 * a) * x + b;
    let newton = |mut x: f64| {
        for _ in 0..2 {
            let d = dpoly(x);
            if d.abs() > 1e-300 {
                let step = poly(x) / d;
                if step.is_finite() {
                    x -= step;
                }
            }
        }
        x
    };

    let has_complex = roots.iter().any(|r| r.im != 0.0);
    if has_complex {
        let real = roots.iter().find(|r| r.im == 0.0).unwrap().re;
        let r = newton(real);
        // x^3 + a x^2 + b x + c = (x - r)(x^2 + (a + r) x + (b + r(a + r)))
        let qa = a + r;
        let qb = b + r * qa;
        let mut out = quadratic_roots(-qa, qb);
        out.push(Complex64::new(r, 0.0));
        out
    } else {
        roots
            .into_iter()
            .map(|r| Complex64::new(newton(r.re), 0.0))
            .collect()
    }
}

/// Unit null vector of `m - lambda*I` for a real eigenvalue `lambda`:
/// the eigenvector direction. Uses the largest cross product of two rows,
/// which is exact up to rounding for a rank-2 matrix.
pub fn real_eigenvector3(m: &[[f64; 3]; 3], lambda: f64) -> [f64; 3] {
    let rows = [
        [m[0][0] - lambda, m[0][1], m[0][2]],
        [m[1][0], m[1][1] - lambda, m[1][2]],
        [m[2][0], m[2][1], m[2][2] - lambda],
    ];
    let cross = |u: &[f64; 3], v: &[f64; 3]| {
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    };
    let norm = |v: &[f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();

    let candidates = [
        cross(&rows[0], &rows[1]),
        cross(&rows[0], &rows[2]),
        cross(&rows[1], &rows[2]),
    ];
    let best = candidates
        .iter()
        .max_by(|a, b| norm(a).partial_cmp(&norm(b)).unwrap())
        .unwrap();
    let n = norm(best);
    [best[0] / n, best[1] / n, best[2] / n]
}
