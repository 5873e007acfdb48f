use super::IntPoly;
use crate::error::{Error, Result};
use num_complex::Complex64;
use num_traits::ToPrimitive;

const MAX_ITERATIONS: usize = 1000;
/// 2π(2 - φ), the golden angle: a fixed irrational rotation keeping the
/// deterministic starting points away from real-axis symmetries.
const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// All complex roots of an integer polynomial by simultaneous Durand–Kerner
/// iteration. Starting points sit on a circle of radius
/// `1 + max|cᵢ / c_lead|` with angles offset by the golden angle; iteration
/// stops once every residual satisfies `|p(z)| < tol · max|cᵢ|`. Roots come
/// back sorted by real part, then imaginary part.
pub fn complex_roots(p: &IntPoly, tol: f64) -> Result<Vec<Complex64>> {
    let deg = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => {
            return Err(Error::Invalid(
                "root finding requires a polynomial of degree at least 1".into(),
            ))
        }
    };
    let cs: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|c| c.to_f64().expect("coefficient out of f64 range"))
        .collect();
    let lead = cs[deg];
    let monic: Vec<f64> = cs.iter().map(|c| c / lead).collect();
    let norm = cs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let radius = 1.0
        + monic[..deg]
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()));

    let horner = |coeffs: &[f64], z: Complex64| {
        coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    };

    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + GOLDEN_ANGLE;
            Complex64::from_polar(radius, theta)
        })
        .collect();

    for _ in 0..MAX_ITERATIONS {
        for k in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != k {
                    denom *= z[k] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                // collided approximants: nudge deterministically and retry
                z[k] += Complex64::new(1e-8, 1e-8);
                continue;
            }
            let step = horner(&monic, z[k]) / denom;
            z[k] -= step;
        }
        let worst = z
            .iter()
            .map(|&x| horner(&cs, x).norm())
            .fold(0.0f64, f64::max);
        if worst < tol * norm {
            z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
            return Ok(z);
        }
    }
    Err(Error::NonConvergence {
        iterations: MAX_ITERATIONS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-12;

    #[test]
    fn linear_roots() {
        let r = complex_roots(&IntPoly::from_ints(&[-6, 5]), TOL).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].re - 1.2).abs() < 1e-9 && r[0].im.abs() < 1e-9);

        let r = complex_roots(&IntPoly::from_ints(&[51, 14]), TOL).unwrap();
        assert!((r[0].re - (-51.0 / 14.0)).abs() < 1e-9);
    }

    #[test]
    fn quadratic_roots() {
        let r = complex_roots(&IntPoly::from_ints(&[-1, 0, 1]), TOL).unwrap();
        assert!((r[0].re + 1.0).abs() < 1e-9 && (r[1].re - 1.0).abs() < 1e-9);
        // complex pair: u^2 + 1
        let r = complex_roots(&IntPoly::from_ints(&[1, 0, 1]), TOL).unwrap();
        assert!(r.iter().all(|z| z.re.abs() < 1e-9 && (z.im.abs() - 1.0).abs() < 1e-9));
    }

    #[test]
    fn random_factored_quadratics() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = rng.gen_range(-9i64..=9);
            let mut b = rng.gen_range(-9i64..=9);
            if a == b {
                b += 1;
            }
            // (u - a)(u - b)
            let poly = IntPoly::from_ints(&[a * b, -(a + b), 1]);
            let mut roots = complex_roots(&poly, TOL).unwrap();
            roots.sort_by(|x, y| x.re.total_cmp(&y.re));
            let mut expect = [a as f64, b as f64];
            expect.sort_by(f64::total_cmp);
            for (z, e) in roots.iter().zip(expect) {
                assert!((z.re - e).abs() < 1e-7 && z.im.abs() < 1e-7);
            }
        }
    }

    #[test]
    fn rejects_constants() {
        assert!(complex_roots(&IntPoly::one(), TOL).is_err());
    }
}
