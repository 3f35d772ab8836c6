//! Dense matrix exponential (scaling-and-squaring with the degree-13 Padé
//! approximant) and the hyperbolic/trigonometric matrix functions built on
//! it. Intended for modest dense sizes (N ≤ 512).

use crate::error::{domain, numerical, Result};
use ndarray::Array2;
use num_complex::Complex64;

const MAX_DENSE: usize = 512;

/// Degree-13 Padé numerator coefficients.
const B: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Scaling threshold for the degree-13 approximant.
const THETA_13: f64 = 5.371920351148152;

fn eye(n: usize) -> Array2<Complex64> {
    Array2::eye(n).mapv(|v: f64| Complex64::new(v, 0.0))
}

fn one_norm(a: &Array2<Complex64>) -> f64 {
    let mut best = 0.0f64;
    for col in a.columns() {
        best = best.max(col.iter().map(|v| v.norm()).sum());
    }
    best
}

/// Solve A·X = B by Gaussian elimination with partial pivoting.
fn solve_dense(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    let mut lu = a.clone();
    let mut x = b.clone();
    for col in 0..n {
        let mut piv = col;
        let mut best = lu[(col, col)].norm();
        for r in col + 1..n {
            let v = lu[(r, col)].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return Err(numerical("singular matrix in Padé solve"));
        }
        if piv != col {
            for j in 0..n {
                let t = lu[(col, j)];
                lu[(col, j)] = lu[(piv, j)];
                lu[(piv, j)] = t;
                let t = x[(col, j)];
                x[(col, j)] = x[(piv, j)];
                x[(piv, j)] = t;
            }
        }
        let d = lu[(col, col)];
        for r in col + 1..n {
            let m = lu[(r, col)] / d;
            if m != Complex64::ZERO {
                for j in col + 1..n {
                    let v = lu[(col, j)];
                    lu[(r, j)] -= m * v;
                }
                for j in 0..n {
                    let v = x[(col, j)];
                    x[(r, j)] -= m * v;
                }
            }
        }
    }
    for col in (0..n).rev() {
        let d = lu[(col, col)];
        for j in 0..n {
            let mut s = x[(col, j)];
            for k in col + 1..n {
                s -= lu[(col, k)] * x[(k, j)];
            }
            x[(col, j)] = s / d;
        }
    }
    Ok(x)
}

/// e^A for a square complex matrix.
pub fn expm(a: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(domain("expm requires a square matrix"));
    }
    if n > MAX_DENSE {
        return Err(domain(format!(
            "dense matrix exponential is limited to N ≤ {MAX_DENSE}; got {n}"
        )));
    }
    let norm = one_norm(a);
    if !norm.is_finite() {
        return Err(numerical("matrix exponential input has non-finite norm"));
    }
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let scale = Complex64::new((0.5f64).powi(s as i32), 0.0);
    let a1 = a.mapv(|v| v * scale);
    let a2 = a1.dot(&a1);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);
    let id = eye(n);
    let c = |k: usize| Complex64::new(B[k], 0.0);
    let u_inner = a6.mapv(|v| v * c(13)) + a4.mapv(|v| v * c(11)) + a2.mapv(|v| v * c(9));
    let u_poly = a6.dot(&u_inner)
        + a6.mapv(|v| v * c(7))
        + a4.mapv(|v| v * c(5))
        + a2.mapv(|v| v * c(3))
        + id.mapv(|v| v * c(1));
    let u = a1.dot(&u_poly);
    let v_inner = a6.mapv(|v| v * c(12)) + a4.mapv(|v| v * c(10)) + a2.mapv(|v| v * c(8));
    let v = a6.dot(&v_inner)
        + a6.mapv(|v| v * c(6))
        + a4.mapv(|v| v * c(4))
        + a2.mapv(|v| v * c(2))
        + id.mapv(|v| v * c(0));
    let mut x = solve_dense(&(&v - &u), &(&v + &u))?;
    for _ in 0..s {
        x = x.dot(&x);
    }
    if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(numerical(
            "matrix exponential overflowed; reduce the operator norm (smaller λ·L²)",
        ));
    }
    Ok(x)
}

/// sinh(M) = (e^M − e^{−M})/2.
pub fn sinhm(m: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let ep = expm(m)?;
    let em = expm(&m.mapv(|v| -v))?;
    Ok((ep - em).mapv(|v| v * Complex64::new(0.5, 0.0)))
}

/// cosh(M) = (e^M + e^{−M})/2.
pub fn coshm(m: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let ep = expm(m)?;
    let em = expm(&m.mapv(|v| -v))?;
    Ok((ep + em).mapv(|v| v * Complex64::new(0.5, 0.0)))
}

/// cos(K) = (e^{iK} + e^{−iK})/2.
pub fn cosm(k: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let i = Complex64::i();
    coshm(&k.mapv(|v| i * v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exponential_of_diagonal_matrix() {
        let mut a = Array2::zeros((3, 3));
        a[(0, 0)] = c(1.0, 0.0);
        a[(1, 1)] = c(-2.0, 0.0);
        a[(2, 2)] = c(0.0, std::f64::consts::PI);
        let e = expm(&a).unwrap();
        assert!((e[(0, 0)].re - 1f64.exp()).abs() < 1e-14);
        assert!((e[(1, 1)].re - (-2f64).exp()).abs() < 1e-14);
        assert!((e[(2, 2)].re + 1.0).abs() < 1e-14, "e^{{iπ}} = −1");
        assert!(e[(0, 1)].norm() < 1e-16);
    }

    #[test]
    fn exponential_of_nilpotent_matrix() {
        let mut a = Array2::zeros((2, 2));
        a[(0, 1)] = c(3.0, 0.0);
        let e = expm(&a).unwrap();
        assert!((e[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((e[(0, 1)].re - 3.0).abs() < 1e-14);
        assert!(e[(1, 0)].norm() < 1e-16);
    }

    #[test]
    fn rotation_generator_with_scaling_path() {
        // θ = 10 exercises scaling-and-squaring.
        let th = 10.0f64;
        let mut a = Array2::zeros((2, 2));
        a[(0, 1)] = c(-th, 0.0);
        a[(1, 0)] = c(th, 0.0);
        let e = expm(&a).unwrap();
        assert!((e[(0, 0)].re - th.cos()).abs() < 1e-12);
        assert!((e[(1, 0)].re - th.sin()).abs() < 1e-12);
    }

    #[test]
    fn sinh_cosh_cos_identities() {
        let mut a = Array2::zeros((2, 2));
        a[(0, 0)] = c(0.3, 0.0);
        a[(0, 1)] = c(0.7, 0.0);
        a[(1, 0)] = c(0.7, 0.0);
        a[(1, 1)] = c(-0.1, 0.0);
        let sh = sinhm(&a).unwrap();
        let ch = coshm(&a).unwrap();
        // cosh² − sinh² = I.
        let diff = ch.dot(&ch) - sh.dot(&sh);
        assert!((diff[(0, 0)].re - 1.0).abs() < 1e-13);
        assert!(diff[(0, 1)].norm() < 1e-13);
        // cos of a real symmetric matrix is real symmetric.
        let co = cosm(&a).unwrap();
        assert!(co[(0, 1)].im.abs() < 1e-14);
        assert!((co[(0, 1)].re - co[(1, 0)].re).abs() < 1e-14);
    }

    #[test]
    fn rejects_oversize_and_reports_overflow() {
        let a: Array2<Complex64> = Array2::zeros((600, 600));
        assert!(expm(&a).is_err());
        let mut big = Array2::zeros((2, 2));
        big[(0, 0)] = c(1e6, 0.0);
        let err = expm(&big).unwrap_err().to_string();
        assert!(err.contains("λ·L²"), "{err}");
    }
}
