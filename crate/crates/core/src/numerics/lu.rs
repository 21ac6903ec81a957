use super::matrix::ComplexMatrix;
use crate::{Error, Result, C64};

/// LU factorisation with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl Lu {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
                .unwrap();
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let piv = lu[(k, k)];
            if piv == C64::new(0.0, 0.0) {
                singular = true;
                continue;
            }
            for i in k + 1..n {
                let f = lu[(i, k)] / piv;
                lu[(i, k)] = f;
                if f == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm, sign, singular })
    }

    pub fn det(&self) -> C64 {
        let n = self.lu.rows();
        (0..n).map(|i| self.lu[(i, i)]).product::<C64>() * self.sign
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        if self.singular {
            return Err(Error::Degenerate("singular matrix in LU solve".into()));
        }
        Ok(self.solve_regularized(b, 0.0))
    }

    /// Solve with zero pivots replaced by `floor`; used for inverse iteration.
    pub fn solve_regularized(&self, b: &[C64], floor: f64) -> Vec<C64> {
        let n = self.lu.rows();
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            let mut d = self.lu[(i, i)];
            if d.norm() < floor {
                d = C64::new(floor, 0.0);
            }
            x[i] = s / d;
        }
        x
    }

    pub fn inverse(&self) -> Result<ComplexMatrix> {
        let n = self.lu.rows();
        let mut inv = ComplexMatrix::zeros(n, n);
        let mut e = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            e.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            e[j] = C64::new(1.0, 0.0);
            let col = self.solve(&e)?;
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }
}

pub fn det(a: &ComplexMatrix) -> Result<C64> {
    Ok(Lu::new(a)?.det())
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Lu::new(a)?.inverse()
}

/// Unit vector spanning the (numerical) kernel of a nearly singular square matrix.
///
/// Inverse iteration at shift zero; the returned residual is `‖A x‖ / ‖A‖_F`.
pub fn null_vector(a: &ComplexMatrix) -> Result<(Vec<C64>, f64)> {
    let n = a.rows();
    if n == 0 {
        return Err(Error::InvalidInput("null vector of an empty matrix".into()));
    }
    if a.frobenius_norm() == 0.0 {
        let mut e = vec![C64::new(0.0, 0.0); n];
        e[0] = C64::new(1.0, 0.0);
        return Ok((e, 0.0));
    }
    let scale = a.frobenius_norm();
    let lu = Lu::new(a)?;
    let floor = f64::EPSILON * scale;
    let mut x: Vec<C64> = (0..n)
        .map(|i| C64::new(1.0 + 0.37 * i as f64, 0.11 * (i as f64).sqrt()))
        .collect();
    let mut res = f64::INFINITY;
    for _ in 0..4 {
        x = lu.solve_regularized(&x, floor);
        let nrm = super::matrix::norm2(&x);
        if !nrm.is_finite() || nrm == 0.0 {
            return Err(Error::Degenerate("kernel iteration broke down".into()));
        }
        x.iter_mut().for_each(|z| *z /= nrm);
        res = super::matrix::norm2(&a.mul_vec(&x)) / scale;
        if res < 1e-14 {
            break;
        }
    }
    Ok((x, res))
}
