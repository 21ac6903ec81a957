use super::matrix::ComplexMatrix;
use crate::{Error, Result, C64};
use std::f64::consts::PI;

/// Counter-clockwise circle sampled at `samples` equispaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedContour {
    pub center: C64,
    pub radius: f64,
    pub samples: usize,
}

impl ClosedContour {
    pub fn new(center: C64, radius: f64, samples: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!("contour radius {radius} must be positive")));
        }
        if samples < 16 || samples % 2 != 0 {
            return Err(Error::InvalidInput(format!("contour needs an even sample count >= 16, got {samples}")));
        }
        Ok(Self { center, radius, samples })
    }

    pub fn point(&self, j: usize) -> C64 {
        self.center + C64::from_polar(self.radius, 2.0 * PI * j as f64 / self.samples as f64)
    }
}

/// `(1/2πi) ∮ g(z) dz/z` by the periodic trapezoid rule.
pub fn contour_integral_mean<G>(g: G, gamma: &ClosedContour) -> Result<ComplexMatrix>
where
    G: Fn(C64) -> Result<ComplexMatrix>,
{
    let n = gamma.samples;
    let mut acc: Option<ComplexMatrix> = None;
    for j in 0..n {
        let z = gamma.point(j);
        if z.norm() == 0.0 {
            return Err(Error::PoleOnContour { index: j });
        }
        // dz/z = i ρ e^{iθ} dθ / z; the i cancels against 1/(2πi).
        let w = (z - gamma.center) / z / n as f64;
        let gz = match g(z) {
            Ok(m) if m.is_finite() => m,
            Ok(_) | Err(Error::Degenerate(_)) => return Err(Error::PoleOnContour { index: j }),
            Err(e) => return Err(e),
        };
        acc = Some(match acc {
            None => gz.scaled(w),
            Some(a) => a.add(&gz.scaled(w)),
        });
    }
    Ok(acc.expect("at least 16 samples"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_of_identity() {
        let gamma = ClosedContour::new(C64::new(0.3, -0.2), 2.0, 64).unwrap();
        let m = contour_integral_mean(|_| Ok(ComplexMatrix::identity(2)), &gamma).unwrap();
        assert!(m.sub(&ComplexMatrix::identity(2)).max_abs() < 1e-14);
    }

    #[test]
    fn no_residue_for_z() {
        let gamma = ClosedContour::new(C64::new(0.0, 0.0), 1.0, 32).unwrap();
        let m = contour_integral_mean(|z| Ok(ComplexMatrix::from_diag(&[z])), &gamma).unwrap();
        assert!(m.max_abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_contours() {
        assert!(ClosedContour::new(C64::new(0.0, 0.0), 0.0, 32).is_err());
        assert!(ClosedContour::new(C64::new(0.0, 0.0), 1.0, 15).is_err());
        assert!(ClosedContour::new(C64::new(0.0, 0.0), 1.0, 8).is_err());
    }
}
