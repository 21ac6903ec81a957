use crate::{Error, Result, C64};
use std::f64::consts::{FRAC_PI_2, PI};

/// Winding number of a closed sampled curve about `target`.
///
/// The closing segment from the last sample back to the first is included, so
/// the first point may or may not be repeated at the end.
pub fn winding_number(samples: &[C64], target: C64) -> Result<i64> {
    if samples.len() < 3 {
        return Err(Error::InvalidInput("winding number needs at least 3 samples".into()));
    }
    let scale = samples.iter().map(|z| z.norm()).fold(target.norm(), f64::max).max(1.0);
    let dmin = samples.iter().map(|z| (z - target).norm()).fold(f64::INFINITY, f64::min);
    if dmin <= 1e-12 * scale {
        return Err(Error::TargetOnCurve { distance: dmin });
    }
    let n = samples.len();
    let mut total = 0.0;
    for i in 0..n {
        let j = (i + 1) % n;
        let jump = ((samples[j] - target) / (samples[i] - target)).arg();
        if jump.abs() > FRAC_PI_2 {
            return Err(Error::InsufficientSampling { index: i, next: j, jump });
        }
        total += jump;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize) -> Vec<C64> {
        (0..n).map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)).collect()
    }

    #[test]
    fn unit_circle() {
        assert_eq!(winding_number(&circle(256), C64::new(0.0, 0.0)).unwrap(), 1);
        assert_eq!(winding_number(&circle(256), C64::new(3.0, 0.0)).unwrap(), 0);
        let mut rev = circle(256);
        rev.reverse();
        assert_eq!(winding_number(&rev, C64::new(0.2, 0.1)).unwrap(), -1);
    }

    #[test]
    fn refuses_coarse_or_touching_curves() {
        assert!(matches!(
            winding_number(&circle(3), C64::new(0.0, 0.0)),
            Err(Error::InsufficientSampling { .. })
        ));
        assert!(matches!(
            winding_number(&circle(64), C64::new(1.0, 0.0)),
            Err(Error::TargetOnCurve { .. })
        ));
    }
}
