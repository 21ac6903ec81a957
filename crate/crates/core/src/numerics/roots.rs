use crate::{Error, Result, C64};
use std::f64::consts::PI;

/// Roots of `c2 z² + c1 z + c0`, ordered by modulus.
///
/// Equal moduli (to 1e-12 relative) are ordered by principal argument taken in
/// `[-π, π)`, so `z² - 1` yields `(-1, 1)`.
pub fn quadratic_roots(c2: C64, c1: C64, c0: C64) -> Result<(C64, C64)> {
    if c2.norm() == 0.0 {
        return Err(Error::Degenerate("leading coefficient vanishes; root at infinity".into()));
    }
    let disc = (c1 * c1 - 4.0 * c2 * c0).sqrt();
    // Pick the sign that avoids cancellation, then recover the partner from the product.
    let q = if (c1 + disc).norm() >= (c1 - disc).norm() { -(c1 + disc) / 2.0 } else { -(c1 - disc) / 2.0 };
    let (za, zb) = if q.norm() == 0.0 {
        (C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    } else {
        (q / c2, c0 / q)
    };
    Ok(order_by_modulus(za, zb))
}

fn arg_key(z: C64) -> f64 {
    let a = z.arg();
    if a >= PI {
        a - 2.0 * PI
    } else {
        a
    }
}

/// Orders two roots by modulus with the argument tie-break of [`quadratic_roots`].
pub fn order_by_modulus(a: C64, b: C64) -> (C64, C64) {
    let (ma, mb) = (a.norm(), b.norm());
    let tie = (ma - mb).abs() <= 1e-12 * ma.max(mb);
    let a_first = if tie { arg_key(a) <= arg_key(b) } else { ma < mb };
    if a_first {
        (a, b)
    } else {
        (b, a)
    }
}


/// All roots of a polynomial of the given degree, known only through evaluation,
/// by Durand–Kerner (Weierstrass) iteration. `lead` is the leading coefficient
/// and `radius` a bound on the root moduli.
pub fn polynomial_roots<P>(p: P, degree: usize, lead: C64, radius: f64) -> Result<Vec<C64>>
where
    P: Fn(C64) -> C64,
{
    if degree == 0 {
        return Ok(vec![]);
    }
    if lead.norm() == 0.0 {
        return Err(Error::Degenerate("zero leading coefficient".into()));
    }
    let seed = C64::new(0.4, 0.9);
    let mut z: Vec<C64> = (0..degree).map(|j| seed.powu(j as u32 + 1) * radius).collect();
    let mut worst = f64::INFINITY;
    for it in 0..2000 {
        worst = 0.0;
        for i in 0..degree {
            let mut den = lead;
            for j in 0..degree {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = C64::new(f64::EPSILON * radius, 0.0);
            }
            let step = p(z[i]) / den;
            z[i] -= step;
            worst = worst.max(step.norm());
        }
        if worst <= 1e-15 * radius.max(1.0) && it > 2 {
            return Ok(z);
        }
    }
    // Clustered roots stall above machine precision.
    if worst <= 1e-9 * radius.max(1.0) {
        return Ok(z);
    }
    Err(Error::NoConvergence { what: "Durand-Kerner iteration", iterations: 2000 })
}
