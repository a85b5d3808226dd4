//! Scalar normal-distribution functions: density, distribution function,
//! quantile, Mills ratio, the Gauss isoperimetric function, the trimmed-ball
//! radius `r(α) = I(α)/α` and the ratio `G(u) = φ(u)/Φ(u)` with its inverse.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_677_939_946_059_934_381_9;

/// Beyond this point tail quantities switch to the continued fraction.
const TAIL_SWITCH: f64 = 8.0;

pub fn normal_pdf(u: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * u * u).exp()
}

pub fn normal_cdf(u: f64) -> f64 {
    0.5 * libm::erfc(-u * FRAC_1_SQRT_2)
}

/// Upper tail `1 - Φ(u)` without cancellation.
pub fn normal_sf(u: f64) -> f64 {
    0.5 * libm::erfc(u * FRAC_1_SQRT_2)
}

/// Mills ratio `R(x) = (1 - Φ(x)) / φ(x)`.
///
/// For `x ≥ 8` the ratio is evaluated by its continued fraction
/// `1 / (x + 1/(x + 2/(x + 3/(x + …))))`, which stays accurate after both
/// numerator and denominator have underflowed.
pub fn mills_ratio(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= TAIL_SWITCH {
        if x.is_infinite() {
            return 0.0;
        }
        let mut t = x;
        for k in (1..=80).rev() {
            t = x + k as f64 / t;
        }
        1.0 / t
    } else {
        normal_sf(x) / normal_pdf(x)
    }
}

/// Mean of a standard normal conditioned on `Z ≥ c`, i.e. `φ(c) / (1 - Φ(c))`.
pub fn upper_conditional_mean(c: f64) -> f64 {
    if c == f64::NEG_INFINITY {
        return 0.0;
    }
    if c < -TAIL_SWITCH {
        // the upper tail is essentially the whole line
        return normal_pdf(c) / normal_cdf(-c);
    }
    1.0 / mills_ratio(c)
}

/// Standard normal quantile `Φ⁻¹(p)`.
///
/// Wichura's AS 241 rational approximation followed by one Halley step on
/// whichever tail of `Φ` is smaller, so both tails keep relative accuracy.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "normal quantile needs p in (0, 1), got {p}"
        )));
    }
    let x = as241(p);
    let refined = if p < 0.5 {
        let e = normal_cdf(x) - p;
        halley(x, e)
    } else {
        // work on the upper tail: q = 1 - p, f(x) = Φc(x) - q, f' = -φ
        let q = 1.0 - p;
        let e = q - normal_sf(x);
        halley(x, e)
    };
    Ok(refined)
}

fn halley(x: f64, err: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let u = err * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    if !u.is_finite() {
        return x;
    }
    x - u / (1.0 + 0.5 * x * u)
}

/// Horner evaluation, coefficients in increasing degree.
fn horner(x: f64, coeffs: &[f64]) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

#[allow(clippy::excessive_precision)]
const AS241_A: [f64; 8] = [
    3.387132872796366608,
    133.14166789178437745,
    1971.5909503065514427,
    13731.693765509461125,
    45921.953931549871457,
    67265.770927008700853,
    33430.575583588128105,
    2509.0809287301226727,
];
#[allow(clippy::excessive_precision)]
const AS241_B: [f64; 8] = [
    1.0,
    42.313330701600911252,
    687.1870074920579083,
    5394.1960214247511077,
    21213.794301586595867,
    39307.89580009271061,
    28729.085735721942674,
    5226.495278852545925,
];
#[allow(clippy::excessive_precision)]
const AS241_C: [f64; 8] = [
    1.42343711074968357734,
    4.6303378461565452959,
    5.7694972214606914055,
    3.64784832476320460504,
    1.27045825245236838258,
    0.24178072517745061177,
    0.0227238449892691845833,
    7.7454501427834140764e-4,
];
#[allow(clippy::excessive_precision)]
const AS241_D: [f64; 8] = [
    1.0,
    2.05319162663775882187,
    1.6763848301838038494,
    0.68976733498510000455,
    0.14810397642748007459,
    0.0151986665636164571966,
    5.475938084995344946e-4,
    1.05075007164441684324e-9,
];
#[allow(clippy::excessive_precision)]
const AS241_E: [f64; 8] = [
    6.6579046435011037772,
    5.4637849111641143699,
    1.7848265399172913358,
    0.29656057182850489123,
    0.026532189526576123093,
    1.2426609473880784386e-3,
    2.71155556874348757815e-5,
    2.01033439929228813265e-7,
];
#[allow(clippy::excessive_precision)]
const AS241_F: [f64; 8] = [
    1.0,
    0.59983220655588793769,
    0.13692988092273580531,
    0.0148753612908506148525,
    7.868691311456132591e-4,
    1.8463183175100546818e-5,
    1.4215117583164458887e-7,
    2.04426310338993978564e-15,
];

fn as241(p: f64) -> f64 {
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * horner(r, &AS241_A) / horner(r, &AS241_B);
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let r = (-tail.ln()).sqrt();
    let val = if r <= 5.0 {
        let r = r - 1.6;
        horner(r, &AS241_C) / horner(r, &AS241_D)
    } else {
        let r = r - 5.0;
        horner(r, &AS241_E) / horner(r, &AS241_F)
    };
    if q < 0.0 {
        -val
    } else {
        val
    }
}

fn check_open_unit(alpha: f64, what: &str) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{what} needs alpha in (0, 1), got {alpha}"
        )))
    }
}

/// Gauss isoperimetric function `I(α) = φ(Φ⁻¹(α))`.
pub fn isoperimetric(alpha: f64) -> Result<f64> {
    check_open_unit(alpha, "isoperimetric")?;
    Ok(normal_pdf(normal_quantile(alpha)?))
}

/// Radius `r(α) = I(α)/α` of the zonoid α-trimmed ball of the standard normal.
pub fn radius(alpha: f64) -> Result<f64> {
    check_open_unit(alpha, "radius")?;
    Ok(isoperimetric(alpha)? / alpha)
}

/// `G(u) = φ(u)/Φ(u)`, strictly decreasing from `+∞` to `0`.
pub fn g_ratio(u: f64) -> f64 {
    if u == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    // φ(u)/Φ(u) = 1/R(-u)
    1.0 / mills_ratio(-u)
}

/// Inverse of [`g_ratio`]: the unique `u` with `G(u) = y`.
///
/// Bracketing plus Newton on `ln G`, whose derivative `-(u + G(u))` is
/// strictly negative, so every Newton step that leaves the bracket is
/// replaced by bisection.
pub fn g_inverse(y: f64) -> Result<f64> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::Domain(format!(
            "g_inverse needs a finite y > 0, got {y}"
        )));
    }
    let target = y.ln();
    let f = |u: f64| g_ratio(u).ln() - target;

    let mut u = if y > 1.0 {
        -y + 1.0 / y
    } else {
        let arg = -2.0 * (y * (2.0 * PI).sqrt()).ln();
        if arg > 0.0 {
            arg.sqrt()
        } else {
            0.0
        }
    };

    // f is decreasing: f(lo) > 0 > f(hi)
    let mut lo = u - 1.0;
    let mut hi = u + 1.0;
    let mut step = 1.0;
    while f(lo) < 0.0 {
        step *= 2.0;
        lo -= step;
        if lo < -1e300 {
            return Err(Error::Domain(format!(
                "g_inverse failed to bracket y = {y}"
            )));
        }
    }
    step = 1.0;
    while f(hi) > 0.0 {
        step *= 2.0;
        hi += step;
        if hi > 40.0 && g_ratio(hi) == 0.0 {
            return Err(Error::Domain(format!("g_inverse: y = {y} underflows")));
        }
    }
    if !(u > lo && u < hi) {
        u = 0.5 * (lo + hi);
    }

    for _ in 0..200 {
        let fu = f(u);
        if fu == 0.0 {
            return Ok(u);
        }
        if fu > 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        let deriv = -(u + g_ratio(u));
        let mut next = u - fu / deriv;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - u).abs() <= 4.0 * f64::EPSILON * (1.0 + u.abs()) {
            return Ok(next);
        }
        u = next;
        if hi - lo <= 4.0 * f64::EPSILON * (1.0 + u.abs()) {
            return Ok(u);
        }
    }
    Ok(u)
}

/// Inverse of the trimmed-ball radius: the `α` with `r(α) = rho`.
///
/// Uses `r(α) = G(Φ⁻¹(α))`, so `α = Φ(G⁻¹(rho))`.
pub fn radius_inverse(rho: f64) -> Result<f64> {
    if rho == 0.0 {
        return Ok(1.0);
    }
    Ok(normal_cdf(g_inverse(rho)?))
}
