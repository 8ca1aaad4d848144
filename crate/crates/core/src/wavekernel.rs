//! Wave fundamental solution and the deterministic part of the solution.
//!
//! The kernel `G_t` is characterised by its spatial Fourier transform
//! `sin(t |xi|) / |xi|` in every dimension; in direct space it is a
//! function for `d = 1, 2` and the normalised sphere measure for `d = 3`.
//! This module evaluates both representations, the deterministic term
//! `w(t,x)` built from the initial data, and the elementary time integrals
//! of the kernel that the chaos-norm routes are assembled from. Removable
//! singularities get series branches so the closed forms stay accurate
//! near the poles.

use crate::error::{Error, Result};
use crate::quad::{self, Tol};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `(1 - cos(u t)) / u`, continuous at `u = 0` (value 0). Odd in `u`.
pub fn one_minus_cos_over(u: f64, t: f64) -> f64 {
    let z = u * t;
    if z.abs() < 1e-4 {
        u * t * t / 2.0 * (1.0 - z * z / 12.0 + z.powi(4) / 360.0)
    } else {
        (1.0 - z.cos()) / u
    }
}

/// `sin(u t) / u`, continuous at `u = 0` (value `t`). Even in `u`.
pub fn sin_over(u: f64, t: f64) -> f64 {
    let z = u * t;
    if z.abs() < 1e-4 {
        t * (1.0 - z * z / 6.0 + z.powi(4) / 120.0)
    } else {
        z.sin() / u
    }
}

/// `(1 - cos z) / z^2`, continuous at `z = 0` (value 1/2).
pub fn one_minus_cos_over_sq(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        0.5 * (1.0 - z * z / 12.0 + z.powi(4) / 360.0)
    } else {
        (1.0 - z.cos()) / (z * z)
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Spatial Fourier transform of the wave kernel:
/// `sin(t |xi|) / |xi|`, extended continuously by `t` at `xi = 0`.
pub fn ghat(t: f64, xi: &[f64]) -> f64 {
    ghat_radial(t, norm(xi))
}

/// [`ghat`] as a function of `|xi|`.
pub fn ghat_radial(t: f64, xi_norm: f64) -> f64 {
    sin_over(xi_norm, t)
}

/// Direct-space value of the wave kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelValue {
    /// pointwise value (d = 1, 2)
    Value(f64),
    /// d = 3: the kernel is `surface_density` times the uniform surface
    /// measure on the sphere of the given radius; total mass = radius
    Sphere { radius: f64, surface_density: f64 },
}

impl KernelValue {
    /// Total mass of the sphere measure (d = 3 only).
    pub fn sphere_mass(&self) -> Option<f64> {
        match self {
            KernelValue::Sphere { radius, surface_density } => {
                Some(surface_density * 4.0 * std::f64::consts::PI * radius * radius)
            }
            KernelValue::Value(_) => None,
        }
    }
}

/// Direct-space wave kernel:
///
/// * d = 1: `1/2` inside the light cone `|x| < t`;
/// * d = 2: `(2 pi)^{-1} (t^2 - |x|^2)^{-1/2}` inside the cone, with a
///   non-removable singularity on `|x| = t`;
/// * d = 3: a measure on the sphere `|x| = t`, returned as a descriptor
///   (pointwise evaluation is meaningless there).
pub fn g_direct(d: usize, t: f64, x: &[f64]) -> Result<KernelValue> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("time must be positive, got {t}")));
    }
    if x.len() != d {
        return Err(Error::InvalidParameter(format!(
            "point has {} coordinates, expected {d}",
            x.len()
        )));
    }
    let r = norm(x);
    match d {
        1 => Ok(KernelValue::Value(if r < t { 0.5 } else { 0.0 })),
        2 => {
            if r == t {
                return Err(Error::Singularity(format!(
                    "planar wave kernel blows up on the light cone |x| = t = {t}"
                )));
            }
            Ok(KernelValue::Value(if r < t {
                1.0 / (2.0 * std::f64::consts::PI * (t * t - r * r).sqrt())
            } else {
                0.0
            }))
        }
        3 => Ok(KernelValue::Sphere {
            radius: t,
            surface_density: 1.0 / (4.0 * std::f64::consts::PI * t),
        }),
        _ => Err(Error::InvalidParameter(format!("dimension {d} out of range"))),
    }
}

/// Total mass `\int G_t(x) dx = t`, the same in every dimension.
pub fn g_total_mass(d: usize, t: f64) -> Result<f64> {
    if !(1..=3).contains(&d) {
        return Err(Error::InvalidParameter(format!("dimension {d} out of range")));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time must be nonnegative, got {t}")));
    }
    Ok(t)
}

/// `\int_0^inf e^{-beta r} sin(r eta)/eta dr = 1 / (beta^2 + eta^2)` for
/// `Re beta > 0`; at `eta = 0` the integrand degenerates to `r e^{-beta r}`
/// and the closed form still holds.
pub fn sine_laplace(beta: Complex64, eta_norm: f64) -> Result<Complex64> {
    if !(beta.re > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Laplace variable needs a positive real part, got {beta}"
        )));
    }
    if !(eta_norm >= 0.0) {
        return Err(Error::InvalidParameter("frequency norm must be nonnegative".into()));
    }
    Ok((beta * beta + eta_norm * eta_norm).inv())
}

/// `Q_t(lambda, xi) = \int_0^t cos(lambda s) sin(|xi| s) ds` in closed
/// form: half the sum of `(1 - cos(u t))/u` at `u = lambda + |xi|` and
/// `u = |xi| - lambda`, each extended through its removable zero.
pub fn q_closed_form(t: f64, lambda: f64, xi_norm: f64) -> f64 {
    0.5 * (one_minus_cos_over(lambda + xi_norm, t) + one_minus_cos_over(xi_norm - lambda, t))
}

/// `\int_0^t s^k e^{i lambda s} ds` (series for `|lambda| t` small,
/// integration-by-parts recursion otherwise).
pub fn poly_exp_integral(k: u32, lambda: f64, t: f64) -> Complex64 {
    if (lambda * t).abs() < 1e-2 {
        // sum_m (i lambda)^m t^{k+m+1} / (m! (k+m+1))
        let z = Complex64::new(0.0, lambda);
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut fact = 1.0;
        for m in 0..14i32 {
            if m > 0 {
                fact *= m as f64;
                term *= z;
            }
            sum += term * t.powi(k as i32 + m + 1) / (fact * (k as i32 + m + 1) as f64);
        }
        return sum;
    }
    let z = Complex64::new(0.0, lambda);
    let eit = Complex64::new(0.0, lambda * t).exp();
    let mut acc = (eit - 1.0) / z; // k = 0
    for j in 1..=k {
        acc = (t.powi(j as i32) * eit - (j as f64) * acc) / z;
    }
    acc
}

/// `\int_0^t e^{i lambda s} sin(|xi| s)/|xi| ds`: the oscillatory pairing
/// of the wave kernel used by the frequency-domain chaos-norm route.
///
/// Real part `Q_t(lambda, xi)/|xi|`; a polynomial branch takes over for
/// `|xi| t` small, where the closed form loses digits to cancellation.
pub fn wave_phase_integral(t: f64, lambda: f64, xi_norm: f64) -> Complex64 {
    let rho = xi_norm;
    if (rho * t).abs() < 1e-3 {
        // sin(rho s)/rho = s - rho^2 s^3/6 + rho^4 s^5/120 - ...
        let e1 = poly_exp_integral(1, lambda, t);
        let e3 = poly_exp_integral(3, lambda, t);
        let e5 = poly_exp_integral(5, lambda, t);
        return e1 - e3 * (rho * rho / 6.0) + e5 * (rho.powi(4) / 120.0);
    }
    let q = 0.5 * (one_minus_cos_over(lambda + rho, t) + one_minus_cos_over(rho - lambda, t));
    let r = 0.5 * (sin_over(lambda - rho, t) - sin_over(lambda + rho, t));
    Complex64::new(q / rho, r / rho)
}

/// Windowed autocorrelation of the Fourier kernel at frequency `rho`:
/// `\int_0^{t-u} sin((s+u) rho) sin(s rho) / rho^2 ds` for `0 <= u <= t`,
/// closed form with a series branch for `rho` small.
pub fn ghat_autocorrelation(t: f64, u: f64, rho: f64) -> f64 {
    debug_assert!((0.0..=t).contains(&u), "window offset {u} outside [0, {t}]");
    let tau = t - u;
    let w = 2.0 * t - u;
    if (rho * 2.0 * t).abs() < 1e-3 {
        // N(rho) = tau cos(u rho) - [sin(w rho) - sin(u rho)]/(2 rho) has a
        // double zero at rho = 0; the quotient N/(2 rho^2) expands as
        let n2 = -tau * u * u / 2.0 + (w.powi(3) - u.powi(3)) / 12.0;
        let n4 = tau * u.powi(4) / 24.0 - (w.powi(5) - u.powi(5)) / 240.0;
        return 0.5 * (n2 + n4 * rho * rho);
    }
    0.5 * (tau * (u * rho).cos() - ((w * rho).sin() - (u * rho).sin()) / (2.0 * rho)) / (rho * rho)
}

/// Initial-condition profiles, rich enough to exercise the deterministic
/// bound `|w(t,x)| <= M0 + M1 t` without a general function DSL.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum FunctionDescriptor {
    Zero,
    Constant { value: f64 },
    /// indicator of the axis-aligned box `[lo_j, hi_j]`, amplitude 1
    IndicatorBox { lo: Vec<f64>, hi: Vec<f64> },
    /// `amplitude * exp(-|x - center|^2 / (2 sigma^2))`
    GaussianBump { amplitude: f64, center: Vec<f64>, sigma: f64 },
    /// real trigonometric polynomial `sum_k 2 Re(c_k e^{i xi_k . x})`,
    /// one representative frequency per conjugate pair
    FourierAtoms {
        frequencies: Vec<Vec<f64>>,
        coefficients_re: Vec<f64>,
        coefficients_im: Vec<f64>,
    },
}

impl FunctionDescriptor {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            FunctionDescriptor::Zero => 0.0,
            FunctionDescriptor::Constant { value } => *value,
            FunctionDescriptor::IndicatorBox { lo, hi } => {
                let inside =
                    x.iter().zip(lo.iter().zip(hi)).all(|(v, (l, h))| *l <= *v && *v <= *h);
                if inside {
                    1.0
                } else {
                    0.0
                }
            }
            FunctionDescriptor::GaussianBump { amplitude, center, sigma } => {
                let d2: f64 = x.iter().zip(center).map(|(v, c)| (v - c) * (v - c)).sum();
                amplitude * (-d2 / (2.0 * sigma * sigma)).exp()
            }
            FunctionDescriptor::FourierAtoms { frequencies, coefficients_re, coefficients_im } => {
                frequencies
                    .iter()
                    .zip(coefficients_re.iter().zip(coefficients_im))
                    .map(|(xi, (re, im))| {
                        let phase: f64 = xi.iter().zip(x).map(|(a, b)| a * b).sum();
                        2.0 * (re * phase.cos() - im * phase.sin())
                    })
                    .sum()
            }
        }
    }

    pub fn sup_norm(&self) -> f64 {
        match self {
            FunctionDescriptor::Zero => 0.0,
            FunctionDescriptor::Constant { value } => value.abs(),
            FunctionDescriptor::IndicatorBox { .. } => 1.0,
            FunctionDescriptor::GaussianBump { amplitude, .. } => amplitude.abs(),
            FunctionDescriptor::FourierAtoms { coefficients_re, coefficients_im, .. } => {
                coefficients_re
                    .iter()
                    .zip(coefficients_im)
                    .map(|(re, im)| 2.0 * (re * re + im * im).sqrt())
                    .sum()
            }
        }
    }

    fn validate(&self, d: usize) -> Result<()> {
        let ok = match self {
            FunctionDescriptor::Zero | FunctionDescriptor::Constant { .. } => true,
            FunctionDescriptor::IndicatorBox { lo, hi } => {
                lo.len() == d && hi.len() == d && lo.iter().zip(hi).all(|(l, h)| l < h)
            }
            FunctionDescriptor::GaussianBump { center, sigma, .. } => {
                center.len() == d && *sigma > 0.0
            }
            FunctionDescriptor::FourierAtoms { frequencies, coefficients_re, coefficients_im } => {
                frequencies.iter().all(|f| f.len() == d)
                    && frequencies.len() == coefficients_re.len()
                    && frequencies.len() == coefficients_im.len()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("descriptor {self:?} is ill-formed for d = {d}")))
        }
    }
}

/// Initial data `(u0, u1)`: `u1` bounded; `u0` bounded for d = 1 and
/// Fourier-integrable for d = 2, 3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialData {
    pub u0: FunctionDescriptor,
    pub u1: FunctionDescriptor,
}

impl InitialData {
    /// `M0`: `sup |u0|` for d = 1, the convention-normalised `L^1` norm of
    /// the Fourier transform for d = 2, 3 (they coincide on this catalog,
    /// whose transforms are nonnegative up to phase).
    pub fn m0(&self) -> f64 {
        self.u0.sup_norm()
    }

    /// `M1 = sup |u1|`.
    pub fn m1(&self) -> f64 {
        self.u1.sup_norm()
    }

    fn validate(&self, d: usize) -> Result<()> {
        self.u0.validate(d)?;
        self.u1.validate(d)?;
        if d >= 2 {
            if let FunctionDescriptor::IndicatorBox { .. } = self.u0 {
                // no integrable Fourier transform in d >= 2, so the cosine
                // representation of d/dt (G_t * u0) does not apply;
                // rejected rather than approximated
                return Err(Error::UnsupportedEvaluation(
                    "indicator u0 is not Fourier-integrable for d >= 2".into(),
                ));
            }
        }
        Ok(())
    }
}

/// `w(t,x) = d/dt (G_t * u0)(x) + (G_t * u1)(x)`.
///
/// d = 1 uses the d'Alembert form `(u0(x+t) + u0(x-t))/2` plus an interval
/// average of `u1`; d = 2, 3 use the cosine multiplier for the `u0` term
/// and cone/sphere quadrature (cone-edge singularity mapped away) for the
/// `u1` term. The result obeys `|w(t,x)| <= M0 + M1 t`.
pub fn w_eval(data: &InitialData, d: usize, t: f64, x: &[f64]) -> Result<f64> {
    if !(1..=3).contains(&d) {
        return Err(Error::InvalidParameter(format!("dimension {d} out of range")));
    }
    if x.len() != d {
        return Err(Error::InvalidParameter(format!(
            "point has {} coordinates, expected {d}",
            x.len()
        )));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time must be nonnegative, got {t}")));
    }
    data.validate(d)?;
    if t == 0.0 {
        return Ok(data.u0.eval(x));
    }
    Ok(du0_term(&data.u0, d, t, x)? + u1_term(&data.u1, d, t, x)?)
}

fn du0_term(u0: &FunctionDescriptor, d: usize, t: f64, x: &[f64]) -> Result<f64> {
    match u0 {
        FunctionDescriptor::Zero => Ok(0.0),
        FunctionDescriptor::Constant { value } => Ok(*value),
        FunctionDescriptor::FourierAtoms { frequencies, coefficients_re, coefficients_im } => {
            // d/dt (G_t * e^{i xi.x}) = cos(t |xi|) e^{i xi.x}, exactly
            Ok(frequencies
                .iter()
                .zip(coefficients_re.iter().zip(coefficients_im))
                .map(|(xi, (re, im))| {
                    let phase: f64 = xi.iter().zip(x).map(|(a, b)| a * b).sum();
                    2.0 * (t * norm(xi)).cos() * (re * phase.cos() - im * phase.sin())
                })
                .sum())
        }
        _ if d == 1 => Ok(0.5 * (u0.eval(&[x[0] + t]) + u0.eval(&[x[0] - t]))),
        FunctionDescriptor::GaussianBump { amplitude, center, sigma } => {
            // (2 pi)^{-d} int cos(t|xi|) Fu0(xi) e^{i xi.x} dxi, reduced to
            // a radial integral against the spherical mean of the phase
            let z: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
            let zn = norm(&z);
            let fu0_scale =
                amplitude * (sigma * (2.0 * std::f64::consts::PI).sqrt()).powi(d as i32);
            let prefactor = fu0_scale / (2.0 * std::f64::consts::PI).powi(d as i32)
                * crate::constants::sphere_area(d);
            let angular_mean = |r: f64| -> f64 {
                if zn == 0.0 {
                    return 1.0;
                }
                match d {
                    2 => {
                        // (1/2pi) int_0^{2pi} cos(r|z| cos theta) d theta,
                        // periodic trapezoid (spectrally accurate)
                        let n = 64 + 8 * ((r * zn) as usize).min(512);
                        (0..n)
                            .map(|k| {
                                let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
                                (r * zn * theta.cos()).cos()
                            })
                            .sum::<f64>()
                            / n as f64
                    }
                    3 => sin_over(r * zn, 1.0),
                    _ => unreachable!(),
                }
            };
            let integrand = |r: f64| {
                (t * r).cos()
                    * (-0.5 * sigma * sigma * r * r).exp()
                    * angular_mean(r)
                    * r.powi(d as i32 - 1)
            };
            let q = quad::integrate(integrand, 0.0, 10.0 / sigma, Tol::new(1e-11, 1e-9))?;
            Ok(prefactor * q.value)
        }
        FunctionDescriptor::IndicatorBox { .. } => Err(Error::UnsupportedEvaluation(
            "indicator u0 is not Fourier-integrable for d >= 2".into(),
        )),
    }
}

fn u1_term(u1: &FunctionDescriptor, d: usize, t: f64, x: &[f64]) -> Result<f64> {
    match u1 {
        FunctionDescriptor::Zero => Ok(0.0),
        FunctionDescriptor::Constant { value } => Ok(value * t),
        _ => match d {
            1 => {
                let q =
                    quad::integrate(|y| u1.eval(&[y]), x[0] - t, x[0] + t, Tol::new(1e-11, 1e-9))?;
                Ok(0.5 * q.value)
            }
            2 => {
                // polar form with r = t sin(phi): the (t^2 - r^2)^{-1/2}
                // cone-edge singularity cancels exactly
                let two_pi = 2.0 * std::f64::consts::PI;
                let outer = |phi: f64| -> f64 {
                    let r = t * phi.sin();
                    let n = 64;
                    let ring: f64 = (0..n)
                        .map(|k| {
                            let theta = two_pi * (k as f64) / (n as f64);
                            u1.eval(&[x[0] - r * theta.cos(), x[1] - r * theta.sin()])
                        })
                        .sum();
                    (ring / n as f64) * t * phi.sin()
                };
                let q =
                    quad::integrate(outer, 0.0, std::f64::consts::FRAC_PI_2, Tol::new(1e-9, 1e-8))?;
                Ok(q.value)
            }
            3 => {
                // (t/4pi) int_{S^2} u1(x - t omega) d omega by
                // Gauss-Legendre in cos(theta) x trapezoid in phi
                let two_pi = 2.0 * std::f64::consts::PI;
                let mut prev = f64::NAN;
                for m in [16usize, 32, 64, 128] {
                    let (nodes, weights) = gauss_legendre(m);
                    let nphi = 2 * m;
                    let mut total = 0.0;
                    for (c, w) in nodes.iter().zip(&weights) {
                        let s = (1.0 - c * c).sqrt();
                        let ring: f64 = (0..nphi)
                            .map(|k| {
                                let phi = two_pi * (k as f64) / (nphi as f64);
                                u1.eval(&[
                                    x[0] - t * s * phi.cos(),
                                    x[1] - t * s * phi.sin(),
                                    x[2] - t * c,
                                ])
                            })
                            .sum();
                        total += w * ring / nphi as f64;
                    }
                    let value = t / 2.0 * total;
                    if (value - prev).abs() <= 1e-9 * (1.0 + value.abs()) {
                        return Ok(value);
                    }
                    prev = value;
                }
                Ok(prev)
            }
            _ => unreachable!(),
        },
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let legendre = |x: f64| -> (f64, f64) {
        let (mut p0, mut p1) = (1.0, x);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        (p1, dp)
    };
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn ghat_examples() {
        assert_relative_eq!(ghat_radial(1.0, PI), PI.sin() / PI, epsilon = 1e-15);
        assert_relative_eq!(ghat(2.0, &[0.0, 0.0]), 2.0, epsilon = 1e-15);
        assert_relative_eq!(ghat_radial(1.0, 1.0), 1f64.sin(), epsilon = 1e-15);
    }

    #[test]
    fn ghat_is_bounded_by_t_and_inverse_norm() {
        for i in 0..2000 {
            let t = 10.0 * (i as f64 + 0.5) / 2000.0;
            let r = 20.0 * ((i * 7919) % 2000) as f64 / 2000.0;
            let g = ghat_radial(t, r).abs();
            let bound = t.min(if r > 0.0 { 1.0 / r } else { f64::INFINITY });
            assert!(g <= bound + 1e-12, "ghat({t},{r}) = {g} exceeds {bound}");
        }
    }

    #[test]
    fn g_direct_examples() {
        assert_eq!(g_direct(1, 2.0, &[1.0]).unwrap(), KernelValue::Value(0.5));
        assert_eq!(g_direct(1, 1.0, &[3.0]).unwrap(), KernelValue::Value(0.0));
        match g_direct(2, 1.0, &[0.0, 0.0]).unwrap() {
            KernelValue::Value(v) => assert_relative_eq!(v, 1.0 / (2.0 * PI), epsilon = 1e-15),
            _ => panic!("expected a pointwise value"),
        }
        assert!(matches!(g_direct(2, 1.0, &[1.0, 0.0]), Err(Error::Singularity(_))));
        let sphere = g_direct(3, 2.5, &[0.0, 0.0, 0.0]).unwrap();
        assert_relative_eq!(sphere.sphere_mass().unwrap(), 2.5, epsilon = 1e-12);
    }

    #[test]
    fn total_mass_matches_quadrature() {
        for t in [0.25, 1.0, 3.0, 10.0] {
            // d = 1: int 1/2 over (-t, t)
            let q1 = quad::integrate(
                |x| match g_direct(1, t, &[x]).unwrap() {
                    KernelValue::Value(v) => v,
                    _ => unreachable!(),
                },
                -t,
                t,
                Tol::new(1e-12, 1e-12),
            )
            .unwrap();
            assert_relative_eq!(q1.value, g_total_mass(1, t).unwrap(), epsilon = 1e-8);

            // d = 2: 2 pi r G_t(r) dr with r = t sin(phi) reduces to t sin(phi)
            let q2 = quad::integrate(
                |phi: f64| t * phi.sin(),
                0.0,
                std::f64::consts::FRAC_PI_2,
                Tol::new(1e-12, 1e-12),
            )
            .unwrap();
            assert_relative_eq!(q2.value, g_total_mass(2, t).unwrap(), epsilon = 1e-8);

            // d = 3: sphere mass is the descriptor's total
            let mass = g_direct(3, t, &[0.0; 3]).unwrap().sphere_mass().unwrap();
            assert_relative_eq!(mass, g_total_mass(3, t).unwrap(), epsilon = 1e-10);
        }
    }

    #[test]
    fn sine_laplace_examples() {
        let v = sine_laplace(Complex64::new(1.0, 0.0), 1.0).unwrap();
        assert_relative_eq!(v.re, 0.5, epsilon = 1e-15);
        let v = sine_laplace(Complex64::new(2.0, 0.0), 0.0).unwrap();
        assert_relative_eq!(v.re, 0.25, epsilon = 1e-15);
        assert!(sine_laplace(Complex64::new(0.0, 1.0), 1.0).is_err());
        assert!(sine_laplace(Complex64::new(-1.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn sine_laplace_matches_defining_integral() {
        // quadrature oracle on [0, 40] over a (beta, eta) grid
        for &beta_re in &[0.5, 1.0, 2.0, 4.0] {
            for &beta_im in &[0.0, 0.7, -1.3] {
                for &eta in &[0.0, 0.5, 1.0, 4.0, 10.0] {
                    let beta = Complex64::new(beta_re, beta_im);
                    let upper = 40f64.max(50.0 / beta_re);
                    let re = quad::integrate(
                        |r| (-beta_re * r).exp() * (beta_im * r).cos() * sin_over(eta, r),
                        0.0,
                        upper,
                        Tol::new(1e-12, 1e-12),
                    )
                    .unwrap()
                    .value;
                    let im = quad::integrate(
                        |r| -(-beta_re * r).exp() * (beta_im * r).sin() * sin_over(eta, r),
                        0.0,
                        upper,
                        Tol::new(1e-12, 1e-12),
                    )
                    .unwrap()
                    .value;
                    let closed = sine_laplace(beta, eta).unwrap();
                    assert_relative_eq!(closed.re, re, epsilon = 1e-8);
                    assert_relative_eq!(closed.im, im, epsilon = 1e-8);
                }
            }
        }
    }

    #[test]
    fn q_closed_form_examples() {
        assert_relative_eq!(q_closed_form(PI, 0.0, 1.0), 2.0, epsilon = 1e-12);
        let expected = 0.5 * (1.0 - 2f64.cos()) / 2.0;
        assert_relative_eq!(q_closed_form(1.0, 1.0, 1.0), expected, epsilon = 1e-12);
    }

    #[test]
    fn q_closed_form_matches_quadrature() {
        let draws = [
            (1.0, 0.3, 1.7),
            (2.0, 1.9, 1.9),
            (0.5, -0.8, 2.5),
            (3.0, 4.0, 0.05),
            (1.5, 0.0, 0.0001),
            (2.0, 5.0, 5.0),
        ];
        for (t, lambda, rho) in draws {
            let oracle = quad::integrate(
                |s| (lambda * s).cos() * (rho * s).sin(),
                0.0,
                t,
                Tol::new(1e-13, 1e-13),
            )
            .unwrap()
            .value;
            assert_relative_eq!(q_closed_form(t, lambda, rho), oracle, epsilon = 1e-10);
        }
    }

    #[test]
    fn wave_phase_integral_matches_quadrature() {
        let draws = [
            (1.0, 0.3, 1.7),
            (2.0, -1.1, 0.9),
            (1.0, 4.0, 4.0),
            (0.5, 100.0, 0.01),
            (1.0, 0.0, 1e-6),
            (2.0, 7.0, 1e-4),
            (1.0, 3000.0, 3000.5),
        ];
        for (t, lambda, rho) in draws {
            let re = quad::integrate(
                |s| (lambda * s).cos() * sin_over(rho, s),
                0.0,
                t,
                Tol::new(1e-13, 1e-13),
            )
            .unwrap()
            .value;
            let im = quad::integrate(
                |s| (lambda * s).sin() * sin_over(rho, s),
                0.0,
                t,
                Tol::new(1e-13, 1e-13),
            )
            .unwrap()
            .value;
            let e = wave_phase_integral(t, lambda, rho);
            assert_relative_eq!(e.re, re, epsilon = 1e-9, max_relative = 1e-8);
            assert_relative_eq!(e.im, im, epsilon = 1e-9, max_relative = 1e-8);
        }
    }

    #[test]
    fn autocorrelation_matches_quadrature() {
        for (t, u, rho) in [
            (1.0, 0.3, 1.0),
            (2.0, 0.0, 5.0),
            (2.0, 1.99, 0.7),
            (1.0, 0.5, 1e-5),
            (3.0, 1.0, 1e-2),
            (1.5, 0.2, 40.0),
        ] {
            let oracle = quad::integrate(
                |s: f64| sin_over(rho, s + u) * sin_over(rho, s),
                0.0,
                t - u,
                Tol::new(1e-13, 1e-13),
            )
            .unwrap()
            .value;
            assert_relative_eq!(
                ghat_autocorrelation(t, u, rho),
                oracle,
                epsilon = 1e-10,
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn w_eval_examples() {
        // u0 = 0, u1 = 1: w = t in every dimension
        let data = InitialData {
            u0: FunctionDescriptor::Zero,
            u1: FunctionDescriptor::Constant { value: 1.0 },
        };
        for d in 1..=3 {
            let x = vec![0.0; d];
            assert_relative_eq!(w_eval(&data, d, 3.0, &x).unwrap(), 3.0, epsilon = 1e-12);
        }

        // u0 = 1, u1 = 0, d = 1: w = 1
        let data = InitialData {
            u0: FunctionDescriptor::Constant { value: 1.0 },
            u1: FunctionDescriptor::Zero,
        };
        assert_relative_eq!(w_eval(&data, 1, 5.0, &[0.0]).unwrap(), 1.0, epsilon = 1e-14);

        // u0 = 0, u1 = indicator of [-10, 10], d = 1, t = 1, x = 0:
        // averaged interval sits inside the box
        let data = InitialData {
            u0: FunctionDescriptor::Zero,
            u1: FunctionDescriptor::IndicatorBox { lo: vec![-10.0], hi: vec![10.0] },
        };
        assert_relative_eq!(w_eval(&data, 1, 1.0, &[0.0]).unwrap(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn w_eval_gaussian_bump_dalembert_check() {
        // d = 1: the Fourier-free and pointwise forms must agree
        let bump = FunctionDescriptor::GaussianBump {
            amplitude: 0.7,
            center: vec![0.3],
            sigma: 0.9,
        };
        let data = InitialData { u0: bump.clone(), u1: FunctionDescriptor::Zero };
        let (t, x) = (1.3, 0.5);
        let expected = 0.5 * (bump.eval(&[x + t]) + bump.eval(&[x - t]));
        assert_relative_eq!(w_eval(&data, 1, t, &[x]).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn w_eval_gaussian_bump_matches_spherical_means_d3() {
        // d = 3 Kirchhoff check for u0: d/dt (G_t * u0) against a
        // finite-difference of the spherical mean t * mean_{S^2} u0(x-t w)
        let bump = FunctionDescriptor::GaussianBump {
            amplitude: 1.0,
            center: vec![0.0, 0.0, 0.0],
            sigma: 1.0,
        };
        let data = InitialData { u0: bump.clone(), u1: FunctionDescriptor::Zero };
        let (t, x) = (0.8, [0.2, -0.1, 0.4]);
        let mean = |tt: f64| {
            let d2 = InitialData { u0: FunctionDescriptor::Zero, u1: bump.clone() };
            w_eval(&d2, 3, tt, &x).unwrap() // = (G_tt * u0)(x) when u0 fed as u1
        };
        let h = 1e-4;
        let fd = (mean(t + h) - mean(t - h)) / (2.0 * h);
        assert_relative_eq!(w_eval(&data, 3, t, &x).unwrap(), fd, epsilon = 1e-6);
    }

    #[test]
    fn w_bound_holds_on_random_profiles() {
        // |w(t,x)| <= M0 + M1 t across the catalog
        let profiles_1d = [
            FunctionDescriptor::Constant { value: -0.4 },
            FunctionDescriptor::IndicatorBox { lo: vec![-1.0], hi: vec![2.0] },
            FunctionDescriptor::GaussianBump { amplitude: 1.5, center: vec![0.7], sigma: 0.4 },
            FunctionDescriptor::FourierAtoms {
                frequencies: vec![vec![1.0], vec![2.5]],
                coefficients_re: vec![0.3, -0.2],
                coefficients_im: vec![0.1, 0.4],
            },
        ];
        for u0 in &profiles_1d {
            for u1 in &profiles_1d {
                let data = InitialData { u0: u0.clone(), u1: u1.clone() };
                for (t, x) in [(0.5, -0.3), (1.0, 0.0), (2.7, 1.9)] {
                    let w = w_eval(&data, 1, t, &[x]).unwrap();
                    let bound = data.m0() + data.m1() * t;
                    assert!(
                        w.abs() <= bound + 1e-7,
                        "|w| = {} exceeds M0 + M1 t = {bound} for {data:?}",
                        w.abs()
                    );
                }
            }
        }

        // d = 2 and 3 with Fourier-integrable u0
        for d in [2usize, 3] {
            let u0 = FunctionDescriptor::GaussianBump {
                amplitude: 0.8,
                center: vec![0.1; d],
                sigma: 0.7,
            };
            let u1 = FunctionDescriptor::GaussianBump {
                amplitude: 1.2,
                center: vec![-0.2; d],
                sigma: 1.1,
            };
            let data = InitialData { u0, u1 };
            for t in [0.4, 1.0, 2.0] {
                let x = vec![0.3; d];
                let w = w_eval(&data, d, t, &x).unwrap();
                let bound = data.m0() + data.m1() * t;
                assert!(w.abs() <= bound + 1e-6, "d={d}: |w| = {} > {bound}", w.abs());
            }
        }
    }

    #[test]
    fn indicator_u0_rejected_in_higher_dimensions() {
        let data = InitialData {
            u0: FunctionDescriptor::IndicatorBox { lo: vec![-1.0, -1.0], hi: vec![1.0, 1.0] },
            u1: FunctionDescriptor::Zero,
        };
        assert!(matches!(
            w_eval(&data, 2, 1.0, &[0.0, 0.0]),
            Err(Error::UnsupportedEvaluation(_))
        ));
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (nodes, weights) = gauss_legendre(8);
        let integral: f64 =
            nodes.iter().zip(&weights).map(|(x, w)| w * (x.powi(6) - x.powi(3))).sum();
        assert_relative_eq!(integral, 2.0 / 7.0, epsilon = 1e-13);
        let total: f64 = weights.iter().sum();
        assert_relative_eq!(total, 2.0, epsilon = 1e-13);
    }
}
