//! Spatial covariance catalog and spectral measures.
//!
//! A noise model pairs a temporal exponent `alpha0` with a spectral
//! measure `mu` on `R^d` (`d` in {1,2,3}), the Fourier transform of the
//! spatial covariance `gamma` under the convention of [`crate::constants`].
//! Supported measure kinds:
//!
//! * `continuous-density` - a catalog density (white noise, Riesz power,
//!   fractional-sheet product, Gaussian);
//! * `atomic` - finitely many symmetric point masses;
//! * `homogeneous-radial` - a pure scaling law
//!   `mu(B(0,r)) = r^alpha * mu(B(0,1))` with no further structure.
//!
//! Every integral in the crate consumes `mu` through its radial
//! pushforward `g(r) = mu(B(0,r))`, exposed by
//! [`SpectralMeasure::radial`]: point masses for atomic measures, an exact
//! power law `dg = c r^{alpha-1} dr` for homogeneous ones, and a density
//! otherwise.

use crate::constants::{ball_volume, product_angular_mass, riesz_spectral_coeff, sphere_area};
use crate::error::{Error, Result};
use crate::quad::{self, Tol};
use serde::{Deserialize, Serialize};

/// Current version of the JSON descriptor schema.
pub const SCHEMA_VERSION: u32 = 1;

/// A point mass of the spectral measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: Vec<f64>,
    pub weight: f64,
}

impl Atom {
    pub fn norm(&self) -> f64 {
        self.location.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Catalog densities for `continuous-density` measures.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityKind {
    /// density identically 1 (spatial white noise; `gamma = delta`)
    WhiteNoise,
    /// `coeff * |xi|^{alpha - d}`, the spectral side of the Riesz kernel
    /// `|x|^{-alpha}`; `coeff` is derived from the Fourier convention
    Riesz { alpha: f64, coeff: f64 },
    /// `prod_j coeff_j |xi_j|^{exponent_j}`, the spectral side of a
    /// fractional-sheet covariance; `exponent_j = 1 - 2 H_j` in (-1, 0)
    FractionalProduct { exponents: Vec<f64>, coeffs: Vec<f64> },
    /// `scale * exp(-(|xi| / width)^2)`, a smooth non-homogeneous example
    Gaussian { scale: f64, width: f64 },
}

#[derive(Debug, Clone, PartialEq)]
enum MeasureData {
    Density(DensityKind),
    Atomic {
        atoms: Vec<Atom>,
        /// radius beyond which the true measure was not materialised
        /// (delta combs); `None` means the atom list is complete
        truncated_at: Option<f64>,
        /// declared asymptotic scaling of the unmaterialised tail:
        /// `mu(B(0,r))` grows like `r^{tail_order}` beyond the truncation
        tail_order: Option<f64>,
    },
    HomogeneousRadial { order: f64, unit_ball_mass: f64 },
}

/// Reported kind of a spectral measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureKind {
    ContinuousDensity,
    Atomic,
    HomogeneousRadial,
}

/// The spectral measure of a spatial covariance. Immutable after
/// construction; all operations are pure.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    dimension: usize,
    data: MeasureData,
}

/// Radial pushforward of a spectral measure: the measure of
/// `r -> mu(B(0, r))` as a measure on `[0, infinity)`.
pub enum RadialMeasure {
    /// point masses at radii (sorted ascending)
    Atoms(Vec<(f64, f64)>),
    /// `dg(r) = coeff * r^{power} dr` exactly (homogeneous measures;
    /// `power = order - 1 > -1`)
    PowerLaw { coeff: f64, power: f64 },
    /// `dg(r) = rho(r) dr` with `rho(r) ~ c r^{zero_power}` as `r -> 0`
    Density { rho: Box<dyn Fn(f64) -> f64 + Send + Sync>, zero_power: f64 },
}

fn check_dimension(d: usize) -> Result<()> {
    if !(1..=3).contains(&d) {
        return Err(Error::InvalidParameter(format!("dimension must be 1, 2 or 3, got {d}")));
    }
    Ok(())
}

impl SpectralMeasure {
    /// Continuous measure with a catalog density.
    pub fn density(dimension: usize, kind: DensityKind) -> Result<Self> {
        check_dimension(dimension)?;
        match &kind {
            DensityKind::WhiteNoise => {}
            DensityKind::Riesz { alpha, coeff } => {
                if !(*alpha > 0.0 && *alpha < dimension as f64) {
                    return Err(Error::InvalidParameter(format!(
                        "riesz exponent must lie in (0, d), got alpha={alpha} for d={dimension}"
                    )));
                }
                if !(*coeff > 0.0) {
                    return Err(Error::InvalidParameter("riesz coefficient must be positive".into()));
                }
            }
            DensityKind::FractionalProduct { exponents, coeffs } => {
                if exponents.len() != dimension || coeffs.len() != dimension {
                    return Err(Error::InvalidParameter(
                        "fractional product needs one exponent and coefficient per coordinate".into(),
                    ));
                }
                if exponents.iter().any(|e| !(*e > -1.0 && *e < 0.0)) {
                    return Err(Error::InvalidParameter(
                        "fractional product exponents must lie in (-1, 0)".into(),
                    ));
                }
                if coeffs.iter().any(|c| !(*c > 0.0)) {
                    return Err(Error::InvalidParameter(
                        "fractional product coefficients must be positive".into(),
                    ));
                }
            }
            DensityKind::Gaussian { scale, width } => {
                if !(*scale >= 0.0) || !(*width > 0.0) {
                    return Err(Error::InvalidParameter(
                        "gaussian density needs scale >= 0 and width > 0".into(),
                    ));
                }
            }
        }
        Ok(SpectralMeasure { dimension, data: MeasureData::Density(kind) })
    }

    /// Complete atomic measure. The atom list must be closed under
    /// negation (coordinate-exact): `gamma` is real only for symmetric
    /// measures.
    pub fn atomic(dimension: usize, atoms: Vec<Atom>) -> Result<Self> {
        Self::atomic_inner(dimension, atoms, None, None)
    }

    /// Atomic window of an infinite discrete measure, materialised inside
    /// `truncated_at`. An optional `tail_order` declares how the true
    /// measure scales beyond the window (`mu(B(0,r)) ~ r^{tail_order}`),
    /// which lets the convergence checker extrapolate instead of
    /// answering "inconclusive".
    pub fn atomic_truncated(
        dimension: usize,
        atoms: Vec<Atom>,
        truncated_at: f64,
        tail_order: Option<f64>,
    ) -> Result<Self> {
        if !(truncated_at > 0.0) {
            return Err(Error::InvalidParameter("truncation radius must be positive".into()));
        }
        if let Some(order) = tail_order {
            if !(order > 0.0 && order <= dimension as f64) {
                return Err(Error::InvalidParameter(format!(
                    "tail order must lie in (0, d], got {order}"
                )));
            }
        }
        Self::atomic_inner(dimension, atoms, Some(truncated_at), tail_order)
    }

    fn atomic_inner(
        dimension: usize,
        atoms: Vec<Atom>,
        truncated_at: Option<f64>,
        tail_order: Option<f64>,
    ) -> Result<Self> {
        check_dimension(dimension)?;
        for atom in &atoms {
            if atom.location.len() != dimension {
                return Err(Error::InvalidParameter(format!(
                    "atom location has {} coordinates, expected {dimension}",
                    atom.location.len()
                )));
            }
            if !(atom.weight > 0.0) {
                return Err(Error::InvalidParameter("atom weights must be positive".into()));
            }
            let negated: Vec<f64> = atom.location.iter().map(|x| -x).collect();
            let mirror = atoms.iter().find(|a| a.location == negated);
            match mirror {
                Some(m) if m.weight == atom.weight => {}
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "atomic measure is not symmetric: no mirror of {:?} with equal weight",
                        atom.location
                    )))
                }
            }
        }
        Ok(SpectralMeasure {
            dimension,
            data: MeasureData::Atomic { atoms, truncated_at, tail_order },
        })
    }

    /// Homogeneous measure known only through its scaling law
    /// `mu(B(0,r)) = r^order * unit_ball_mass`, `0 < order <= d`.
    pub fn homogeneous_radial(dimension: usize, order: f64, unit_ball_mass: f64) -> Result<Self> {
        check_dimension(dimension)?;
        if !(order > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "homogeneity order must be positive, got {order}"
            )));
        }
        if order > dimension as f64 {
            // a homogeneous measure of order > d would have a spectral-side
            // order < 0, which forces the measure to vanish
            return Err(Error::InvalidParameter(format!(
                "homogeneity order {order} exceeds the dimension {dimension}"
            )));
        }
        if !(unit_ball_mass >= 0.0) {
            return Err(Error::InvalidParameter("unit ball mass must be nonnegative".into()));
        }
        Ok(SpectralMeasure {
            dimension,
            data: MeasureData::HomogeneousRadial { order, unit_ball_mass },
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn kind(&self) -> MeasureKind {
        match self.data {
            MeasureData::Density(_) => MeasureKind::ContinuousDensity,
            MeasureData::Atomic { .. } => MeasureKind::Atomic,
            MeasureData::HomogeneousRadial { .. } => MeasureKind::HomogeneousRadial,
        }
    }

    pub fn atoms(&self) -> Option<&[Atom]> {
        match &self.data {
            MeasureData::Atomic { atoms, .. } => Some(atoms),
            _ => None,
        }
    }

    /// Radius beyond which an atomic measure was not materialised.
    pub fn truncated_at(&self) -> Option<f64> {
        match &self.data {
            MeasureData::Atomic { truncated_at, .. } => *truncated_at,
            _ => None,
        }
    }

    /// Declared asymptotic scaling order of a truncated atomic tail.
    pub fn tail_order(&self) -> Option<f64> {
        match &self.data {
            MeasureData::Atomic { tail_order, .. } => *tail_order,
            _ => None,
        }
    }

    pub fn density_kind(&self) -> Option<&DensityKind> {
        match &self.data {
            MeasureData::Density(k) => Some(k),
            _ => None,
        }
    }

    /// Spatial homogeneity order `alpha` of the underlying covariance,
    /// when the measure scales exactly (`mu(B(0,r)) = r^alpha mu(B(0,1))`).
    pub fn homogeneity_order(&self) -> Option<f64> {
        let d = self.dimension as f64;
        match &self.data {
            MeasureData::HomogeneousRadial { order, .. } => Some(*order),
            MeasureData::Density(DensityKind::WhiteNoise) => Some(d),
            MeasureData::Density(DensityKind::Riesz { alpha, .. }) => Some(*alpha),
            MeasureData::Density(DensityKind::FractionalProduct { exponents, .. }) => {
                Some(d + exponents.iter().sum::<f64>())
            }
            _ => None,
        }
    }

    /// `mu(B(0,1))` for measures with an exact scaling law.
    pub fn unit_ball_mass(&self) -> Option<f64> {
        match &self.data {
            MeasureData::HomogeneousRadial { unit_ball_mass, .. } => Some(*unit_ball_mass),
            MeasureData::Density(kind) => match kind {
                DensityKind::WhiteNoise => Some(ball_volume(self.dimension)),
                DensityKind::Riesz { alpha, coeff } => {
                    Some(sphere_area(self.dimension) * coeff / alpha)
                }
                DensityKind::FractionalProduct { exponents, coeffs } => {
                    let alpha = self.homogeneity_order().unwrap();
                    let c: f64 = coeffs.iter().product();
                    Some(c * product_angular_mass(exponents) / alpha)
                }
                DensityKind::Gaussian { .. } => None,
            },
            MeasureData::Atomic { .. } => None,
        }
    }

    /// Whether the density is rotation invariant (atomic and purely radial
    /// kinds included). Fractional products are radial only in d = 1.
    pub fn is_radial(&self) -> bool {
        match &self.data {
            MeasureData::Atomic { .. } | MeasureData::HomogeneousRadial { .. } => true,
            MeasureData::Density(kind) => match kind {
                DensityKind::WhiteNoise
                | DensityKind::Riesz { .. }
                | DensityKind::Gaussian { .. } => true,
                DensityKind::FractionalProduct { .. } => self.dimension == 1,
            },
        }
    }

    /// Pointwise density value; unsupported for atomic and
    /// homogeneous-radial kinds.
    pub fn density_at(&self, xi: &[f64]) -> Result<f64> {
        if xi.len() != self.dimension {
            return Err(Error::InvalidParameter(format!(
                "point has {} coordinates, expected {}",
                xi.len(),
                self.dimension
            )));
        }
        let kind = match &self.data {
            MeasureData::Density(kind) => kind,
            _ => {
                return Err(Error::UnsupportedEvaluation(
                    "pointwise density is only defined for continuous measures".into(),
                ))
            }
        };
        let norm = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
        Ok(match kind {
            DensityKind::WhiteNoise => 1.0,
            DensityKind::Riesz { alpha, coeff } => {
                coeff * norm.powf(alpha - self.dimension as f64)
            }
            DensityKind::FractionalProduct { exponents, coeffs } => xi
                .iter()
                .zip(exponents.iter().zip(coeffs))
                .map(|(x, (e, c))| c * x.abs().powf(*e))
                .product(),
            DensityKind::Gaussian { scale, width } => {
                scale * (-(norm / width).powi(2)).exp()
            }
        })
    }

    /// Radial pushforward `g(r) = mu(B(0,r))` as an integrable object.
    pub fn radial(&self) -> RadialMeasure {
        let d = self.dimension;
        match &self.data {
            MeasureData::Atomic { atoms, .. } => {
                let mut rs: Vec<(f64, f64)> = atoms.iter().map(|a| (a.norm(), a.weight)).collect();
                rs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                RadialMeasure::Atoms(rs)
            }
            MeasureData::HomogeneousRadial { order, unit_ball_mass } => RadialMeasure::PowerLaw {
                coeff: order * unit_ball_mass,
                power: order - 1.0,
            },
            MeasureData::Density(kind) => match kind {
                DensityKind::WhiteNoise => RadialMeasure::PowerLaw {
                    coeff: sphere_area(d),
                    power: d as f64 - 1.0,
                },
                DensityKind::Riesz { alpha, coeff } => RadialMeasure::PowerLaw {
                    coeff: sphere_area(d) * coeff,
                    power: alpha - 1.0,
                },
                DensityKind::FractionalProduct { exponents, coeffs } => {
                    let alpha = self.homogeneity_order().unwrap();
                    let c: f64 = coeffs.iter().product();
                    RadialMeasure::PowerLaw {
                        coeff: c * product_angular_mass(exponents),
                        power: alpha - 1.0,
                    }
                }
                DensityKind::Gaussian { scale, width } => {
                    let (s, w, area) = (*scale, *width, sphere_area(d));
                    let dm1 = d as f64 - 1.0;
                    RadialMeasure::Density {
                        rho: Box::new(move |r: f64| area * s * (-(r / w).powi(2)).exp() * r.powf(dm1)),
                        zero_power: dm1,
                    }
                }
            },
        }
    }

    /// `mu(B(0, r))` (closed ball). Exact for atomic and
    /// homogeneous-radial measures, adaptive quadrature for densities.
    pub fn radial_mass(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
        }
        match &self.data {
            MeasureData::Atomic { .. } => match self.radial() {
                RadialMeasure::Atoms(atoms) => {
                    Ok(atoms.iter().filter(|(rad, _)| *rad <= r).map(|(_, m)| m).sum())
                }
                _ => unreachable!(),
            },
            MeasureData::HomogeneousRadial { order, unit_ball_mass } => {
                Ok(unit_ball_mass * r.powf(*order))
            }
            MeasureData::Density(_) => {
                let rho: Box<dyn Fn(f64) -> f64> = match self.radial() {
                    RadialMeasure::PowerLaw { coeff, power } => {
                        Box::new(move |s: f64| coeff * s.powf(power))
                    }
                    RadialMeasure::Density { rho, .. } => rho,
                    RadialMeasure::Atoms(_) => unreachable!(),
                };
                let q = quad::integrate(|s| rho(s), 0.0, r, Tol::new(1e-11, 1e-9))?;
                Ok(q.value)
            }
        }
    }
}

/// Spatial covariance functions `gamma` of the catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CovarianceDescriptor {
    /// `gamma(x) = |x|^{-alpha}`, `0 < alpha < d`
    Riesz { dimension: usize, alpha: f64 },
    /// `gamma = delta` (spatial white noise)
    WhiteNoise { dimension: usize },
    /// `gamma(x) = prod_j |x_j|^{-(2 - 2 H_j)}`, `H_j` in (1/2, 1)
    FractionalSheet { hurst: Vec<f64> },
    /// periodic covariance: `mu` is a Dirac comb on the dual lattice
    /// `(2 pi / spacing) Z^d`, materialised inside `truncation_radius`
    DeltaComb { dimension: usize, spacing: f64, truncation_radius: f64 },
}

impl CovarianceDescriptor {
    pub fn dimension(&self) -> usize {
        match self {
            CovarianceDescriptor::Riesz { dimension, .. }
            | CovarianceDescriptor::WhiteNoise { dimension }
            | CovarianceDescriptor::DeltaComb { dimension, .. } => *dimension,
            CovarianceDescriptor::FractionalSheet { hurst } => hurst.len(),
        }
    }

    fn validate(&self) -> Result<()> {
        let d = self.dimension();
        check_dimension(d)?;
        match self {
            CovarianceDescriptor::Riesz { alpha, .. } => {
                if !(*alpha > 0.0 && *alpha < d as f64) {
                    return Err(Error::InvalidParameter(format!(
                        "riesz requires 0 < alpha < d, got alpha={alpha}, d={d}"
                    )));
                }
            }
            CovarianceDescriptor::WhiteNoise { .. } => {}
            CovarianceDescriptor::FractionalSheet { hurst } => {
                if hurst.iter().any(|h| !(*h > 0.5 && *h < 1.0)) {
                    return Err(Error::InvalidParameter(format!(
                        "fractional sheet requires H_j in (1/2, 1), got {hurst:?}"
                    )));
                }
            }
            CovarianceDescriptor::DeltaComb { spacing, truncation_radius, .. } => {
                if !(*spacing > 0.0) {
                    return Err(Error::InvalidParameter("lattice spacing must be positive".into()));
                }
                if !(*truncation_radius > 0.0) {
                    return Err(Error::InvalidParameter(
                        "delta comb needs a positive truncation radius".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Spatial homogeneity order of `gamma`, when it scales exactly.
    pub fn homogeneity_order(&self) -> Option<f64> {
        match self {
            CovarianceDescriptor::Riesz { alpha, .. } => Some(*alpha),
            CovarianceDescriptor::WhiteNoise { dimension } => Some(*dimension as f64),
            CovarianceDescriptor::FractionalSheet { hurst } => {
                Some(hurst.iter().map(|h| 2.0 - 2.0 * h).sum())
            }
            CovarianceDescriptor::DeltaComb { .. } => None,
        }
    }
}

/// Spectral measure of a catalog covariance under the crate's Fourier
/// convention (white noise maps to density 1).
pub fn to_spectral(cov: &CovarianceDescriptor) -> Result<SpectralMeasure> {
    cov.validate()?;
    let d = cov.dimension();
    match cov {
        CovarianceDescriptor::Riesz { alpha, .. } => SpectralMeasure::density(
            d,
            DensityKind::Riesz { alpha: *alpha, coeff: riesz_spectral_coeff(d, *alpha) },
        ),
        CovarianceDescriptor::WhiteNoise { .. } => {
            SpectralMeasure::density(d, DensityKind::WhiteNoise)
        }
        CovarianceDescriptor::FractionalSheet { hurst } => {
            let exponents: Vec<f64> = hurst.iter().map(|h| 1.0 - 2.0 * h).collect();
            let coeffs: Vec<f64> =
                hurst.iter().map(|h| riesz_spectral_coeff(1, 2.0 - 2.0 * h)).collect();
            SpectralMeasure::density(d, DensityKind::FractionalProduct { exponents, coeffs })
        }
        CovarianceDescriptor::DeltaComb { spacing, truncation_radius, .. } => {
            let step = 2.0 * std::f64::consts::PI / spacing;
            let weight = step.powi(d as i32);
            let kmax = (truncation_radius / step).floor() as i64;
            let mut atoms = Vec::new();
            let mut push = |coords: Vec<i64>| {
                let location: Vec<f64> = coords.iter().map(|k| *k as f64 * step).collect();
                let norm = location.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm <= *truncation_radius {
                    atoms.push(Atom { location, weight });
                }
            };
            match d {
                1 => {
                    for i in -kmax..=kmax {
                        push(vec![i]);
                    }
                }
                2 => {
                    for i in -kmax..=kmax {
                        for j in -kmax..=kmax {
                            push(vec![i, j]);
                        }
                    }
                }
                3 => {
                    for i in -kmax..=kmax {
                        for j in -kmax..=kmax {
                            for k in -kmax..=kmax {
                                push(vec![i, j, k]);
                            }
                        }
                    }
                }
                _ => unreachable!(),
            }
            SpectralMeasure::atomic_truncated(d, atoms, *truncation_radius, None)
        }
    }
}

/// Pointwise evaluation of the covariance function `gamma(x)`.
///
/// Only function-valued kernels support this; white noise and delta combs
/// are measures, and singular kernels reject the origin.
pub fn gamma_eval(cov: &CovarianceDescriptor, x: &[f64]) -> Result<f64> {
    cov.validate()?;
    let d = cov.dimension();
    if x.len() != d {
        return Err(Error::InvalidParameter(format!(
            "point has {} coordinates, expected {d}",
            x.len()
        )));
    }
    match cov {
        CovarianceDescriptor::Riesz { alpha, .. } => {
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::Singularity("riesz kernel has a pole at the origin".into()));
            }
            Ok(norm.powf(-alpha))
        }
        CovarianceDescriptor::FractionalSheet { hurst } => {
            if x.iter().any(|v| *v == 0.0) {
                return Err(Error::Singularity(
                    "fractional sheet kernel is singular on the coordinate axes".into(),
                ));
            }
            Ok(x.iter().zip(hurst).map(|(v, h)| v.abs().powf(-(2.0 - 2.0 * h))).product())
        }
        CovarianceDescriptor::WhiteNoise { .. } | CovarianceDescriptor::DeltaComb { .. } => {
            Err(Error::UnsupportedEvaluation(
                "kernel is a measure, not a function; integrate against it instead".into(),
            ))
        }
    }
}

/// A space-time noise model: spectral measure plus temporal exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    pub measure: SpectralMeasure,
    pub alpha0: f64,
}

impl NoiseModel {
    pub fn new(measure: SpectralMeasure, alpha0: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha0) {
            return Err(Error::InvalidParameter(format!(
                "temporal exponent alpha0 must lie in [0, 1), got {alpha0}"
            )));
        }
        Ok(NoiseModel { measure, alpha0 })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: schema::NoiseModelDoc = serde_json::from_str(text)?;
        doc.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&schema::NoiseModelDoc::from(self)).expect("serializable")
    }
}

/// JSON documents for descriptors (`{"dimension": d, "kind": ..., "params": {...}}`),
/// versioned via `schema_version`.
pub mod schema {
    use super::*;

    #[derive(Debug, Serialize, Deserialize)]
    #[serde(tag = "type", rename_all = "kebab-case")]
    pub enum DensityDoc {
        WhiteNoise,
        Riesz { alpha: f64 },
        FractionalSheet { hurst: Vec<f64> },
        Gaussian { scale: f64, width: f64 },
    }

    #[derive(Debug, Serialize, Deserialize)]
    #[serde(untagged)]
    pub enum MeasureParams {
        Density { density: DensityDoc },
        Atoms {
            atoms: Vec<Atom>,
            #[serde(default, skip_serializing_if = "Option::is_none")]
            truncated_at: Option<f64>,
            #[serde(default, skip_serializing_if = "Option::is_none")]
            tail_order: Option<f64>,
        },
        Homogeneous { order: f64, unit_ball_mass: f64 },
    }

    #[derive(Debug, Serialize, Deserialize)]
    pub struct SpectralMeasureDoc {
        #[serde(default = "default_version")]
        pub schema_version: u32,
        pub dimension: usize,
        pub kind: MeasureKind,
        pub params: MeasureParams,
    }

    fn default_version() -> u32 {
        SCHEMA_VERSION
    }

    #[derive(Debug, Serialize, Deserialize)]
    pub struct NoiseModelDoc {
        #[serde(default = "default_version")]
        pub schema_version: u32,
        pub alpha0: f64,
        pub measure: SpectralMeasureDoc,
    }

    impl TryFrom<SpectralMeasureDoc> for SpectralMeasure {
        type Error = Error;

        fn try_from(doc: SpectralMeasureDoc) -> Result<SpectralMeasure> {
            if doc.schema_version != SCHEMA_VERSION {
                return Err(Error::InvalidParameter(format!(
                    "unsupported schema version {} (this build reads {})",
                    doc.schema_version, SCHEMA_VERSION
                )));
            }
            match (doc.kind, doc.params) {
                (MeasureKind::ContinuousDensity, MeasureParams::Density { density }) => {
                    let kind = match density {
                        DensityDoc::WhiteNoise => DensityKind::WhiteNoise,
                        DensityDoc::Riesz { alpha } => DensityKind::Riesz {
                            alpha,
                            coeff: riesz_spectral_coeff(doc.dimension, alpha),
                        },
                        DensityDoc::FractionalSheet { hurst } => {
                            let cov = CovarianceDescriptor::FractionalSheet { hurst };
                            return to_spectral(&cov);
                        }
                        DensityDoc::Gaussian { scale, width } => {
                            DensityKind::Gaussian { scale, width }
                        }
                    };
                    SpectralMeasure::density(doc.dimension, kind)
                }
                (MeasureKind::Atomic, MeasureParams::Atoms { atoms, truncated_at, tail_order }) => {
                    match truncated_at {
                        Some(radius) => SpectralMeasure::atomic_truncated(
                            doc.dimension,
                            atoms,
                            radius,
                            tail_order,
                        ),
                        None => SpectralMeasure::atomic(doc.dimension, atoms),
                    }
                }
                (MeasureKind::HomogeneousRadial, MeasureParams::Homogeneous { order, unit_ball_mass }) => {
                    SpectralMeasure::homogeneous_radial(doc.dimension, order, unit_ball_mass)
                }
                (kind, _) => Err(Error::InvalidParameter(format!(
                    "params do not match measure kind {kind:?}"
                ))),
            }
        }
    }

    impl From<&SpectralMeasure> for SpectralMeasureDoc {
        fn from(m: &SpectralMeasure) -> SpectralMeasureDoc {
            let (kind, params) = match &m.data {
                MeasureData::Density(k) => {
                    let density = match k {
                        DensityKind::WhiteNoise => DensityDoc::WhiteNoise,
                        DensityKind::Riesz { alpha, .. } => DensityDoc::Riesz { alpha: *alpha },
                        DensityKind::FractionalProduct { exponents, .. } => {
                            DensityDoc::FractionalSheet {
                                hurst: exponents.iter().map(|e| (1.0 - e) / 2.0).collect(),
                            }
                        }
                        DensityKind::Gaussian { scale, width } => {
                            DensityDoc::Gaussian { scale: *scale, width: *width }
                        }
                    };
                    (MeasureKind::ContinuousDensity, MeasureParams::Density { density })
                }
                MeasureData::Atomic { atoms, truncated_at, tail_order } => (
                    MeasureKind::Atomic,
                    MeasureParams::Atoms {
                        atoms: atoms.clone(),
                        truncated_at: *truncated_at,
                        tail_order: *tail_order,
                    },
                ),
                MeasureData::HomogeneousRadial { order, unit_ball_mass } => (
                    MeasureKind::HomogeneousRadial,
                    MeasureParams::Homogeneous { order: *order, unit_ball_mass: *unit_ball_mass },
                ),
            };
            SpectralMeasureDoc {
                schema_version: SCHEMA_VERSION,
                dimension: m.dimension,
                kind,
                params,
            }
        }
    }

    impl TryFrom<NoiseModelDoc> for NoiseModel {
        type Error = Error;

        fn try_from(doc: NoiseModelDoc) -> Result<NoiseModel> {
            NoiseModel::new(doc.measure.try_into()?, doc.alpha0)
        }
    }

    impl From<&NoiseModel> for NoiseModelDoc {
        fn from(m: &NoiseModel) -> NoiseModelDoc {
            NoiseModelDoc {
                schema_version: SCHEMA_VERSION,
                alpha0: m.alpha0,
                measure: (&m.measure).into(),
            }
        }
    }
}

/// Symmetric pair of unit-weight atoms at `(+-r, 0, ..)`, a recurring test
/// measure.
pub fn symmetric_pair(dimension: usize, r: f64, weight: f64) -> Result<SpectralMeasure> {
    let mut plus = vec![0.0; dimension];
    plus[0] = r;
    let mut minus = vec![0.0; dimension];
    minus[0] = -r;
    SpectralMeasure::atomic(
        dimension,
        vec![Atom { location: plus, weight }, Atom { location: minus, weight }],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn riesz_to_spectral_examples() {
        // riesz(alpha=1), d=3: density C |xi|^{-2}, order 1
        let mu = to_spectral(&CovarianceDescriptor::Riesz { dimension: 3, alpha: 1.0 }).unwrap();
        assert_eq!(mu.kind(), MeasureKind::ContinuousDensity);
        assert_eq!(mu.homogeneity_order(), Some(1.0));
        let c = riesz_spectral_coeff(3, 1.0);
        assert_relative_eq!(mu.density_at(&[2.0, 0.0, 0.0]).unwrap(), c / 4.0, max_relative = 1e-13);
        assert_relative_eq!(c, 4.0 * PI, max_relative = 1e-13);
    }

    #[test]
    fn white_noise_to_spectral() {
        let mu = to_spectral(&CovarianceDescriptor::WhiteNoise { dimension: 2 }).unwrap();
        assert_eq!(mu.density_at(&[0.3, -1.7]).unwrap(), 1.0);
        assert_eq!(mu.homogeneity_order(), Some(2.0));
        assert_relative_eq!(mu.unit_ball_mass().unwrap(), PI, max_relative = 1e-13);
    }

    #[test]
    fn fractional_sheet_order() {
        let mu =
            to_spectral(&CovarianceDescriptor::FractionalSheet { hurst: vec![0.75] }).unwrap();
        assert_relative_eq!(mu.homogeneity_order().unwrap(), 0.5, max_relative = 1e-14);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(to_spectral(&CovarianceDescriptor::Riesz { dimension: 1, alpha: 1.5 }).is_err());
        assert!(to_spectral(&CovarianceDescriptor::Riesz { dimension: 2, alpha: 0.0 }).is_err());
        assert!(
            to_spectral(&CovarianceDescriptor::FractionalSheet { hurst: vec![0.4] }).is_err()
        );
        assert!(
            to_spectral(&CovarianceDescriptor::FractionalSheet { hurst: vec![1.0] }).is_err()
        );
    }

    #[test]
    fn radial_mass_examples() {
        // homogeneous alpha=1, m=1: mu(B(0,2)) = 2
        let mu = SpectralMeasure::homogeneous_radial(1, 1.0, 1.0).unwrap();
        assert_relative_eq!(mu.radial_mass(2.0).unwrap(), 2.0, max_relative = 1e-14);

        // atoms at +-pi: nothing inside B(0,1)
        let mu = symmetric_pair(1, PI, 1.0).unwrap();
        assert_eq!(mu.radial_mass(1.0).unwrap(), 0.0);
        assert_eq!(mu.radial_mass(4.0).unwrap(), 2.0);

        // white noise d=1: Lebesgue length of [-1,1]
        let mu = to_spectral(&CovarianceDescriptor::WhiteNoise { dimension: 1 }).unwrap();
        assert_relative_eq!(mu.radial_mass(1.0).unwrap(), 2.0, max_relative = 1e-10);
    }

    #[test]
    fn radial_mass_matches_scaling_for_densities() {
        for cov in [
            CovarianceDescriptor::Riesz { dimension: 2, alpha: 1.3 },
            CovarianceDescriptor::Riesz { dimension: 1, alpha: 0.5 },
            CovarianceDescriptor::WhiteNoise { dimension: 3 },
            CovarianceDescriptor::FractionalSheet { hurst: vec![0.6, 0.8] },
        ] {
            let mu = to_spectral(&cov).unwrap();
            let alpha = mu.homogeneity_order().unwrap();
            let m1 = mu.radial_mass(1.0).unwrap();
            assert_relative_eq!(m1, mu.unit_ball_mass().unwrap(), max_relative = 1e-9);
            for r in [0.5, 2.0, 7.5] {
                assert_relative_eq!(
                    mu.radial_mass(r).unwrap(),
                    r.powf(alpha) * m1,
                    max_relative = 1e-8
                );
            }
        }
    }

    #[test]
    fn gamma_eval_examples() {
        let riesz = CovarianceDescriptor::Riesz { dimension: 3, alpha: 1.0 };
        assert_relative_eq!(gamma_eval(&riesz, &[2.0, 0.0, 0.0]).unwrap(), 0.5);

        let sheet = CovarianceDescriptor::FractionalSheet { hurst: vec![0.75] };
        assert_relative_eq!(gamma_eval(&sheet, &[4.0]).unwrap(), 0.5, max_relative = 1e-14);

        let singular = CovarianceDescriptor::Riesz { dimension: 1, alpha: 0.5 };
        assert!(matches!(gamma_eval(&singular, &[0.0]), Err(Error::Singularity(_))));

        let white = CovarianceDescriptor::WhiteNoise { dimension: 2 };
        assert!(matches!(gamma_eval(&white, &[1.0, 1.0]), Err(Error::UnsupportedEvaluation(_))));
    }

    #[test]
    fn gamma_scaling_is_exact() {
        // gamma(c x) = c^{-alpha} gamma(x) for the homogeneous kernels
        let riesz = CovarianceDescriptor::Riesz { dimension: 2, alpha: 1.2 };
        let sheet = CovarianceDescriptor::FractionalSheet { hurst: vec![0.7, 0.9] };
        for (cov, x) in [(&riesz, vec![0.4, -1.1]), (&sheet, vec![0.4, -1.1])] {
            let alpha = cov.homogeneity_order().unwrap();
            let base = gamma_eval(cov, &x).unwrap();
            for c in [0.25, 2.0, 10.0] {
                let scaled: Vec<f64> = x.iter().map(|v| c * v).collect();
                assert_relative_eq!(
                    gamma_eval(cov, &scaled).unwrap(),
                    c.powf(-alpha) * base,
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn asymmetric_atoms_rejected() {
        let atoms = vec![Atom { location: vec![1.0], weight: 1.0 }];
        assert!(SpectralMeasure::atomic(1, atoms).is_err());
        let unequal = vec![
            Atom { location: vec![1.0], weight: 1.0 },
            Atom { location: vec![-1.0], weight: 2.0 },
        ];
        assert!(SpectralMeasure::atomic(1, unequal).is_err());
        // origin atom is its own mirror
        let origin = vec![Atom { location: vec![0.0], weight: 3.0 }];
        assert!(SpectralMeasure::atomic(1, origin).is_ok());
    }

    #[test]
    fn delta_comb_materialisation() {
        let comb = CovarianceDescriptor::DeltaComb {
            dimension: 1,
            spacing: 2.0 * PI,
            truncation_radius: 3.5,
        };
        let mu = to_spectral(&comb).unwrap();
        // dual lattice step 1, weight 1; atoms at -3..3
        let atoms = mu.atoms().unwrap();
        assert_eq!(atoms.len(), 7);
        assert_relative_eq!(mu.radial_mass(2.2).unwrap(), 5.0);
    }

    #[test]
    fn homogeneity_order_bounds() {
        assert!(SpectralMeasure::homogeneous_radial(2, 2.5, 1.0).is_err());
        assert!(SpectralMeasure::homogeneous_radial(2, -0.5, 1.0).is_err());
        assert!(SpectralMeasure::homogeneous_radial(2, 2.0, 1.0).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let model = NoiseModel::new(symmetric_pair(1, PI, 1.0).unwrap(), 0.5).unwrap();
        let text = model.to_json();
        let back = NoiseModel::from_json(&text).unwrap();
        assert_eq!(model, back);

        let riesz = NoiseModel::new(
            to_spectral(&CovarianceDescriptor::Riesz { dimension: 2, alpha: 1.0 }).unwrap(),
            0.25,
        )
        .unwrap();
        let back = NoiseModel::from_json(&riesz.to_json()).unwrap();
        assert_eq!(riesz, back);
    }

    #[test]
    fn json_documents_parse() {
        let text = r#"{
            "schema_version": 1,
            "alpha0": 0.0,
            "measure": {
                "dimension": 1,
                "kind": "continuous-density",
                "params": { "density": { "type": "white-noise" } }
            }
        }"#;
        let model = NoiseModel::from_json(text).unwrap();
        assert_eq!(model.measure.kind(), MeasureKind::ContinuousDensity);
        assert_eq!(model.alpha0, 0.0);
    }
}
