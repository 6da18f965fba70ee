//! Log-densities and starting values for the ten fit-able families: the
//! base BASLa2 family plus nine competitors (normal, logistic, Laplace, and
//! their skew / alpha-skew variants).
//!
//! Parameter vectors are ordered `(location, scale[, shape])`; every
//! normalizing constant is quadrature-verified in the tests. Only the
//! log-density is provided — that is all the fitting engine and the
//! information criteria need.

use crate::dist::normalizer;
use crate::error::Error;
use crate::inference::Dataset;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// The ten families addressable by the fitting engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Normal,
    Logistic,
    Laplace,
    SkewNormal,
    SkewLogistic,
    SkewLaplace,
    AlphaSkewNormal,
    AlphaSkewLaplace,
    AlphaSkewLogistic,
    Basla2,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Normal,
        Family::Logistic,
        Family::Laplace,
        Family::SkewNormal,
        Family::SkewLogistic,
        Family::SkewLaplace,
        Family::AlphaSkewNormal,
        Family::AlphaSkewLaplace,
        Family::AlphaSkewLogistic,
        Family::Basla2,
    ];

    /// Stable string identifier used by the CLI.
    pub fn id(&self) -> &'static str {
        match self {
            Family::Normal => "normal",
            Family::Logistic => "logistic",
            Family::Laplace => "laplace",
            Family::SkewNormal => "skew-normal",
            Family::SkewLogistic => "skew-logistic",
            Family::SkewLaplace => "skew-laplace",
            Family::AlphaSkewNormal => "alpha-skew-normal",
            Family::AlphaSkewLaplace => "alpha-skew-laplace",
            Family::AlphaSkewLogistic => "alpha-skew-logistic",
            Family::Basla2 => "basla2",
        }
    }

    pub fn from_id(id: &str) -> Option<Family> {
        Family::ALL.iter().copied().find(|f| f.id() == id)
    }

    /// Number of free parameters: 2 for the symmetric bases, 3 for the rest.
    pub fn parameter_count(&self) -> usize {
        match self {
            Family::Normal | Family::Logistic | Family::Laplace => 2,
            _ => 3,
        }
    }

    /// Report names in `(location, scale[, shape])` order.
    pub fn parameter_names(&self) -> &'static [&'static str] {
        match self {
            Family::Normal => &["mu", "sigma"],
            Family::Logistic | Family::Laplace => &["mu", "beta"],
            Family::SkewNormal => &["mu", "sigma", "lambda"],
            Family::SkewLogistic | Family::SkewLaplace => &["mu", "beta", "lambda"],
            Family::AlphaSkewNormal => &["mu", "sigma", "alpha"],
            Family::AlphaSkewLaplace | Family::AlphaSkewLogistic | Family::Basla2 => {
                &["mu", "beta", "alpha"]
            }
        }
    }

    /// Whether the scale parameter is a standard deviation (normal-kernel
    /// families) rather than a Laplace/logistic scale.
    fn scale_is_sd(&self) -> bool {
        matches!(self, Family::Normal | Family::SkewNormal | Family::AlphaSkewNormal)
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

/// A family paired with a concrete parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    family: Family,
    params: Vec<f64>,
}

impl ModelSpec {
    pub fn new(family: Family, params: Vec<f64>) -> Result<Self, Error> {
        if params.len() != family.parameter_count() {
            return Err(Error::ArityMismatch {
                family: family.id(),
                expected: family.parameter_count(),
                got: params.len(),
            });
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter { name: "params", value: f64::NAN });
        }
        if params[1] <= 0.0 {
            return Err(Error::InvalidParameter { name: "scale", value: params[1] });
        }
        Ok(ModelSpec { family, params })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn k(&self) -> usize {
        self.params.len()
    }

    pub fn location(&self) -> f64 {
        self.params[0]
    }

    pub fn scale(&self) -> f64 {
        self.params[1]
    }

    pub fn shape(&self) -> Option<f64> {
        self.params.get(2).copied()
    }

    /// Natural log of the family density at `z`; finite for all finite `z`.
    pub fn log_pdf(&self, z: f64) -> f64 {
        let scale = self.scale();
        let u = (z - self.location()) / scale;
        let shape = self.shape().unwrap_or(0.0);
        let ln_scale = scale.ln();
        match self.family {
            Family::Normal => -0.5 * u * u - 0.5 * LN_2PI - ln_scale,
            Family::Logistic => log_logistic_pdf(u) - ln_scale,
            Family::Laplace => -std::f64::consts::LN_2 - u.abs() - ln_scale,
            Family::SkewNormal => {
                std::f64::consts::LN_2 - 0.5 * u * u - 0.5 * LN_2PI
                    + log_normal_cdf(shape * u)
                    - ln_scale
            }
            Family::SkewLogistic => {
                std::f64::consts::LN_2 + log_logistic_pdf(u) + log_logistic_cdf(shape * u)
                    - ln_scale
            }
            Family::SkewLaplace => {
                // ln 2 and the Laplace pdf's ln(1/2) cancel.
                -u.abs() + log_laplace_cdf(shape * u) - ln_scale
            }
            Family::AlphaSkewNormal => {
                let k = (1.0 - shape * u).powi(2) + 1.0;
                k.ln() - 0.5 * u * u - 0.5 * LN_2PI - (2.0 + shape * shape).ln() - ln_scale
            }
            Family::AlphaSkewLaplace => {
                let k = (1.0 - shape * u).powi(2) + 1.0;
                k.ln() - std::f64::consts::LN_2 - u.abs() - (2.0 + 2.0 * shape * shape).ln()
                    - ln_scale
            }
            Family::AlphaSkewLogistic => {
                let k = (1.0 - shape * u).powi(2) + 1.0;
                let norm = 2.0 + std::f64::consts::PI.powi(2) * shape * shape / 3.0;
                k.ln() + log_logistic_pdf(u) - norm.ln() - ln_scale
            }
            Family::Basla2 => {
                let k = (1.0 - shape * u).powi(2) + 1.0;
                2.0 * k.ln() - normalizer(shape).ln() - (2.0 * scale).ln() - u.abs()
            }
        }
    }
}

/// Standard logistic log-density, written against |u| for stability.
#[inline]
fn log_logistic_pdf(u: f64) -> f64 {
    let a = u.abs();
    -a - 2.0 * softplus(-a)
}

/// `ln(1/(1 + e^{-x}))` without overflow.
#[inline]
fn log_logistic_cdf(x: f64) -> f64 {
    -softplus(-x)
}

#[inline]
fn softplus(t: f64) -> f64 {
    if t > 35.0 {
        t
    } else if t < -35.0 {
        t.exp()
    } else {
        t.exp().ln_1p()
    }
}

/// Log of the standard Laplace cdf.
#[inline]
fn log_laplace_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        x - std::f64::consts::LN_2
    } else {
        (-0.5 * (-x).exp()).ln_1p()
    }
}

/// Log of the standard normal cdf; erfc-based in the bulk, asymptotic tail
/// expansion far left so the value stays finite for any finite argument.
fn log_normal_cdf(x: f64) -> f64 {
    if x >= -30.0 {
        (0.5 * statrs::function::erf::erfc(-x * std::f64::consts::FRAC_1_SQRT_2)).ln()
    } else {
        let x2 = x * x;
        let series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2);
        -0.5 * x2 - (-x).ln() - 0.5 * LN_2PI + series.ln()
    }
}

/// Moment/robust starting values in `(location, scale[, shape])` order:
/// median location, mean absolute deviation scale (sample SD for the
/// normal-kernel families), zero shape.
pub fn default_start(family: Family, data: &Dataset) -> Result<Vec<f64>, Error> {
    let values = data.values();
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };

    let scale = if family.scale_is_sd() {
        let mean = values.iter().sum::<f64>() / n as f64;
        let ss = values.iter().map(|z| (z - mean) * (z - mean)).sum::<f64>();
        (ss / (n as f64 - 1.0).max(1.0)).sqrt()
    } else {
        values.iter().map(|z| (z - median).abs()).sum::<f64>() / n as f64
    };
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::DegenerateData);
    }

    let mut start = vec![median, scale];
    if family.parameter_count() == 3 {
        start.push(0.0);
    }
    Ok(start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn spec(family: Family, params: &[f64]) -> ModelSpec {
        ModelSpec::new(family, params.to_vec()).unwrap()
    }

    #[test]
    fn spot_log_densities() {
        close(spec(Family::Laplace, &[0.0, 1.0]).log_pdf(0.0), 0.5_f64.ln(), 1e-15);
        close(spec(Family::Normal, &[0.0, 1.0]).log_pdf(0.0), -0.5 * LN_2PI, 1e-15);
        close(spec(Family::Logistic, &[0.0, 1.0]).log_pdf(0.0), 0.25_f64.ln(), 1e-14);
        close(
            spec(Family::Basla2, &[0.0, 1.0, 1.0]).log_pdf(0.0),
            (2.0 / 44.0_f64).ln(),
            1e-14,
        );
    }

    #[test]
    fn shape_zero_collapses_to_base() {
        let pairs: [(Family, Family); 6] = [
            (Family::SkewNormal, Family::Normal),
            (Family::SkewLogistic, Family::Logistic),
            (Family::SkewLaplace, Family::Laplace),
            (Family::AlphaSkewNormal, Family::Normal),
            (Family::AlphaSkewLaplace, Family::Laplace),
            (Family::AlphaSkewLogistic, Family::Logistic),
        ];
        for (skewed, base) in pairs {
            let s = spec(skewed, &[0.4, 1.3, 0.0]);
            let b = spec(base, &[0.4, 1.3]);
            for i in 0..500 {
                let z = -10.0 + 0.04 * i as f64;
                close(s.log_pdf(z), b.log_pdf(z), 1e-13);
            }
        }

        // Basla2 at alpha = 0 is Laplace.
        let s = spec(Family::Basla2, &[0.4, 1.3, 0.0]);
        let b = spec(Family::Laplace, &[0.4, 1.3]);
        for i in 0..500 {
            let z = -10.0 + 0.04 * i as f64;
            close(s.log_pdf(z), b.log_pdf(z), 1e-13);
        }
    }

    #[test]
    fn densities_normalize() {
        let cases: Vec<ModelSpec> = vec![
            spec(Family::Normal, &[0.0, 1.0]),
            spec(Family::Normal, &[2.0, 0.5]),
            spec(Family::Normal, &[-1.0, 3.0]),
            spec(Family::Logistic, &[0.0, 1.0]),
            spec(Family::Logistic, &[1.0, 0.4]),
            spec(Family::Logistic, &[-2.0, 2.5]),
            spec(Family::Laplace, &[0.0, 1.0]),
            spec(Family::Laplace, &[3.0, 0.7]),
            spec(Family::Laplace, &[-1.0, 2.0]),
            spec(Family::SkewNormal, &[0.0, 1.0, 3.7]),
            spec(Family::SkewNormal, &[1.0, 2.0, -1.5]),
            spec(Family::SkewNormal, &[0.0, 0.5, 0.0]),
            spec(Family::SkewLogistic, &[0.0, 1.0, 2.8]),
            spec(Family::SkewLogistic, &[1.0, 0.6, -4.0]),
            spec(Family::SkewLogistic, &[-0.5, 1.5, 0.5]),
            spec(Family::SkewLaplace, &[0.0, 1.0, 0.25]),
            spec(Family::SkewLaplace, &[2.0, 0.5, -1.2]),
            spec(Family::SkewLaplace, &[0.0, 2.0, 5.0]),
            spec(Family::AlphaSkewNormal, &[0.0, 1.0, 2.0]),
            spec(Family::AlphaSkewNormal, &[1.0, 0.8, -3.5]),
            spec(Family::AlphaSkewNormal, &[0.0, 2.0, 0.3]),
            spec(Family::AlphaSkewLaplace, &[0.0, 1.0, -0.22]),
            spec(Family::AlphaSkewLaplace, &[1.0, 0.5, 1.5]),
            spec(Family::AlphaSkewLaplace, &[-1.0, 2.0, 4.0]),
            spec(Family::AlphaSkewLogistic, &[0.0, 1.0, 0.86]),
            spec(Family::AlphaSkewLogistic, &[2.0, 0.4, -2.0]),
            spec(Family::AlphaSkewLogistic, &[0.0, 1.5, 1.0]),
            spec(Family::Basla2, &[0.0, 1.0, 1.0]),
            spec(Family::Basla2, &[52.0, 2.641, 1.046]),
            spec(Family::Basla2, &[0.0, 1.0, -2.0]),
        ];
        for s in cases {
            let total = integrate(
                |z| s.log_pdf(z).exp(),
                f64::NEG_INFINITY,
                f64::INFINITY,
            )
            .unwrap();
            close(total, 1.0, 1e-8);
        }
    }

    #[test]
    fn log_pdf_is_finite_in_extreme_regimes() {
        let specs = [
            spec(Family::SkewNormal, &[0.0, 1.0, -45.0]),
            spec(Family::SkewLogistic, &[0.0, 1.0, 50.0]),
            spec(Family::SkewLaplace, &[0.0, 1.0, -50.0]),
            spec(Family::Basla2, &[0.0, 1.0, 50.0]),
        ];
        for s in &specs {
            for &z in &[-700.0, -35.0, -1.0, 0.0, 1.0, 35.0, 700.0] {
                assert!(s.log_pdf(z).is_finite(), "{:?} at {z}", s.family());
            }
        }
    }

    #[test]
    fn model_spec_validation() {
        assert!(matches!(
            ModelSpec::new(Family::Normal, vec![0.0]),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            ModelSpec::new(Family::Basla2, vec![0.0, 1.0]),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(ModelSpec::new(Family::Normal, vec![0.0, 0.0]).is_err());
        assert!(ModelSpec::new(Family::Normal, vec![0.0, -1.0]).is_err());
        assert!(ModelSpec::new(Family::Normal, vec![f64::NAN, 1.0]).is_err());
        let ok = ModelSpec::new(Family::Basla2, vec![1.0, 2.0, -0.5]).unwrap();
        assert_eq!(ok.k(), 3);
        assert_eq!(ok.shape(), Some(-0.5));
    }

    #[test]
    fn family_ids_round_trip() {
        for f in Family::ALL {
            assert_eq!(Family::from_id(f.id()), Some(f));
        }
        assert_eq!(Family::from_id("cauchy"), None);
    }

    #[test]
    fn default_start_examples() {
        let data = Dataset::new("d", vec![1.0, 2.0, 3.0], "").unwrap();
        let start = default_start(Family::Laplace, &data).unwrap();
        close(start[0], 2.0, 1e-15);
        close(start[1], 2.0 / 3.0, 1e-15);
        assert_eq!(start.len(), 2);

        let constant = Dataset::new("d", vec![0.0, 0.0, 0.0], "").unwrap();
        assert_eq!(default_start(Family::Normal, &constant), Err(Error::DegenerateData));

        let start = default_start(Family::Basla2, &data).unwrap();
        assert_eq!(start.len(), 3);
        close(start[2], 0.0, 0.0);

        // Normal-kernel families seed with the sample SD.
        let start = default_start(Family::Normal, &data).unwrap();
        close(start[1], 1.0, 1e-15);
    }
}
