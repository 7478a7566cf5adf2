//! Null and alternative distributions on [0, 1] and seeded variate generation.
//!
//! Families (k > 0):
//!
//! * `A(k)`: F(x) = 1 − (1 − x)^k, skewed towards 0 for k > 1.
//! * `B(k)`: F(x) = 2^{k−1} x^k below 1/2, mirrored above; mass near 1/2.
//! * `C(k)`: F(x) = 1/2 − 2^{k−1}(1/2 − x)^k below 1/2, mirrored above; mass at the ends.
//! * `Beta(k, k)`: the symmetric beta distribution.
//!
//! With k = 1 every family is the uniform null.

use crate::error::{check_unit, Error, Result};
use crate::rng::{RngStream, UniformSource};
use crate::special::{inc_beta, ln_beta};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// A distribution supported on [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlternativeFamily {
    Uniform,
    A(f64),
    B(f64),
    C(f64),
    /// Symmetric Beta(k, k).
    Beta(f64),
}

impl AlternativeFamily {
    /// Validated constructor from a kind name and shape.
    pub fn new(kind: &str, k: f64) -> Result<Self> {
        let fam = match kind.to_ascii_lowercase().as_str() {
            "uniform" => Self::Uniform,
            "a" => Self::A(k),
            "b" => Self::B(k),
            "c" => Self::C(k),
            "beta" => Self::Beta(k),
            other => {
                return Err(Error::Spec {
                    what: "family",
                    spec: other.to_string(),
                    reason: "unknown family kind".into(),
                })
            }
        };
        fam.validate()?;
        Ok(fam)
    }

    pub fn validate(&self) -> Result<()> {
        match self.shape() {
            Some(k) if !(k > 0.0 && k.is_finite()) => Err(Error::InvalidParameter(format!(
                "shape parameter must be positive and finite, got {k}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn shape(&self) -> Option<f64> {
        match *self {
            Self::Uniform => None,
            Self::A(k) | Self::B(k) | Self::C(k) | Self::Beta(k) => Some(k),
        }
    }

    fn is_identity(&self) -> bool {
        matches!(self.shape(), None | Some(1.0))
    }

    /// Whether the density is symmetric about 1/2.
    pub fn is_symmetric(&self) -> bool {
        !matches!(self, Self::A(k) if *k != 1.0)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        Ok(self.cdf_unchecked(x))
    }

    pub(crate) fn cdf_unchecked(&self, x: f64) -> f64 {
        if self.is_identity() {
            return x;
        }
        match *self {
            Self::Uniform => x,
            Self::A(k) => 1.0 - (1.0 - x).powf(k),
            Self::B(k) => {
                let c = 2f64.powf(k - 1.0);
                if x <= 0.5 {
                    c * x.powf(k)
                } else {
                    1.0 - c * (1.0 - x).powf(k)
                }
            }
            Self::C(k) => {
                let c = 2f64.powf(k - 1.0);
                if x <= 0.5 {
                    0.5 - c * (0.5 - x).powf(k)
                } else {
                    0.5 + c * (x - 0.5).powf(k)
                }
            }
            Self::Beta(k) => inc_beta(x, k, k),
        }
    }

    /// Density. At endpoints where it diverges (k < 1) this returns +∞.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        Ok(self.pdf_unchecked(x))
    }

    pub(crate) fn pdf_unchecked(&self, x: f64) -> f64 {
        if self.is_identity() {
            return 1.0;
        }
        match *self {
            Self::Uniform => 1.0,
            Self::A(k) => k * (1.0 - x).powf(k - 1.0),
            Self::B(k) => {
                let d = if x <= 0.5 { x } else { 1.0 - x };
                k * 2f64.powf(k - 1.0) * d.powf(k - 1.0)
            }
            Self::C(k) => k * 2f64.powf(k - 1.0) * (x - 0.5).abs().powf(k - 1.0),
            Self::Beta(k) => ((k - 1.0) * (x * (1.0 - x)).ln() - ln_beta(k, k)).exp(),
        }
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        check_unit(u)?;
        Ok(self.quantile_unchecked(u))
    }

    pub(crate) fn quantile_unchecked(&self, u: f64) -> f64 {
        if self.is_identity() {
            return u;
        }
        match *self {
            Self::Uniform => u,
            Self::A(k) => 1.0 - (1.0 - u).powf(1.0 / k),
            Self::B(k) => {
                let c = 2f64.powf(k - 1.0);
                if u <= 0.5 {
                    (u / c).powf(1.0 / k)
                } else {
                    1.0 - ((1.0 - u) / c).powf(1.0 / k)
                }
            }
            Self::C(k) => {
                let c = 2f64.powf(k - 1.0);
                if u <= 0.5 {
                    0.5 - ((0.5 - u) / c).powf(1.0 / k)
                } else {
                    0.5 + ((u - 0.5) / c).powf(1.0 / k)
                }
            }
            Self::Beta(k) => {
                if u > 0.5 {
                    1.0 - beta_lower_quantile(1.0 - u, k)
                } else {
                    beta_lower_quantile(u, k)
                }
            }
        }
    }

    /// `n` i.i.d. draws by inversion, one uniform per observation.
    pub fn sample(&self, n: usize, stream: RngStream) -> Vec<f64> {
        let mut g = stream.generator();
        let mut out = vec![0.0; n];
        self.fill(&mut g, &mut out);
        out
    }

    /// Overwrites `buf` with draws from `source`.
    pub fn fill(&self, source: &mut UniformSource, buf: &mut [f64]) {
        for slot in buf.iter_mut() {
            *slot = self.quantile_unchecked(source.next_f64());
        }
    }
}

/// Quantile of Beta(k, k) for u ≤ 1/2: safeguarded Newton on I_x(k, k).
fn beta_lower_quantile(u: f64, k: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u == 0.5 {
        return 0.5;
    }
    let ln_b = ln_beta(k, k);
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    // lower-tail approximation I_x ≈ x^k / (k B(k, k)) as the starting point
    let mut x = (((u * k).ln() + ln_b) / k).exp().clamp(1e-300, 0.5);
    if !(x > lo && x < hi) {
        x = 0.25;
    }
    for _ in 0..200 {
        let f = inc_beta(x, k, k) - u;
        if f == 0.0 {
            return x;
        }
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let dens = ((k - 1.0) * (x * (1.0 - x)).ln() - ln_b).exp();
        let mut next = x - f / dens;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-12 * x.max(1e-300) || hi - lo <= 1e-15 * hi {
            return next;
        }
        x = next;
    }
    x
}

impl fmt::Display for AlternativeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform => write!(f, "uniform"),
            Self::A(k) => write!(f, "A:{k}"),
            Self::B(k) => write!(f, "B:{k}"),
            Self::C(k) => write!(f, "C:{k}"),
            Self::Beta(k) => write!(f, "beta:{k}"),
        }
    }
}

impl FromStr for AlternativeFamily {
    type Err = Error;

    /// Parses "uniform", "A:1.5", "B:1.5", "C:1.5", "beta:2.5" (case-insensitive).
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Spec {
            what: "family",
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        if t.eq_ignore_ascii_case("uniform") {
            return Ok(Self::Uniform);
        }
        let (kind, k) = t
            .split_once(':')
            .ok_or_else(|| bad("expected <kind>:<k>"))?;
        let k: f64 = k.trim().parse().map_err(|_| bad("shape is not a number"))?;
        if !matches!(kind.to_ascii_lowercase().as_str(), "a" | "b" | "c" | "beta") {
            return Err(bad("kind must be uniform, A, B, C or beta"));
        }
        Self::new(kind.trim(), k).map_err(|e| bad(&e.to_string()))
    }
}

impl Serialize for AlternativeFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for AlternativeFamily {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
