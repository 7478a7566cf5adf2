//! Analytic large-sample quantities for spacings statistics.
//!
//! With Z standard exponential, `√n (W − E h(Z))` is asymptotically normal
//! with variance `σ²ₕ = Var h(Z) − Cov²(h(Z), Z)` for both the usual and CO
//! statistics. Under local alternatives `F_n(x) = x + L(x)/n^{1/4}` the limit
//! is shifted by `μₕ = ½ ∫ (L′)² · Cov(h(Z), (Z − 2)²)`, where for CO
//! statistics the relevant perturbation is the folded
//! `L*(y) = L((1+y)/2) − L((1−y)/2)`.
//!
//! Every moment is computed by quadrature so custom score functions work the
//! same way as the built-ins.

use crate::error::{Error, Result};
use crate::quadrature::{integrate_smoothed, integrate_to_infinity, Estimate};
use crate::sampling::AlternativeFamily;
use crate::statistics::HFunction;
use serde::Serialize;
use std::sync::Arc;

pub const DEFAULT_TOL: f64 = 1e-10;

/// Moments of h(Z) for Z ~ Exp(1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpMoments {
    pub mean_h: f64,
    pub var_h: f64,
    pub cov_hz: f64,
    pub cov_h_quad: f64,
    /// Sum of the quadrature error bounds of the underlying integrals.
    pub quadrature_error: f64,
}

impl ExpMoments {
    /// σ²ₕ; roundoff-level values are reported as 0.
    pub fn null_variance(&self) -> f64 {
        let v = self.var_h - self.cov_hz * self.cov_hz;
        if v.abs() <= 1e-9 * self.var_h.max(1.0) {
            0.0
        } else {
            v
        }
    }
}

/// ∫₀^∞ g(z) e^{−z} dz, split at 1 so kinks and log singularities sit on
/// interval ends.
fn exp_expectation<G: Fn(f64) -> f64>(g: G, tol: f64) -> Result<Estimate> {
    let head = integrate_smoothed(|z| g(z) * (-z).exp(), 0.0, 1.0, tol / 2.0)?;
    let tail = integrate_to_infinity(
        |z| {
            let w = (-z).exp();
            if w == 0.0 {
                0.0
            } else {
                g(z) * w
            }
        },
        1.0,
        tol / 2.0,
    )?;
    Ok(head + tail)
}

pub fn exp_moments(h: &HFunction, quad_tol: f64) -> Result<ExpMoments> {
    let m0 = exp_expectation(|z| h.eval(z), quad_tol)?;
    let m1 = exp_expectation(|z| h.eval(z) * z, quad_tol)?;
    let m2 = exp_expectation(|z| h.eval(z).powi(2), quad_tol)?;
    let mq = exp_expectation(|z| h.eval(z) * (z - 2.0).powi(2), quad_tol)?;
    let mean_h = m0.value;
    Ok(ExpMoments {
        mean_h,
        var_h: m2.value - mean_h * mean_h,
        // E Z = 1, E (Z − 2)² = 2
        cov_hz: m1.value - mean_h,
        cov_h_quad: mq.value - 2.0 * mean_h,
        quadrature_error: m0.error + m1.error + m2.error + mq.error,
    })
}

/// Centering and variance of the normal limit of √n(W − E h(Z)).
pub fn null_limit(h: &HFunction) -> Result<(f64, f64)> {
    let m = exp_moments(h, DEFAULT_TOL)?;
    Ok((m.mean_h, m.null_variance()))
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Direction of a local alternative `F_n(x) = x + L(x)/n^{1/4}`.
///
/// Holds l = L′ and optionally L itself (needed only to sample from `F_n`).
#[derive(Clone)]
pub struct LocalAlternative {
    derivative: RealFn,
    perturbation: Option<RealFn>,
}

impl LocalAlternative {
    pub fn new<F: Fn(f64) -> f64 + Send + Sync + 'static>(l: F) -> Self {
        Self {
            derivative: Arc::new(l),
            perturbation: None,
        }
    }

    /// From L and its derivative l.
    pub fn with_perturbation<P, F>(big_l: P, l: F) -> Self
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            derivative: Arc::new(l),
            perturbation: Some(Arc::new(big_l)),
        }
    }

    pub fn l(&self, x: f64) -> f64 {
        (self.derivative)(x)
    }

    pub fn big_l(&self, x: f64) -> Option<f64> {
        self.perturbation.as_ref().map(|p| p(x))
    }

    /// ∫₀¹ l, which vanishes when L(0) = L(1) = 0.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let e = integrate_smoothed(|x| self.l(x), 0.0, 1.0, DEFAULT_TOL)?;
        if e.value.abs() > tol.max(e.error) {
            return Err(Error::InvalidParameter(format!(
                "perturbation derivative integrates to {} instead of 0",
                e.value
            )));
        }
        Ok(())
    }

    /// `x ↦ l((1+x)/2) − l((1−x)/2)`, the difference form of the folded
    /// direction.
    pub fn co_perturbation(&self) -> impl Fn(f64) -> f64 + Send + Sync + 'static {
        let l = self.derivative.clone();
        move |x| l(0.5 * (1.0 + x)) - l(0.5 * (1.0 - x))
    }

    /// Derivative of the folded perturbation, `d/dy L*(y) = ½(l((1+y)/2) + l((1−y)/2))`.
    /// This is the direction the CO rank distribution actually moves in.
    pub fn co_derivative(&self) -> impl Fn(f64) -> f64 + Send + Sync + 'static {
        let l = self.derivative.clone();
        move |y| 0.5 * (l(0.5 * (1.0 + y)) + l(0.5 * (1.0 - y)))
    }

    /// Folded perturbation L*(y), if L is known.
    pub fn co_big_l(&self, y: f64) -> Option<f64> {
        let p = self.perturbation.as_ref()?;
        Some(p(0.5 * (1.0 + y)) - p(0.5 * (1.0 - y)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EfficacyReport {
    pub value: f64,
    pub integral_l2: f64,
    pub moments: ExpMoments,
    pub quadrature_error: f64,
}

/// `(∫₀¹ l²) · Cov(h(Z), (Z−2)²) / (2 σₕ)`.
pub fn efficacy_report<L: Fn(f64) -> f64>(h: &HFunction, l: L, tol: f64) -> Result<EfficacyReport> {
    let moments = exp_moments(h, tol)?;
    let var = moments.null_variance();
    if var <= 0.0 {
        return Err(Error::DegenerateVariance(h.name().to_string()));
    }
    let l2 = integrate_smoothed(|x| l(x).powi(2), 0.0, 1.0, tol)?;
    let sigma = var.sqrt();
    let value = l2.value * moments.cov_h_quad / (2.0 * sigma);
    // first-order propagation of both error sources
    let err_l2 = l2.error * (moments.cov_h_quad / (2.0 * sigma)).abs();
    let err_m = moments.quadrature_error * l2.value.abs() * (1.0 + value.abs()) / (2.0 * sigma);
    Ok(EfficacyReport {
        value,
        integral_l2: l2.value,
        moments,
        quadrature_error: err_l2 + err_m,
    })
}

pub fn efficacy<L: Fn(f64) -> f64>(h: &HFunction, l: L) -> Result<f64> {
    efficacy_report(h, l, DEFAULT_TOL).map(|r| r.value)
}

/// Pitman comparison of two score functions along one direction. Both
/// exponent conventions are reported; their orderings agree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AreReport {
    pub efficacy_1: f64,
    pub efficacy_2: f64,
    /// e(h₁)/e(h₂)
    pub efficacy_ratio: f64,
    /// e²(h₁)/e²(h₂)
    pub efficacy_ratio_squared: f64,
}

pub fn pitman_are<L: Fn(f64) -> f64>(h1: &HFunction, h2: &HFunction, l: L) -> Result<AreReport> {
    let e1 = efficacy(h1, &l)?;
    let e2 = efficacy(h2, &l)?;
    if e2 == 0.0 {
        return Err(Error::ZeroEfficacy);
    }
    let r = e1 / e2;
    Ok(AreReport {
        efficacy_1: e1,
        efficacy_2: e2,
        efficacy_ratio: r,
        efficacy_ratio_squared: r * r,
    })
}

/// Mean μₕ of the shifted limit along a direction with derivative `l`.
/// Pass [`LocalAlternative::co_derivative`] for CO statistics.
pub fn local_limit_mean<L: Fn(f64) -> f64>(h: &HFunction, l: L) -> Result<f64> {
    let moments = exp_moments(h, DEFAULT_TOL)?;
    let l2 = integrate_smoothed(|x| l(x).powi(2), 0.0, 1.0, DEFAULT_TOL)?;
    Ok(0.5 * l2.value * moments.cov_h_quad)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HellingerDistance {
    pub value: f64,
    pub quadrature_error: f64,
}

/// `√(1 − ∫₀¹ √(f₁ f₂))` for densities on [0, 1].
pub fn hellinger<F1, F2>(f1: F1, f2: F2, tol: f64) -> Result<HellingerDistance>
where
    F1: Fn(f64) -> f64,
    F2: Fn(f64) -> f64,
{
    let root = |x: f64| (f1(x) * f2(x)).max(0.0).sqrt();
    // split at 1/2 where the families have kinks or singularities
    let affinity = integrate_smoothed(root, 0.0, 0.5, tol / 2.0)?
        + integrate_smoothed(root, 0.5, 1.0, tol / 2.0)?;
    let radicand = (1.0 - affinity.value).clamp(0.0, 1.0);
    let value = radicand.sqrt();
    let hi = (radicand + affinity.error).min(1.0).sqrt();
    let lo = (radicand - affinity.error).max(0.0).sqrt();
    Ok(HellingerDistance {
        value,
        quadrature_error: (hi - value).max(value - lo),
    })
}

/// Density of the CO rank |2X − 1| for X ~ `family`:
/// `f_R(y) = ½(f((1+y)/2) + f((1−y)/2))`.
pub fn co_density(family: AlternativeFamily) -> impl Fn(f64) -> f64 + Send + Sync + Copy {
    move |y: f64| {
        0.5 * (family.pdf_unchecked(0.5 * (1.0 + y)) + family.pdf_unchecked(0.5 * (1.0 - y)))
    }
}

/// Hellinger distances from the uniform null to a family and to its CO rank law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HellingerResult {
    pub family: AlternativeFamily,
    pub hd_direct: f64,
    pub hd_co: f64,
    pub quadrature_error_bound: f64,
}

impl HellingerResult {
    /// Folding never moves a distribution further from uniform.
    pub fn inequality_holds(&self, slack: f64) -> bool {
        self.hd_co <= self.hd_direct + self.quadrature_error_bound + slack
    }

    pub fn gap(&self) -> f64 {
        self.hd_direct - self.hd_co
    }
}

pub fn hellinger_fold(family: AlternativeFamily, tol: f64) -> Result<HellingerResult> {
    family.validate()?;
    let uniform = |_: f64| 1.0;
    let direct = hellinger(uniform, |x| family.pdf_unchecked(x), tol)?;
    let co = hellinger(uniform, co_density(family), tol)?;
    Ok(HellingerResult {
        family,
        hd_direct: direct.value,
        hd_co: co.value,
        quadrature_error_bound: direct.quadrature_error + co.quadrature_error,
    })
}

/// The fold comparison over {A, B, C, Beta} × `shapes`.
pub fn hellinger_grid(shapes: &[f64], tol: f64) -> Result<Vec<HellingerResult>> {
    let mut out = Vec::new();
    for kind in ["A", "B", "C", "beta"] {
        for &k in shapes {
            out.push(hellinger_fold(AlternativeFamily::new(kind, k)?, tol)?);
        }
    }
    Ok(out)
}

/// Built-in directions, by name: `linear` (l = 2x − 1), `hump` (L = x(1 − x)),
/// `quadratic` (l = 6x² − 6x + 1), `cos[:k]` (l = cos 2πkx), `sin[:k]` (l = sin 2πkx).
pub fn named_perturbation(spec: &str) -> Result<LocalAlternative> {
    use std::f64::consts::TAU;
    let bad = |reason: &str| Error::Spec {
        what: "perturbation",
        spec: spec.to_string(),
        reason: reason.to_string(),
    };
    let lower = spec.trim().to_ascii_lowercase();
    let (name, k) = match lower.split_once(':') {
        Some((name, k)) => {
            let k: u32 = k
                .parse()
                .map_err(|_| bad("frequency must be a positive integer"))?;
            if k == 0 {
                return Err(bad("frequency must be a positive integer"));
            }
            (name, Some(k as f64))
        }
        None => (lower.as_str(), None),
    };
    let alt = match (name, k) {
        ("linear", None) => LocalAlternative::with_perturbation(|x| x * x - x, |x| 2.0 * x - 1.0),
        ("hump", None) => LocalAlternative::with_perturbation(|x| x * (1.0 - x), |x| 1.0 - 2.0 * x),
        ("quadratic", None) => LocalAlternative::with_perturbation(
            |x| x * (2.0 * x * x - 3.0 * x + 1.0),
            |x| 6.0 * x * x - 6.0 * x + 1.0,
        ),
        ("cos", k) => {
            let w = TAU * k.unwrap_or(1.0);
            LocalAlternative::with_perturbation(move |x| (w * x).sin() / w, move |x| (w * x).cos())
        }
        ("sin", k) => {
            let w = TAU * k.unwrap_or(1.0);
            LocalAlternative::with_perturbation(
                move |x| (1.0 - (w * x).cos()) / w,
                move |x| (w * x).sin(),
            )
        }
        _ => return Err(bad("expected linear, hump, quadratic, cos[:k] or sin[:k]")),
    };
    Ok(alt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::EULER_GAMMA;
    use std::f64::consts::{E, PI};

    #[test]
    fn named_perturbations_are_consistent() {
        for name in [
            "linear",
            "hump",
            "quadratic",
            "cos",
            "cos:3",
            "sin",
            "sin:2",
        ] {
            let alt = named_perturbation(name).unwrap();
            alt.validate(1e-9).unwrap();
            for i in 1..20 {
                let x = i as f64 / 20.0;
                let d = 1e-6;
                let fd = (alt.big_l(x + d).unwrap() - alt.big_l(x - d).unwrap()) / (2.0 * d);
                assert!((fd - alt.l(x)).abs() < 1e-6, "{name} at {x}");
            }
            assert!(alt.big_l(0.0).unwrap().abs() < 1e-15);
            assert!(alt.big_l(1.0).unwrap().abs() < 1e-12);
        }
        assert!(named_perturbation("cos:0").is_err());
        assert!(named_perturbation("wave").is_err());
    }

    #[test]
    fn greenwood_moments() {
        let m = exp_moments(&HFunction::Greenwood, 1e-11).unwrap();
        assert!((m.mean_h - 2.0).abs() < 1e-9);
        assert!((m.var_h - 20.0).abs() < 1e-9);
        assert!((m.cov_hz - 4.0).abs() < 1e-9);
        assert!((m.cov_h_quad - 4.0).abs() < 1e-9);
        assert!((m.null_variance() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn moran_and_entropy_moments() {
        let m = exp_moments(&HFunction::Moran, 1e-11).unwrap();
        assert!((m.mean_h - EULER_GAMMA).abs() < 1e-9);
        assert!((m.var_h - PI * PI / 6.0).abs() < 1e-9);
        assert!((m.cov_hz + 1.0).abs() < 1e-9);
        // Cov(−log Z, (Z−2)²) = −(2ψ(3) − 4ψ(2) + 4ψ(1)) + 2·(−γ)... = 1
        assert!((m.cov_h_quad - 1.0).abs() < 1e-9);
        let e = exp_moments(&HFunction::Entropy, 1e-11).unwrap();
        assert!((e.mean_h - (1.0 - EULER_GAMMA)).abs() < 1e-9);
        let r = exp_moments(&HFunction::Rao, 1e-11).unwrap();
        assert!((r.mean_h - 2.0 / E).abs() < 1e-9);
    }

    #[test]
    fn affine_h_has_zero_null_variance() {
        let h = HFunction::custom("affine", |x| 2.0 * x + 3.0).unwrap();
        let m = exp_moments(&h, 1e-11).unwrap();
        assert_eq!(m.null_variance(), 0.0);
        assert!(matches!(
            efficacy(&h, |x| 2.0 * x - 1.0),
            Err(Error::DegenerateVariance(_))
        ));
        for h in HFunction::BUILT_INS {
            assert!(exp_moments(&h, 1e-10).unwrap().null_variance() > 0.0);
        }
    }

    #[test]
    fn null_limit_examples() {
        let (m, v) = null_limit(&HFunction::Greenwood).unwrap();
        assert!((m - 2.0).abs() < 1e-9 && (v - 4.0).abs() < 1e-9);
        let (m, v) = null_limit(&HFunction::Moran).unwrap();
        assert!((m - EULER_GAMMA).abs() < 1e-9 && (v - (PI * PI / 6.0 - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn co_perturbation_examples() {
        let odd = LocalAlternative::new(|x| 2.0 * x - 1.0);
        let lstar = odd.co_perturbation();
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            assert!((lstar(x) - 2.0 * x).abs() < 1e-14);
        }
        let constant = LocalAlternative::new(|_| 3.0);
        let lstar = constant.co_perturbation();
        assert_eq!(lstar(0.3), 0.0);
        // l(x) = −l(1−x) gives l* = 2 l((1+x)/2)
        let anti = LocalAlternative::new(|x| (2.0 * PI * x).sin());
        let lstar = anti.co_perturbation();
        for i in 0..=10 {
            let x = i as f64 / 10.0;
            assert!((lstar(x) - 2.0 * anti.l(0.5 * (1.0 + x))).abs() < 1e-12);
        }
        assert_eq!(anti.co_perturbation()(0.0), 0.0);
    }

    #[test]
    fn co_derivative_matches_folded_perturbation() {
        let alt = LocalAlternative::with_perturbation(
            |x| 2.0 * x * (1.0 - x) * (x - 0.5),
            |x| 2.0 * (-3.0 * x * x + 3.0 * x - 0.5),
        );
        let d = alt.co_derivative();
        let h = 1e-6;
        for i in 1..20 {
            let y = i as f64 / 20.0;
            let fd = (alt.co_big_l(y + h).unwrap() - alt.co_big_l(y - h).unwrap()) / (2.0 * h);
            assert!((fd - d(y)).abs() < 1e-8);
        }
        // symmetric L folds to nothing
        let sym = LocalAlternative::with_perturbation(|x| x * (1.0 - x), |x| 1.0 - 2.0 * x);
        assert!(sym.co_big_l(0.37).unwrap().abs() < 1e-16);
        assert!(sym.co_derivative()(0.37).abs() < 1e-16);
    }

    #[test]
    fn validate_rejects_non_bridge() {
        assert!(LocalAlternative::new(|x| 2.0 * x - 1.0)
            .validate(1e-8)
            .is_ok());
        assert!(LocalAlternative::new(|x| x).validate(1e-8).is_err());
    }

    #[test]
    fn efficacy_properties() {
        let l = |x: f64| 2.0 * x - 1.0;
        assert_eq!(efficacy(&HFunction::Greenwood, |_| 0.0).unwrap(), 0.0);
        let g = efficacy(&HFunction::Greenwood, l).unwrap();
        // (1/3)·4/(2·2)
        assert!((g - 1.0 / 3.0).abs() < 1e-9);
        let scaled = efficacy(&HFunction::Greenwood, |x| 3.0 * l(x)).unwrap();
        assert!((scaled - 9.0 * g).abs() < 1e-9);
        let are = pitman_are(&HFunction::Greenwood, &HFunction::Moran, l).unwrap();
        let expected = 2.0 / (1.0 / (PI * PI / 6.0 - 1.0).sqrt());
        assert!((are.efficacy_ratio - expected).abs() < 1e-8);
        assert!((are.efficacy_ratio - 1.606).abs() < 1e-3);
        assert!((are.efficacy_ratio_squared - expected * expected).abs() < 1e-7);
        let same = pitman_are(&HFunction::Rao, &HFunction::Rao, l).unwrap();
        assert_eq!(same.efficacy_ratio, 1.0);
        let rescaled =
            pitman_are(&HFunction::Greenwood, &HFunction::Moran, |x| 5.0 * l(x)).unwrap();
        assert!((rescaled.efficacy_ratio - are.efficacy_ratio).abs() < 1e-9);
        assert!(matches!(
            pitman_are(&HFunction::Greenwood, &HFunction::Moran, |_| 0.0),
            Err(Error::ZeroEfficacy)
        ));
    }

    #[test]
    fn greenwood_maximizes_efficacy() {
        let dirs: [fn(f64) -> f64; 3] = [
            |x| 2.0 * x - 1.0,
            |x| (2.0 * PI * x).cos(),
            |x| (3.0 * x * x - 1.0) * 0.5,
        ];
        for l in dirs {
            let effs: Vec<f64> = HFunction::BUILT_INS
                .iter()
                .map(|h| efficacy(h, l).unwrap())
                .collect();
            let best = effs.iter().cloned().fold(f64::MIN, f64::max);
            assert_eq!(best, effs[0], "{effs:?}");
        }
    }

    #[test]
    fn limit_mean_greenwood() {
        // ½ · ∫(1−2x)² · 4 = 2/3
        let mu = local_limit_mean(&HFunction::Greenwood, |x| 1.0 - 2.0 * x).unwrap();
        assert!((mu - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn hellinger_basics() {
        let f = |x: f64| AlternativeFamily::A(1.5).pdf_unchecked(x);
        assert!(hellinger(f, f, 1e-10).unwrap().value < 1e-5);
        let arcsine = hellinger(
            |_| 1.0,
            |x| AlternativeFamily::Beta(0.5).pdf_unchecked(x),
            1e-10,
        )
        .unwrap();
        // ∫ (π² x(1−x))^{-1/4} = Γ(3/4)² / (√π Γ(3/2))
        let bc = (libm::tgamma(0.75).powi(2) / libm::tgamma(1.5)) / PI.sqrt();
        assert!(
            (arcsine.value - (1.0 - bc).sqrt()).abs() < 1e-8,
            "{arcsine:?}"
        );
    }

    #[test]
    fn co_density_integrates_to_one() {
        for fam in [
            AlternativeFamily::Uniform,
            AlternativeFamily::A(1.5),
            AlternativeFamily::B(0.5),
            AlternativeFamily::C(2.5),
            AlternativeFamily::Beta(0.5),
        ] {
            let f = co_density(fam);
            let e = integrate_smoothed(f, 0.0, 0.5, 1e-11).unwrap()
                + integrate_smoothed(f, 0.5, 1.0, 1e-11).unwrap();
            assert!((e.value - 1.0).abs() < 1e-9, "{fam}");
        }
        let u = co_density(AlternativeFamily::Uniform);
        assert_eq!(u(0.3), 1.0);
    }

    #[test]
    fn fold_is_closer_to_uniform() {
        let a = hellinger_fold(AlternativeFamily::A(1.5), 1e-10).unwrap();
        assert!(a.hd_co < a.hd_direct - 1e-4, "{a:?}");
        let b = hellinger_fold(AlternativeFamily::B(1.5), 1e-10).unwrap();
        assert!((b.hd_co - b.hd_direct).abs() < 1e-6, "{b:?}");
    }
}
