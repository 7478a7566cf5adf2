//! Score functions h and the spacings statistics W(h), W*(h) and their
//! combined maximum.
//!
//! For simple spacings the statistic is `(1/n) Σ h(n·gap)` with `n` the number
//! of simple spacings. For m-step gaps it is `(1/K) Σ h(n·gap/m)` over the `K`
//! gaps, which keeps each scaled gap at null mean 1.

use crate::error::{Error, Result};
use crate::spacings::{
    anchored_positions, m_step_spacings, window_gap, Layout, Order, Sample, SpacingScheme,
    SpacingsVector,
};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

type ScoreFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A convex score function applied to scaled spacings.
#[derive(Clone)]
pub enum HFunction {
    /// x²
    Greenwood,
    /// −log x
    Moran,
    /// |x − 1|
    Rao,
    /// x log x, with 0 log 0 = 0
    Entropy,
    Custom {
        name: String,
        f: ScoreFn,
    },
}

impl HFunction {
    pub const BUILT_INS: [HFunction; 4] = [
        HFunction::Greenwood,
        HFunction::Moran,
        HFunction::Rao,
        HFunction::Entropy,
    ];

    /// User score function. Convexity and moment conditions are the caller's
    /// responsibility; only finiteness on a probe grid is checked.
    pub fn custom<F>(name: &str, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        const PROBES: [f64; 10] = [1e-3, 0.01, 0.1, 0.5, 1.0, 1.5, 2.0, 5.0, 10.0, 50.0];
        if let Some(x) = PROBES.iter().find(|&&x| !f(x).is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "custom h `{name}` is not finite at {x}"
            )));
        }
        Ok(Self::Custom {
            name: name.to_string(),
            f: Arc::new(f),
        })
    }

    pub fn name(&self) -> &str {
        match self {
            Self::Greenwood => "greenwood",
            Self::Moran => "moran",
            Self::Rao => "rao",
            Self::Entropy => "entropy",
            Self::Custom { name, .. } => name,
        }
    }

    /// Column letter used in power tables.
    pub fn letter(&self) -> &str {
        match self {
            Self::Greenwood => "G",
            Self::Moran => "L",
            Self::Rao => "R",
            Self::Entropy => "E",
            Self::Custom { name, .. } => name,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Greenwood => x * x,
            Self::Moran => -x.ln(),
            Self::Rao => (x - 1.0).abs(),
            Self::Entropy => {
                if x == 0.0 {
                    0.0
                } else {
                    x * x.ln()
                }
            }
            Self::Custom { f, .. } => f(x),
        }
    }
}

impl fmt::Debug for HFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HFunction({})", self.name())
    }
}

impl PartialEq for HFunction {
    fn eq(&self, other: &Self) -> bool {
        self.name() == other.name()
    }
}

impl FromStr for HFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "greenwood" | "g" => Ok(Self::Greenwood),
            "moran" | "log" | "l" => Ok(Self::Moran),
            "rao" | "r" => Ok(Self::Rao),
            "entropy" | "e" => Ok(Self::Entropy),
            _ => Err(Error::Spec {
                what: "h function",
                spec: s.to_string(),
                reason: "expected greenwood, moran, rao or entropy".into(),
            }),
        }
    }
}

impl Serialize for HFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for HFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatisticValue {
    pub value: f64,
    pub h: HFunction,
    /// For a combined statistic, the scheme of the component attaining the maximum.
    pub scheme: SpacingScheme,
    pub n_effective: usize,
    /// Set when the value is not finite (a zero gap under a log score).
    pub degenerate: bool,
    pub combined: bool,
}

/// Scaled-gap average over precomputed gaps.
pub fn statistic(gaps: &SpacingsVector, h: &HFunction) -> Result<StatisticValue> {
    if gaps.gaps.is_empty() {
        return Err(Error::InvalidParameter("no gaps to score".into()));
    }
    let scale = gaps.n_effective as f64 / gaps.scheme.step as f64;
    let sum: f64 = gaps.gaps.iter().map(|&g| h.eval(scale * g)).sum();
    let value = sum / gaps.gaps.len() as f64;
    Ok(StatisticValue {
        value,
        h: h.clone(),
        scheme: gaps.scheme,
        n_effective: gaps.n_effective,
        degenerate: !value.is_finite(),
        combined: false,
    })
}

/// Scores anchored positions directly; same arithmetic as [`statistic`].
#[inline]
pub(crate) fn score_anchored(anchored: &[f64], h: &HFunction, step: usize, layout: Layout) -> f64 {
    let n_effective = anchored.len() - 1;
    let count = match layout {
        Layout::Overlapping => n_effective + 1 - step,
        Layout::Disjoint => n_effective / step,
    };
    let scale = n_effective as f64 / step as f64;
    let mut sum = 0.0;
    for j in 0..count {
        sum += h.eval(scale * window_gap(anchored, step, layout, j));
    }
    sum / count as f64
}

/// max(W(h), W*(h)) over the simple usual and CO spacings of one sample.
pub fn combined_max_statistic(sample: &Sample, h: &HFunction) -> Result<StatisticValue> {
    StatSpec {
        h: h.clone(),
        combination: Combination::Max,
        step: 1,
        layout: Layout::Overlapping,
    }
    .evaluate(sample)
}

/// How a statistic spec combines orderings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Combination {
    Single(Order),
    Max,
}

/// A fully specified test statistic, parsed from strings such as
/// `greenwood`, `moran:co`, `rao:max` or `entropy:co:m=2:overlap`.
#[derive(Debug, Clone, PartialEq)]
pub struct StatSpec {
    pub h: HFunction,
    pub combination: Combination,
    pub step: usize,
    pub layout: Layout,
}

impl StatSpec {
    pub fn new(
        h: HFunction,
        combination: Combination,
        step: usize,
        layout: Layout,
    ) -> Result<Self> {
        // normalizes step-1 layout
        let scheme = SpacingScheme::new(Order::Usual, step, layout)?;
        Ok(Self {
            h,
            combination,
            step,
            layout: scheme.layout,
        })
    }

    pub fn simple(h: HFunction, order: Order) -> Self {
        Self {
            h,
            combination: Combination::Single(order),
            step: 1,
            layout: Layout::Overlapping,
        }
    }

    /// The scheme of a single-ordering spec, or of the usual half of a max spec.
    pub fn scheme(&self, order: Order) -> SpacingScheme {
        SpacingScheme {
            order,
            step: self.step,
            layout: self.layout,
        }
    }

    /// Orderings this spec needs sorted.
    pub fn orders(&self) -> &'static [Order] {
        match self.combination {
            Combination::Single(Order::Usual) => &[Order::Usual],
            Combination::Single(Order::CentreOutward) => &[Order::CentreOutward],
            Combination::Max => &[Order::Usual, Order::CentreOutward],
        }
    }

    /// Short column label in the style G, G*, Gmax, G*(m=2;overlap).
    pub fn label(&self) -> String {
        let mut s = self.h.letter().to_string();
        match self.combination {
            Combination::Single(Order::Usual) => {}
            Combination::Single(Order::CentreOutward) => s.push('*'),
            Combination::Max => s.push_str("max"),
        }
        if self.step > 1 {
            let layout = match self.layout {
                Layout::Disjoint => "disjoint",
                Layout::Overlapping => "overlap",
            };
            s.push_str(&format!("(m={};{layout})", self.step));
        }
        s
    }

    /// Identity of the null distribution: specs with equal keys share
    /// critical values because usual and CO statistics are equal in law.
    pub fn null_key(&self) -> String {
        let mode = match self.combination {
            Combination::Single(_) => "single",
            Combination::Max => "max",
        };
        let layout = match self.layout {
            Layout::Disjoint => "disjoint",
            Layout::Overlapping => "overlap",
        };
        format!("{}|{mode}|m={}|{layout}", self.h.name(), self.step)
    }

    pub fn evaluate(&self, sample: &Sample) -> Result<StatisticValue> {
        match self.combination {
            Combination::Single(order) => {
                statistic(&m_step_spacings(sample, &self.scheme(order))?, &self.h)
            }
            Combination::Max => {
                let usual = statistic(
                    &m_step_spacings(sample, &self.scheme(Order::Usual))?,
                    &self.h,
                )?;
                let co = statistic(
                    &m_step_spacings(sample, &self.scheme(Order::CentreOutward))?,
                    &self.h,
                )?;
                let mut best = if co.value > usual.value { co } else { usual };
                best.combined = true;
                best.degenerate = !best.value.is_finite();
                Ok(best)
            }
        }
    }

    /// Checks the spec can be evaluated on samples of `n_obs` observations.
    pub fn check_size(&self, n_obs: usize) -> Result<()> {
        self.scheme(Order::Usual).gap_count(n_obs + 1).map(|_| ())
    }
}

impl fmt::Display for StatSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.h.name())?;
        match self.combination {
            Combination::Single(Order::Usual) => {}
            Combination::Single(Order::CentreOutward) => write!(f, ":co")?,
            Combination::Max => write!(f, ":max")?,
        }
        if self.step > 1 {
            let layout = match self.layout {
                Layout::Disjoint => "disjoint",
                Layout::Overlapping => "overlap",
            };
            write!(f, ":m={}:{layout}", self.step)?;
        }
        Ok(())
    }
}

impl FromStr for StatSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: String| Error::Spec {
            what: "statistic",
            spec: s.to_string(),
            reason,
        };
        let mut parts = s.trim().split(':');
        let h: HFunction = parts
            .next()
            .unwrap_or_default()
            .parse()
            .map_err(|e: Error| bad(e.to_string()))?;
        let mut combination = Combination::Single(Order::Usual);
        let mut step = 1usize;
        let mut layout = None;
        for part in parts {
            let p = part.trim().to_ascii_lowercase();
            match p.as_str() {
                "co" => combination = Combination::Single(Order::CentreOutward),
                "max" => combination = Combination::Max,
                "disjoint" => layout = Some(Layout::Disjoint),
                "overlap" | "overlapping" => layout = Some(Layout::Overlapping),
                _ => match p.strip_prefix("m=") {
                    Some(m) => {
                        step = m
                            .parse()
                            .ok()
                            .filter(|&m| m >= 1)
                            .ok_or_else(|| bad(format!("bad step `{m}`")))?
                    }
                    None => return Err(bad(format!("unknown modifier `{part}`"))),
                },
            }
        }
        let layout = match (step, layout) {
            (1, l) => l.unwrap_or(Layout::Overlapping),
            (_, Some(l)) => l,
            (_, None) => return Err(bad("m-step spec needs :disjoint or :overlap".into())),
        };
        StatSpec::new(h, combination, step, layout).map_err(|e| bad(e.to_string()))
    }
}

impl Serialize for StatSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for StatSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Reusable sort buffers for evaluating many specs on one sample without
/// allocating.
#[derive(Default)]
pub(crate) struct Workspace {
    usual: Vec<f64>,
    co: Vec<f64>,
    usual_ready: bool,
    co_ready: bool,
}

impl Workspace {
    pub(crate) fn reset(&mut self) {
        self.usual_ready = false;
        self.co_ready = false;
    }

    fn anchored(&mut self, values: &[f64], order: Order) -> &[f64] {
        let (buf, ready) = match order {
            Order::Usual => (&mut self.usual, &mut self.usual_ready),
            Order::CentreOutward => (&mut self.co, &mut self.co_ready),
        };
        if !*ready {
            anchored_positions(values, order, buf);
            *ready = true;
        }
        buf
    }

    /// Value of `spec` on `values`; callers must have validated the size
    /// and called [`Workspace::reset`] since the values last changed.
    pub(crate) fn value(&mut self, values: &[f64], spec: &StatSpec) -> f64 {
        match spec.combination {
            Combination::Single(order) => score_anchored(
                self.anchored(values, order),
                &spec.h,
                spec.step,
                spec.layout,
            ),
            Combination::Max => {
                let u = score_anchored(
                    self.anchored(values, Order::Usual),
                    &spec.h,
                    spec.step,
                    spec.layout,
                );
                let c = score_anchored(
                    self.anchored(values, Order::CentreOutward),
                    &spec.h,
                    spec.step,
                    spec.layout,
                );
                if c > u {
                    c
                } else {
                    u
                }
            }
        }
    }
}
