//! Usual and centre-outward (CO) sample spacings.
//!
//! Usual spacings difference the sorted observations anchored at 0 and 1.
//! CO spacings first map every observation to its centre-outward rank
//! `|2x − 1|` (0 at the median, 1 at the extremes), then difference the
//! sorted ranks, again anchored at 0 and 1. Under the uniform null the ranks
//! are i.i.d. uniform, so both constructions share one null distribution.

use crate::error::{check_unit, Error, Result};
use serde::{Deserialize, Serialize};

/// Observations on the null scale, i.e. after the probability integral transform.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        for &v in &values {
            check_unit(v)?;
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of simple spacings, one more than the sample size.
    pub fn n_effective(&self) -> usize {
        self.values.len() + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    Usual,
    CentreOutward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    Disjoint,
    Overlapping,
}

/// Which spacings to build. A step of 1 is always stored with the
/// overlapping layout since both layouts coincide there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpacingScheme {
    pub order: Order,
    pub step: usize,
    pub layout: Layout,
}

impl SpacingScheme {
    pub fn new(order: Order, step: usize, layout: Layout) -> Result<Self> {
        if step == 0 {
            return Err(Error::InvalidParameter(
                "spacing step must be at least 1".into(),
            ));
        }
        let layout = if step == 1 {
            Layout::Overlapping
        } else {
            layout
        };
        Ok(Self {
            order,
            step,
            layout,
        })
    }

    pub fn simple(order: Order) -> Self {
        Self {
            order,
            step: 1,
            layout: Layout::Overlapping,
        }
    }

    /// Number of gaps produced for `n_effective` simple spacings.
    pub fn gap_count(&self, n_effective: usize) -> Result<usize> {
        if self.step > n_effective {
            return Err(Error::StepTooLarge {
                step: self.step,
                available: n_effective,
            });
        }
        match self.layout {
            Layout::Overlapping => Ok(n_effective - self.step + 1),
            Layout::Disjoint => {
                if !n_effective.is_multiple_of(self.step) {
                    Err(Error::NonDividingStep {
                        step: self.step,
                        n_effective,
                    })
                } else {
                    Ok(n_effective / self.step)
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpacingsVector {
    pub gaps: Vec<f64>,
    pub scheme: SpacingScheme,
    pub n_effective: usize,
}

/// Centre-outward rank of a null-scale observation.
pub fn co_rank(x: f64) -> Result<f64> {
    check_unit(x)?;
    Ok((2.0 * x - 1.0).abs())
}

/// Fills `buf` with `[0, sorted values (or CO ranks)…, 1]`.
pub(crate) fn anchored_positions(values: &[f64], order: Order, buf: &mut Vec<f64>) {
    buf.clear();
    buf.reserve(values.len() + 2);
    buf.push(0.0);
    match order {
        Order::Usual => buf.extend_from_slice(values),
        Order::CentreOutward => buf.extend(values.iter().map(|&x| (2.0 * x - 1.0).abs())),
    }
    buf.push(1.0);
    let last = buf.len() - 1;
    buf[1..last].sort_unstable_by(f64::total_cmp);
}

/// Gap `j` (0-based) of a scheme over anchored positions.
#[inline]
pub(crate) fn window_gap(anchored: &[f64], step: usize, layout: Layout, j: usize) -> f64 {
    let start = match layout {
        Layout::Overlapping => j,
        Layout::Disjoint => j * step,
    };
    anchored[start + step] - anchored[start]
}

pub fn simple_spacings(sample: &Sample, order: Order) -> SpacingsVector {
    m_step_spacings(sample, &SpacingScheme::simple(order)).expect("simple spacings always exist")
}

pub fn m_step_spacings(sample: &Sample, scheme: &SpacingScheme) -> Result<SpacingsVector> {
    let n_effective = sample.n_effective();
    let count = scheme.gap_count(n_effective)?;
    let mut anchored = Vec::new();
    anchored_positions(sample.values(), scheme.order, &mut anchored);
    let gaps = (0..count)
        .map(|j| window_gap(&anchored, scheme.step, scheme.layout, j))
        .collect();
    Ok(SpacingsVector {
        gaps,
        scheme: *scheme,
        n_effective,
    })
}
