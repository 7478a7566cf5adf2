//! Goodness-of-fit tests for uniformity built on usual and centre-outward
//! spacings.
//!
//! A sample on [0, 1] is tested with statistics `W(h) = (1/n) Σ h(n·D_i)` over
//! its spacings, either as observed or after folding each point to its
//! distance from the centre, `R = |2x − 1|`. Folded spacings are powerful
//! against alternatives that are symmetric about 1/2.
//!
//! ```
//! use cospacings::{Sample, StatSpec};
//!
//! let sample = Sample::new(vec![0.1, 0.4, 0.7]).unwrap();
//! let spec: StatSpec = "greenwood:co".parse().unwrap();
//! let w = spec.evaluate(&sample).unwrap();
//! assert!((w.value - 1.12).abs() < 1e-12);
//! ```

pub mod asymptotics;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod montecarlo;
pub mod quadrature;
pub mod rng;
pub mod sampling;
pub mod spacings;
pub mod special;
pub mod statistics;
pub mod table;

pub use error::{Error, Result};
pub use montecarlo::{
    critical_value, power_study, run_test, Decision, Method, PowerStudyConfig, RunOptions,
    TestReport,
};
pub use rng::RngStream;
pub use sampling::AlternativeFamily;
pub use spacings::{Layout, Order, Sample, SpacingScheme, SpacingsVector};
pub use statistics::{Combination, HFunction, StatSpec, StatisticValue};
pub use table::PowerTable;
