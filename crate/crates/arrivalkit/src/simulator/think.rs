//! Think-time distributions for virtual users.

use std::fmt;

use super::rng::Stream;
use super::SimError;

/// How a virtual user pauses between receiving a response and launching the
/// next request.
#[derive(Debug, Clone, PartialEq)]
pub enum ThinkTimeSpec {
    /// The same pause every cycle.
    Fixed { value_ms: f64 },
    /// offset + U[0, range]. With offset 0 the gap CoV of a single thread is
    /// 1/√3 ≈ 0.577 and the mean is range/2.
    Uniform { offset_ms: f64, range_ms: f64 },
    /// Negative-exponential with the given mean, drawn by inverse CDF.
    Exponential { mean_ms: f64 },
}

impl ThinkTimeSpec {
    pub fn sample(&self, stream: &mut Stream) -> f64 {
        match *self {
            ThinkTimeSpec::Fixed { value_ms } => value_ms,
            ThinkTimeSpec::Uniform {
                offset_ms,
                range_ms,
            } => stream.uniform(offset_ms, range_ms),
            ThinkTimeSpec::Exponential { mean_ms } => stream.exponential(mean_ms),
        }
    }

    pub fn mean_ms(&self) -> f64 {
        match *self {
            ThinkTimeSpec::Fixed { value_ms } => value_ms,
            ThinkTimeSpec::Uniform {
                offset_ms,
                range_ms,
            } => offset_ms + range_ms / 2.0,
            ThinkTimeSpec::Exponential { mean_ms } => mean_ms,
        }
    }

    /// Largest possible draw; `None` for the unbounded exponential.
    pub fn max_ms(&self) -> Option<f64> {
        match *self {
            ThinkTimeSpec::Fixed { value_ms } => Some(value_ms),
            ThinkTimeSpec::Uniform {
                offset_ms,
                range_ms,
            } => Some(offset_ms + range_ms),
            ThinkTimeSpec::Exponential { mean_ms } => {
                if mean_ms == 0.0 {
                    Some(0.0)
                } else {
                    None
                }
            }
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let ok = match *self {
            ThinkTimeSpec::Fixed { value_ms } => value_ms >= 0.0,
            ThinkTimeSpec::Uniform {
                offset_ms,
                range_ms,
            } => offset_ms >= 0.0 && range_ms >= 0.0,
            ThinkTimeSpec::Exponential { mean_ms } => mean_ms >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(SimError::InvalidConfig(format!(
                "think-time parameters must be >= 0: {self}"
            )))
        }
    }

    /// Parses the compact form used on the command line and in config files:
    /// `fixed:V`, `uniform:OFFSET:RANGE`, or `exp:MEAN` (milliseconds).
    pub fn parse(text: &str) -> Result<ThinkTimeSpec, SimError> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = |reason: &str| SimError::BadSpec {
            spec: text.to_string(),
            reason: reason.to_string(),
        };
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| bad("expected a number"))
        };
        let spec = match parts.as_slice() {
            ["fixed", v] => ThinkTimeSpec::Fixed { value_ms: num(v)? },
            ["uniform", o, r] => ThinkTimeSpec::Uniform {
                offset_ms: num(o)?,
                range_ms: num(r)?,
            },
            ["exp", m] | ["exponential", m] => ThinkTimeSpec::Exponential { mean_ms: num(m)? },
            _ => return Err(bad("expected fixed:V, uniform:OFFSET:RANGE, or exp:MEAN")),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for ThinkTimeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ThinkTimeSpec::Fixed { value_ms } => write!(f, "fixed:{value_ms}"),
            ThinkTimeSpec::Uniform {
                offset_ms,
                range_ms,
            } => write!(f, "uniform:{offset_ms}:{range_ms}"),
            ThinkTimeSpec::Exponential { mean_ms } => write!(f, "exp:{mean_ms}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{mean, sample_sdev};

    #[test]
    fn fixed_always_returns_its_value() {
        let spec = ThinkTimeSpec::Fixed { value_ms: 500.0 };
        let mut s = Stream::derive(1, 0);
        for _ in 0..100 {
            assert_eq!(spec.sample(&mut s), 500.0);
        }
    }

    #[test]
    fn uniform_sample_mean_and_cv() {
        let spec = ThinkTimeSpec::Uniform {
            offset_ms: 0.0,
            range_ms: 12_500.0,
        };
        let mut s = Stream::derive(3, 0);
        let draws: Vec<f64> = (0..100_000).map(|_| spec.sample(&mut s)).collect();
        let m = mean(&draws);
        let cv = sample_sdev(&draws, m) / m;
        assert!((m - 6250.0).abs() / 6250.0 < 0.01, "mean {m}");
        assert!((cv - 1.0 / 3f64.sqrt()).abs() < 0.01, "cv {cv}");
    }

    #[test]
    fn spec_strings_round_trip() {
        for text in ["fixed:100", "uniform:0:12500", "exp:1000"] {
            let spec = ThinkTimeSpec::parse(text).unwrap();
            assert_eq!(ThinkTimeSpec::parse(&spec.to_string()).unwrap(), spec);
        }
        assert!(ThinkTimeSpec::parse("uniform:5").is_err());
        assert!(ThinkTimeSpec::parse("fixed:-3").is_err());
        assert!(ThinkTimeSpec::parse("gauss:1:2").is_err());
    }
}
