//! Response-time models for the system under test.

use std::fmt;

use super::rng::Stream;
use super::SimError;

/// How the simulated system answers a request.
#[derive(Debug, Clone, PartialEq)]
pub enum SutModelSpec {
    /// Responses take no time at all: the launch pattern is driven purely by
    /// think times.
    Zero,
    /// Every response is an independent lognormal draw with the given mean
    /// and CoV — no feedback between threads.
    Independent { r_mean_ms: f64, cov_r: f64 },
    /// A shared first-come-first-served station with `servers` servers.
    /// Response time = queue wait + a lognormal service draw, which couples
    /// the threads together and can bunch their relaunches.
    Queue {
        servers: usize,
        service_mean_ms: f64,
        service_cov: f64,
    },
}

impl SutModelSpec {
    pub fn validate(&self) -> Result<(), SimError> {
        match *self {
            SutModelSpec::Zero => Ok(()),
            SutModelSpec::Independent { r_mean_ms, cov_r } => {
                if r_mean_ms > 0.0 && cov_r >= 0.0 {
                    Ok(())
                } else {
                    Err(SimError::InvalidConfig(format!(
                        "independent SUT needs mean > 0 and cov >= 0: {self}"
                    )))
                }
            }
            SutModelSpec::Queue {
                servers,
                service_mean_ms,
                service_cov,
            } => {
                if servers > 0 && service_mean_ms > 0.0 && service_cov >= 0.0 {
                    Ok(())
                } else {
                    Err(SimError::InvalidConfig(format!(
                        "queue SUT needs servers > 0, mean > 0, cov >= 0: {self}"
                    )))
                }
            }
        }
    }

    /// Parses `zero`, `lognormal:MEAN:COV`, or `queue:SERVERS:MEAN:COV`.
    pub fn parse(text: &str) -> Result<SutModelSpec, SimError> {
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
            ["zero"] => SutModelSpec::Zero,
            ["lognormal", m, c] => SutModelSpec::Independent {
                r_mean_ms: num(m)?,
                cov_r: num(c)?,
            },
            ["queue", s, m, c] => SutModelSpec::Queue {
                servers: s
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| bad("expected an integer server count"))?,
                service_mean_ms: num(m)?,
                service_cov: num(c)?,
            },
            _ => {
                return Err(bad(
                    "expected zero, lognormal:MEAN:COV, or queue:SERVERS:MEAN:COV",
                ))
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Builds the stateful model for one simulation run.
    pub fn build(&self) -> SutModel {
        let state = match *self {
            SutModelSpec::Queue { servers, .. } => vec![0.0f64; servers],
            _ => Vec::new(),
        };
        SutModel {
            spec: self.clone(),
            server_free_at: state,
        }
    }

    /// True when every response is guaranteed to be zero.
    pub fn is_zero(&self) -> bool {
        matches!(self, SutModelSpec::Zero)
    }
}

impl fmt::Display for SutModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SutModelSpec::Zero => write!(f, "zero"),
            SutModelSpec::Independent { r_mean_ms, cov_r } => {
                write!(f, "lognormal:{r_mean_ms}:{cov_r}")
            }
            SutModelSpec::Queue {
                servers,
                service_mean_ms,
                service_cov,
            } => {
                write!(f, "queue:{servers}:{service_mean_ms}:{service_cov}")
            }
        }
    }
}

/// What the model reports for one request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SutResponse {
    /// Full response time, ms.
    pub elapsed_ms: f64,
    /// Time to first byte: zero for the stateless models, the queue wait for
    /// the queue model.
    pub first_byte_ms: f64,
}

/// A response-time model plus its run state (server free times for the
/// queue kind). Requests must be offered in non-decreasing launch order,
/// which the event-driven simulator guarantees.
pub struct SutModel {
    spec: SutModelSpec,
    server_free_at: Vec<f64>,
}

impl SutModel {
    pub fn respond(&mut self, at_ms: f64, stream: &mut Stream) -> SutResponse {
        match self.spec {
            SutModelSpec::Zero => SutResponse {
                elapsed_ms: 0.0,
                first_byte_ms: 0.0,
            },
            SutModelSpec::Independent { r_mean_ms, cov_r } => SutResponse {
                elapsed_ms: stream.lognormal(r_mean_ms, cov_r),
                first_byte_ms: 0.0,
            },
            SutModelSpec::Queue {
                service_mean_ms,
                service_cov,
                ..
            } => {
                let service = stream.lognormal(service_mean_ms, service_cov);
                // Earliest-free server; ties go to the lowest index.
                let (idx, free_at) = self
                    .server_free_at
                    .iter()
                    .copied()
                    .enumerate()
                    .fold(None::<(usize, f64)>, |best, (i, t)| match best {
                        Some((_, bt)) if bt <= t => best,
                        _ => Some((i, t)),
                    })
                    .expect("queue model has at least one server");
                let start = free_at.max(at_ms);
                let finish = start + service;
                self.server_free_at[idx] = finish;
                SutResponse {
                    elapsed_ms: finish - at_ms,
                    first_byte_ms: start - at_ms,
                }
            }
        }
    }
}
