use std::io::Read;

use crate::error::{domain, Error, Result};

/// Linearly interpolated table of `K(t) = [omega(t) / omega_0]^2`.
///
/// Constant extrapolation on both sides. Negative `K` (an inverted trap) is
/// accepted; that regime is experimental.
#[derive(Debug, Clone, PartialEq)]
pub struct KTable {
    times: Vec<f64>,
    k_values: Vec<f64>,
}

impl KTable {
    pub fn new(times: Vec<f64>, k_values: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::Table("table needs at least one knot".into()));
        }
        if times.len() != k_values.len() {
            return Err(Error::Table(format!(
                "{} times but {} K values",
                times.len(),
                k_values.len()
            )));
        }
        if times.iter().chain(&k_values).any(|v| !v.is_finite()) {
            return Err(Error::Table("times and K values must be finite".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Table("times must be strictly increasing".into()));
        }
        Ok(Self { times, k_values })
    }

    /// Reads a two-column CSV with header `t,k`.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::Table(e.to_string()))?
            .clone();
        if headers.len() != 2 || &headers[0] != "t" || &headers[1] != "k" {
            return Err(Error::Table(format!(
                "expected header `t,k`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut times = Vec::new();
        let mut k_values = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Table(e.to_string()))?;
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Table(format!("row {}: `{s}`: {e}", line + 1)))
            };
            times.push(parse(&record[0])?);
            k_values.push(parse(&record[1])?);
        }
        Self::new(times, k_values)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn k_values(&self) -> &[f64] {
        &self.k_values
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.times.len();
        if t <= self.times[0] {
            return self.k_values[0];
        }
        if t >= self.times[n - 1] {
            return self.k_values[n - 1];
        }
        let i = self.times.partition_point(|&x| x <= t) - 1;
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let (k0, k1) = (self.k_values[i], self.k_values[i + 1]);
        k0 + (k1 - k0) * (t - t0) / (t1 - t0)
    }
}

/// Trap schedule for `t >= 0`. The trap is on (`K = 1`) for `t < 0`, which
/// only enters through the initial conditions `b = 1, b_dot = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum FrequencyProtocol {
    /// `K(t) = 0` for `t >= 0`.
    SuddenQuench,
    /// `K(t) = 1` for `t < t0`, `0` afterwards.
    DelayedRelease {
        t0: f64,
    },
    Tabulated(KTable),
}

/// How `K` behaves on one integration segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum KLaw {
    Constant(f64),
    Linear { t0: f64, k0: f64, t1: f64, k1: f64 },
}

impl KLaw {
    pub(crate) fn eval(&self, t: f64) -> f64 {
        match *self {
            KLaw::Constant(k) => k,
            KLaw::Linear { t0, k0, t1, k1 } => k0 + (k1 - k0) * (t - t0) / (t1 - t0),
        }
    }
}

/// A time interval on which `K` is smooth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Segment {
    pub start: f64,
    pub end: f64,
    pub law: KLaw,
}

impl FrequencyProtocol {
    pub fn delayed_release(t0: f64) -> Result<Self> {
        if !(t0 >= 0.0) || !t0.is_finite() {
            return Err(domain(format!(
                "release time must be finite and >= 0, got {t0}"
            )));
        }
        Ok(Self::DelayedRelease { t0 })
    }

    /// `K(t)`; at a jump the value after the jump is returned.
    pub fn k(&self, t: f64) -> f64 {
        match self {
            Self::SuddenQuench => 0.0,
            Self::DelayedRelease { t0 } => {
                if t < *t0 {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Tabulated(table) => table.eval(t),
        }
    }

    /// True when a closed-form scaling solution exists.
    pub fn is_analytic(&self) -> bool {
        !matches!(self, Self::Tabulated(_))
    }

    /// Times in `(start, end)` where `K` jumps or has a kink.
    pub fn breakpoints(&self, start: f64, end: f64) -> Vec<f64> {
        let inside = |t: &f64| *t > start && *t < end;
        match self {
            Self::SuddenQuench => Vec::new(),
            Self::DelayedRelease { t0 } => std::iter::once(*t0).filter(inside).collect(),
            Self::Tabulated(table) => table.times.iter().copied().filter(inside).collect(),
        }
    }

    /// True when `K` takes one constant value on `(start, end]`, so that the
    /// evolution operator is time-translation invariant there.
    pub fn is_constant_on(&self, start: f64, end: f64) -> bool {
        if end <= start {
            return true;
        }
        self.segments(start, end)
            .iter()
            .map(|s| match s.law {
                KLaw::Constant(k) => Some(k),
                KLaw::Linear { k0, k1, .. } if k0 == k1 => Some(k0),
                KLaw::Linear { .. } => None,
            })
            .try_fold(None::<f64>, |acc, k| match (acc, k) {
                (_, None) => Err(()),
                (None, Some(k)) => Ok(Some(k)),
                (Some(a), Some(k)) if a == k => Ok(Some(a)),
                _ => Err(()),
            })
            .is_ok()
    }

    pub(crate) fn segments(&self, start: f64, end: f64) -> Vec<Segment> {
        let mut cuts = vec![start];
        cuts.extend(self.breakpoints(start, end));
        cuts.push(end);
        cuts.windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                let law = match self {
                    Self::SuddenQuench => KLaw::Constant(0.0),
                    Self::DelayedRelease { t0 } => KLaw::Constant(if a < *t0 { 1.0 } else { 0.0 }),
                    Self::Tabulated(table) => {
                        let n = table.times.len();
                        if b <= table.times[0] {
                            KLaw::Constant(table.k_values[0])
                        } else if a >= table.times[n - 1] {
                            KLaw::Constant(table.k_values[n - 1])
                        } else {
                            let i = table.times.partition_point(|&x| x <= a) - 1;
                            KLaw::Linear {
                                t0: table.times[i],
                                k0: table.k_values[i],
                                t1: table.times[i + 1],
                                k1: table.k_values[i + 1],
                            }
                        }
                    }
                };
                Segment {
                    start: a,
                    end: b,
                    law,
                }
            })
            .collect()
    }
}
