use std::fmt;
use std::str::FromStr;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// A time grid written as `lin:START:STOP:COUNT` or `log:START:STOP:COUNT`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub spacing: Spacing,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            spacing: Spacing::Log,
            start: 0.01,
            stop: 1000.0,
            count: 200,
        }
    }
}

impl TimeGrid {
    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        let mut out: Vec<f64> = (0..self.count)
            .map(|i| {
                let s = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * s,
                    Spacing::Log => self.start * (self.stop / self.start).powf(s),
                }
            })
            .collect();
        out[0] = self.start;
        out[self.count - 1] = self.stop;
        out
    }
}

impl FromStr for TimeGrid {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let usage = |why: &str| CliError::Usage(format!("invalid time grid `{s}`: {why}"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(usage("expected lin|log:START:STOP:COUNT"));
        }
        let spacing = match parts[0] {
            "lin" => Spacing::Linear,
            "log" => Spacing::Log,
            _ => return Err(usage("spacing must be `lin` or `log`")),
        };
        let num = |p: &str| {
            p.parse::<f64>()
                .map_err(|_| usage(&format!("`{p}` is not a number")))
        };
        let start = num(parts[1])?;
        let stop = num(parts[2])?;
        let count: usize = parts[3]
            .parse()
            .map_err(|_| usage("COUNT must be a positive integer"))?;
        if count < 2 {
            return Err(usage("COUNT must be at least 2"));
        }
        if !(start.is_finite() && stop.is_finite() && stop > start) {
            return Err(usage("need finite START < STOP"));
        }
        match spacing {
            Spacing::Log if start <= 0.0 => return Err(usage("log spacing needs START > 0")),
            Spacing::Linear if start < 0.0 => return Err(usage("times must be non-negative")),
            _ => {}
        }
        Ok(Self {
            spacing,
            start,
            stop,
            count,
        })
    }
}

impl fmt::Display for TimeGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.spacing {
            Spacing::Linear => "lin",
            Spacing::Log => "log",
        };
        write!(f, "{tag}:{}:{}:{}", self.start, self.stop, self.count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_expands() {
        let g: TimeGrid = "log:0.01:100:5".parse().unwrap();
        let p = g.points();
        assert_eq!(p.len(), 5);
        assert_eq!(p[0], 0.01);
        assert_eq!(p[4], 100.0);
        assert!((p[2] - 1.0).abs() < 1e-14);
        let g: TimeGrid = "lin:0:1:3".parse().unwrap();
        assert_eq!(g.points(), vec![0.0, 0.5, 1.0]);
        assert_eq!(g.to_string(), "lin:0:1:3");
    }

    #[test]
    fn rejects_bad_grids() {
        for bad in [
            "log:0:1:10",
            "lin:1:0:10",
            "lin:0:1:1",
            "cubic:0:1:4",
            "lin:0:1",
            "lin:a:1:3",
            "lin:-1:1:3",
        ] {
            assert!(
                matches!(bad.parse::<TimeGrid>(), Err(CliError::Usage(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn default_grid() {
        let g = TimeGrid::default();
        assert_eq!(g.to_string(), "log:0.01:1000:200");
    }
}
