use std::fs::File;
use std::path::PathBuf;
use std::str::FromStr;

use csdecay::ermakov::{FrequencyProtocol, KTable};

use crate::error::CliError;

/// `sudden`, `delayed:T0` or `table:PATH` (a CSV file with header `t,k`).
#[derive(Debug, Clone, PartialEq)]
pub enum ProtocolSpec {
    Sudden,
    Delayed(f64),
    Table(PathBuf),
}

impl FromStr for ProtocolSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "sudden" {
            return Ok(Self::Sudden);
        }
        if let Some(t0) = s.strip_prefix("delayed:") {
            let t0: f64 = t0
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid release time in `{s}`")))?;
            return Ok(Self::Delayed(t0));
        }
        if let Some(path) = s.strip_prefix("table:") {
            if path.is_empty() {
                return Err(CliError::Usage("`table:` needs a file path".into()));
            }
            return Ok(Self::Table(PathBuf::from(path)));
        }
        Err(CliError::Usage(format!(
            "unknown protocol `{s}`; expected sudden, delayed:T0 or table:PATH"
        )))
    }
}

impl ProtocolSpec {
    pub fn build(&self) -> Result<FrequencyProtocol, CliError> {
        match self {
            Self::Sudden => Ok(FrequencyProtocol::SuddenQuench),
            Self::Delayed(t0) => Ok(FrequencyProtocol::delayed_release(*t0)?),
            Self::Table(path) => {
                let file = File::open(path).map_err(|e| {
                    CliError::Usage(format!(
                        "cannot open frequency table {}: {e}",
                        path.display()
                    ))
                })?;
                Ok(FrequencyProtocol::Tabulated(KTable::from_csv(file)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_protocols() {
        assert_eq!(
            "sudden".parse::<ProtocolSpec>().unwrap(),
            ProtocolSpec::Sudden
        );
        assert_eq!(
            "delayed:3".parse::<ProtocolSpec>().unwrap(),
            ProtocolSpec::Delayed(3.0)
        );
        assert_eq!(
            "table:k.csv".parse::<ProtocolSpec>().unwrap(),
            ProtocolSpec::Table(PathBuf::from("k.csv"))
        );
        for bad in ["", "delayed:", "delayed:x", "table:", "ramp"] {
            assert!(bad.parse::<ProtocolSpec>().is_err(), "{bad}");
        }
        assert!(matches!(
            ProtocolSpec::Delayed(-1.0).build(),
            Err(CliError::Usage(_))
        ));
    }
}
