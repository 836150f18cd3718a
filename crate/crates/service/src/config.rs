use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;

use nichebench_core::rating::DEFAULT_MIN_PUBS;
use nichebench_core::YearWindow;
use serde::Deserialize;

pub const ENV_PORT: &str = "NICHEBENCH_PORT";
pub const ENV_HOST: &str = "NICHEBENCH_HOST";
pub const ENV_DATA: &str = "NICHEBENCH_DATA";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid config file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("invalid value {value:?} for {key}: {reason}")]
    Invalid {
        key: String,
        value: String,
        reason: String,
    },
}

/// Service settings: file values first, then environment overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct ServiceConfig {
    pub host: IpAddr,
    pub port: u16,
    pub data_dir: PathBuf,
    pub default_window: YearWindow,
    pub default_min_pubs: u64,
    pub cors: bool,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            host: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port: 8080,
            data_dir: PathBuf::from("fixtures"),
            default_window: YearWindow::DEFAULT,
            default_min_pubs: DEFAULT_MIN_PUBS,
            cors: true,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    host: Option<IpAddr>,
    port: Option<u16>,
    data_dir: Option<PathBuf>,
    years: Option<String>,
    min_pubs: Option<u64>,
    cors: Option<bool>,
}

impl ServiceConfig {
    /// Reads keys `host`, `port`, `data_dir`, `years` ("2008:2013"),
    /// `min_pubs` and `cors`. Missing keys keep their defaults.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let file: FileConfig = toml::from_str(text)?;
        let mut cfg = ServiceConfig::default();
        if let Some(h) = file.host {
            cfg.host = h;
        }
        if let Some(p) = file.port {
            cfg.port = p;
        }
        if let Some(d) = file.data_dir {
            cfg.data_dir = d;
        }
        if let Some(y) = file.years {
            cfg.default_window = y.parse().map_err(|reason| ConfigError::Invalid {
                key: "years".into(),
                value: y.clone(),
                reason,
            })?;
        }
        if let Some(m) = file.min_pubs {
            cfg.default_min_pubs = m;
        }
        if let Some(c) = file.cors {
            cfg.cors = c;
        }
        Ok(cfg)
    }

    /// Applies `NICHEBENCH_PORT`, `NICHEBENCH_HOST` and `NICHEBENCH_DATA`.
    pub fn apply_env(
        &mut self,
        lookup: impl Fn(&str) -> Option<String>,
    ) -> Result<(), ConfigError> {
        let invalid = |key: &str, value: &str, reason: String| ConfigError::Invalid {
            key: key.into(),
            value: value.into(),
            reason,
        };
        if let Some(v) = lookup(ENV_PORT) {
            self.port = v
                .parse()
                .map_err(|e| invalid(ENV_PORT, &v, format!("{e}")))?;
        }
        if let Some(v) = lookup(ENV_HOST) {
            self.host = v
                .parse()
                .map_err(|e| invalid(ENV_HOST, &v, format!("{e}")))?;
        }
        if let Some(v) = lookup(ENV_DATA) {
            self.data_dir = PathBuf::from(v);
        }
        Ok(())
    }

    pub fn addr(&self) -> SocketAddr {
        SocketAddr::new(self.host, self.port)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_env() {
        let mut cfg =
            ServiceConfig::from_toml("port = 9000\nyears = \"2009:2012\"\ncors = false\n").unwrap();
        assert_eq!(cfg.port, 9000);
        assert_eq!(cfg.default_window, YearWindow::new(2009, 2012).unwrap());
        assert!(!cfg.cors);
        assert_eq!(cfg.default_min_pubs, 40);

        cfg.apply_env(|k| match k {
            ENV_PORT => Some("9100".into()),
            ENV_DATA => Some("/data".into()),
            _ => None,
        })
        .unwrap();
        assert_eq!(cfg.port, 9100);
        assert_eq!(cfg.data_dir, PathBuf::from("/data"));
    }

    #[test]
    fn bad_values() {
        assert!(ServiceConfig::from_toml("years = \"2013:2008\"").is_err());
        assert!(ServiceConfig::from_toml("colour = 1").is_err());
        let mut cfg = ServiceConfig::default();
        assert!(cfg
            .apply_env(|k| (k == ENV_PORT).then(|| "http".to_string()))
            .is_err());
    }
}
