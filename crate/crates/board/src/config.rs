//! Prover and agent settings from a TOML file.
//!
//! ```toml
//! [[prover]]
//! name = "leo"
//! mode = "local"
//! command = ["leo3", "{problem}", "-t", "{timelimit}"]
//! time_limit = 10
//! dialect = "thf"
//!
//! [[prover]]
//! name = "remote-e"
//! mode = "remote"
//! url = "http://localhost:8080/SystemOnTPTPFormReply"
//! time_limit = 5
//! dialect = "fof"
//!
//! [agents.nnf]
//! bid = 2.0
//!
//! [agents.paramodulation]
//! enabled = false
//! ```

use std::collections::BTreeMap;

use holboard_core::tptp::Dialect;
use serde::Deserialize;
use thiserror::Error;

use crate::external::{ProverMode, ProverSpec, SpecError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading {0}: {1}")]
    Io(String, std::io::Error),
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
    #[error("prover `{0}`: unknown mode `{1}`")]
    Mode(String, String),
    #[error("prover `{0}`: unknown dialect `{1}`")]
    Dialect(String, String),
    #[error("prover `{0}`: {1} mode needs `{2}`")]
    Missing(String, &'static str, &'static str),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSettings {
    pub enabled: Option<bool>,
    pub bid: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProver {
    name: String,
    mode: String,
    command: Option<Vec<String>>,
    url: Option<String>,
    time_limit: u64,
    dialect: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    prover: Vec<RawProver>,
    #[serde(default)]
    agents: BTreeMap<String, AgentSettings>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Config {
    pub provers: Vec<ProverSpec>,
    pub agents: BTreeMap<String, AgentSettings>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let raw: RawConfig = toml::from_str(text)?;
        let mut provers = Vec::new();
        for p in raw.prover {
            let dialect = match p.dialect.as_deref() {
                None => Dialect::Thf,
                Some(d) => Dialect::from_keyword(d).ok_or_else(|| ConfigError::Dialect(p.name.clone(), d.to_owned()))?,
            };
            let mode = match p.mode.as_str() {
                "local" => ProverMode::Local {
                    command: p.command.ok_or_else(|| ConfigError::Missing(p.name.clone(), "local", "command"))?,
                },
                "remote" => ProverMode::Remote {
                    url: p.url.ok_or_else(|| ConfigError::Missing(p.name.clone(), "remote", "url"))?,
                },
                other => return Err(ConfigError::Mode(p.name, other.to_owned())),
            };
            let spec = ProverSpec {
                name: p.name,
                mode,
                time_limit: p.time_limit,
                dialect,
            };
            spec.validate()?;
            provers.push(spec);
        }
        Ok(Config {
            provers,
            agents: raw.agents,
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.display().to_string(), e))?;
        Config::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_modes() {
        let c = Config::parse(
            r#"
            [[prover]]
            name = "leo"
            mode = "local"
            command = ["leo3", "{problem}"]
            time_limit = 10

            [[prover]]
            name = "e"
            mode = "remote"
            url = "http://localhost:1/x"
            time_limit = 5
            dialect = "fof"

            [agents.nnf]
            bid = 2.5
            "#,
        )
        .unwrap();
        assert_eq!(c.provers.len(), 2);
        assert_eq!(c.provers[0].dialect, Dialect::Thf);
        assert_eq!(c.provers[1], ProverSpec::remote("e", "http://localhost:1/x", 5, Dialect::Fof));
        assert_eq!(c.agents["nnf"].bid, Some(2.5));
    }

    #[test]
    fn rejects_bad_specs() {
        let zero = "[[prover]]\nname = \"a\"\nmode = \"local\"\ncommand = [\"x\"]\ntime_limit = 0\n";
        assert!(matches!(Config::parse(zero), Err(ConfigError::Spec(SpecError::ZeroTimeLimit(_)))));
        let no_url = "[[prover]]\nname = \"a\"\nmode = \"remote\"\ntime_limit = 3\n";
        assert!(matches!(Config::parse(no_url), Err(ConfigError::Missing(..))));
        let mode = "[[prover]]\nname = \"a\"\nmode = \"carrier-pigeon\"\ntime_limit = 3\n";
        assert!(matches!(Config::parse(mode), Err(ConfigError::Mode(..))));
        let url = "[[prover]]\nname = \"a\"\nmode = \"remote\"\nurl = \"ftp://x\"\ntime_limit = 3\n";
        assert!(matches!(Config::parse(url), Err(ConfigError::Spec(SpecError::BadUrl(..)))));
    }
}
