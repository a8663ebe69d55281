//! Library side of the `fairdiv` command-line tool.
//!
//! Each subcommand is a function from parsed arguments to a JSON document and
//! an exit code, so the commands can be driven from tests without spawning
//! processes.

pub mod commands;
pub mod doc;
pub mod gen;

use std::fmt;

use fairdiv::fairness::MmsGuard;
use fairdiv::oracle::SearchBudget;
use fairdiv::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

/// Environment variable holding `key=value` overrides for search limits.
pub const BUDGET_VAR: &str = "FAIRDIV_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        CliError::new(EXIT_INPUT, message)
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        CliError::new(EXIT_PRECONDITION, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Budget(_) => EXIT_BUDGET,
            Error::NotStronglyMonotone { .. } | Error::BelowMaximinShare { .. } => EXIT_PRECONDITION,
            Error::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        CliError::new(code, e.to_string())
    }
}

/// Search limits for one invocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Limits {
    pub search: SearchBudget,
    pub mms: MmsGuard,
}

impl Limits {
    /// Parses the [`BUDGET_VAR`] syntax. Besides the keys understood by
    /// [`SearchBudget`], `mms_max_items` and `mms_max_agents` bound the
    /// exhaustive maximin-share search.
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let mut limits = Limits::default();
        let mut rest = Vec::new();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').unwrap_or((part, ""));
            let slot = match key.trim() {
                "mms_max_items" => &mut limits.mms.max_items,
                "mms_max_agents" => &mut limits.mms.max_agents,
                _ => {
                    rest.push(part);
                    continue;
                }
            };
            *slot = value
                .trim()
                .parse()
                .map_err(|_| CliError::input(format!("{BUDGET_VAR}: {key}: {value:?} is not a count")))?;
        }
        limits.search = rest
            .join(",")
            .parse()
            .map_err(|e: Error| CliError::input(format!("{BUDGET_VAR}: {e}")))?;
        Ok(limits)
    }

    pub fn from_env() -> Result<Self, CliError> {
        match std::env::var(BUDGET_VAR) {
            Ok(spec) => Limits::parse(&spec),
            Err(_) => Ok(Limits::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits_syntax() {
        let l = Limits::parse("max_items=9, mms_max_items=10,time_limit_ms=5").unwrap();
        assert_eq!(l.search.max_items, 9);
        assert_eq!(l.mms.max_items, 10);
        assert_eq!(l.mms.max_agents, MmsGuard::default().max_agents);
        assert_eq!(Limits::parse("").unwrap(), Limits::default());
        assert_eq!(Limits::parse("nope=1").unwrap_err().code, EXIT_INPUT);
        assert_eq!(Limits::parse("mms_max_items=x").unwrap_err().code, EXIT_INPUT);
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(Error::Budget("x".into())).code, EXIT_BUDGET);
        assert_eq!(CliError::from(Error::NotStronglyMonotone { agent: 0 }).code, EXIT_PRECONDITION);
        assert_eq!(CliError::from(Error::Internal("x".into())).code, EXIT_INTERNAL);
        assert_eq!(CliError::from(Error::InvalidInstance("x".into())).code, EXIT_INPUT);
    }
}
