use std::fmt;
use std::str::FromStr;

/// SZS result statuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SzsStatus {
    Theorem,
    CounterTheorem,
    ContradictoryAxioms,
    Unsatisfiable,
    Satisfiable,
    CounterSatisfiable,
    Tautology,
    Equivalent,
    Open,
    Unknown,
    Timeout,
    ResourceOut,
    MemoryOut,
    GaveUp,
    Incomplete,
    Inappropriate,
    Error,
    InputError,
}

impl SzsStatus {
    pub const ALL: [SzsStatus; 18] = [
        SzsStatus::Theorem,
        SzsStatus::CounterTheorem,
        SzsStatus::ContradictoryAxioms,
        SzsStatus::Unsatisfiable,
        SzsStatus::Satisfiable,
        SzsStatus::CounterSatisfiable,
        SzsStatus::Tautology,
        SzsStatus::Equivalent,
        SzsStatus::Open,
        SzsStatus::Unknown,
        SzsStatus::Timeout,
        SzsStatus::ResourceOut,
        SzsStatus::MemoryOut,
        SzsStatus::GaveUp,
        SzsStatus::Incomplete,
        SzsStatus::Inappropriate,
        SzsStatus::Error,
        SzsStatus::InputError,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SzsStatus::Theorem => "Theorem",
            SzsStatus::CounterTheorem => "CounterTheorem",
            SzsStatus::ContradictoryAxioms => "ContradictoryAxioms",
            SzsStatus::Unsatisfiable => "Unsatisfiable",
            SzsStatus::Satisfiable => "Satisfiable",
            SzsStatus::CounterSatisfiable => "CounterSatisfiable",
            SzsStatus::Tautology => "Tautology",
            SzsStatus::Equivalent => "Equivalent",
            SzsStatus::Open => "Open",
            SzsStatus::Unknown => "Unknown",
            SzsStatus::Timeout => "Timeout",
            SzsStatus::ResourceOut => "ResourceOut",
            SzsStatus::MemoryOut => "MemoryOut",
            SzsStatus::GaveUp => "GaveUp",
            SzsStatus::Incomplete => "Incomplete",
            SzsStatus::Inappropriate => "Inappropriate",
            SzsStatus::Error => "Error",
            SzsStatus::InputError => "InputError",
        }
    }

    /// Statuses that settle a proof attempt.
    pub fn is_success(self) -> bool {
        matches!(
            self,
            SzsStatus::Theorem
                | SzsStatus::CounterTheorem
                | SzsStatus::ContradictoryAxioms
                | SzsStatus::Unsatisfiable
                | SzsStatus::Satisfiable
                | SzsStatus::CounterSatisfiable
                | SzsStatus::Tautology
                | SzsStatus::Equivalent
        )
    }

    /// The `% SZS status <Value>` line for this status.
    pub fn line(self) -> String {
        format!("% SZS status {self}")
    }
}

impl fmt::Display for SzsStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SzsStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "TimeOut" {
            return Ok(SzsStatus::Timeout);
        }
        SzsStatus::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| format!("unknown SZS status `{s}`"))
    }
}

/// Recognizes `% SZS status <Value> ...` (a leading `#` is accepted as
/// the comment marker as well). `None` when the line carries no status.
pub fn parse_szs(line: &str) -> Option<SzsStatus> {
    let rest = line.trim_start();
    let rest = rest
        .strip_prefix('%')
        .or_else(|| rest.strip_prefix('#'))
        .unwrap_or(rest);
    let rest = rest.trim_start().strip_prefix("SZS status")?;
    if !rest.starts_with(char::is_whitespace) {
        return None;
    }
    rest.split_whitespace().next()?.parse().ok()
}

/// First status line in a prover transcript.
pub fn find_szs(output: &str) -> Option<SzsStatus> {
    output.lines().find_map(parse_szs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recognizes_status_lines() {
        assert_eq!(parse_szs("% SZS status Theorem for problem.p"), Some(SzsStatus::Theorem));
        assert_eq!(parse_szs("% SZS status Timeout"), Some(SzsStatus::Timeout));
        assert_eq!(parse_szs("hello world"), None);
        assert_eq!(parse_szs("% SZS status Bogus"), None);
        assert_eq!(parse_szs("# SZS status TimeOut"), Some(SzsStatus::Timeout));
        assert_eq!(parse_szs("% SZS output start"), None);
    }

    #[test]
    fn every_status_round_trips() {
        for s in SzsStatus::ALL {
            assert_eq!(parse_szs(&s.line()), Some(s));
        }
    }
}
