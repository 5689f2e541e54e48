//! Line-oriented text formats. Every parse error names its 1-based line.

mod log;
mod machine;
mod sequence;
mod table;

use std::fmt;

pub use log::{parse_log, render_log};
pub use machine::{parse_machine, render_machine};
pub use sequence::parse_sequence;
pub use table::{parse_table, TableSource};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct FormatError {
    /// `None` for problems with the file as a whole.
    pub line: Option<usize>,
    pub message: String,
}

impl FormatError {
    pub(crate) fn at(line: usize, message: impl fmt::Display) -> Self {
        FormatError { line: Some(line), message: message.to_string() }
    }

    pub(crate) fn file(message: impl fmt::Display) -> Self {
        FormatError { line: None, message: message.to_string() }
    }
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// Non-empty lines with `#` comments removed, paired with line numbers.
pub(crate) fn content_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}
