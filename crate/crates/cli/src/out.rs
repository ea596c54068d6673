use std::fmt::Display;
use std::process::ExitCode;

/// Exit statuses shared by every subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Negative = 1,
    Budget = 2,
    Input = 3,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> ExitCode {
        ExitCode::from(s as u8)
    }
}

/// A command that could not produce a result.
#[derive(Debug)]
pub struct Fail {
    pub status: Status,
    pub msg: String,
}

pub fn input(msg: impl Display) -> Fail {
    Fail { status: Status::Input, msg: msg.to_string() }
}

pub fn budget(msg: impl Display) -> Fail {
    Fail { status: Status::Budget, msg: msg.to_string() }
}

/// Collects `key=value` lines. With `pretty`, keys are aligned and
/// multi-line blocks are printed verbatim after them.
pub struct Out {
    pretty: bool,
    lines: Vec<(String, String)>,
    blocks: Vec<(String, String)>,
}

impl Out {
    pub fn new(pretty: bool) -> Out {
        Out { pretty, lines: Vec::new(), blocks: Vec::new() }
    }

    pub fn kv(&mut self, key: &str, value: impl Display) {
        // one record per line in either mode
        let v = value.to_string().replace('\n', " | ");
        self.lines.push((key.to_string(), v));
    }

    /// Shown only with `--pretty`.
    pub fn block(&mut self, title: &str, text: impl Display) {
        if self.pretty {
            self.blocks.push((title.to_string(), text.to_string()));
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        if self.pretty {
            let w = self.lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in &self.lines {
                s.push_str(&format!("{k:<w$}  {v}\n"));
            }
            for (t, b) in &self.blocks {
                s.push_str(&format!("\n{t}:\n{}", b.trim_end()));
                s.push('\n');
            }
        } else {
            for (k, v) in &self.lines {
                s.push_str(&format!("{k}={v}\n"));
            }
        }
        s
    }
}
