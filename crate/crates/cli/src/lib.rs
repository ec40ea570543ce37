//! Experiment runner for the qudit Rodeo simulator.
//!
//! Every experiment turns a [`config::Config`] into CSV text. Output depends
//! only on the configuration and seed, never on the worker count.

pub mod config;
pub mod experiments;
pub mod plot;

use std::fmt::Write;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] rodeo_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for configuration problems, 3 when a numeric guard trips.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(rodeo_core::Error::NumericGuard(_)) => 3,
            CliError::Config(_) | CliError::Core(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Minimal CSV builder; fields are numbers or fixed identifiers, never quoted.
#[derive(Debug, Default)]
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut c = Csv::default();
        c.row(header.iter().map(|s| s.to_string()));
        c
    }

    pub fn row(&mut self, fields: impl IntoIterator<Item = String>) {
        for (i, f) in fields.into_iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            let _ = write!(self.buf, "{f}");
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}
