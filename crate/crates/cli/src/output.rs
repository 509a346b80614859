use std::io::Write;

use crate::{write, CliError, CliResult, OutputArgs};

/// Sends the main artifact to `--output` or stdout. Returns true when it
/// went to stdout, so callers know to keep side summaries on stderr.
pub fn emit(out: &OutputArgs, text: &str) -> CliResult<bool> {
    match &out.output {
        Some(path) => {
            write(path, text)?;
            Ok(false)
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Usage(format!("stdout: {e}")))?;
            Ok(true)
        }
    }
}

pub fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}
