use std::fs;
use std::io::Write;
use std::path::Path;

use crate::CliError;

/// Fixed-width scientific notation used in every CSV column.
pub fn num(v: f64) -> String {
    format!("{v:.11e}")
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}
