use std::fs;
use std::io::{self, Read, Write};

use serde::de::DeserializeOwned;

use crate::error::CliError;

pub fn read_input(path: &str) -> Result<String, CliError> {
    let mut text = String::new();
    if path == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?;
    }
    Ok(text)
}

pub fn write_output(path: &str, body: &str) -> Result<(), CliError> {
    if path == "-" {
        let mut out = io::stdout().lock();
        out.write_all(body.as_bytes())?;
        out.flush()?;
    } else {
        fs::write(path, body)?;
    }
    Ok(())
}

/// Parses `text`, reporting the path of the offending field and the
/// line and column of the error.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." || path.is_empty() {
            CliError::Input(inner.to_string())
        } else {
            CliError::Input(format!("at {path}: {inner}"))
        }
    })?;
    Ok(value)
}
