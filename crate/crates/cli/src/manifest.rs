use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Record of one run: enough to reproduce it and compare outputs byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub input_digest: String,
    pub library_version: String,
    pub seed: Option<u64>,
    pub outputs: Value,
}

impl RunManifest {
    pub fn new(command: &str, input: &[u8], seed: Option<u64>, outputs: Value) -> Self {
        Self {
            command: command.into(),
            input_digest: format!("sha256:{}", hex::encode(Sha256::digest(input))),
            library_version: symspace_core::VERSION.into(),
            seed,
            outputs,
        }
    }
}
