use serde::Serialize;
use sha2::{Digest, Sha256};

/// Record of one invocation. Two manifests that agree on everything but
/// `wall_time_ms` have equal `result_digest`.
#[derive(Serialize, Debug)]
pub struct RunManifest {
    pub command: String,
    pub flags: Vec<String>,
    pub model_hash: String,
    pub cutoffs: Vec<u32>,
    pub engine_version: String,
    pub wall_time_ms: u128,
    pub result_digest: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
