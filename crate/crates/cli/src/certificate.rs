use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Persisted record of one command run. Everything except `timestamp` is a pure
/// function of the command line, the configuration and the input file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub command: String,
    pub input_digest: String,
    pub parameters: Value,
    pub report: Value,
    pub timestamp: String,
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

/// RFC 3339 UTC time; `SOURCE_DATE_EPOCH` pins it for reproducible output.
pub fn timestamp() -> String {
    let pinned = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|s| chrono::DateTime::from_timestamp(s, 0));
    pinned
        .unwrap_or_else(chrono::Utc::now)
        .to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

impl Certificate {
    pub fn new(command: &str, input: &[u8], parameters: Value, report: Value) -> Self {
        Certificate {
            command: command.to_string(),
            input_digest: digest(input),
            parameters,
            report,
            timestamp: timestamp(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate values are always serializable")
            + "\n"
    }

    /// The certificate without its timestamp, for reproducibility comparisons.
    pub fn body(&self) -> Value {
        serde_json::json!({
            "command": self.command,
            "input_digest": self.input_digest,
            "parameters": self.parameters,
            "report": self.report,
        })
    }
}
