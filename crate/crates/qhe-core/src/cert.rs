//! Machine-checkable certificates: a claim, the input digest, the convention
//! header, witness data, and a verdict. Identical inputs produce byte-equal
//! certificates; all sampling downstream is seeded from the input digest.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// All orientation-sensitive output is stated relative to this header, which
/// is embedded in every certificate.
#[derive(Debug, Clone, Serialize)]
pub struct Convention {
    pub composition: &'static str,
    pub modules: &'static str,
    pub window_semantics: &'static str,
}

impl Default for Convention {
    fn default() -> Self {
        Convention {
            composition: "products are written in traversal order: u*v is 'u then v'; hom-sets are A(x,y) = e_y*A*e_x",
            modules: "left modules act covariantly on morphisms-from; right modules are modules over the opposite category",
            window_semantics: "the window is a locally unital finite-dimensional algebra; claims hold at every interior index and are shift-invariant",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub schema: &'static str,
    pub claim: String,
    pub input_digest: String,
    pub params: Value,
    pub convention: Convention,
    pub witnesses: Value,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl Certificate {
    pub fn new(claim: &str, input_digest: &str, params: Value) -> Self {
        Certificate {
            schema: "qhe.certificate.v1",
            claim: claim.to_string(),
            input_digest: input_digest.to_string(),
            params,
            convention: Convention::default(),
            witnesses: Value::Null,
            verdict: Verdict::Fail,
            failure: None,
        }
    }

    pub fn pass(mut self, witnesses: Value) -> Self {
        self.witnesses = witnesses;
        self.verdict = Verdict::Pass;
        self.failure = None;
        self
    }

    pub fn fail(mut self, witnesses: Value, reason: String) -> Self {
        self.witnesses = witnesses;
        self.verdict = Verdict::Fail;
        self.failure = Some(reason);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Deterministic pretty JSON (serde_json object keys are ordered).
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }
}

/// Hex SHA-256 of canonical input bytes.
pub fn input_digest(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

/// Deterministic RNG seed derived from a digest string.
pub fn seed_from_digest(digest: &str) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(digest.as_bytes());
    let out = h.finalize();
    let mut seed = [0u8; 32];
    seed.copy_from_slice(&out);
    seed
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable() {
        let d = input_digest(b"abc");
        assert_eq!(d, input_digest(b"abc"));
        assert_ne!(d, input_digest(b"abd"));
        assert_eq!(d.len(), 64);
    }

    #[test]
    fn certificates_serialize_deterministically() {
        let c = Certificate::new("demo", "00", serde_json::json!({"w": 4}))
            .pass(serde_json::json!({"ok": true}));
        assert_eq!(c.to_json(), c.to_json());
        assert!(c.to_json().contains("\"PASS\""));
    }
}
