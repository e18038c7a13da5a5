use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::corpus::ComponentLabel;
use crate::error::{Error, Result};
use crate::scorer::Bucket;

pub const DEFAULT_TIMEOUT_MS: u64 = 2000;

/// One prediction per submitted paragraph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemotePrediction {
    pub component: ComponentLabel,
    pub cognitive: Bucket,
    pub emotional: Bucket,
}

#[derive(Serialize)]
struct RemoteRequest<'a> {
    paragraphs: &'a [String],
}

#[derive(Deserialize)]
struct RemoteResponse {
    results: Vec<RemotePrediction>,
}

/// Client for an external scoring model. The endpoint receives
/// `{"paragraphs": [...]}` and answers `{"results": [...]}` with one entry
/// per paragraph, each carrying a component label and two buckets.
#[derive(Debug, Clone)]
pub struct RemoteScorer {
    endpoint: String,
    client: reqwest::Client,
}

impl RemoteScorer {
    pub fn new(endpoint: impl Into<String>, timeout: Duration) -> Result<RemoteScorer> {
        if timeout.is_zero() {
            return Err(Error::InvalidInput("remote scorer timeout must be positive".into()));
        }
        let client = reqwest::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| Error::Remote(e.to_string()))?;
        Ok(RemoteScorer { endpoint: endpoint.into(), client })
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    pub async fn score(&self, paragraphs: &[String]) -> Result<Vec<RemotePrediction>> {
        let body = serde_json::to_vec(&RemoteRequest { paragraphs }).expect("request serializes");
        let response = self
            .client
            .post(&self.endpoint)
            .header(reqwest::header::CONTENT_TYPE, "application/json")
            .body(body)
            .send()
            .await
            .map_err(|e| Error::Remote(e.to_string()))?;
        if !response.status().is_success() {
            return Err(Error::Remote(format!("status {}", response.status())));
        }
        let bytes = response.bytes().await.map_err(|e| Error::Remote(e.to_string()))?;
        let parsed: RemoteResponse =
            serde_json::from_slice(&bytes).map_err(|e| Error::Remote(format!("malformed response: {e}")))?;
        if parsed.results.len() != paragraphs.len() {
            return Err(Error::Remote(format!(
                "expected {} results, got {}",
                paragraphs.len(),
                parsed.results.len()
            )));
        }
        Ok(parsed.results)
    }
}
