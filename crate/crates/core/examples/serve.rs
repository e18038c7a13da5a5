//! Starts the HTTP API on port 8080 with the rubric scorer and a survey
//! store in the system temp directory.
//!
//! ```text
//! curl -s localhost:8080/api/analyze -d '{"text": "Stärken: Die Idee ist toll!"}'
//! ```

use empathy_workbench::service::{serve, ServiceConfig};

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = ServiceConfig {
        survey_store: std::env::temp_dir().join("empathy-survey.jsonl"),
        ..ServiceConfig::default()
    };
    println!("listening on http://0.0.0.0:{}", config.port);
    serve(&config).await?;
    Ok(())
}
