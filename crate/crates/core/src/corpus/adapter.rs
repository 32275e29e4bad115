use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::PromptRequest;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdapterError {
    #[error("request failed: {0}")]
    Failed(String),
}

/// Submit a prompt, receive text.
pub trait LlmAdapter: Sync {
    fn complete(&self, prompt: &str) -> Result<String, AdapterError>;
}

/// Answers every prompt with a JSON stub derived from its SHA-256.
#[derive(Debug, Clone, Copy, Default)]
pub struct MockAdapter;

impl LlmAdapter for MockAdapter {
    fn complete(&self, prompt: &str) -> Result<String, AdapterError> {
        let digest = Sha256::digest(prompt.as_bytes());
        let tag: String = digest[..4].iter().map(|b| format!("{b:02x}")).collect();
        Ok(serde_json::json!({
            "question": format!("mock question {tag}"),
            "answer": format!("mock answer to a {}-character prompt", prompt.chars().count()),
        })
        .to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptResponse {
    pub request_id: u64,
    pub response: Option<String>,
    pub error: Option<String>,
}

/// Sends every request with at most `max_in_flight` outstanding and
/// returns the responses in request order.
pub fn submit_batch<A: LlmAdapter + ?Sized>(
    adapter: &A,
    requests: &[PromptRequest],
    max_in_flight: usize,
) -> Vec<PromptResponse> {
    let workers = max_in_flight.clamp(1, requests.len().max(1));
    let next = AtomicUsize::new(0);
    let mut answered: Vec<(usize, PromptResponse)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                s.spawn(|| {
                    let mut local = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(req) = requests.get(i) else { break };
                        let (response, error) = match adapter.complete(&req.prompt) {
                            Ok(text) => (Some(text), None),
                            Err(e) => (None, Some(e.to_string())),
                        };
                        local.push((
                            i,
                            PromptResponse {
                                request_id: req.request_id,
                                response,
                                error,
                            },
                        ));
                    }
                    local
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("adapter worker panicked"))
            .collect()
    });
    answered.sort_by_key(|(i, _)| *i);
    answered.into_iter().map(|(_, r)| r).collect()
}
