//! External sentiment scorer boundary.
//!
//! Scorers run out of process and speak newline-delimited JSON: one
//! request `{"id": ..., "text": ...}` per line, one response
//! `{"id": ..., "polarity": ..., "label": ...}` per line. Two transports
//! are supported: a child process on its stdin/stdout pipe, and a local
//! TCP socket (which also enforces read timeouts).

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::net::TcpStream;
use std::process::{Child, Command, Stdio};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexsent::{Label, SentimentScore};
use crate::textprep::TextDocument;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScorerRequest {
    pub id: String,
    pub text: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScorerResponse {
    pub id: String,
    pub polarity: f64,
    pub label: String,
}

/// How to reach a registered backend.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BackendConfig {
    /// Spawn `argv` and speak over its stdin/stdout.
    Command { argv: Vec<String> },
    /// Connect to a local socket address, e.g. `127.0.0.1:9100`.
    Socket {
        addr: String,
        #[serde(default = "default_timeout_ms")]
        timeout_ms: u64,
    },
}

fn default_timeout_ms() -> u64 {
    5_000
}

/// Named backend registry; `external_scorer` requires the backend id to be
/// present here.
#[derive(Debug, Clone, Default)]
pub struct ScorerRegistry {
    backends: BTreeMap<String, BackendConfig>,
}

impl ScorerRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, id: impl Into<String>, config: BackendConfig) {
        self.backends.insert(id.into(), config);
    }

    pub fn connect(&self, id: &str, max_attempts: u32) -> Result<ExternalScorer> {
        let config = self.backends.get(id).ok_or_else(|| Error::InvalidInput(format!(
            "scorer backend '{id}' is not registered"
        )))?;
        ExternalScorer::connect(id, config, max_attempts)
    }
}

enum Transport {
    Child {
        child: Child,
        reader: BufReader<std::process::ChildStdout>,
    },
    Socket {
        stream: TcpStream,
        reader: BufReader<TcpStream>,
    },
}

/// A connected external scorer with retry handling.
pub struct ExternalScorer {
    backend_id: String,
    transport: Transport,
    max_attempts: u32,
}

impl ExternalScorer {
    pub fn connect(id: &str, config: &BackendConfig, max_attempts: u32) -> Result<ExternalScorer> {
        let transport = match config {
            BackendConfig::Command { argv } => {
                let (program, args) = argv.split_first().ok_or_else(|| {
                    Error::InvalidInput("scorer command is empty".into())
                })?;
                let mut child = Command::new(program)
                    .args(args)
                    .stdin(Stdio::piped())
                    .stdout(Stdio::piped())
                    .spawn()
                    .map_err(|e| Error::Backend {
                        message: format!("failed to spawn scorer '{id}': {e}"),
                        retryable: false,
                    })?;
                let stdout = child.stdout.take().expect("piped stdout");
                Transport::Child {
                    child,
                    reader: BufReader::new(stdout),
                }
            }
            BackendConfig::Socket { addr, timeout_ms } => {
                let stream = TcpStream::connect(addr).map_err(|e| Error::Backend {
                    message: format!("failed to connect scorer '{id}' at {addr}: {e}"),
                    retryable: true,
                })?;
                let timeout = Duration::from_millis(*timeout_ms);
                stream.set_read_timeout(Some(timeout)).ok();
                stream.set_write_timeout(Some(timeout)).ok();
                let reader = BufReader::new(stream.try_clone().map_err(|e| Error::Backend {
                    message: e.to_string(),
                    retryable: true,
                })?);
                Transport::Socket { stream, reader }
            }
        };
        Ok(ExternalScorer {
            backend_id: id.to_string(),
            transport,
            max_attempts: max_attempts.max(1),
        })
    }

    /// Scores one document, retrying transport failures up to the
    /// configured attempt limit. Malformed replies are data errors and are
    /// not retried.
    pub fn score(&mut self, doc: &TextDocument) -> Result<SentimentScore> {
        let request = ScorerRequest {
            id: doc.id.clone(),
            text: doc.text.clone(),
        };
        let mut last_err = None;
        for _ in 0..self.max_attempts {
            match self.roundtrip(&request) {
                Ok(resp) => return self.into_score(doc, resp),
                Err(e @ Error::Backend { retryable: true, .. }) => last_err = Some(e),
                Err(other) => return Err(other),
            }
        }
        Err(last_err.unwrap_or(Error::Backend {
            message: "scorer failed".into(),
            retryable: true,
        }))
    }

    fn roundtrip(&mut self, request: &ScorerRequest) -> Result<ScorerResponse> {
        let line = serde_json::to_string(request).expect("serializable request");
        let reply = match &mut self.transport {
            Transport::Child { child, reader } => {
                let stdin = child.stdin.as_mut().ok_or(Error::Backend {
                    message: "scorer stdin closed".into(),
                    retryable: false,
                })?;
                writeln!(stdin, "{line}").map_err(|e| Error::Backend {
                    message: format!("write to scorer failed: {e}"),
                    retryable: true,
                })?;
                stdin.flush().ok();
                read_line(reader)?
            }
            Transport::Socket { stream, reader } => {
                writeln!(stream, "{line}").map_err(|e| Error::Backend {
                    message: format!("write to scorer failed: {e}"),
                    retryable: true,
                })?;
                stream.flush().ok();
                read_line(reader)?
            }
        };
        serde_json::from_str::<ScorerResponse>(&reply).map_err(|e| {
            Error::Data(format!(
                "malformed scorer reply: {e}; raw payload: {reply}"
            ))
        })
    }

    fn into_score(&self, doc: &TextDocument, resp: ScorerResponse) -> Result<SentimentScore> {
        if resp.id != doc.id {
            return Err(Error::Data(format!(
                "scorer reply id '{}' does not match request id '{}'",
                resp.id, doc.id
            )));
        }
        if !resp.polarity.is_finite() || !(-1.0..=1.0).contains(&resp.polarity) {
            return Err(Error::Data(format!(
                "scorer polarity {} outside [-1, 1]",
                resp.polarity
            )));
        }
        let label = Label::parse(&resp.label)?;
        let word_count = doc.text.split_whitespace().count();
        Ok(SentimentScore {
            polarity: resp.polarity,
            subjectivity: 0.0,
            conventional_subjectivity: 0.0,
            pos_count: 0,
            neg_count: 0,
            word_count,
            label,
            no_signal: false,
            provenance: Some(self.backend_id.clone()),
        })
    }
}

impl Drop for ExternalScorer {
    fn drop(&mut self) {
        if let Transport::Child { child, .. } = &mut self.transport {
            let _ = child.kill();
            let _ = child.wait();
        }
    }
}

fn read_line<R: BufRead>(reader: &mut R) -> Result<String> {
    let mut line = String::new();
    let n = reader.read_line(&mut line).map_err(|e| Error::Backend {
        message: format!("read from scorer failed: {e}"),
        retryable: true,
    })?;
    if n == 0 {
        return Err(Error::Backend {
            message: "scorer closed the stream".into(),
            retryable: true,
        });
    }
    Ok(line.trim_end().to_string())
}
