//! Chat-completion client for external language models: prompt
//! construction from templates, transports (HTTP, scripted, recording,
//! replay), retry with exponential backoff, and rate limiting.

use std::collections::{HashMap, VecDeque};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::{Condvar, Mutex};
use std::time::{Duration, Instant};

use comet_eval::truncate_to_tokens;
use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::request::{CompletionEngine, CompletionRequest, CompletionResult, EngineKind};

/// Sampling temperature sent with every chat request.
pub const TEMPERATURE: f64 = 0.8;
/// Nucleus sampling parameter sent with every chat request.
pub const TOP_P: f64 = 0.95;
/// Word-token budget for the diff embedded in a prompt.
pub const DIFF_WORD_BUDGET: usize = 512;
/// Default model name for chat requests.
pub const DEFAULT_MODEL: &str = "gpt-4o-mini";

/// Whether the model writes a message from scratch or completes a prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PromptMode {
    Generate,
    Complete,
}

/// The four prompt templates, shipped as plain-text files.
///
/// User templates carry `{diff}`, `{history}`, and `{prefix}`
/// placeholders. The diff value ends with a newline; the history value
/// is either empty or a full `Previous commit message: …` line, so the
/// template body needs no conditionals. One trailing newline of each
/// template file is stripped at load.
#[derive(Debug, Clone, PartialEq)]
pub struct PromptTemplates {
    pub generate_system: String,
    pub complete_system: String,
    pub generate_user: String,
    pub complete_user: String,
}

fn strip_final_newline(s: &str) -> String {
    s.strip_suffix('\n').unwrap_or(s).to_string()
}

impl PromptTemplates {
    /// The templates bundled with the toolkit.
    pub fn builtin() -> PromptTemplates {
        PromptTemplates {
            generate_system: strip_final_newline(include_str!("../assets/llm/generate_system.txt")),
            complete_system: strip_final_newline(include_str!("../assets/llm/complete_system.txt")),
            generate_user: strip_final_newline(include_str!("../assets/llm/generate_user.txt")),
            complete_user: strip_final_newline(include_str!("../assets/llm/complete_user.txt")),
        }
    }

    /// Load templates from a directory holding `generate_system.txt`,
    /// `complete_system.txt`, `generate_user.txt`, `complete_user.txt`.
    pub fn from_dir(dir: &Path) -> Result<PromptTemplates, EngineError> {
        let read = |name: &str| -> Result<String, EngineError> {
            Ok(strip_final_newline(&fs::read_to_string(dir.join(name))?))
        };
        Ok(PromptTemplates {
            generate_system: read("generate_system.txt")?,
            complete_system: read("complete_system.txt")?,
            generate_user: read("generate_user.txt")?,
            complete_user: read("complete_user.txt")?,
        })
    }
}

/// A rendered prompt pair.
#[derive(Debug, Clone, PartialEq)]
pub struct LlmPrompt {
    pub system: String,
    pub user: String,
}

/// Render the prompt for a request with the builtin templates.
pub fn build_llm_prompt(
    request: &CompletionRequest,
    mode: PromptMode,
) -> Result<LlmPrompt, EngineError> {
    build_llm_prompt_with(request, mode, &PromptTemplates::builtin())
}

/// Render the prompt for a request with explicit templates.
///
/// The user prompt embeds the diff truncated to [`DIFF_WORD_BUDGET`]
/// word tokens, then — when history is in use and present — a line
/// with the author's latest prior message, then for [`PromptMode::Complete`]
/// the typed prefix. Complete mode with an empty prefix is an error.
pub fn build_llm_prompt_with(
    request: &CompletionRequest,
    mode: PromptMode,
    templates: &PromptTemplates,
) -> Result<LlmPrompt, EngineError> {
    if mode == PromptMode::Complete && request.prefix.is_empty() {
        return Err(EngineError::EmptyPrefix);
    }
    let diff = format!(
        "{}\n",
        truncate_to_tokens(&request.diff_text, DIFF_WORD_BUDGET)
    );
    let history = match request.history.last() {
        Some(latest) if request.use_history => {
            format!("Previous commit message: {latest}\n")
        }
        _ => String::new(),
    };
    let (system, user_template) = match mode {
        PromptMode::Generate => (&templates.generate_system, &templates.generate_user),
        PromptMode::Complete => (&templates.complete_system, &templates.complete_user),
    };
    let user = user_template
        .replace("{diff}", &diff)
        .replace("{history}", &history)
        .replace("{prefix}", &request.prefix);
    Ok(LlmPrompt {
        system: system.clone(),
        user,
    })
}

/// One chat message in a request body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

/// The JSON body POSTed to the chat-completions endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub model: String,
    pub temperature: f64,
    pub top_p: f64,
    pub max_tokens: usize,
    pub messages: Vec<ChatMessage>,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatChoiceMessage,
}

#[derive(Deserialize)]
struct ChatChoiceMessage {
    content: String,
}

/// Build a well-formed chat-completions response body carrying `content`
/// (handy for scripted transports and tests).
pub fn chat_response_body(content: &str) -> String {
    serde_json::json!({
        "choices": [{"message": {"role": "assistant", "content": content}}]
    })
    .to_string()
}

/// Extract the first choice's message content from a raw response body.
pub fn parse_chat_response(body: &str) -> Result<String, EngineError> {
    let response: ChatResponse = serde_json::from_str(body)
        .map_err(|e| EngineError::MalformedResponse(e.to_string()))?;
    response
        .choices
        .into_iter()
        .next()
        .map(|c| c.message.content)
        .ok_or_else(|| EngineError::MalformedResponse("response has no choices".into()))
}

/// A transport failure, classified for retry handling.
#[derive(Debug, Clone)]
pub enum TransportError {
    /// Worth retrying: HTTP 429, 5xx, or connection trouble.
    Transient(String),
    /// Credential rejected (HTTP 401/403); never retried.
    Auth(String),
    /// Any other terminal failure; never retried.
    Fatal(String),
}

/// Sends chat requests and returns raw response bodies.
pub trait ChatTransport: Send + Sync {
    fn send(&self, request: &ChatRequest) -> Result<String, TransportError>;
}

/// Retry schedule for transient transport failures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetryPolicy {
    /// Total attempts (first try plus retries).
    pub attempts: usize,
    /// Delay before the first retry; doubles on each further retry.
    pub initial_backoff: Duration,
}

impl Default for RetryPolicy {
    /// Three retries with exponential backoff from half a second.
    fn default() -> RetryPolicy {
        RetryPolicy {
            attempts: 4,
            initial_backoff: Duration::from_millis(500),
        }
    }
}

/// Complete a request against a transport with default options.
pub fn llm_complete(
    transport: &dyn ChatTransport,
    request: &CompletionRequest,
) -> Result<CompletionResult, EngineError> {
    llm_complete_with(
        transport,
        request,
        &PromptTemplates::builtin(),
        DEFAULT_MODEL,
        &RetryPolicy::default(),
    )
}

/// Complete a request against a transport with explicit options.
///
/// An empty prefix selects generate mode, a non-empty one complete
/// mode. The response text becomes the completion; the prefix counts
/// as honored when the response starts with it (the echoed prefix is
/// then stripped from the returned continuation).
pub fn llm_complete_with(
    transport: &dyn ChatTransport,
    request: &CompletionRequest,
    templates: &PromptTemplates,
    model: &str,
    retry: &RetryPolicy,
) -> Result<CompletionResult, EngineError> {
    request.check()?;
    let mode = if request.prefix.is_empty() {
        PromptMode::Generate
    } else {
        PromptMode::Complete
    };
    let prompt = build_llm_prompt_with(request, mode, templates)?;
    let chat = ChatRequest {
        model: model.to_string(),
        temperature: TEMPERATURE,
        top_p: TOP_P,
        max_tokens: request.max_new_tokens,
        messages: vec![
            ChatMessage {
                role: "system".into(),
                content: prompt.system,
            },
            ChatMessage {
                role: "user".into(),
                content: prompt.user,
            },
        ],
    };

    let body = send_with_retry(transport, &chat, retry)?;
    let content = parse_chat_response(&body)?;

    let honored = content.starts_with(&request.prefix);
    let text = if honored && !request.prefix.is_empty() {
        content[request.prefix.len()..].to_string()
    } else {
        content
    };
    Ok(CompletionResult {
        full_message: format!("{}{}", request.prefix, text),
        text,
        score: 0.0,
        prefix_honored: honored,
        engine: EngineKind::Llm,
    })
}

fn send_with_retry(
    transport: &dyn ChatTransport,
    chat: &ChatRequest,
    retry: &RetryPolicy,
) -> Result<String, EngineError> {
    let attempts = retry.attempts.max(1);
    let mut backoff = retry.initial_backoff;
    let mut last_error = String::new();
    for attempt in 0..attempts {
        if attempt > 0 {
            std::thread::sleep(backoff);
            backoff *= 2;
        }
        match transport.send(chat) {
            Ok(body) => return Ok(body),
            Err(TransportError::Transient(e)) => last_error = e,
            Err(TransportError::Auth(e)) => return Err(EngineError::AuthFailure(e)),
            Err(TransportError::Fatal(e)) => return Err(EngineError::Transport(e)),
        }
    }
    Err(EngineError::RetriesExhausted {
        attempts,
        last_error,
    })
}

/// Connection settings for the HTTP transport.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HttpConfig {
    /// Scheme and host, e.g. `https://api.example.com`.
    pub base_url: String,
    /// Path of the chat-completions endpoint.
    pub chat_path: String,
    /// Name of the environment variable holding the bearer credential.
    pub credential_env: String,
    /// Maximum concurrent requests.
    pub max_in_flight: usize,
    /// Requests allowed per minute.
    pub requests_per_minute: u32,
    /// Per-request timeout in seconds.
    pub timeout_secs: u64,
}

impl Default for HttpConfig {
    fn default() -> HttpConfig {
        HttpConfig {
            base_url: "https://api.openai.com".into(),
            chat_path: "/v1/chat/completions".into(),
            credential_env: "COMET_API_KEY".into(),
            max_in_flight: 4,
            requests_per_minute: 60,
            timeout_secs: 60,
        }
    }
}

/// Caps concurrent requests and spaces them to a per-minute rate.
struct Gate {
    state: Mutex<GateState>,
    released: Condvar,
    max_in_flight: usize,
    interval: Duration,
}

struct GateState {
    in_flight: usize,
    next_allowed: Instant,
}

impl Gate {
    fn new(max_in_flight: usize, requests_per_minute: u32) -> Gate {
        let interval = if requests_per_minute == 0 {
            Duration::ZERO
        } else {
            Duration::from_secs_f64(60.0 / f64::from(requests_per_minute))
        };
        Gate {
            state: Mutex::new(GateState {
                in_flight: 0,
                next_allowed: Instant::now(),
            }),
            released: Condvar::new(),
            max_in_flight: max_in_flight.max(1),
            interval,
        }
    }

    fn acquire(&self) -> GateGuard<'_> {
        let wait_until;
        {
            let mut state = self.state.lock().expect("gate lock");
            while state.in_flight >= self.max_in_flight {
                state = self.released.wait(state).expect("gate wait");
            }
            state.in_flight += 1;
            let now = Instant::now();
            wait_until = state.next_allowed.max(now);
            state.next_allowed = wait_until + self.interval;
        }
        let now = Instant::now();
        if wait_until > now {
            std::thread::sleep(wait_until - now);
        }
        GateGuard { gate: self }
    }
}

struct GateGuard<'a> {
    gate: &'a Gate,
}

impl Drop for GateGuard<'_> {
    fn drop(&mut self) {
        let mut state = self.gate.state.lock().expect("gate lock");
        state.in_flight -= 1;
        self.gate.released.notify_one();
    }
}

/// Live HTTP transport speaking the chat-completions protocol.
pub struct HttpTransport {
    client: reqwest::blocking::Client,
    url: String,
    credential: String,
    gate: Gate,
}

impl HttpTransport {
    /// Build a transport, reading the bearer credential from the
    /// environment variable named in the config.
    pub fn new(config: &HttpConfig) -> Result<HttpTransport, EngineError> {
        let credential = std::env::var(&config.credential_env)
            .map_err(|_| EngineError::MissingCredential(config.credential_env.clone()))?;
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(config.timeout_secs))
            .build()
            .map_err(|e| EngineError::Transport(e.to_string()))?;
        Ok(HttpTransport {
            client,
            url: format!(
                "{}{}",
                config.base_url.trim_end_matches('/'),
                config.chat_path
            ),
            credential,
            gate: Gate::new(config.max_in_flight, config.requests_per_minute),
        })
    }
}

impl ChatTransport for HttpTransport {
    fn send(&self, request: &ChatRequest) -> Result<String, TransportError> {
        let _guard = self.gate.acquire();
        let response = self
            .client
            .post(&self.url)
            .bearer_auth(&self.credential)
            .json(request)
            .send()
            .map_err(|e| TransportError::Transient(e.to_string()))?;
        let status = response.status().as_u16();
        let body = response
            .text()
            .map_err(|e| TransportError::Transient(e.to_string()))?;
        match status {
            200..=299 => Ok(body),
            401 | 403 => Err(TransportError::Auth(format!("HTTP {status}: {body}"))),
            429 | 500..=599 => Err(TransportError::Transient(format!("HTTP {status}"))),
            _ => Err(TransportError::Fatal(format!("HTTP {status}: {body}"))),
        }
    }
}

/// A transport that replays a fixed script of outcomes and records
/// every outgoing request, for tests.
pub struct ScriptedTransport {
    script: Mutex<VecDeque<Result<String, TransportError>>>,
    seen: Mutex<Vec<ChatRequest>>,
}

impl ScriptedTransport {
    pub fn new(steps: Vec<Result<String, TransportError>>) -> ScriptedTransport {
        ScriptedTransport {
            script: Mutex::new(steps.into()),
            seen: Mutex::new(Vec::new()),
        }
    }

    /// A script of successful replies carrying the given texts.
    pub fn replies(texts: &[&str]) -> ScriptedTransport {
        ScriptedTransport::new(texts.iter().map(|t| Ok(chat_response_body(t))).collect())
    }

    /// Every request sent so far, in order.
    pub fn requests(&self) -> Vec<ChatRequest> {
        self.seen.lock().expect("script lock").clone()
    }
}

impl ChatTransport for ScriptedTransport {
    fn send(&self, request: &ChatRequest) -> Result<String, TransportError> {
        self.seen.lock().expect("script lock").push(request.clone());
        self.script
            .lock()
            .expect("script lock")
            .pop_front()
            .unwrap_or_else(|| Err(TransportError::Fatal("script exhausted".into())))
    }
}

/// One request/response pair captured by a recording transport.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub request: ChatRequest,
    pub response: String,
}

/// Wraps a transport and records raw responses for later replay.
pub struct RecordingTransport {
    inner: Box<dyn ChatTransport>,
    log: Mutex<Vec<TranscriptEntry>>,
}

impl RecordingTransport {
    pub fn new(inner: Box<dyn ChatTransport>) -> RecordingTransport {
        RecordingTransport {
            inner,
            log: Mutex::new(Vec::new()),
        }
    }

    /// The transcript captured so far.
    pub fn entries(&self) -> Vec<TranscriptEntry> {
        self.log.lock().expect("log lock").clone()
    }

    /// Write the transcript as JSON lines.
    pub fn save(&self, path: &Path) -> Result<(), EngineError> {
        let mut file = std::io::BufWriter::new(fs::File::create(path)?);
        for entry in self.entries() {
            let line = serde_json::to_string(&entry)
                .map_err(|e| EngineError::Persist(e.to_string()))?;
            writeln!(file, "{line}")?;
        }
        Ok(())
    }
}

impl ChatTransport for RecordingTransport {
    fn send(&self, request: &ChatRequest) -> Result<String, TransportError> {
        let body = self.inner.send(request)?;
        self.log.lock().expect("log lock").push(TranscriptEntry {
            request: request.clone(),
            response: body.clone(),
        });
        Ok(body)
    }
}

/// Replays recorded responses, keyed by the serialized request, so
/// batch runs reproduce without network access.
pub struct ReplayTransport {
    responses: Mutex<HashMap<String, VecDeque<String>>>,
}

impl ReplayTransport {
    pub fn new(entries: Vec<TranscriptEntry>) -> ReplayTransport {
        let mut responses: HashMap<String, VecDeque<String>> = HashMap::new();
        for entry in entries {
            let key = serde_json::to_string(&entry.request).expect("requests serialize");
            responses.entry(key).or_default().push_back(entry.response);
        }
        ReplayTransport {
            responses: Mutex::new(responses),
        }
    }

    /// Load a transcript written by [`RecordingTransport::save`].
    pub fn from_path(path: &Path) -> Result<ReplayTransport, EngineError> {
        let file = BufReader::new(fs::File::open(path)?);
        let mut entries = Vec::new();
        for line in file.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            entries.push(
                serde_json::from_str(&line).map_err(|e| EngineError::Persist(e.to_string()))?,
            );
        }
        Ok(ReplayTransport::new(entries))
    }
}

impl ChatTransport for ReplayTransport {
    fn send(&self, request: &ChatRequest) -> Result<String, TransportError> {
        let key = serde_json::to_string(request).expect("requests serialize");
        self.responses
            .lock()
            .expect("replay lock")
            .get_mut(&key)
            .and_then(VecDeque::pop_front)
            .ok_or_else(|| TransportError::Fatal("no recorded response for request".into()))
    }
}

/// Engine options for the external-model client.
#[derive(Debug, Clone)]
pub struct LlmOptions {
    pub model: String,
    pub templates: PromptTemplates,
    pub retry: RetryPolicy,
}

impl Default for LlmOptions {
    fn default() -> LlmOptions {
        LlmOptions {
            model: DEFAULT_MODEL.into(),
            templates: PromptTemplates::builtin(),
            retry: RetryPolicy::default(),
        }
    }
}

/// The external-LLM completion engine.
pub struct LlmEngine {
    transport: Box<dyn ChatTransport>,
    options: LlmOptions,
}

impl LlmEngine {
    pub fn new(transport: Box<dyn ChatTransport>, options: LlmOptions) -> LlmEngine {
        LlmEngine { transport, options }
    }
}

impl CompletionEngine for LlmEngine {
    fn kind(&self) -> EngineKind {
        EngineKind::Llm
    }

    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResult, EngineError> {
        llm_complete_with(
            self.transport.as_ref(),
            request,
            &self.options.templates,
            &self.options.model,
            &self.options.retry,
        )
    }
}
