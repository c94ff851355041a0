//! Criterion 10: the LLM client contract. Prompts for all four
//! (mode × history) combinations match golden files byte-exactly, the
//! retry schedule is honored against a scripted transport, and the
//! outgoing request pins temperature 0.8 / top-p 0.95 / max 15 tokens.
//!
//! Set `ACCEPTANCE_BLESS=1` to regenerate the golden prompt files.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use comet_engines::{
    build_llm_prompt_with, chat_response_body, llm_complete_with, CompletionRequest, EngineError,
    PromptMode, PromptTemplates, RetryPolicy, ScriptedTransport, TransportError,
};

use crate::pass;

const DIFF: &str = "modify src/parser.py\n-old parse limit line\n+new parse limit line";
const PREFIX: &str = "Fix par";
const HISTORY: &str = "Improve parser coverage for quoted spans";
const MODEL: &str = "stub-model";

fn fixed_request(prefix: &str, use_history: bool) -> CompletionRequest {
    let mut request = CompletionRequest::new(DIFF, prefix);
    request.history = vec![HISTORY.to_string()];
    request.use_history = use_history;
    request
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden/llm")
        .join(format!("{name}.txt"))
}

fn check_prompt_golden(mode: PromptMode, use_history: bool, templates: &PromptTemplates) {
    let (mode_name, prefix) = match mode {
        PromptMode::Generate => ("generate", ""),
        PromptMode::Complete => ("complete", PREFIX),
    };
    let name = format!(
        "{mode_name}_{}",
        if use_history { "history" } else { "plain" }
    );
    let prompt = build_llm_prompt_with(&fixed_request(prefix, use_history), mode, templates)
        .expect("render prompt");
    let rendered = format!("[system]\n{}\n[user]\n{}\n", prompt.system, prompt.user);

    let path = golden_path(&name);
    if std::env::var_os("ACCEPTANCE_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).expect("create golden dir");
        std::fs::write(&path, &rendered).expect("write golden prompt");
    }
    let golden = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing golden {}: {e}", path.display()));
    assert_eq!(
        rendered, golden,
        "prompt {name} diverged from its golden file"
    );
}

#[test]
fn c10_llm_client_contract() {
    let templates = PromptTemplates::builtin();
    for mode in [PromptMode::Generate, PromptMode::Complete] {
        for use_history in [false, true] {
            check_prompt_golden(mode, use_history, &templates);
        }
    }

    // Two transient failures, then success: three requests on the wire and
    // 40 ms + 80 ms of backoff in between.
    let retry = RetryPolicy {
        attempts: 4,
        initial_backoff: Duration::from_millis(40),
    };
    let transport = ScriptedTransport::new(vec![
        Err(TransportError::Transient("HTTP 429".into())),
        Err(TransportError::Transient("HTTP 503".into())),
        Ok(chat_response_body("Fix parser bug")),
    ]);
    let started = Instant::now();
    let result = llm_complete_with(
        &transport,
        &fixed_request(PREFIX, false),
        &templates,
        MODEL,
        &retry,
    )
    .expect("retried completion");
    let elapsed = started.elapsed();
    assert_eq!(transport.requests().len(), 3, "expected first try plus two retries");
    assert!(
        elapsed >= Duration::from_millis(120),
        "backoff shorter than 40+80 ms: {elapsed:?}"
    );
    assert!(result.prefix_honored);
    assert_eq!(result.full_message, "Fix parser bug");

    // Nothing but transient failures: the schedule exhausts after four
    // attempts and says so.
    let no_wait = RetryPolicy {
        attempts: 4,
        initial_backoff: Duration::ZERO,
    };
    let exhausted = ScriptedTransport::new(vec![
        Err(TransportError::Transient("HTTP 503".into())),
        Err(TransportError::Transient("HTTP 503".into())),
        Err(TransportError::Transient("HTTP 503".into())),
        Err(TransportError::Transient("HTTP 503".into())),
    ]);
    let err = llm_complete_with(
        &exhausted,
        &fixed_request(PREFIX, false),
        &templates,
        MODEL,
        &no_wait,
    )
    .expect_err("script never succeeds");
    assert!(
        matches!(err, EngineError::RetriesExhausted { attempts: 4, .. }),
        "unexpected error: {err:?}"
    );
    assert_eq!(exhausted.requests().len(), 4);

    // Credential rejections are terminal: one request, no retries.
    let auth = ScriptedTransport::new(vec![
        Err(TransportError::Auth("HTTP 401".into())),
        Ok(chat_response_body("never reached")),
    ]);
    let err = llm_complete_with(
        &auth,
        &fixed_request(PREFIX, false),
        &templates,
        MODEL,
        &no_wait,
    )
    .expect_err("auth failure is terminal");
    assert!(matches!(err, EngineError::AuthFailure(_)), "unexpected error: {err:?}");
    assert_eq!(auth.requests().len(), 1);

    // The outgoing request carries the pinned sampling parameters and the
    // rendered prompt pair.
    let sent = transport.requests();
    let prompt = build_llm_prompt_with(&fixed_request(PREFIX, false), PromptMode::Complete, &templates)
        .expect("render prompt");
    for request in &sent {
        assert_eq!(request.temperature, 0.8);
        assert_eq!(request.top_p, 0.95);
        assert_eq!(request.max_tokens, 15);
        assert_eq!(request.model, MODEL);
        assert_eq!(request.messages.len(), 2);
        assert_eq!(request.messages[0].role, "system");
        assert_eq!(request.messages[0].content, prompt.system);
        assert_eq!(request.messages[1].role, "user");
        assert_eq!(request.messages[1].content, prompt.user);
    }
    pass(10, "llm-client-contract");
}
