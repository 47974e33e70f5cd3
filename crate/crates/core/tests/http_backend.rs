mod common;

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::thread::JoinHandle;
use std::time::Duration;

use pddl_prune::llm::{spg_llm, HttpBackend, LlmBackend, LlmConfig, LlmRequest, PromptTemplate, TransportError};
use pddl_prune::validate::Validator;
use serde_json::{json, Value};

use common::fixture;

struct Seen {
    headers: Vec<String>,
    body: Value,
}

/// Answers one connection per scripted (status, body) pair, in order.
fn server(replies: Vec<(u16, String)>) -> (String, JoinHandle<Vec<Seen>>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/v1/chat/completions", listener.local_addr().unwrap());
    let handle = std::thread::spawn(move || {
        let mut seen = Vec::new();
        for (status, body) in replies {
            let (stream, _) = listener.accept().unwrap();
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut headers = Vec::new();
            let mut length = 0;
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                let line = line.trim_end().to_string();
                if line.is_empty() {
                    break;
                }
                if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                    length = v.trim().parse().unwrap();
                }
                headers.push(line);
            }
            let mut buf = vec![0; length];
            reader.read_exact(&mut buf).unwrap();
            seen.push(Seen { headers, body: serde_json::from_slice(&buf).unwrap_or(Value::Null) });
            let mut stream = stream;
            write!(
                stream,
                "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            )
            .unwrap();
        }
        seen
    });
    (url, handle)
}

fn completion(content: &str) -> String {
    json!({ "choices": [{ "message": { "role": "assistant", "content": content } }] }).to_string()
}

fn request<'a>(prompt: &'a str) -> LlmRequest<'a> {
    LlmRequest { prompt, domain: "", problem: "", attempt: 1 }
}

#[test]
fn sends_chat_request_and_reads_content() {
    let (url, handle) = server(vec![(200, completion("hello"))]);
    let mut extra = serde_json::Map::new();
    extra.insert("temperature".into(), json!(0.0));
    let backend =
        HttpBackend::new(&url, "m1", Duration::from_secs(10)).with_api_key(Some("secret".into())).with_extra(extra);
    assert_eq!(backend.complete(&request("the prompt")).unwrap(), "hello");

    let seen = handle.join().unwrap();
    let body = &seen[0].body;
    assert_eq!(body["model"], "m1");
    assert_eq!(body["messages"][0]["role"], "user");
    assert_eq!(body["messages"][0]["content"], "the prompt");
    assert_eq!(body["temperature"], 0.0);
    assert!(seen[0].headers.iter().any(|h| h.eq_ignore_ascii_case("authorization: bearer secret")));
}

#[test]
fn http_errors_and_bad_bodies_are_transport_errors() {
    let (url, handle) = server(vec![(500, "overloaded".into()), (200, "{\"choices\": []}".into())]);
    let backend = HttpBackend::new(&url, "m", Duration::from_secs(10));
    assert_eq!(backend.complete(&request("p")), Err(TransportError::Status { status: 500, body: "overloaded".into() }));
    assert!(matches!(backend.complete(&request("p")), Err(TransportError::Body(_))));
    handle.join().unwrap();

    let refused = HttpBackend::new("http://127.0.0.1:9/none", "m", Duration::from_secs(2));
    assert!(matches!(refused.complete(&request("p")), Err(TransportError::Request(_))));
}

#[test]
fn loop_counts_failed_call_and_repairs_over_http() {
    let d = fixture("blocksworld5.domain.pddl");
    let p = fixture("blocksworld4.problem.pddl");
    let pruned = fixture("blocksworld4.domain.pddl");
    let (url, handle) = server(vec![
        (503, "busy".into()),
        (200, completion("Removed nothing, sorry.")),
        (200, completion(&format!("```pddl\n{pruned}```\n```pddl\n{p}```"))),
    ]);
    let backend = HttpBackend::new(&url, "m", Duration::from_secs(10));
    let config = LlmConfig { attempts: 3, ..LlmConfig::default() };
    let out = spg_llm(&d, &p, &PromptTemplate::default(), &config, &backend, &Validator::default()).unwrap();
    assert!(out.is_accepted());
    assert_eq!(out.attempts.len(), 3);
    assert!(out.attempts[0].transport_error.as_deref().unwrap().contains("503"));

    let seen = handle.join().unwrap();
    let prompt = |i: usize| seen[i].body["messages"][0]["content"].as_str().unwrap().to_string();
    // a failed call gives nothing to repair, so the second prompt is the first again
    assert_eq!(prompt(0), prompt(1));
    assert!(prompt(2).contains("Removed nothing, sorry."));
    assert!(prompt(2).contains("found 0 domain"), "{}", prompt(2));
}
