//! Talk to an OpenAI-style chat-completions endpoint. A tiny local server
//! stands in for the model and answers with the original files unchanged, so
//! the example runs offline; point `HttpBackend::new` at a real server to
//! use a real model.
//!
//! ```bash
//! cargo run --example http_backend
//! ```

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::time::Duration;

use pddl_prune::llm::{spg_llm, HttpBackend, LlmConfig, PromptTemplate};
use pddl_prune::validate::Validator;

const DOMAIN: &str = include_str!("../tests/fixtures/blocksworld4.domain.pddl");
const PROBLEM: &str = include_str!("../tests/fixtures/blocksworld4.problem.pddl");

/// Serves one request and returns the body it received.
fn serve_once(listener: TcpListener, reply: String) -> std::io::Result<String> {
    let (stream, _) = listener.accept()?;
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut length = 0;
    loop {
        let mut line = String::new();
        reader.read_line(&mut line)?;
        if line.trim().is_empty() {
            break;
        }
        if let Some((k, v)) = line.split_once(':') {
            if k.eq_ignore_ascii_case("content-length") {
                length = v.trim().parse().unwrap_or(0);
            }
        }
    }
    let mut body = vec![0; length];
    reader.read_exact(&mut body)?;
    let payload = serde_json::json!({ "choices": [{ "message": { "role": "assistant", "content": reply } }] });
    let payload = payload.to_string();
    let mut stream = stream;
    write!(
        stream,
        "HTTP/1.1 200 OK\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{payload}",
        payload.len()
    )?;
    Ok(String::from_utf8_lossy(&body).into_owned())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let listener = TcpListener::bind("127.0.0.1:0")?;
    let endpoint = format!("http://{}/v1/chat/completions", listener.local_addr()?);
    let server =
        std::thread::spawn(move || serve_once(listener, format!("```pddl\n{DOMAIN}```\n```pddl\n{PROBLEM}```")));

    let backend = HttpBackend::new(&endpoint, "local-model", Duration::from_secs(30));
    let config = LlmConfig::default();
    let outcome = spg_llm(DOMAIN, PROBLEM, &PromptTemplate::default(), &config, &backend, &Validator::default())?;
    println!("accepted: {} after {} call(s)", outcome.is_accepted(), outcome.attempts.len());

    let request: serde_json::Value = serde_json::from_str(&server.join().expect("server thread")?)?;
    println!("request model: {}", request["model"]);
    let prompt = request["messages"][0]["content"].as_str().unwrap_or_default();
    println!("prompt starts: {:?}", prompt.lines().next().unwrap_or_default());
    Ok(())
}
