use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error(
    "expected one domain and one problem definition, found {found_domains} domain(s) and {found_problems} problem(s)"
)]
pub struct ExtractionError {
    pub found_domains: usize,
    pub found_problems: usize,
}

/// Byte offset one past the `)` closing the list opened at `start`, skipping
/// `;` comments.
fn closing(text: &[u8], start: usize) -> Option<usize> {
    let mut depth = 0usize;
    let mut i = start;
    while i < text.len() {
        match text[i] {
            b';' => {
                while i < text.len() && text[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i + 1);
                }
            }
            _ => {}
        }
        i += 1;
    }
    None
}

/// `domain` or `problem` when `s` starts with `(define (domain ...` or
/// `(define (problem ...`, ignoring case and whitespace.
fn definition_kind(s: &str) -> Option<&'static str> {
    let rest = s.strip_prefix('(')?.trim_start();
    let head = rest.get(..6)?;
    if !head.eq_ignore_ascii_case("define") {
        return None;
    }
    let rest = rest[6..].trim_start().strip_prefix('(')?.trim_start();
    for kind in ["domain", "problem"] {
        if rest.get(..kind.len()).is_some_and(|h| h.eq_ignore_ascii_case(kind))
            && rest[kind.len()..].starts_with(|c: char| c.is_whitespace() || c == ')')
        {
            return Some(kind);
        }
    }
    None
}

/// Finds the balanced `(define (domain ...))` and `(define (problem ...))`
/// expressions anywhere in a reply, fenced or not.
pub fn extract_task_files(response: &str) -> Result<(String, String), ExtractionError> {
    let bytes = response.as_bytes();
    let (mut domains, mut problems) = (Vec::new(), Vec::new());
    let mut i = 0;
    while let Some(off) = response[i..].find('(') {
        let start = i + off;
        match definition_kind(&response[start..]) {
            Some(kind) => match closing(bytes, start) {
                Some(end) => {
                    let text = response[start..end].to_string();
                    if kind == "domain" {
                        domains.push(text);
                    } else {
                        problems.push(text);
                    }
                    i = end;
                }
                None => i = start + 1,
            },
            None => i = start + 1,
        }
    }
    if domains.len() == 1 && problems.len() == 1 {
        Ok((domains.remove(0), problems.remove(0)))
    } else {
        Err(ExtractionError { found_domains: domains.len(), found_problems: problems.len() })
    }
}
