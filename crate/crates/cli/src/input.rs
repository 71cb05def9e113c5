//! Reading command arguments: inline values or paths to UTF-8 files.

use std::fs;
use std::path::Path;

use kscolor::{Error, Result};
use serde::de::DeserializeOwned;

/// The argument itself when it looks like an inline value, otherwise the
/// contents of the file it names.
pub fn text_of(arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        return Ok(arg.to_string());
    }
    let path = Path::new(arg);
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

/// Quotes bare scalar tokens so `[1/3, -2, 0.5]` parses as JSON strings.
fn quote_bare_scalars(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 16);
    let mut chars = s.chars().peekable();
    let mut in_string = false;
    while let Some(c) = chars.next() {
        if in_string {
            out.push(c);
            match c {
                '\\' => out.extend(chars.next()),
                '"' => in_string = false,
                _ => {}
            }
        } else if c == '"' {
            in_string = true;
            out.push(c);
        } else if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' {
            let mut token = String::from(c);
            while let Some(&n) = chars.peek() {
                if n.is_ascii_alphanumeric() || matches!(n, '/' | '.' | '-' | '+') {
                    token.push(n);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push('"');
            out.push_str(&token);
            out.push('"');
        } else {
            out.push(c);
        }
    }
    out
}

/// Parses strict JSON, falling back to JSON with bare rational tokens.
pub fn parse<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text)
        .or_else(|_| serde_json::from_str(&quote_bare_scalars(text)))
        .map_err(|e| Error::InvalidInput(format!("cannot parse {what}: {e}")))
}

pub fn read<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T> {
    parse(&text_of(arg)?, what)
}
