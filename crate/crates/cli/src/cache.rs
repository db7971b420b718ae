//! Newline-delimited JSON cache. Each line is `{"key": {...}, "payload": {...}}`;
//! later lines win. Unreadable lines are skipped with a warning and the value is
//! recomputed.

use std::collections::HashMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde_json::{json, Map, Value};

use weilmotive::{Result, WeilCurve};

use crate::output::rational_string;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Count,
    Jacobi,
    Zeta,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Count => "count",
            Kind::Jacobi => "jacobi",
            Kind::Zeta => "zeta",
        }
    }
}

/// Cache key: curve, prime, extension degree, kind, and the component for Jacobi data.
pub fn key(curve: &WeilCurve, p: u64, r: u32, kind: Kind, component: Option<(u32, u32)>) -> Value {
    let mut m = Map::new();
    m.insert("e".into(), json!(curve.e()));
    m.insert("f".into(), json!(curve.f()));
    m.insert("gamma".into(), json!(rational_string(curve.gamma())));
    m.insert("delta".into(), json!(rational_string(curve.delta())));
    m.insert("p".into(), json!(p));
    m.insert("r".into(), json!(r));
    m.insert("kind".into(), json!(kind.name()));
    if let Some((d, dp)) = component {
        m.insert("component".into(), json!([d, dp]));
    }
    Value::Object(m)
}

struct State {
    entries: HashMap<String, Value>,
    /// The file does not end in a newline (e.g. a truncated write).
    needs_newline: bool,
}

pub struct Cache {
    path: Option<PathBuf>,
    state: Mutex<State>,
}

impl Cache {
    pub fn disabled() -> Self {
        Cache {
            path: None,
            state: Mutex::new(State {
                entries: HashMap::new(),
                needs_newline: false,
            }),
        }
    }

    /// Load `path` if it exists. A missing file is an empty cache.
    pub fn open(path: &Path) -> Self {
        let mut entries = HashMap::new();
        let mut needs_newline = false;
        if let Ok(text) = std::fs::read_to_string(path) {
            needs_newline = !text.is_empty() && !text.ends_with('\n');
            for (lineno, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                match parse_line(line) {
                    Some((k, payload)) => {
                        entries.insert(k, payload);
                    }
                    None => warn(&format!(
                        "skipping unreadable cache line {} in {}",
                        lineno + 1,
                        path.display()
                    )),
                }
            }
        }
        Cache {
            path: Some(path.to_path_buf()),
            state: Mutex::new(State {
                entries,
                needs_newline,
            }),
        }
    }

    /// The cached payload for `key` if it decodes, else `compute()`, appended to the file.
    pub fn get_or_compute<T>(
        &self,
        key: Value,
        decode: impl Fn(&Value) -> Option<T>,
        encode: impl Fn(&T) -> Value,
        compute: impl FnOnce() -> Result<T>,
    ) -> Result<T> {
        if self.path.is_none() {
            return compute();
        }
        let k = key.to_string();
        let cached = self
            .state
            .lock()
            .expect("cache lock")
            .entries
            .get(&k)
            .cloned();
        if let Some(payload) = cached {
            match decode(&payload) {
                Some(v) => return Ok(v),
                None => warn(&format!("discarding invalid cache entry {k}")),
            }
        }
        let value = compute()?;
        let payload = encode(&value);
        let line = json!({ "key": key, "payload": payload }).to_string();
        let mut state = self.state.lock().expect("cache lock");
        if let Err(e) = self.append(&line, state.needs_newline) {
            warn(&format!("could not write cache: {e}"));
        } else {
            state.needs_newline = false;
        }
        state.entries.insert(k, payload);
        Ok(value)
    }

    fn append(&self, line: &str, leading_newline: bool) -> std::io::Result<()> {
        let path = self.path.as_ref().expect("enabled cache");
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        let mut buf = String::with_capacity(line.len() + 2);
        if leading_newline {
            buf.push('\n');
        }
        buf.push_str(line);
        buf.push('\n');
        // one write per record keeps concurrent appenders from interleaving
        file.write_all(buf.as_bytes())
    }
}

fn parse_line(line: &str) -> Option<(String, Value)> {
    let v: Value = serde_json::from_str(line).ok()?;
    let key = v.get("key")?;
    if !key.is_object() {
        return None;
    }
    let payload = v.get("payload")?.clone();
    Some((key.to_string(), payload))
}

fn warn(msg: &str) {
    eprintln!("warning: {msg}");
}
