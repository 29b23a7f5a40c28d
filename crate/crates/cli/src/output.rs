//! Deterministic file output: fixed float formatting, atomic writes, and a
//! minimal JSON emitter for metadata sidecars.
//!
//! Identical run configurations must produce byte-identical files, so all
//! numeric formatting is pinned to 17 significant digits and writes go
//! through a temp-file rename (no partial files on failure).

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

/// A float rendered with 17 significant digits (exact round-trip).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write bytes atomically: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

/// Minimal JSON value for the metadata sidecars.
pub enum Json {
    Num(f64),
    Int(i64),
    Str(String),
    Bool(bool),
    Null,
    List(Vec<Json>),
    /// Ordered key–value pairs (insertion order is preserved for
    /// deterministic output).
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn obj(pairs: Vec<(&str, Json)>) -> Json {
        Json::Obj(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out);
        out
    }

    fn render_into(&self, out: &mut String) {
        match self {
            Json::Num(x) => {
                if x.is_finite() {
                    let _ = write!(out, "{}", fmt_f64(*x));
                } else {
                    out.push_str("null");
                }
            }
            Json::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Json::Str(s) => {
                out.push('"');
                for c in s.chars() {
                    match c {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\t' => out.push_str("\\t"),
                        c if (c as u32) < 0x20 => {
                            let _ = write!(out, "\\u{:04x}", c as u32);
                        }
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Null => out.push_str("null"),
            Json::List(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.render_into(out);
                }
                out.push(']');
            }
            Json::Obj(pairs) => {
                out.push('{');
                for (i, (k, v)) in pairs.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    Json::Str(k.clone()).render_into(out);
                    out.push(':');
                    v.render_into(out);
                }
                out.push('}');
            }
        }
    }
}

/// CSV builder with a fixed header; floats formatted via [`fmt_f64`].
pub struct Csv {
    buf: String,
}

pub enum Field {
    F(f64),
    U(u64),
    I(i64),
    S(String),
    Empty,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        let mut buf = String::new();
        buf.push_str(header);
        buf.push('\n');
        Csv { buf }
    }

    pub fn row(&mut self, fields: &[Field]) {
        for (i, f) in fields.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            match f {
                Field::F(x) => self.buf.push_str(&fmt_f64(*x)),
                Field::U(x) => {
                    let _ = write!(self.buf, "{x}");
                }
                Field::I(x) => {
                    let _ = write!(self.buf, "{x}");
                }
                Field::S(s) => self.buf.push_str(s),
                Field::Empty => {}
            }
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}
