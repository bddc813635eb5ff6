//! Text and JSON file formats: configurations, walks, covering maps and group actions.
//!
//! Files are line oriented. A section starts with `name:` at the beginning of a line and
//! runs until the next section header; `#` starts a comment. Cycles and blocks use
//! parenthesised lists such as `(a b c)`.

use crate::config::{Angle, Fbc, RawFbc, Violation};
use crate::walks::{Step, Walk};
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// A syntax error with its 1-based position.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("{}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {source}")]
    InFile {
        path: String,
        source: Box<FormatError>,
    },
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> SyntaxError {
    SyntaxError {
        line,
        column,
        message: message.into(),
    }
}

/// A token with its position.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Tok {
    text: String,
    line: usize,
    column: usize,
}

impl Tok {
    fn err(&self, message: impl Into<String>) -> SyntaxError {
        syntax(self.line, self.column, message)
    }
}

#[derive(Clone, Debug)]
struct Section {
    line: usize,
    column: usize,
    toks: Vec<Tok>,
}

/// Splits a line into tokens; `(`, `)` and `,` are tokens of their own.
fn tokenize(text: &str, line: usize, offset: usize, out: &mut Vec<Tok>) {
    let mut cur = String::new();
    let mut start = 0;
    let flush = |cur: &mut String, start: usize, out: &mut Vec<Tok>| {
        if !cur.is_empty() {
            out.push(Tok {
                text: std::mem::take(cur),
                line,
                column: start,
            });
        }
    };
    for (i, c) in text.chars().enumerate() {
        let col = offset + i + 1;
        if c.is_whitespace() {
            flush(&mut cur, start, out);
        } else if matches!(c, '(' | ')' | ',') {
            flush(&mut cur, start, out);
            out.push(Tok {
                text: c.to_string(),
                line,
                column: col,
            });
        } else {
            if cur.is_empty() {
                start = col;
            }
            cur.push(c);
        }
    }
    flush(&mut cur, start, out);
}

fn sections(text: &str, allowed: &[&str]) -> Result<BTreeMap<String, Section>, SyntaxError> {
    let mut out: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let indent = body.len() - body.trim_start().len();
        let trimmed = body.trim_start();
        let header = trimmed.split_once(':').filter(|(k, _)| {
            !k.is_empty() && k.chars().all(|c| c.is_ascii_alphabetic() || c == '_')
        });
        let rest_offset;
        let rest = match header {
            Some((key, rest)) => {
                if !allowed.contains(&key) {
                    return Err(syntax(line, indent + 1, format!("unknown section `{key}`")));
                }
                if out.contains_key(key) {
                    return Err(syntax(
                        line,
                        indent + 1,
                        format!("duplicate section `{key}`"),
                    ));
                }
                out.insert(
                    key.to_string(),
                    Section {
                        line,
                        column: indent + 1,
                        toks: Vec::new(),
                    },
                );
                current = Some(key.to_string());
                rest_offset = indent + key.chars().count() + 1;
                rest
            }
            None => {
                if current.is_none() {
                    return Err(syntax(
                        line,
                        indent + 1,
                        "expected a section header such as `angles:`",
                    ));
                }
                rest_offset = indent;
                trimmed
            }
        };
        let key = current.as_ref().expect("set above");
        let sec = out.get_mut(key).expect("inserted");
        tokenize(rest, line, rest_offset, &mut sec.toks);
    }
    Ok(out)
}

fn required<'a>(
    secs: &'a BTreeMap<String, Section>,
    key: &str,
) -> Result<&'a Section, SyntaxError> {
    secs.get(key)
        .ok_or_else(|| syntax(1, 1, format!("missing section `{key}:`")))
}

fn plain_list(sec: &Section) -> Result<Vec<String>, SyntaxError> {
    sec.toks
        .iter()
        .map(|t| {
            if matches!(t.text.as_str(), "(" | ")" | ",") {
                Err(t.err(format!("unexpected `{}`", t.text)))
            } else {
                Ok(t.text.clone())
            }
        })
        .collect()
}

/// Parenthesised groups `(a b) (c)`; commas between groups are allowed.
fn groups(toks: &[Tok]) -> Result<Vec<Vec<String>>, SyntaxError> {
    let mut out = Vec::new();
    let mut cur: Option<Vec<String>> = None;
    let mut open: Option<&Tok> = None;
    for t in toks {
        match (t.text.as_str(), cur.as_mut()) {
            ("(", None) => {
                cur = Some(Vec::new());
                open = Some(t);
            }
            ("(", Some(_)) => return Err(t.err("nested `(`")),
            (")", Some(_)) => {
                let g = cur.take().expect("open");
                if g.is_empty() {
                    return Err(t.err("empty group"));
                }
                out.push(g);
            }
            (")", None) => return Err(t.err("unmatched `)`")),
            (",", None) => {}
            (",", Some(_)) => return Err(t.err("`,` inside a group")),
            (_, Some(g)) => g.push(t.text.clone()),
            (_, None) => return Err(t.err(format!("expected `(` before `{}`", t.text))),
        }
    }
    if cur.is_some() {
        return Err(open.expect("open").err("unclosed `(`"));
    }
    Ok(out)
}

fn parse_degree(sec: &Section) -> Result<Vec<(String, i64)>, SyntaxError> {
    let mut out = Vec::new();
    for t in &sec.toks {
        if t.text == "," {
            continue;
        }
        let (a, d) = t
            .text
            .rsplit_once('=')
            .ok_or_else(|| t.err(format!("expected `angle=degree`, got `{}`", t.text)))?;
        let v: i64 = d.parse().map_err(|_| {
            syntax(
                t.line,
                t.column + a.chars().count() + 1,
                format!("invalid degree `{d}`"),
            )
        })?;
        if a.is_empty() {
            return Err(t.err("missing angle before `=`"));
        }
        out.push((a.to_string(), v));
    }
    Ok(out)
}

/// Parses the text format into a raw description without validation.
pub fn parse_raw_text(text: &str) -> Result<RawFbc, SyntaxError> {
    let secs = sections(text, &["angles", "g", "polygons", "layers", "degree"])?;
    let angles = plain_list(required(&secs, "angles")?)?;
    let g = match secs.get("g") {
        Some(s) => groups(&s.toks)?,
        None => Vec::new(),
    };
    let polygons = groups(&required(&secs, "polygons")?.toks)?;
    let layers = secs.get("layers").map(|s| groups(&s.toks)).transpose()?;
    let degree = parse_degree(required(&secs, "degree")?)?;
    Ok(RawFbc {
        angles,
        g,
        polygons,
        layers,
        degree,
    })
}

/// Parses the text format, or the JSON mirror when the first non-blank character is `{`.
pub fn parse_raw(text: &str) -> Result<RawFbc, SyntaxError> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| syntax(e.line(), e.column(), e.to_string()))
    } else {
        parse_raw_text(text)
    }
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<Fbc, FormatError> {
    let raw = parse_raw(text)?;
    Fbc::from_raw(&raw).map_err(FormatError::Invalid)
}

struct Groups<'a>(&'a [Vec<String>]);

impl fmt::Display for Groups<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|g| format!("({})", g.join(" ")))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Canonical text form: cycles and blocks ordered by least angle, one degree per orbit.
pub fn print_config(cfg: &Fbc) -> String {
    let raw = cfg.to_raw();
    let mut s = String::new();
    s.push_str(&format!("angles: {}\n", raw.angles.join(" ")));
    s.push_str(&format!("g: {}\n", Groups(&raw.g)));
    s.push_str(&format!("polygons: {}\n", Groups(&raw.polygons)));
    if let Some(l) = &raw.layers {
        s.push_str(&format!("layers: {}\n", Groups(l)));
    }
    let deg: Vec<String> = raw.degree.iter().map(|(a, d)| format!("{a}={d}")).collect();
    s.push_str(&format!("degree: {}\n", deg.join(" ")));
    s
}

/// Canonical JSON mirror.
pub fn print_config_json(cfg: &Fbc) -> String {
    let mut s = serde_json::to_string_pretty(&cfg.to_raw()).expect("serializable");
    s.push('\n');
    s
}

/// Parses `src g G t:x …` into a walk of `cfg`.
pub fn parse_walk(cfg: &Fbc, text: &str) -> Result<Walk, SyntaxError> {
    let mut toks = Vec::new();
    for (i, c) in text.char_indices() {
        let prev_ws = i == 0 || text[..i].chars().last().is_some_and(char::is_whitespace);
        if !c.is_whitespace() && prev_ws {
            let end = text[i..]
                .find(char::is_whitespace)
                .map_or(text.len(), |j| i + j);
            toks.push((text[..i].chars().count() + 1, &text[i..end]));
        }
    }
    let angle = |col: usize, name: &str| {
        cfg.index_of(name)
            .ok_or_else(|| syntax(1, col, format!("unknown angle `{name}`")))
    };
    let (col, src) = *toks.first().ok_or_else(|| syntax(1, 1, "empty walk"))?;
    let mut w = Walk::trivial(angle(col, src)?);
    for &(col, t) in &toks[1..] {
        let step = match t {
            "g" => Step::Fwd,
            "G" => Step::Bwd,
            _ => match t.strip_prefix("t:") {
                Some(name) => Step::Tau(angle(col + 2, name)?),
                None => {
                    return Err(syntax(
                        1,
                        col,
                        format!("expected `g`, `G` or `t:<angle>`, got `{t}`"),
                    ))
                }
            },
        };
        w.push(cfg, step)
            .map_err(|e| syntax(1, col, e.to_string()))?;
    }
    Ok(w)
}

/// A covering-map file: configuration paths and an angle map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverFile {
    pub domain: String,
    pub codomain: String,
    pub map: Vec<(String, String)>,
}

fn single_path(sec: &Section) -> Result<String, SyntaxError> {
    match sec.toks.as_slice() {
        [t] => Ok(t.text.clone()),
        [] => Err(syntax(sec.line, sec.column, "expected a path")),
        [_, t, ..] => Err(t.err("expected a single path")),
    }
}

/// Parses `domain:`, `codomain:` and `map: a x, b y`.
pub fn parse_cover(text: &str) -> Result<CoverFile, SyntaxError> {
    let secs = sections(text, &["domain", "codomain", "map"])?;
    let domain = single_path(required(&secs, "domain")?)?;
    let codomain = single_path(required(&secs, "codomain")?)?;
    let mut map = Vec::new();
    for pair in required(&secs, "map")?.toks.split(|t| t.text == ",") {
        match pair {
            [] => {}
            [a, b] => map.push((a.text.clone(), b.text.clone())),
            [a, ..] => return Err(a.err("expected `angle image` pairs separated by `,`")),
        }
    }
    Ok(CoverFile {
        domain,
        codomain,
        map,
    })
}

/// A group-action file: a configuration path and generating permutations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionFile {
    pub config: String,
    /// Each generator as a list of cycles.
    pub generators: Vec<Vec<Vec<String>>>,
}

/// Parses `config:` and `generators: (a b)(c d), (a c)`; generators are separated by `,`.
pub fn parse_action(text: &str) -> Result<ActionFile, SyntaxError> {
    let secs = sections(text, &["config", "generators"])?;
    let config = single_path(required(&secs, "config")?)?;
    let mut generators = Vec::new();
    // split on commas outside parentheses
    let toks = &required(&secs, "generators")?.toks;
    let mut depth = 0usize;
    let mut cur: Vec<Tok> = Vec::new();
    for t in toks {
        match t.text.as_str() {
            "(" => depth += 1,
            ")" => depth = depth.saturating_sub(1),
            "," if depth == 0 => {
                generators.push(groups(&cur)?);
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(t.clone());
    }
    if !cur.is_empty() {
        generators.push(groups(&cur)?);
    }
    Ok(ActionFile { config, generators })
}

/// Resolves an angle map against two configurations; every domain angle needs one image.
pub fn resolve_map(dom: &Fbc, cod: &Fbc, pairs: &[(String, String)]) -> Result<Vec<Angle>, String> {
    let mut map = vec![None; dom.len()];
    for (a, b) in pairs {
        let i = dom
            .index_of(a)
            .ok_or_else(|| format!("unknown domain angle `{a}`"))?;
        let j = cod
            .index_of(b)
            .ok_or_else(|| format!("unknown codomain angle `{b}`"))?;
        if map[i].replace(j).is_some() {
            return Err(format!("angle `{a}` is mapped twice"));
        }
    }
    map.iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| format!("angle `{}` has no image", dom.name(i))))
        .collect()
}

/// A permutation of `cfg` from cycle notation; unlisted angles are fixed.
pub fn resolve_permutation(cfg: &Fbc, cycles: &[Vec<String>]) -> Result<Vec<Angle>, String> {
    let mut perm: Vec<Angle> = (0..cfg.len()).collect();
    let mut seen = vec![false; cfg.len()];
    for c in cycles {
        let ids = c
            .iter()
            .map(|a| {
                cfg.index_of(a)
                    .ok_or_else(|| format!("unknown angle `{a}`"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for (k, &x) in ids.iter().enumerate() {
            if std::mem::replace(&mut seen[x], true) {
                return Err(format!("angle `{}` appears twice", cfg.name(x)));
            }
            perm[x] = ids[(k + 1) % ids.len()];
        }
    }
    Ok(perm)
}

fn read(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn in_file<T>(path: &Path, r: Result<T, FormatError>) -> Result<T, FormatError> {
    r.map_err(|e| FormatError::InFile {
        path: path.display().to_string(),
        source: Box::new(e),
    })
}

/// Reads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<Fbc, FormatError> {
    let text = read(path)?;
    in_file(path, parse_config(&text))
}

fn sibling(file: &Path, rel: &str) -> PathBuf {
    file.parent().unwrap_or_else(|| Path::new(".")).join(rel)
}

/// A loaded covering-map file.
#[derive(Clone, Debug)]
pub struct LoadedCover {
    pub domain: Fbc,
    pub codomain: Fbc,
    pub map: Vec<Angle>,
}

/// Reads a covering-map file; configuration paths are relative to the file.
pub fn load_cover(path: &Path) -> Result<LoadedCover, FormatError> {
    let text = read(path)?;
    let cf = in_file(path, parse_cover(&text).map_err(FormatError::from))?;
    let domain = load_config(&sibling(path, &cf.domain))?;
    let codomain = load_config(&sibling(path, &cf.codomain))?;
    let map = resolve_map(&domain, &codomain, &cf.map).map_err(|message| FormatError::Io {
        path: path.display().to_string(),
        message,
    })?;
    Ok(LoadedCover {
        domain,
        codomain,
        map,
    })
}

/// A loaded group-action file.
#[derive(Clone, Debug)]
pub struct LoadedAction {
    pub config: Fbc,
    pub generators: Vec<Vec<Angle>>,
}

/// Reads a group-action file; the configuration path is relative to the file.
pub fn load_action(path: &Path) -> Result<LoadedAction, FormatError> {
    let text = read(path)?;
    let af = in_file(path, parse_action(&text).map_err(FormatError::from))?;
    let config = load_config(&sibling(path, &af.config))?;
    let generators = af
        .generators
        .iter()
        .map(|g| resolve_permutation(&config, g))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|message| FormatError::Io {
            path: path.display().to_string(),
            message,
        })?;
    Ok(LoadedAction { config, generators })
}
