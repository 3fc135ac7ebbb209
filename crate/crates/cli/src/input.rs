//! Resolving command-line inputs: table files, context files and
//! construction expressions.

use std::fs;
use std::path::{Path, PathBuf};

use morita_core::bimodule::MoritaContext;
use morita_core::context_file::{parse_context_spec, ContextSpecError};
use morita_core::InverseSemigroup;

use crate::expr::evaluate;
use crate::CliError;

#[derive(Debug)]
pub enum Input {
    Semigroup(InverseSemigroup),
    Context(Box<MoritaContext>),
}

fn locate(arg: &str, base: Option<&Path>) -> PathBuf {
    let p = Path::new(arg);
    match base {
        Some(b) if p.is_relative() => b.join(p),
        _ => p.to_path_buf(),
    }
}

fn looks_like_path(arg: &str) -> bool {
    arg.contains('/') || arg.contains('.')
}

/// Loads `arg`, a file path (relative to `base` if given) or an expression.
pub fn load(arg: &str, base: Option<&Path>, limit: usize) -> Result<Input, CliError> {
    let path = locate(arg, base);
    if !path.is_file() {
        return match evaluate(arg, limit) {
            Ok(s) => Ok(Input::Semigroup(s)),
            Err(_) if looks_like_path(arg) => Err(CliError::MissingInput(path.display().to_string())),
            Err(e) => Err(CliError::Data(format!("`{arg}`: {e}"))),
        };
    }
    let text = fs::read_to_string(&path).map_err(|e| CliError::MissingInput(format!("{}: {e}", path.display())))?;
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).unwrap_or("");
    let here = path.parent().map(Path::to_path_buf);
    let data = |msg: String| CliError::Data(format!("{}: {msg}", path.display()));
    if first.starts_with("n=") {
        InverseSemigroup::parse_spec(&text).map(Input::Semigroup).map_err(|e| data(e.to_string()))
    } else if first == "context" {
        let mut missing = None;
        let parsed = parse_context_spec(&text, |r| match load(r, here.as_deref(), limit) {
            Ok(Input::Semigroup(s)) => Ok(s),
            Ok(Input::Context(_)) => Err("a context cannot stand for a semigroup".into()),
            Err(CliError::MissingInput(p)) => {
                missing = Some(p.clone());
                Err(format!("missing input {p}"))
            }
            Err(e) => Err(e.to_string()),
        });
        match parsed {
            Ok(c) => Ok(Input::Context(Box::new(c))),
            Err(ContextSpecError::Reference { .. }) if missing.is_some() => {
                Err(CliError::MissingInput(missing.expect("checked")))
            }
            Err(e) => Err(data(e.to_string())),
        }
    } else {
        evaluate(first, limit).map(Input::Semigroup).map_err(|e| data(e.to_string()))
    }
}

pub fn load_semigroup(arg: &str, limit: usize) -> Result<InverseSemigroup, CliError> {
    match load(arg, None, limit)? {
        Input::Semigroup(s) => Ok(s),
        Input::Context(_) => Err(CliError::Data(format!("{arg}: expected a semigroup, found a context"))),
    }
}

pub fn load_context(arg: &str, limit: usize) -> Result<MoritaContext, CliError> {
    match load(arg, None, limit)? {
        Input::Context(c) => Ok(*c),
        Input::Semigroup(_) => Err(CliError::Data(format!("{arg}: expected a context file"))),
    }
}
