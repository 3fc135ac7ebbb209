//! Text format for contexts.
//!
//! ```text
//! context
//! S=<reference>
//! T=<reference>
//! m=<size of X>
//! left
//! <|S| rows of m indices>
//! right
//! <m rows of |T| indices>
//! ip_S
//! <m rows of m indices>
//! ip_T
//! <m rows of m indices>
//! ```
//!
//! References are opaque to this module; the caller resolves them, usually
//! as file paths or construction expressions.

use thiserror::Error;

use crate::bimodule::{ContextError, ContextParts, MoritaContext};
use crate::semigroup::InverseSemigroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextSpecError {
    #[error("line {line}, column {col}: expected {expected}")]
    Parse { line: usize, col: usize, expected: String },
    #[error("cannot resolve `{reference}`: {message}")]
    Reference { reference: String, message: String },
    #[error(transparent)]
    Context(#[from] ContextError),
}

struct Lines<'a> {
    inner: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self, expected: &str) -> Result<(usize, &'a str), ContextSpecError> {
        let last = self.inner.last().map_or(1, |l| l.0 + 1);
        let out = self.inner.get(self.pos).copied().ok_or(ContextSpecError::Parse {
            line: last,
            col: 1,
            expected: expected.to_string(),
        })?;
        self.pos += 1;
        Ok(out)
    }

    fn keyword(&mut self, word: &str) -> Result<(), ContextSpecError> {
        let (line, text) = self.next(&format!("`{word}`"))?;
        if text.trim() != word {
            return Err(ContextSpecError::Parse { line, col: 1, expected: format!("`{word}`") });
        }
        Ok(())
    }

    fn field(&mut self, key: &str) -> Result<(usize, String), ContextSpecError> {
        let expected = format!("`{key}=...`");
        let (line, text) = self.next(&expected)?;
        text.trim()
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix('='))
            .map(|v| (line, v.trim().to_string()))
            .ok_or(ContextSpecError::Parse { line, col: 1, expected })
    }

    fn table(&mut self, rows: usize, cols: usize) -> Result<Vec<Vec<usize>>, ContextSpecError> {
        let mut out = Vec::with_capacity(rows);
        for _ in 0..rows {
            let (line, text) = self.next(&format!("a row of {cols} indices"))?;
            let mut row = Vec::with_capacity(cols);
            let mut col = 1;
            for tok in text.split_whitespace() {
                col = text.find(tok).map_or(col, |c| c + 1);
                let v =
                    tok.parse().map_err(|_| ContextSpecError::Parse { line, col, expected: "element index".into() })?;
                row.push(v);
            }
            if row.len() != cols {
                return Err(ContextSpecError::Parse { line, col: 1, expected: format!("{cols} indices") });
            }
            out.push(row);
        }
        Ok(out)
    }
}

pub fn parse_context_spec(
    text: &str,
    mut resolve: impl FnMut(&str) -> Result<InverseSemigroup, String>,
) -> Result<MoritaContext, ContextSpecError> {
    let inner = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .collect();
    let mut lines = Lines { inner, pos: 0 };
    lines.keyword("context")?;
    let mut load = |lines: &mut Lines, key: &str| {
        let (_, reference) = lines.field(key)?;
        resolve(&reference).map_err(|message| ContextSpecError::Reference { reference, message })
    };
    let s = load(&mut lines, "S")?;
    let t = load(&mut lines, "T")?;
    let (line, m) = lines.field("m")?;
    let m: usize = m.parse().map_err(|_| ContextSpecError::Parse { line, col: 3, expected: "a count".into() })?;
    lines.keyword("left")?;
    let left = lines.table(s.size(), m)?;
    lines.keyword("right")?;
    let right = lines.table(m, t.size())?;
    lines.keyword("ip_S")?;
    let ip_s = lines.table(m, m)?;
    lines.keyword("ip_T")?;
    let ip_t = lines.table(m, m)?;
    if let Ok((line, _)) = lines.next("") {
        return Err(ContextSpecError::Parse { line, col: 1, expected: "end of file".into() });
    }
    Ok(MoritaContext::from_parts(ContextParts { s, t, left, right, ip_s, ip_t })?)
}

pub fn to_context_spec(ctx: &MoritaContext, s_ref: &str, t_ref: &str) -> String {
    let parts = ctx.parts();
    let mut out = format!("context\nS={s_ref}\nT={t_ref}\nm={}\n", ctx.m());
    for (name, table) in [("left", &parts.left), ("right", &parts.right), ("ip_S", &parts.ip_s), ("ip_T", &parts.ip_t)]
    {
        out.push_str(name);
        out.push('\n');
        for row in table {
            let cells: Vec<String> = row.iter().map(usize::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::b5;
    use crate::enlargement::canonical_context;

    fn resolve(r: &str) -> Result<InverseSemigroup, String> {
        match r {
            "b5" => Ok(b5()),
            // the canonical context re-indexes T = {E11, 0} as a subsemigroup
            "sl2" => Ok(b5().restrict(&[0, 4]).unwrap().0),
            _ => Err("unknown".into()),
        }
    }

    #[test]
    fn round_trip() {
        let ctx = canonical_context(&b5(), &[0, 4]).unwrap();
        let text = to_context_spec(&ctx, "b5", "sl2");
        let back = parse_context_spec(&text, resolve).unwrap();
        assert_eq!(back, ctx);
        assert_eq!(to_context_spec(&back, "b5", "sl2"), text);
    }

    #[test]
    fn errors_carry_locations() {
        let ctx = canonical_context(&b5(), &[0, 4]).unwrap();
        let text = to_context_spec(&ctx, "b5", "sl2");
        let broken = text.replacen("right\n", "rite\n", 1);
        let err = parse_context_spec(&broken, resolve).unwrap_err();
        assert!(matches!(err, ContextSpecError::Parse { line: 11, .. }), "{err:?}");
        let unknown = text.replacen("T=sl2", "T=nope", 1);
        assert!(matches!(parse_context_spec(&unknown, resolve), Err(ContextSpecError::Reference { .. })));
        let short = text.replacen("ip_T\n", "ip_T\n0 0\n", 1);
        assert!(parse_context_spec(&short, resolve).is_err());
    }
}
