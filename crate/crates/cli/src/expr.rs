//! Construction expressions.
//!
//! ```text
//! expr   := name | head "(" expr ("," expr)* ")"
//! name   := triv | trivial | Z<n> | K4 | SL2 | SL2z | chain3 | diamond | B5
//!         | any catalog name, e.g. "BR(Z2)" or "diamond*Z2"
//! head   := brandt(G, k)      Brandt semigroup over a group
//!         | semilattice(L)    L is chain<k>, chain3, diamond or SL2
//!         | chain(k)          k-element chain
//!         | sdp(E, G, A)      E ⋊ G with A = swap (diamond by Z2) or trivial
//!         | br(G)             Birget-Rhodes expansion
//!         | pfin(G)           finite subsets of G, crossed by G
//!         | mat(S, k)         k × k matrices over a monoid with zero
//!         | sym(k)            symmetric inverse monoid
//!         | zero(S) | one(S)  adjoin a zero or an identity
//!         | prod(S, T)        direct product
//! ```
//!
//! Group arguments accept `triv`, `Z<n>`, `K4` or any expression that
//! evaluates to a group. `SL2z` is the two-element semilattice, which is a
//! monoid with zero.

use morita_core::constructions::{
    adjoin_identity, adjoin_zero, b5, birget_rhodes_in_semidirect, build_birget_rhodes, build_brandt_with_limit,
    build_matrix_enlargement_with_limit, build_semidirect_product, build_symmetric_inverse_monoid_with_limit, catalog,
    chain, diamond, diamond_swap, direct_product, trivial_action, two_chain, ConstructionError,
};
use morita_core::{Group, InverseSemigroup};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("column {col}: expected {expected}")]
    Parse { col: usize, expected: String },
    #[error("column {col}: {source}")]
    Construction { col: usize, source: ConstructionError },
    #[error("column {col}: {message}")]
    Invalid { col: usize, message: String },
}

/// Evaluates an expression, refusing constructions with more than `limit`
/// elements.
pub fn evaluate(text: &str, limit: usize) -> Result<InverseSemigroup, ExprError> {
    Evaluator { limit }.semigroup(text, 1)
}

struct Evaluator {
    limit: usize,
}

struct Call<'a> {
    head: &'a str,
    args: Vec<(&'a str, usize)>,
}

/// Splits `head(a, b, ...)` at top-level commas, tracking columns.
fn split_call(text: &str, col: usize) -> Result<Option<Call<'_>>, ExprError> {
    let Some(open) = text.find('(') else { return Ok(None) };
    if !text.ends_with(')') {
        return Err(ExprError::Parse { col: col + text.len(), expected: "`)`".into() });
    }
    let head = text[..open].trim();
    let inner = &text[open + 1..text.len() - 1];
    let mut args = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                args.push(trimmed(inner, start, i, col + open + 1));
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(ExprError::Parse { col: col + open + 1 + i, expected: "balanced parentheses".into() });
        }
    }
    if depth != 0 {
        return Err(ExprError::Parse { col: col + text.len(), expected: "`)`".into() });
    }
    args.push(trimmed(inner, start, inner.len(), col + open + 1));
    Ok(Some(Call { head, args }))
}

fn trimmed(s: &str, start: usize, end: usize, base: usize) -> (&str, usize) {
    let piece = &s[start..end];
    let lead = piece.len() - piece.trim_start().len();
    (piece.trim(), base + start + lead)
}

fn number(text: &str, col: usize) -> Result<usize, ExprError> {
    text.parse().map_err(|_| ExprError::Parse { col, expected: "a positive integer".into() })
}

fn arity(call: &Call, n: usize, col: usize) -> Result<(), ExprError> {
    if call.args.len() != n {
        return Err(ExprError::Parse { col, expected: format!("{n} argument(s) to `{}`", call.head) });
    }
    Ok(())
}

impl Evaluator {
    fn named(&self, name: &str) -> Option<InverseSemigroup> {
        let sg = match name {
            "triv" | "trivial" => Group::trivial().into_semigroup(),
            "SL2" | "SL2z" => two_chain(),
            "chain3" => chain(3),
            "diamond" => diamond(),
            "B5" => b5(),
            "K4" => Group::klein().into_semigroup(),
            _ => {
                if let Some(n) = name.strip_prefix('Z').and_then(|n| n.parse::<usize>().ok()) {
                    return (n > 0).then(|| Group::cyclic(n).into_semigroup());
                }
                return catalog().into_iter().find(|e| e.name == name).map(|e| e.semigroup);
            }
        };
        Some(sg)
    }

    fn built<T>(&self, r: Result<T, ConstructionError>, col: usize) -> Result<T, ExprError> {
        r.map_err(|source| ExprError::Construction { col, source })
    }

    fn group(&self, text: &str, col: usize) -> Result<Group, ExprError> {
        let sg = self.semigroup(text, col)?;
        Group::new(sg).map_err(|e| ExprError::Invalid { col, message: format!("`{text}` is not a group: {e}") })
    }

    fn semigroup(&self, text: &str, col: usize) -> Result<InverseSemigroup, ExprError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(ExprError::Parse { col, expected: "an expression".into() });
        }
        if let Some(sg) = self.named(text) {
            return Ok(sg);
        }
        let Some(call) = split_call(text, col)? else {
            return Err(ExprError::Parse { col, expected: "a known name or `head(args)`".into() });
        };
        let arg = |i: usize| call.args[i];
        let sg = match call.head {
            "brandt" => {
                arity(&call, 2, col)?;
                let g = self.group(arg(0).0, arg(0).1)?;
                let k = number(arg(1).0, arg(1).1)?;
                self.built(build_brandt_with_limit(&g, k, self.limit), col)?
            }
            "semilattice" => {
                arity(&call, 1, col)?;
                let (name, c) = arg(0);
                match name.strip_prefix("chain").map(|k| k.parse::<usize>()) {
                    Some(Ok(k)) if k > 0 => chain(k),
                    _ if name == "diamond" || name == "SL2" => self.named(name).expect("named semilattice"),
                    _ => return Err(ExprError::Parse { col: c, expected: "chain<k>, diamond or SL2".into() }),
                }
            }
            "chain" => {
                arity(&call, 1, col)?;
                let k = number(arg(0).0, arg(0).1)?;
                if k == 0 {
                    return Err(ExprError::Parse { col: arg(0).1, expected: "a positive integer".into() });
                }
                chain(k)
            }
            "sdp" => {
                arity(&call, 3, col)?;
                let e = self.semigroup(arg(0).0, arg(0).1)?;
                let g = self.group(arg(1).0, arg(1).1)?;
                let action = match arg(2).0 {
                    "swap" => diamond_swap(),
                    "trivial" => trivial_action(&e, &g),
                    _ => return Err(ExprError::Parse { col: arg(2).1, expected: "`swap` or `trivial`".into() }),
                };
                self.built(build_semidirect_product(&e, &g, &action), col)?
            }
            "br" => {
                arity(&call, 1, col)?;
                self.built(build_birget_rhodes(&self.group(arg(0).0, arg(0).1)?), col)?
            }
            "pfin" => {
                arity(&call, 1, col)?;
                self.built(birget_rhodes_in_semidirect(&self.group(arg(0).0, arg(0).1)?), col)?.0
            }
            "mat" => {
                arity(&call, 2, col)?;
                let s = self.semigroup(arg(0).0, arg(0).1)?;
                let k = number(arg(1).0, arg(1).1)?;
                self.built(build_matrix_enlargement_with_limit(&s, k, self.limit), col)?.0
            }
            "sym" => {
                arity(&call, 1, col)?;
                let k = number(arg(0).0, arg(0).1)?;
                self.built(build_symmetric_inverse_monoid_with_limit(k, self.limit), col)?
            }
            "zero" | "one" => {
                arity(&call, 1, col)?;
                let s = self.semigroup(arg(0).0, arg(0).1)?;
                let r = if call.head == "zero" { adjoin_zero(&s) } else { adjoin_identity(&s) };
                self.built(r, col)?
            }
            "prod" => {
                arity(&call, 2, col)?;
                let s = self.semigroup(arg(0).0, arg(0).1)?;
                let t = self.semigroup(arg(1).0, arg(1).1)?;
                self.built(direct_product(&s, &t), col)?
            }
            other => return Err(ExprError::Parse { col, expected: format!("a known construction, not `{other}`") }),
        };
        if sg.size() > self.limit {
            return Err(ExprError::Invalid {
                col,
                message: format!("{} elements exceed the limit of {}", sg.size(), self.limit),
            });
        }
        Ok(sg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use morita_core::iso::are_isomorphic;

    #[test]
    fn brandt_over_trivial_is_b5() {
        let s = evaluate("brandt(triv,2)", 256).unwrap();
        assert!(are_isomorphic(&s, &b5()));
    }

    #[test]
    fn nested_expressions() {
        assert_eq!(evaluate("mat(SL2z, 2)", 256).unwrap().size(), 5);
        assert_eq!(evaluate("sdp(diamond,Z2,swap)", 256).unwrap().size(), 8);
        assert_eq!(evaluate("br(Z2)", 256).unwrap().size(), 3);
        assert_eq!(evaluate("semilattice(chain3)", 256).unwrap().size(), 3);
        assert_eq!(evaluate("prod(SL2, zero(Z2))", 256).unwrap().size(), 6);
        assert_eq!(evaluate("BR(Z3)", 256).unwrap().size(), 8);
        assert_eq!(evaluate("brandt(br(Z1), 2)", 256).unwrap().size(), 5);
    }

    #[test]
    fn errors_carry_columns() {
        assert_eq!(
            evaluate("brandt(triv,x)", 256),
            Err(ExprError::Parse { col: 13, expected: "a positive integer".into() })
        );
        assert!(matches!(evaluate("nope(1)", 256), Err(ExprError::Parse { col: 1, .. })));
        assert!(matches!(evaluate("brandt(B5,2)", 256), Err(ExprError::Invalid { col: 8, .. })));
        assert!(matches!(evaluate("sym(4)", 100), Err(ExprError::Construction { .. })));
        assert!(matches!(evaluate("chain(3", 256), Err(ExprError::Parse { .. })));
    }
}
