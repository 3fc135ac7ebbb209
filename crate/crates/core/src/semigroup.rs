//! Finite inverse semigroups stored as dense multiplication tables.
//!
//! Elements are the indices `0..n`. The involution is never supplied by the
//! caller: it is recovered from the table during validation, which is also
//! where uniqueness of inverses gets checked.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("empty multiplication table")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    RowLength { row: usize, len: usize, expected: usize },
    #[error("entry ({row}, {col}) = {value} is out of range for {n} elements")]
    OutOfRange { row: usize, col: usize, value: usize, n: usize },
    #[error("{got} names supplied for {expected} elements")]
    NameCount { got: usize, expected: usize },
    #[error("not associative: ({0}{1}){2} != {0}({1}{2})")]
    NotAssociative(usize, usize, usize),
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("element {0} has more than one inverse")]
    NonUniqueInverse(usize),
    #[error("idempotents {0} and {1} do not commute")]
    IdempotentsDoNotCommute(usize, usize),
    #[error("not a group: {0} idempotents")]
    NotAGroup(usize),
    #[error("subset is not closed under multiplication and inversion")]
    NotClosed,
}

/// A validated finite inverse semigroup.
#[derive(Clone, Debug)]
pub struct InverseSemigroup {
    n: usize,
    mult: Vec<usize>,
    inv: Vec<usize>,
    idempotents: Vec<usize>,
    names: Option<Vec<String>>,
}

impl PartialEq for InverseSemigroup {
    /// Table equality. Names are display-only and do not take part.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.mult == other.mult
    }
}

impl Eq for InverseSemigroup {}

impl InverseSemigroup {
    /// Validates a square table. Rejects non-associative tables, elements
    /// without an inverse or with several, and non-commuting idempotents.
    pub fn from_table(table: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self, ValidationError> {
        let n = table.len();
        if n == 0 {
            return Err(ValidationError::Empty);
        }
        let mut mult = Vec::with_capacity(n * n);
        for (row, entries) in table.into_iter().enumerate() {
            if entries.len() != n {
                return Err(ValidationError::RowLength { row, len: entries.len(), expected: n });
            }
            mult.extend(entries);
        }
        Self::from_flat(n, mult, names)
    }

    pub fn from_flat(n: usize, mult: Vec<usize>, names: Option<Vec<String>>) -> Result<Self, ValidationError> {
        if n == 0 {
            return Err(ValidationError::Empty);
        }
        if mult.len() != n * n {
            return Err(ValidationError::RowLength { row: 0, len: mult.len(), expected: n * n });
        }
        if let Some(&value) = mult.iter().find(|&&v| v >= n) {
            let pos = mult.iter().position(|&v| v >= n).unwrap_or(0);
            return Err(ValidationError::OutOfRange { row: pos / n, col: pos % n, value, n });
        }
        if let Some(ref names) = names {
            if names.len() != n {
                return Err(ValidationError::NameCount { got: names.len(), expected: n });
            }
        }
        let m = |a: usize, b: usize| mult[a * n + b];
        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                for c in 0..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return Err(ValidationError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for s in 0..n {
            let mut found = None;
            for t in 0..n {
                if m(m(s, t), s) == s && m(m(t, s), t) == t {
                    if found.is_some() {
                        return Err(ValidationError::NonUniqueInverse(s));
                    }
                    found = Some(t);
                }
            }
            inv[s] = found.ok_or(ValidationError::NoInverse(s))?;
        }
        let idempotents: Vec<usize> = (0..n).filter(|&e| m(e, e) == e).collect();
        for (i, &e) in idempotents.iter().enumerate() {
            for &f in &idempotents[i + 1..] {
                if m(e, f) != m(f, e) {
                    return Err(ValidationError::IdempotentsDoNotCommute(e, f));
                }
            }
        }
        Ok(InverseSemigroup { n, mult, inv, idempotents, names })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.n + b]
    }

    pub fn mul3(&self, a: usize, b: usize, c: usize) -> usize {
        self.mul(self.mul(a, b), c)
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.mul(a, a) == a
    }

    /// Idempotents in increasing index order.
    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    /// `s* s`
    pub fn dom(&self, s: usize) -> usize {
        self.mul(self.inv(s), s)
    }

    /// `s s*`
    pub fn ran(&self, s: usize) -> usize {
        self.mul(s, self.inv(s))
    }

    /// Natural partial order: `s <= t` iff `s = t s* s`.
    pub fn le(&self, s: usize, t: usize) -> bool {
        self.mul(t, self.dom(s)) == s
    }

    pub fn zero(&self) -> Option<usize> {
        self.elements().find(|&z| self.elements().all(|s| self.mul(z, s) == z && self.mul(s, z) == z))
    }

    pub fn identity(&self) -> Option<usize> {
        self.elements().find(|&u| self.elements().all(|s| self.mul(u, s) == s && self.mul(s, u) == s))
    }

    pub fn is_group(&self) -> bool {
        self.idempotents.len() == 1
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn name(&self, a: usize) -> String {
        match &self.names {
            Some(names) => names[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, ValidationError> {
        if names.len() != self.n {
            return Err(ValidationError::NameCount { got: names.len(), expected: self.n });
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn without_names(mut self) -> Self {
        self.names = None;
        self
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mult.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// `{ab : a in A, b in B}`
    pub fn product_set(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> BTreeSet<usize> {
        a.iter().flat_map(|&x| b.iter().map(move |&y| self.mul(x, y))).collect()
    }

    pub fn all(&self) -> BTreeSet<usize> {
        self.elements().collect()
    }

    /// `SeS` as a set.
    pub fn principal_ideal(&self, e: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for a in self.elements() {
            let ae = self.mul(a, e);
            for b in self.elements() {
                out.insert(self.mul(ae, b));
            }
        }
        out
    }

    pub fn is_closed(&self, elems: &[usize]) -> bool {
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        elems.iter().all(|&a| set.contains(&self.inv(a)) && elems.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// The inverse subsemigroup on a closed subset, re-indexed in the order
    /// of `elems` after sorting. Returns the embedding into `self`.
    pub fn restrict(&self, elems: &[usize]) -> Result<(InverseSemigroup, Vec<usize>), ValidationError> {
        let mut embed: Vec<usize> = elems.to_vec();
        embed.sort_unstable();
        embed.dedup();
        if embed.is_empty() {
            return Err(ValidationError::Empty);
        }
        if !self.is_closed(&embed) {
            return Err(ValidationError::NotClosed);
        }
        let mut index = vec![usize::MAX; self.n];
        for (i, &e) in embed.iter().enumerate() {
            index[e] = i;
        }
        let k = embed.len();
        let mut mult = Vec::with_capacity(k * k);
        for &a in &embed {
            for &b in &embed {
                mult.push(index[self.mul(a, b)]);
            }
        }
        let names = self.names.as_ref().map(|ns| embed.iter().map(|&e| ns[e].clone()).collect());
        Ok((InverseSemigroup::from_flat(k, mult, names)?, embed))
    }

    /// Serializes to the line format read by [`InverseSemigroup::parse_spec`].
    pub fn to_spec_string(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        if let Some(names) = &self.names {
            out.push_str("names=");
            out.push_str(&names.join(","));
            out.push('\n');
        }
        for row in self.mult.chunks(self.n) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses `n=<count>`, an optional `names=<a,b,...>` line and `n` rows
    /// of `n` space-separated indices.
    pub fn parse_spec(text: &str) -> Result<Self, SpecError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (lno, header) = lines.next().ok_or(SpecError::Parse { line: 1, col: 1, expected: "`n=<count>`".into() })?;
        let n: usize = header
            .trim()
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| SpecError::Parse { line: lno + 1, col: 1, expected: "`n=<count>`".into() })?;
        let mut names = None;
        let mut rows = Vec::with_capacity(n);
        for (lno, line) in lines {
            if rows.is_empty() && names.is_none() {
                if let Some(list) = line.trim().strip_prefix("names=") {
                    names = Some(list.split(',').map(|s| s.trim().to_string()).collect::<Vec<_>>());
                    continue;
                }
            }
            if rows.len() == n {
                return Err(SpecError::Parse { line: lno + 1, col: 1, expected: "end of input".into() });
            }
            let mut row = Vec::with_capacity(n);
            let mut col = 1;
            for tok in line.split(' ') {
                if tok.is_empty() {
                    col += 1;
                    continue;
                }
                let v: usize = tok.parse().map_err(|_| SpecError::Parse {
                    line: lno + 1,
                    col,
                    expected: "element index".into(),
                })?;
                row.push(v);
                col += tok.len() + 1;
            }
            if row.len() != n {
                return Err(SpecError::Parse {
                    line: lno + 1,
                    col,
                    expected: format!("{n} entries, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(SpecError::Parse {
                line: text.lines().count() + 1,
                col: 1,
                expected: format!("{n} rows, found {}", rows.len()),
            });
        }
        Ok(InverseSemigroup::from_table(rows, names)?)
    }
}

impl fmt::Display for InverseSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.elements().map(|a| self.name(a).len()).max().unwrap_or(1);
        write!(f, "{:>width$} |", "")?;
        for b in self.elements() {
            write!(f, " {:>width$}", self.name(b))?;
        }
        writeln!(f)?;
        for a in self.elements() {
            write!(f, "{:>width$} |", self.name(a))?;
            for b in self.elements() {
                write!(f, " {:>width$}", self.name(self.mul(a, b)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("line {line}, column {col}: expected {expected}")]
    Parse { line: usize, col: usize, expected: String },
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

/// An inverse semigroup with exactly one idempotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    sg: InverseSemigroup,
    identity: usize,
}

impl Group {
    pub fn new(sg: InverseSemigroup) -> Result<Self, ValidationError> {
        if !sg.is_group() {
            return Err(ValidationError::NotAGroup(sg.idempotents().len()));
        }
        let identity = sg.idempotents()[0];
        Ok(Group { sg, identity })
    }

    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, ValidationError> {
        Group::new(InverseSemigroup::from_table(table, None)?)
    }

    pub fn trivial() -> Self {
        Group::cyclic(1)
    }

    /// `Z/n` with element `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Group::from_table(table).expect("cyclic group table is valid")
    }

    /// Klein four-group `Z/2 x Z/2` (bitwise xor on `0..4`).
    pub fn klein() -> Self {
        let table = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        Group::from_table(table).expect("klein table is valid")
    }

    pub fn order(&self) -> usize {
        self.sg.size()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.sg.mul(a, b)
    }

    pub fn inv(&self, a: usize) -> usize {
        self.sg.inv(a)
    }

    pub fn as_semigroup(&self) -> &InverseSemigroup {
        &self.sg
    }

    pub fn into_semigroup(self) -> InverseSemigroup {
        self.sg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b5_table() -> Vec<Vec<usize>> {
        // E11 E12 E21 E22 0
        vec![vec![0, 1, 4, 4, 4], vec![4, 4, 0, 1, 4], vec![2, 3, 4, 4, 4], vec![4, 4, 2, 3, 4], vec![4, 4, 4, 4, 4]]
    }

    #[test]
    fn b5_validates_with_expected_involution() {
        let s = InverseSemigroup::from_table(b5_table(), None).unwrap();
        assert_eq!(s.size(), 5);
        assert_eq!((0..5).map(|a| s.inv(a)).collect::<Vec<_>>(), vec![0, 2, 1, 3, 4]);
        assert_eq!(s.idempotents(), &[0, 3, 4]);
        assert_eq!(s.zero(), Some(4));
        assert_eq!(s.identity(), None);
    }

    #[test]
    fn trivial_table_is_a_group() {
        let s = InverseSemigroup::from_table(vec![vec![0]], None).unwrap();
        assert!(s.is_group());
        assert!(Group::new(s).is_ok());
    }

    #[test]
    fn left_zero_band_has_non_unique_inverses() {
        let err = InverseSemigroup::from_table(vec![vec![0, 0], vec![1, 1]], None).unwrap_err();
        assert_eq!(err, ValidationError::NonUniqueInverse(0));
    }

    #[test]
    fn rejects_non_associative_table() {
        // a*b = b, b*a = a, a*a = b, b*b = a: (aa)a = ba = a, a(aa) = ab = b
        let err = InverseSemigroup::from_table(vec![vec![1, 1], vec![0, 0]], None).unwrap_err();
        assert!(matches!(err, ValidationError::NotAssociative(..)));
    }

    #[test]
    fn rejects_missing_inverse() {
        // {0,1} with xy = 1 for all: 0 has no t with 0t0 = 0.
        let err = InverseSemigroup::from_table(vec![vec![1, 1], vec![1, 1]], None).unwrap_err();
        assert_eq!(err, ValidationError::NoInverse(0));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(InverseSemigroup::from_table(vec![], None).unwrap_err(), ValidationError::Empty);
        assert!(matches!(
            InverseSemigroup::from_table(vec![vec![0, 0], vec![0]], None).unwrap_err(),
            ValidationError::RowLength { row: 1, .. }
        ));
        assert!(matches!(
            InverseSemigroup::from_table(vec![vec![0, 2], vec![0, 0]], None).unwrap_err(),
            ValidationError::OutOfRange { value: 2, .. }
        ));
    }

    #[test]
    fn spec_format_round_trips() {
        let names = ["E11", "E12", "E21", "E22", "0"].iter().map(|s| s.to_string()).collect();
        let s = InverseSemigroup::from_table(b5_table(), Some(names)).unwrap();
        let text = s.to_spec_string();
        assert_eq!(text.lines().next(), Some("n=5"));
        let back = InverseSemigroup::parse_spec(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_spec_string(), text);
    }

    #[test]
    fn parse_reports_location_of_short_row() {
        let err = InverseSemigroup::parse_spec("n=2\n0 1\n1\n").unwrap_err();
        assert!(matches!(err, SpecError::Parse { line: 3, .. }), "{err:?}");
        let err = InverseSemigroup::parse_spec("n=2\n0 x\n1 0\n").unwrap_err();
        assert_eq!(err, SpecError::Parse { line: 2, col: 3, expected: "element index".into() });
    }

    #[test]
    fn restrict_reindexes_closed_subset() {
        let s = InverseSemigroup::from_table(b5_table(), None).unwrap();
        let (t, embed) = s.restrict(&[4, 0]).unwrap();
        assert_eq!(embed, vec![0, 4]);
        assert_eq!(t.table(), vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(s.restrict(&[1, 4]).unwrap_err(), ValidationError::NotClosed);
    }
}
