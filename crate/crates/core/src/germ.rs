//! Quotient sets with representative tracking.

use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSet;
use crate::error::Violation;

/// A partition of `0..n` into classes numbered by least member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermSpace {
    class_of: Vec<usize>,
    reps: Vec<usize>,
}

impl GermSpace {
    pub fn from_dsu(dsu: &mut DisjointSet) -> Self {
        let (class_of, count) = dsu.canonical_labels();
        let mut reps = vec![usize::MAX; count];
        for (x, &c) in class_of.iter().enumerate() {
            if reps[c] == usize::MAX {
                reps[c] = x;
            }
        }
        GermSpace { class_of, reps }
    }

    /// The classes of a relation that is claimed to already be an
    /// equivalence. Transitivity is checked: every pair landing in the same
    /// class must be directly related.
    pub fn from_equivalence(n: usize, mut related: impl FnMut(usize, usize) -> bool) -> Result<Self, Violation> {
        let mut dsu = DisjointSet::new(n);
        let mut rel = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                if related(a, b) {
                    rel[a * n + b] = true;
                    dsu.union(a, b);
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if dsu.same(a, b) && !rel[a * n + b] {
                    return Err(Violation::new("relation is an equivalence", [a, b]));
                }
            }
        }
        Ok(GermSpace::from_dsu(&mut dsu))
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn labels(&self) -> &[usize] {
        &self.class_of
    }

    /// Least member of class `c`.
    pub fn rep(&self, c: usize) -> usize {
        self.reps[c]
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn members(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.class_of.iter().enumerate().filter(move |(_, &k)| k == c).map(|(x, _)| x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_transitive_relation() {
        // 0~1, 1~2 but not 0~2
        let rel = |a: usize, b: usize| a == b || a.abs_diff(b) == 1;
        assert!(GermSpace::from_equivalence(3, rel).is_err());
        let parity = |a: usize, b: usize| a % 2 == b % 2;
        let g = GermSpace::from_equivalence(5, parity).unwrap();
        assert_eq!(g.class_count(), 2);
        assert_eq!(g.reps(), &[0, 1]);
        assert_eq!(g.members(1).collect::<Vec<_>>(), vec![1, 3]);
    }
}
