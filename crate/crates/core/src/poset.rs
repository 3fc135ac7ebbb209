//! Finite posets: downset lattices and isomorphism by backtracking.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poset {
    n: usize,
    le: Vec<bool>,
}

impl Poset {
    /// Builds from a relation and checks reflexivity, antisymmetry and
    /// transitivity. Returns `None` if the relation is not a partial order.
    pub fn new(n: usize, le: impl Fn(usize, usize) -> bool) -> Option<Self> {
        let mut table = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = le(a, b);
            }
        }
        let p = Poset { n, le: table };
        p.is_partial_order().then_some(p)
    }

    fn is_partial_order(&self) -> bool {
        let n = self.n;
        (0..n).all(|a| self.le(a, a))
            && (0..n).all(|a| (0..n).all(|b| a == b || !(self.le(a, b) && self.le(b, a))))
            && (0..n).all(|a| (0..n).all(|b| !self.le(a, b) || (0..n).all(|c| !self.le(b, c) || self.le(a, c))))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a * self.n + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le(a, b)
    }

    pub fn down_size(&self, a: usize) -> usize {
        (0..self.n).filter(|&b| self.le(b, a)).count()
    }

    pub fn up_size(&self, a: usize) -> usize {
        (0..self.n).filter(|&b| self.le(a, b)).count()
    }

    pub fn is_chain(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.le(a, b) || self.le(b, a)))
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.n).find(|&m| (0..self.n).all(|a| self.le(a, m)))
    }

    /// All downsets (including the empty one), each as a membership vector.
    pub fn downsets(&self) -> Vec<Vec<bool>> {
        // Elements in a linear extension: a downset is decided greedily.
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&a| self.down_size(a));
        let mut out = Vec::new();
        let mut current = vec![false; self.n];
        self.extend_downsets(&order, 0, &mut current, &mut out);
        out.sort();
        out
    }

    fn extend_downsets(&self, order: &[usize], i: usize, cur: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if i == order.len() {
            out.push(cur.clone());
            return;
        }
        let a = order[i];
        self.extend_downsets(order, i + 1, cur, out);
        // `a` may join only if everything strictly below it is present.
        if (0..self.n).all(|b| !self.lt(b, a) || cur[b]) {
            cur[a] = true;
            self.extend_downsets(order, i + 1, cur, out);
            cur[a] = false;
        }
    }

    /// The lattice of downsets ordered by inclusion.
    pub fn downset_lattice(&self) -> Poset {
        let sets = self.downsets();
        Poset::new(sets.len(), |i, j| sets[i].iter().zip(&sets[j]).all(|(&a, &b)| !a || b))
            .expect("inclusion is a partial order")
    }

    /// An order isomorphism `self -> other` if one exists.
    pub fn isomorphism(&self, other: &Poset) -> Option<Vec<usize>> {
        if self.n != other.n {
            return None;
        }
        let sig = |p: &Poset, a: usize| (p.down_size(a), p.up_size(a));
        let mut mine: Vec<_> = (0..self.n).map(|a| sig(self, a)).collect();
        let mut theirs: Vec<_> = (0..other.n).map(|a| sig(other, a)).collect();
        let candidates: Vec<Vec<usize>> =
            (0..self.n).map(|a| (0..other.n).filter(|&b| mine[a] == theirs[b]).collect()).collect();
        mine.sort();
        theirs.sort();
        if mine != theirs {
            return None;
        }
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&a| candidates[a].len());
        let mut map = vec![usize::MAX; self.n];
        let mut used = vec![false; other.n];
        self.iso_step(other, &order, 0, &candidates, &mut map, &mut used).then_some(map)
    }

    fn iso_step(
        &self,
        other: &Poset,
        order: &[usize],
        i: usize,
        cands: &[Vec<usize>],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let a = order[i];
        for &b in &cands[a] {
            if used[b] {
                continue;
            }
            let consistent = order[..i]
                .iter()
                .all(|&c| self.le(a, c) == other.le(b, map[c]) && self.le(c, a) == other.le(map[c], b));
            if !consistent {
                continue;
            }
            map[a] = b;
            used[b] = true;
            if self.iso_step(other, order, i + 1, cands, map, used) {
                return true;
            }
            used[b] = false;
            map[a] = usize::MAX;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Poset {
        Poset::new(n, |a, b| a <= b).unwrap()
    }

    #[test]
    fn chain_downsets() {
        assert_eq!(chain(2).downsets().len(), 3);
        assert!(chain(2).downset_lattice().is_chain());
        assert!(chain(2).downset_lattice().isomorphism(&chain(3)).is_some());
    }

    #[test]
    fn antichain_downsets_form_boolean_lattice() {
        let anti = Poset::new(2, |a, b| a == b).unwrap();
        let lat = anti.downset_lattice();
        assert_eq!(lat.size(), 4);
        assert!(!lat.is_chain());
        assert!(anti.isomorphism(&chain(2)).is_none());
    }

    #[test]
    fn rejects_non_order() {
        assert!(Poset::new(2, |_, _| true).is_none());
    }

    #[test]
    fn finds_nontrivial_isomorphism() {
        // V shape: 0 below 1 and 2, relabelled with bottom at index 2
        let v = Poset::new(3, |a, b| a == b || a == 0).unwrap();
        let w = Poset::new(3, |a, b| a == b || a == 2).unwrap();
        let iso = v.isomorphism(&w).unwrap();
        assert_eq!(iso[0], 2);
    }
}
