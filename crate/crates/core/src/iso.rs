//! Isomorphism search between finite inverse semigroups.
//!
//! Backtracking over images of elements, with every assignment propagated
//! along products and inverses of already-mapped elements. In practice only
//! a generating set is ever guessed; the rest is forced.

use std::collections::BTreeSet;

use crate::semigroup::InverseSemigroup;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Signature {
    idempotent: bool,
    group_element: bool,
    below: usize,
    above: usize,
    monogenic: usize,
    right_ideal: usize,
    left_ideal: usize,
}

fn signature(s: &InverseSemigroup, a: usize) -> Signature {
    let mut seen = BTreeSet::new();
    let mut p = a;
    while seen.insert(p) {
        p = s.mul(p, a);
    }
    Signature {
        idempotent: s.is_idempotent(a),
        group_element: s.dom(a) == s.ran(a),
        below: s.elements().filter(|&b| s.le(b, a)).count(),
        above: s.elements().filter(|&b| s.le(a, b)).count(),
        monogenic: seen.len(),
        right_ideal: s.elements().map(|b| s.mul(a, b)).collect::<BTreeSet<_>>().len(),
        left_ideal: s.elements().map(|b| s.mul(b, a)).collect::<BTreeSet<_>>().len(),
    }
}

struct Search<'a> {
    s: &'a InverseSemigroup,
    t: &'a InverseSemigroup,
    sig_s: Vec<Signature>,
    sig_t: Vec<Signature>,
    map: Vec<usize>,
    rev: Vec<usize>,
    trail: Vec<usize>,
}

impl Search<'_> {
    fn assign(&mut self, a: usize, b: usize) -> bool {
        let mut queue = vec![(a, b)];
        while let Some((a, b)) = queue.pop() {
            if self.map[a] != usize::MAX {
                if self.map[a] != b {
                    return false;
                }
                continue;
            }
            if self.rev[b] != usize::MAX || self.sig_s[a] != self.sig_t[b] {
                return false;
            }
            self.map[a] = b;
            self.rev[b] = a;
            self.trail.push(a);
            queue.push((self.s.inv(a), self.t.inv(b)));
            for c in 0..self.s.size() {
                let mc = self.map[c];
                if mc == usize::MAX {
                    continue;
                }
                queue.push((self.s.mul(a, c), self.t.mul(b, mc)));
                queue.push((self.s.mul(c, a), self.t.mul(mc, b)));
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let a = self.trail.pop().unwrap();
            self.rev[self.map[a]] = usize::MAX;
            self.map[a] = usize::MAX;
        }
    }

    fn run(&mut self, order: &[usize]) -> bool {
        let Some(&a) = order.iter().find(|&&a| self.map[a] == usize::MAX) else {
            return true;
        };
        for b in 0..self.t.size() {
            if self.rev[b] != usize::MAX || self.sig_s[a] != self.sig_t[b] {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(a, b) && self.run(order) {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

/// An isomorphism `s -> t` as an image vector, if one exists.
pub fn isomorphism(s: &InverseSemigroup, t: &InverseSemigroup) -> Option<Vec<usize>> {
    if s.size() != t.size() || s.idempotents().len() != t.idempotents().len() {
        return None;
    }
    let sig_s: Vec<_> = s.elements().map(|a| signature(s, a)).collect();
    let sig_t: Vec<_> = t.elements().map(|a| signature(t, a)).collect();
    let (mut x, mut y) = (sig_s.clone(), sig_t.clone());
    x.sort();
    y.sort();
    if x != y {
        return None;
    }
    // Elements with rare signatures first; ties broken towards elements
    // high in the natural order, which tend to generate more.
    let mut order: Vec<usize> = s.elements().collect();
    order.sort_by_key(|&a| {
        let rarity = sig_s.iter().filter(|g| **g == sig_s[a]).count();
        (rarity, std::cmp::Reverse(sig_s[a].below), a)
    });
    let mut search = Search {
        s,
        t,
        sig_s,
        sig_t,
        map: vec![usize::MAX; s.size()],
        rev: vec![usize::MAX; t.size()],
        trail: Vec::new(),
    };
    if search.run(&order) {
        let map = search.map;
        debug_assert!(is_isomorphism(s, t, &map));
        Some(map)
    } else {
        None
    }
}

pub fn are_isomorphic(s: &InverseSemigroup, t: &InverseSemigroup) -> bool {
    isomorphism(s, t).is_some()
}

/// Checks that `map` is a bijective homomorphism `s -> t`.
pub fn is_isomorphism(s: &InverseSemigroup, t: &InverseSemigroup, map: &[usize]) -> bool {
    if map.len() != s.size() || s.size() != t.size() {
        return false;
    }
    let mut hit = vec![false; t.size()];
    for &b in map {
        if b >= t.size() || std::mem::replace(&mut hit[b], true) {
            return false;
        }
    }
    s.elements().all(|a| s.elements().all(|b| map[s.mul(a, b)] == t.mul(map[a], map[b])))
}

/// Checks that `map` is a homomorphism `s -> t`.
pub fn is_homomorphism(s: &InverseSemigroup, t: &InverseSemigroup, map: &[usize]) -> bool {
    map.len() == s.size() && s.elements().all(|a| s.elements().all(|b| map[s.mul(a, b)] == t.mul(map[a], map[b])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::Group;

    fn relabel(s: &InverseSemigroup, perm: &[usize]) -> InverseSemigroup {
        // perm: old -> new
        let n = s.size();
        let mut table = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a]][perm[b]] = perm[s.mul(a, b)];
            }
        }
        InverseSemigroup::from_table(table, None).unwrap()
    }

    #[test]
    fn finds_relabelled_copy() {
        let g = Group::cyclic(6).into_semigroup();
        let h = relabel(&g, &[3, 5, 0, 1, 4, 2]);
        let iso = isomorphism(&g, &h).unwrap();
        assert!(is_isomorphism(&g, &h, &iso));
    }

    #[test]
    fn separates_z4_from_klein() {
        let z4 = Group::cyclic(4).into_semigroup();
        let k = Group::klein().into_semigroup();
        assert!(isomorphism(&z4, &k).is_none());
    }
}
