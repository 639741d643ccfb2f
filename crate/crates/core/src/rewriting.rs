//! Word rewriting: single-step neighbours, equivalence classes, spanning and
//! the bounded implication test between relation sets.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rayon::prelude::*;

use crate::coxeter::{Gen, TwistedSystem, Word};
use crate::error::{Error, Result};
use crate::involutions::{Mode, TwistedInvolution, WordRelation};

/// Relations indexed by side, so a rewrite is a hash lookup per position.
#[derive(Clone, Debug, Default)]
pub struct RelationIndex {
    anywhere: HashMap<Word, Vec<Word>>,
    anywhere_lens: BTreeSet<usize>,
    prefix: HashMap<Word, Vec<Word>>,
    prefix_lens: BTreeSet<usize>,
    whole: HashMap<Word, Vec<Word>>,
    count: usize,
}

impl RelationIndex {
    pub fn new<'a>(rels: impl IntoIterator<Item = &'a WordRelation>) -> Self {
        let mut idx = Self::default();
        for r in rels {
            idx.insert(r);
        }
        idx
    }

    pub fn insert(&mut self, r: &WordRelation) {
        let (map, lens) = match r.mode {
            Mode::Anywhere => (&mut self.anywhere, Some(&mut self.anywhere_lens)),
            Mode::Prefix => (&mut self.prefix, Some(&mut self.prefix_lens)),
            Mode::Whole => (&mut self.whole, None),
        };
        for (a, b) in [(&r.left, &r.right), (&r.right, &r.left)] {
            let entry = map.entry(a.clone()).or_default();
            if !entry.contains(b) {
                entry.push(b.clone());
            }
        }
        if let Some(lens) = lens {
            lens.insert(r.left.len());
            lens.insert(r.right.len());
        }
        self.count += 1;
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Calls `f` on every single-step rewrite of `w`.
    pub fn for_each_neighbor(&self, w: &[Gen], mut f: impl FnMut(Word)) {
        for &len in &self.anywhere_lens {
            if len > w.len() {
                break;
            }
            for i in 0..=w.len() - len {
                if let Some(reps) = self.anywhere.get(&w[i..i + len]) {
                    for rep in reps {
                        let mut out = Vec::with_capacity(w.len() - len + rep.len());
                        out.extend_from_slice(&w[..i]);
                        out.extend_from_slice(rep);
                        out.extend_from_slice(&w[i + len..]);
                        f(out);
                    }
                }
            }
        }
        for &len in &self.prefix_lens {
            if len > w.len() {
                break;
            }
            if let Some(reps) = self.prefix.get(&w[..len]) {
                for rep in reps {
                    let mut out = Vec::with_capacity(w.len() - len + rep.len());
                    out.extend_from_slice(rep);
                    out.extend_from_slice(&w[len..]);
                    f(out);
                }
            }
        }
        if let Some(reps) = self.whole.get(w) {
            for rep in reps {
                f(rep.clone());
            }
        }
    }

    pub fn neighbors(&self, w: &[Gen]) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        self.for_each_neighbor(w, |v| {
            if v != w {
                out.insert(v);
            }
        });
        out
    }

    /// Breadth-first closure of `w`. Fails with the partial class when it
    /// grows past `limit`.
    pub fn class(&self, w: &[Gen], limit: usize) -> Result<HashSet<Word>> {
        let mut seen: HashSet<Word> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(w.to_vec());
        queue.push_back(w.to_vec());
        while let Some(x) = queue.pop_front() {
            let mut overflow = false;
            self.for_each_neighbor(&x, |y| {
                if !seen.contains(&y) {
                    seen.insert(y.clone());
                    queue.push_back(y);
                    if seen.len() > limit {
                        overflow = true;
                    }
                }
            });
            if overflow {
                return Err(Error::ClassLimit {
                    limit,
                    partial: seen.into_iter().collect(),
                });
            }
        }
        Ok(seen)
    }

    /// Whether `target` is reachable from `start`, exploring at most `limit`
    /// words.
    pub fn connects(&self, start: &[Gen], target: &[Gen], limit: usize) -> Result<bool> {
        if start == target {
            return Ok(true);
        }
        let mut seen: HashSet<Word> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.to_vec());
        queue.push_back(start.to_vec());
        while let Some(x) = queue.pop_front() {
            let mut found = false;
            self.for_each_neighbor(&x, |y| {
                if found || seen.contains(&y) {
                    return;
                }
                if y == target {
                    found = true;
                }
                seen.insert(y.clone());
                queue.push_back(y);
            });
            if found {
                return Ok(true);
            }
            if seen.len() > limit {
                return Err(Error::ClassLimit {
                    limit,
                    partial: seen.into_iter().collect(),
                });
            }
        }
        Ok(false)
    }

    /// True iff `words` is exactly one class: the class of its first member
    /// equals the set, so every rewrite of a member stays inside.
    pub fn spans(&self, words: &[Word]) -> bool {
        let Some(first) = words.first() else {
            return true;
        };
        let set: HashSet<&Word> = words.iter().collect();
        let mut seen: HashSet<Word> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(first.clone());
        queue.push_back(first.clone());
        let mut escaped = false;
        while let Some(x) = queue.pop_front() {
            self.for_each_neighbor(&x, |y| {
                if escaped || seen.contains(&y) {
                    return;
                }
                if !set.contains(&y) {
                    escaped = true;
                    return;
                }
                seen.insert(y.clone());
                queue.push_back(y);
            });
            if escaped {
                return false;
            }
        }
        seen.len() == set.len()
    }

    /// Partition of `words` into classes, each sorted; classes may leak
    /// outside `words` when the relations do not preserve it.
    pub fn classes_within(&self, words: &[Word]) -> Vec<Vec<Word>> {
        let set: HashSet<&Word> = words.iter().collect();
        let mut done: HashSet<Word> = HashSet::new();
        let mut out = Vec::new();
        for w in words {
            if done.contains(w) {
                continue;
            }
            let mut class = vec![w.clone()];
            done.insert(w.clone());
            let mut k = 0;
            while k < class.len() {
                let x = class[k].clone();
                k += 1;
                self.for_each_neighbor(&x, |y| {
                    if set.contains(&y) && !done.contains(&y) {
                        done.insert(y.clone());
                        class.push(y);
                    }
                });
            }
            out.push(class);
        }
        out
    }
}

/// All single-step rewrites of `w`.
pub fn neighbors(w: &[Gen], rels: &[WordRelation]) -> BTreeSet<Word> {
    RelationIndex::new(rels).neighbors(w)
}

/// The equivalence class of `w`, sorted canonically.
pub fn equivalence_class(
    sys: &TwistedSystem,
    w: &[Gen],
    rels: &[WordRelation],
    limit: usize,
) -> Result<Vec<Word>> {
    let mut out: Vec<Word> = RelationIndex::new(rels)
        .class(w, limit)?
        .into_iter()
        .collect();
    sys.sort_words(&mut out);
    Ok(out)
}

pub fn spans(words: &[Word], rels: &[WordRelation]) -> bool {
    RelationIndex::new(rels).spans(words)
}

/// Outcome of the bounded implication test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Implication {
    pub holds: bool,
    /// Extension depth that was checked.
    pub depth: usize,
    /// Number of extended word pairs tested.
    pub pairs_checked: usize,
    /// The first extension suffix that failed, if any.
    pub counterexample: Option<Word>,
}

/// Exploration cap for a single connectivity search.
pub const CLASS_LIMIT: usize = 2_000_000;

/// Follows `word` by up-steps from the identity; `None` unless it is an
/// involution word.
pub fn involution_of(sys: &TwistedSystem, word: &[Gen]) -> Option<TwistedInvolution> {
    let mut y = TwistedInvolution::identity(sys);
    for &s in word {
        if y.element.is_right_descent(s) {
            return None;
        }
        y = y.up(sys, s);
    }
    Some(y)
}

/// Bounded check of `base ⇒ target`: the two sides of `target` must be
/// involution words of one z, and for every extension c of z by up to
/// `depth` up-steps, left·c must reach right·c through `base`.
pub fn implies(
    sys: &TwistedSystem,
    base: &RelationIndex,
    target: &WordRelation,
    depth: usize,
) -> Result<Implication> {
    let zl = involution_of(sys, &target.left);
    let zr = involution_of(sys, &target.right);
    let z = match (zl, zr) {
        (Some(a), Some(b)) if a.element == b.element => a,
        _ => {
            return Err(Error::Precondition(format!(
                "{} is not a pair of involution words of one element",
                target.display(sys)
            )))
        }
    };
    // All extension suffixes up to the given depth.
    let mut exts: Vec<(Word, TwistedInvolution)> = vec![(Vec::new(), z)];
    let mut frontier = exts.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for (c, y) in &frontier {
            for s in sys.gens() {
                if y.element.is_right_descent(s) {
                    continue;
                }
                let mut c2 = c.clone();
                c2.push(s);
                next.push((c2, y.up(sys, s)));
            }
        }
        exts.extend(next.iter().cloned());
        frontier = next;
    }
    let results: Vec<Result<(Word, bool)>> = exts
        .par_iter()
        .map(|(c, _)| {
            let mut a = target.left.clone();
            a.extend(c);
            let mut b = target.right.clone();
            b.extend(c);
            Ok((c.clone(), base.connects(&a, &b, CLASS_LIMIT)?))
        })
        .collect();
    let mut counterexample = None;
    for r in results {
        let (c, ok) = r?;
        if !ok && counterexample.is_none() {
            counterexample = Some(c);
        }
    }
    Ok(Implication {
        holds: counterexample.is_none(),
        depth,
        pairs_checked: exts.len(),
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::preset;
    use crate::involutions::{braid_relations, hat_relations, Mode};

    #[test]
    fn braid_neighbors() {
        let sys = preset("A", 2, "id").unwrap();
        let n = neighbors(&[0, 1, 0], &braid_relations(&sys));
        assert_eq!(n.into_iter().collect::<Vec<_>>(), vec![vec![1, 0, 1]]);
    }

    #[test]
    fn example_chain_start() {
        let sys = preset("A", 3, "id").unwrap();
        let n = neighbors(&[0, 2, 1, 0], &hat_relations(&sys));
        assert_eq!(n.into_iter().collect::<Vec<_>>(), vec![vec![2, 0, 1, 0]]);
    }

    #[test]
    fn prefix_semantics() {
        let sys = preset("A", 3, "id").unwrap();
        let r = WordRelation::new(&sys, vec![0, 1], vec![1, 0], Mode::Prefix);
        let n = neighbors(&[1, 0, 2], std::slice::from_ref(&r));
        assert_eq!(n.into_iter().collect::<Vec<_>>(), vec![vec![0, 1, 2]]);
        assert!(neighbors(&[2, 1, 0], &[r]).is_empty());
    }

    #[test]
    fn classes_and_spanning() {
        let sys = preset("A", 2, "id").unwrap();
        let hat = hat_relations(&sys);
        assert_eq!(
            equivalence_class(&sys, &[0, 1], &hat, 100).unwrap(),
            vec![vec![0, 1], vec![1, 0]]
        );
        assert_eq!(
            equivalence_class(&sys, &[], &hat, 100).unwrap(),
            vec![Vec::<Gen>::new()]
        );
        assert!(spans(&[vec![]], &hat));
        assert!(!spans(&[vec![0, 1], vec![1, 0]], &braid_relations(&sys)));
    }

    #[test]
    fn class_limit_is_reported() {
        let sys = preset("A", 3, "id").unwrap();
        let err = equivalence_class(&sys, &[0, 2, 1, 0], &hat_relations(&sys), 3).unwrap_err();
        assert!(matches!(err, Error::ClassLimit { limit: 3, .. }));
    }

    #[test]
    fn bounded_implication() {
        let sys = preset("A", 3, "id").unwrap();
        let hat = RelationIndex::new(&hat_relations(&sys));
        let t = WordRelation::new(&sys, vec![0, 1, 2], vec![1, 0, 2], Mode::Prefix);
        assert!(implies(&sys, &hat, &t, 0).unwrap().holds);
        let a2 = preset("A", 2, "id").unwrap();
        let t = WordRelation::new(&a2, vec![0, 1], vec![1, 0], Mode::Prefix);
        assert!(
            !implies(&a2, &RelationIndex::default(), &t, 0)
                .unwrap()
                .holds
        );
        let bad = WordRelation::new(&a2, vec![0], vec![1], Mode::Prefix);
        assert!(implies(&a2, &RelationIndex::default(), &bad, 0).is_err());
    }
}
