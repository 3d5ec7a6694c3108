//! Permutations in one-line notation, subwords, pattern statistics, and
//! reduced words.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// A permutation of `{1..n}` in one-line notation. `n = 0` gives the empty
/// permutation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    entries: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from a one-line word, rejecting repeated or
    /// out-of-range entries.
    pub fn from_oneline(word: &[usize]) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n];
        for &e in word {
            if e == 0 || e > n {
                return Err(Error::NotAPermutation(format!(
                    "entry {e} out of range 1..={n}"
                )));
            }
            if seen[e - 1] {
                return Err(Error::NotAPermutation(format!("entry {e} repeats")));
            }
            seen[e - 1] = true;
        }
        Ok(Permutation {
            entries: word.to_vec(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            entries: (1..=n).collect(),
        }
    }

    /// The longest element `n, n-1, ..., 1` of `S_n`.
    pub fn longest(n: usize) -> Self {
        Permutation {
            entries: (1..=n).rev().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// `w(i)`, 1-based.
    pub fn apply(&self, i: usize) -> usize {
        self.entries[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.entries.len()];
        for (i, &e) in self.entries.iter().enumerate() {
            inv[e - 1] = i + 1;
        }
        Permutation { entries: inv }
    }

    /// Coxeter length: the number of inversions.
    pub fn length(&self) -> usize {
        let n = self.entries.len();
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.entries[i] > self.entries[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// `w s_i`: the entries at positions `i` and `i+1` swapped (1-based,
    /// `1 <= i < n`).
    pub fn swap_positions(&self, i: usize) -> Self {
        let mut e = self.entries.clone();
        e.swap(i - 1, i);
        Permutation { entries: e }
    }

    /// The smallest position `i` with `w(i) < w(i+1)`.
    pub fn first_ascent(&self) -> Option<usize> {
        (1..self.entries.len()).find(|&i| self.entries[i - 1] < self.entries[i])
    }

    /// The largest position `i` with `w(i) < w(i+1)`.
    pub fn last_ascent(&self) -> Option<usize> {
        (1..self.entries.len())
            .rev()
            .find(|&i| self.entries[i - 1] < self.entries[i])
    }

    /// `p_u(w)`: how many index subsets of `w` induce a subword ordered like
    /// `u`. The empty pattern occurs exactly once.
    pub fn count_pattern(&self, u: &Permutation) -> usize {
        if u.size() > self.size() {
            return 0;
        }
        if u.size() == 0 {
            return 1;
        }
        let mut chosen = Vec::with_capacity(u.size());
        count_rec(&self.entries, &u.entries, 0, &mut chosen)
    }

    pub fn avoids(&self, p: &Permutation) -> bool {
        self.count_pattern(p) == 0
    }

    /// All of `S_n`, ordered lexicographically by one-line word. `S_0` holds
    /// the empty permutation only.
    pub fn all(n: usize) -> Vec<Permutation> {
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation {
                    entries: cur.clone(),
                });
                return;
            }
            for v in 1..=n {
                if !used[v - 1] {
                    used[v - 1] = true;
                    cur.push(v);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[v - 1] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(n, &mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
        out
    }

    /// Comma-separated one-line form, e.g. `"2,1,4,3"`; the empty
    /// permutation gives the empty string.
    pub fn oneline_string(&self) -> String {
        self.entries
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn count_rec(w: &[usize], u: &[usize], start: usize, chosen: &mut Vec<usize>) -> usize {
    let k = chosen.len();
    if k == u.len() {
        return 1;
    }
    let remaining = u.len() - k;
    let mut total = 0;
    for j in start..(w.len() + 1 - remaining) {
        let cand = w[j];
        if (0..k).all(|t| (u[t] < u[k]) == (chosen[t] < cand)) {
            chosen.push(cand);
            total += count_rec(w, u, j + 1, chosen);
            chosen.pop();
        }
    }
    total
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_word(&self.entries, f)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts comma-separated one-line form, or compact digits for
    /// `n <= 9`.
    fn from_str(s: &str) -> Result<Self> {
        Permutation::from_oneline(&parse_word(s)?)
    }
}

fn format_word(word: &[usize], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if word.is_empty() {
        return write!(f, "∅");
    }
    if word.iter().all(|&e| e <= 9) {
        for e in word {
            write!(f, "{e}")?;
        }
        Ok(())
    } else {
        let joined = word
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "{joined}")
    }
}

/// Parses a word of positive integers: comma-separated (`"2,1,4,3"`) or
/// compact digits (`"2143"`). Repeated entries are rejected.
pub fn parse_word(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let entries: Vec<usize> = if s.contains(',') {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::WordParse(s.to_string()))
            })
            .collect::<Result<_>>()?
    } else {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::WordParse(s.to_string()))
            })
            .collect::<Result<_>>()?
    };
    if entries.contains(&0) {
        return Err(Error::WordParse(s.to_string()));
    }
    if entries.iter().collect::<BTreeSet<_>>().len() != entries.len() {
        return Err(Error::RepeatedEntries);
    }
    Ok(entries)
}

/// The permutation whose entries are ordered like `word`.
pub fn pattern_of(word: &[usize]) -> Result<Permutation> {
    let set: BTreeSet<usize> = word.iter().copied().collect();
    if set.len() != word.len() {
        return Err(Error::RepeatedEntries);
    }
    let rank: BTreeMap<usize, usize> = set.iter().enumerate().map(|(i, &v)| (v, i + 1)).collect();
    Ok(Permutation {
        entries: word.iter().map(|v| rank[v]).collect(),
    })
}

/// Entries of a parent word selected at strictly increasing positions. The
/// parent word travels with the selection so that entry order is recoverable
/// for any label subset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subword {
    parent: Vec<usize>,
    positions: Vec<usize>, // 0-based, strictly increasing
}

impl Subword {
    /// Selects `positions` (0-based, strictly increasing) from a parent word
    /// of distinct entries.
    pub fn new(parent: &[usize], positions: &[usize]) -> Result<Self> {
        if parent.iter().collect::<BTreeSet<_>>().len() != parent.len() {
            return Err(Error::RepeatedEntries);
        }
        let increasing = positions.windows(2).all(|p| p[0] < p[1]);
        let in_range = positions.last().is_none_or(|&p| p < parent.len());
        if !increasing || !in_range {
            return Err(Error::NotASubword(
                format!("positions {positions:?}"),
                format!("{parent:?}"),
            ));
        }
        Ok(Subword {
            parent: parent.to_vec(),
            positions: positions.to_vec(),
        })
    }

    pub fn empty(parent: &[usize]) -> Result<Self> {
        Self::new(parent, &[])
    }

    pub fn full(parent: &[usize]) -> Result<Self> {
        Self::new(parent, &(0..parent.len()).collect::<Vec<_>>())
    }

    /// The subword of `parent` selecting exactly the given labels.
    pub fn from_labels(parent: &[usize], labels: &BTreeSet<usize>) -> Result<Self> {
        let positions: Vec<usize> = parent
            .iter()
            .enumerate()
            .filter(|(_, e)| labels.contains(e))
            .map(|(i, _)| i)
            .collect();
        if positions.len() != labels.len() {
            return Err(Error::NotASubword(
                format!("labels {labels:?}"),
                format!("{parent:?}"),
            ));
        }
        Self::new(parent, &positions)
    }

    pub fn parent_word(&self) -> &[usize] {
        &self.parent
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// The selected entries in parent order.
    pub fn word(&self) -> Vec<usize> {
        self.positions.iter().map(|&p| self.parent[p]).collect()
    }

    pub fn labels_sorted(&self) -> Vec<usize> {
        let mut w = self.word();
        w.sort_unstable();
        w
    }

    pub fn label_set(&self) -> BTreeSet<usize> {
        self.word().into_iter().collect()
    }

    pub fn pattern(&self) -> Permutation {
        pattern_of(&self.word()).expect("subword entries are distinct")
    }

    /// Whether `other <= self` in the subword order: same parent and nested
    /// position sets.
    pub fn contains(&self, other: &Subword) -> bool {
        self.parent == other.parent
            && other
                .positions
                .iter()
                .all(|p| self.positions.binary_search(p).is_ok())
    }
}

impl fmt::Display for Subword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_word(&self.word(), f)
    }
}

/// All `2^n` subwords of `w`, ordered by position bitmask; the empty subword
/// comes first and `w` itself last.
pub fn subwords(w: &Permutation) -> Vec<Subword> {
    let n = w.size();
    let parent = w.entries().to_vec();
    (0u32..(1 << n))
        .map(|mask| Subword {
            parent: parent.clone(),
            positions: (0..n).filter(|i| mask >> i & 1 == 1).collect(),
        })
        .collect()
}

/// All `2^(n-|u|)` subwords `v` with `u <= v <= w`.
pub fn interval_subwords(u: &Subword, w: &Permutation) -> Result<Vec<Subword>> {
    if u.parent != w.entries() {
        return Err(Error::NotASubword(u.to_string(), w.to_string()));
    }
    let free: Vec<usize> = (0..w.size())
        .filter(|p| u.positions.binary_search(p).is_err())
        .collect();
    let mut out = Vec::with_capacity(1 << free.len());
    for mask in 0u32..(1 << free.len()) {
        let mut positions = u.positions.clone();
        positions.extend(
            free.iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &p)| p),
        );
        positions.sort_unstable();
        out.push(Subword {
            parent: u.parent.clone(),
            positions,
        });
    }
    Ok(out)
}

/// All reduced words of `w`: the sequences `(a_1, ..., a_l)` of
/// simple-transposition indices with `s_{a_1} ... s_{a_l} = w` and
/// `l = length(w)`.
pub fn reduced_words(w: &Permutation) -> Vec<Vec<usize>> {
    if w.length() == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    // peeling a right descent shortens the word by one
    for i in 1..w.size() {
        if w.apply(i) > w.apply(i + 1) {
            for mut word in reduced_words(&w.swap_positions(i)) {
                word.push(i);
                out.push(word);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn construction() {
        assert_eq!(p("2143").entries(), &[2, 1, 4, 3]);
        assert_eq!(p("1423").entries(), &[1, 4, 2, 3]);
        assert_eq!(Permutation::from_oneline(&[]).unwrap(), p(""));
        assert!(Permutation::from_oneline(&[1, 1]).is_err());
        assert!(Permutation::from_oneline(&[1, 3]).is_err());
        assert!(Permutation::from_oneline(&[0]).is_err());
        assert_eq!(p("2,1,4,3"), p("2143"));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(p("2143").inverse(), p("2143"));
        assert_eq!(p("1423").inverse(), p("1342"));
        assert_eq!(p("").inverse(), p(""));
    }

    #[test]
    fn length_examples() {
        assert_eq!(p("2143").length(), 2);
        assert_eq!(Permutation::longest(4).length(), 6);
        assert_eq!(Permutation::identity(5).length(), 0);
    }

    #[test]
    fn pattern_of_examples() {
        assert_eq!(pattern_of(&[2, 5, 7, 4]).unwrap(), p("1342"));
        assert_eq!(pattern_of(&[1, 4, 3]).unwrap(), p("132"));
        assert_eq!(pattern_of(&[2, 1, 4, 3]).unwrap(), p("2143"));
        assert!(pattern_of(&[2, 2]).is_err());
    }

    #[test]
    fn count_pattern_examples() {
        assert_eq!(p("1432").count_pattern(&p("132")), 3);
        assert_eq!(p("1432").count_pattern(&p("")), 1);
        assert_eq!(p("21").count_pattern(&p("12")), 0);
    }

    #[test]
    fn avoids_examples() {
        assert!(p("2143").avoids(&p("1423")));
        assert!(!p("1423").avoids(&p("1423")));
        assert!(!p("1342").avoids(&p("1342")));
    }

    #[test]
    fn subword_enumeration() {
        let w = p("21");
        let subs = subwords(&w);
        assert_eq!(subs.len(), 4);
        let words: Vec<Vec<usize>> = subs.iter().map(|s| s.word()).collect();
        assert_eq!(words, vec![vec![], vec![2], vec![1], vec![2, 1]]);
        assert_eq!(subwords(&p("2143")).len(), 16);
        assert_eq!(subwords(&p("")).len(), 1);
    }

    #[test]
    fn interval_examples() {
        let w = p("132");
        let u = Subword::new(w.entries(), &[0, 1]).unwrap();
        let interval = interval_subwords(&u, &w).unwrap();
        let words: BTreeSet<Vec<usize>> = interval.iter().map(|s| s.word()).collect();
        assert_eq!(words, BTreeSet::from([vec![1, 3], vec![1, 3, 2]]));

        let full = Subword::full(w.entries()).unwrap();
        assert_eq!(interval_subwords(&full, &w).unwrap().len(), 1);
        let empty = Subword::empty(w.entries()).unwrap();
        assert_eq!(interval_subwords(&empty, &w).unwrap().len(), 8);

        let other = Subword::full(&[1, 2]).unwrap();
        assert!(interval_subwords(&other, &w).is_err());
    }

    #[test]
    fn subword_from_labels() {
        let v = Subword::from_labels(&[1, 4, 2, 3], &BTreeSet::from([1, 4, 3])).unwrap();
        assert_eq!(v.word(), vec![1, 4, 3]);
        assert_eq!(v.positions(), &[0, 1, 3]);
        assert_eq!(v.pattern(), p("132"));
        assert!(Subword::from_labels(&[1, 2], &BTreeSet::from([5])).is_err());
    }

    #[test]
    fn reduced_word_examples() {
        assert_eq!(reduced_words(&p("21")), vec![vec![1]]);
        let words: BTreeSet<Vec<usize>> = reduced_words(&p("321")).into_iter().collect();
        assert_eq!(words, BTreeSet::from([vec![1, 2, 1], vec![2, 1, 2]]));
        assert_eq!(
            reduced_words(&Permutation::identity(3)),
            vec![Vec::<usize>::new()]
        );
    }

    #[test]
    fn display_forms() {
        assert_eq!(p("2143").to_string(), "2143");
        assert_eq!(p("2143").oneline_string(), "2,1,4,3");
        assert_eq!(p("").to_string(), "∅");
    }
}
