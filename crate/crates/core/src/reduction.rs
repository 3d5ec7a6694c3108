//! Removable pipes, the pipe-deleting map `phi_j` and its inverse
//! augmentation `psi_j`, core dreams, and their generating polynomials.
//!
//! A pipe `j` of a marked reduced dream is removable when (i) its entry
//! column reads crossings-then-plain-bumps from the top, (ii) no crossing it
//! traverses sits directly below a plain bump, and (iii) it traverses no
//! marked bump. Deleting a removable pipe drops its entry column, erases
//! each crossing it runs through, and collapses each stacked bump pair it
//! threads into a single bump; every other route is untouched and the rank
//! shrinks by one. A dream with nothing removable is a core.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::perm::{pattern_of, Subword};
use crate::pipedream::{enumerate_mrpd, PipeDream, Tile};
use crate::poly::BetaPoly;
use crate::{Error, Result};

/// A dream with no removable pipe, together with the subword it spells.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoreDream {
    pub dream: PipeDream,
    pub source: Subword,
}

/// Outcome of reducing a dream: the core reached and the deleted labels in
/// order. Re-inserting the labels in reverse order rebuilds the input
/// exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionResult {
    pub core: CoreDream,
    pub removed: Vec<usize>,
}

impl ReductionResult {
    /// `{"core": <dream>, "removed": [labels]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "core": self.core.dream.to_json(),
            "removed": self.removed,
        })
    }
}

pub fn is_removable(p: &PipeDream, label: usize) -> Result<bool> {
    let col = p.column_of_label(label)?;
    Ok(removable_at(p, col))
}

fn removable_at(p: &PipeDream, col: usize) -> bool {
    // entry column: crossings on top, plain bumps below, nothing else
    let mut seen_bump = false;
    for r in 1..=p.rank() + 1 - col {
        match p.tile(r, col) {
            Tile::Cross if seen_bump => return false,
            Tile::Cross => {}
            Tile::MarkedBump => return false,
            Tile::Bump => seen_bump = true,
        }
    }
    // along the pipe: no marked bump, and no plain bump directly above a
    // traversed crossing
    for visit in p.pipe_path(col) {
        match p.tile(visit.row, visit.col) {
            Tile::MarkedBump => return false,
            Tile::Cross if visit.row > 1 && p.tile(visit.row - 1, visit.col) == Tile::Bump => {
                return false;
            }
            _ => {}
        }
    }
    true
}

/// Labels of all removable pipes, in increasing order.
pub fn removable_labels(p: &PipeDream) -> Vec<usize> {
    (1..=p.rank())
        .filter(|&c| removable_at(p, c))
        .map(|c| p.labels()[c - 1])
        .collect()
}

pub fn is_core(p: &PipeDream) -> bool {
    (1..=p.rank()).all(|c| !removable_at(p, c))
}

/// Deletes the removable pipe `label`. Its entry column disappears, each
/// crossing it traverses is dropped, and each stacked bump pair it threads
/// collapses to one bump; columns right of the entry shift left and the
/// surviving labels keep their exit order. Marks are untouched, so the
/// marked-bump count is preserved.
pub fn phi_j(p: &PipeDream, label: usize) -> Result<PipeDream> {
    let col = p.column_of_label(label)?;
    if !removable_at(p, col) {
        return Err(Error::NotRemovable(label));
    }
    let mut per_col: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in p.pipe_path(col) {
        if v.col < col {
            per_col.entry(v.col).or_default().push(v.row);
        }
    }
    let mut cols = p.columns();
    for (&c, rows) in &per_col {
        match rows.as_slice() {
            [r] => {
                debug_assert_eq!(cols[c - 1][r - 1], Tile::Cross);
                cols[c - 1].remove(r - 1);
            }
            [r, r2] => {
                debug_assert_eq!(*r2, r + 1);
                debug_assert_eq!(cols[c - 1][r - 1], Tile::Bump);
                debug_assert_eq!(cols[c - 1][r2 - 1], Tile::Bump);
                cols[c - 1].remove(r2 - 1);
            }
            _ => unreachable!(
                "a removable pipe meets each left column in one crossing or one bump pair"
            ),
        }
    }
    cols.remove(col - 1);
    let labels: Vec<usize> = p.labels().iter().copied().filter(|&l| l != label).collect();
    PipeDream::from_columns(labels, cols)
}

/// Repeatedly deletes the smallest removable label until none remains. The
/// core does not depend on the deletion order; taking the smallest first
/// makes `removed` reproducible.
pub fn reduce_to_core(p: &PipeDream) -> ReductionResult {
    let parent = p.exit_word();
    let mut dream = p.clone();
    let mut removed = Vec::new();
    loop {
        match removable_labels(&dream).first() {
            None => break,
            Some(&j) => {
                dream = phi_j(&dream, j).expect("label was reported removable");
                removed.push(j);
            }
        }
    }
    let survivors: BTreeSet<usize> = dream.labels().iter().copied().collect();
    let source = Subword::from_labels(&parent, &survivors)
        .expect("surviving labels come from the exit word");
    ReductionResult {
        core: CoreDream { dream, source },
        removed,
    }
}

/// Threads a new pipe `label` through `p` so that deleting it again returns
/// `p`. `position` is the 1-based index the label takes in the target word,
/// i.e. the exit row of the new pipe.
///
/// Scanning the columns left of the new entry column with a row pointer
/// that starts at `position`: a plain bump directly above the pointer is
/// split into a stacked pair (and the pointer climbs one row), anything
/// else gets a crossing pushed in at the pointer. The entry column then
/// receives one crossing per row the pointer climbed past, bumps below.
///
/// The result is always a structurally valid staircase, but the new pipe
/// may cross some other pipe twice; the returned flag is false exactly in
/// that case.
pub fn psi_j(p: &PipeDream, label: usize, position: usize) -> Result<(PipeDream, bool)> {
    if p.labels().contains(&label) {
        return Err(Error::LabelPresent(label));
    }
    let m = p.rank() + 1;
    if position == 0 || position > m {
        return Err(Error::BadPosition(position, m));
    }
    let smaller = p.labels().iter().filter(|&&l| l < label).count();
    let mut cols = p.columns();
    let mut pointer = position;
    for col in cols.iter_mut().take(smaller) {
        debug_assert!(pointer <= col.len() + 1);
        let above = pointer.checked_sub(2).map(|idx| col[idx]);
        if above == Some(Tile::Bump) {
            col.insert(pointer - 1, Tile::Bump);
            pointer -= 1;
        } else {
            col.insert(pointer - 1, Tile::Cross);
        }
    }
    let height = m - smaller;
    debug_assert!(pointer <= height);
    let mut entry = vec![Tile::Cross; pointer - 1];
    entry.resize(height, Tile::Bump);
    cols.insert(smaller, entry);
    let mut labels = p.labels().to_vec();
    labels.insert(smaller, label);
    let dream = PipeDream::from_columns(labels, cols)?;
    let reduced = dream.is_reduced();
    Ok((dream, reduced))
}

/// Replays the removed labels in reverse, rebuilding the dream that reduced
/// to `r.core`. Fails only on a corrupted result, when an intermediate
/// diagram comes out non-reduced.
pub fn psi(r: &ReductionResult) -> Result<PipeDream> {
    let parent = r.core.source.parent_word();
    let mut present: BTreeSet<usize> = r.core.dream.labels().iter().copied().collect();
    let mut dream = r.core.dream.clone();
    for &j in r.removed.iter().rev() {
        present.insert(j);
        let position = parent
            .iter()
            .filter(|e| present.contains(e))
            .position(|e| *e == j)
            .ok_or(Error::UnknownLabel(j))?
            + 1;
        let (next, reduced) = psi_j(&dream, j, position)?;
        if !reduced {
            return Err(Error::InvalidAugmentation(j));
        }
        dream = next;
    }
    Ok(dream)
}

/// Core dreams whose exit word is `word` (entries must be distinct):
/// the marked reduced dreams of its pattern that have no removable pipe,
/// relabelled with the word's sorted entries.
pub fn core_dreams_of_word(word: &[usize]) -> Vec<PipeDream> {
    let pattern = pattern_of(word).expect("word entries must be distinct");
    let mut labels = word.to_vec();
    labels.sort_unstable();
    enumerate_mrpd(&pattern)
        .into_iter()
        .filter(is_core)
        .map(|d| d.relabel(labels.clone()).expect("sorted distinct labels"))
        .collect()
}

/// Core dreams of the subword `v`, tagged with `v` as their source.
pub fn enumerate_cmrpd(v: &Subword) -> Vec<CoreDream> {
    core_dreams_of_word(&v.word())
        .into_iter()
        .map(|dream| CoreDream {
            dream,
            source: v.clone(),
        })
        .collect()
}

/// Dreams of `v` in which every label of `v` outside `u` is pinned
/// (non-removable); labels of `u` are unrestricted. Requires `u <= v`.
pub fn enumerate_cmrpd_rel(u: &Subword, v: &Subword) -> Result<Vec<CoreDream>> {
    if !v.contains(u) {
        return Err(Error::NotASubword(u.to_string(), v.to_string()));
    }
    let labels = v.labels_sorted();
    let pinned: Vec<usize> = v.label_set().difference(&u.label_set()).copied().collect();
    let mut out = Vec::new();
    for dream in enumerate_mrpd(&v.pattern()) {
        let dream = dream.relabel(labels.clone())?;
        if pinned
            .iter()
            .all(|&j| !is_removable(&dream, j).expect("pinned labels are present"))
        {
            out.push(CoreDream {
                dream,
                source: v.clone(),
            });
        }
    }
    Ok(out)
}

/// Mark-count generating polynomial over the core dreams of `word`; it
/// depends only on the word's pattern.
pub fn d_poly(word: &[usize]) -> BetaPoly {
    let mut p = BetaPoly::zero();
    for dream in core_dreams_of_word(word) {
        p.add_power(dream.mbt());
    }
    p
}

/// Mark-count generating polynomial over the pinned dreams of `v` relative
/// to `u`; zero when `u` is not below `v`.
pub fn d_rel_poly(u: &Subword, v: &Subword) -> BetaPoly {
    match enumerate_cmrpd_rel(u, v) {
        Ok(dreams) => {
            let mut p = BetaPoly::zero();
            for core in dreams {
                p.add_power(core.dream.mbt());
            }
            p
        }
        Err(_) => BetaPoly::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn dream(labels: &[usize], grid: &[&str]) -> PipeDream {
        let rows = grid
            .iter()
            .map(|row| {
                row.chars()
                    .map(|c| match c {
                        'B' => Tile::Bump,
                        'X' => Tile::Cross,
                        'M' => Tile::MarkedBump,
                        other => panic!("bad tile char {other}"),
                    })
                    .collect()
            })
            .collect();
        PipeDream::new(labels.len(), labels.to_vec(), rows).unwrap()
    }

    // The seven marked reduced dreams of 2143 in lexicographic order, with
    // their removable label sets.
    fn dreams_2143() -> Vec<(PipeDream, Vec<usize>)> {
        let l = [1, 2, 3, 4];
        vec![
            (dream(&l, &["XBBB", "BBB", "XB", "B"]), vec![2]),
            (dream(&l, &["XBBB", "BXB", "BB", "B"]), vec![1]),
            (dream(&l, &["XBBB", "BXB", "MB", "B"]), vec![]),
            (dream(&l, &["XBXB", "BBB", "BB", "B"]), vec![1, 2, 3, 4]),
            (dream(&l, &["XBXB", "BBB", "MB", "B"]), vec![2]),
            (dream(&l, &["XBXB", "BMB", "BB", "B"]), vec![1]),
            (dream(&l, &["XBXB", "BMB", "MB", "B"]), vec![]),
        ]
    }

    #[test]
    fn removable_sets_for_2143() {
        for (d, expected) in dreams_2143() {
            assert_eq!(removable_labels(&d), expected, "dream {:?}", d.rows());
        }
    }

    #[test]
    fn removable_sets_rank_six() {
        // two dreams of 132564
        let a = dream(
            &[1, 2, 3, 4, 5, 6],
            &["BXBBBB", "BBBBB", "BXBB", "BXB", "BB", "B"],
        );
        assert_eq!(a.exit_word(), vec![1, 3, 2, 5, 6, 4]);
        assert_eq!(removable_labels(&a), vec![1, 3, 6]);

        let b = dream(
            &[1, 2, 3, 4, 5, 6],
            &["BXBBBB", "BBXBB", "BMBB", "BXB", "BB", "B"],
        );
        assert_eq!(b.exit_word(), vec![1, 3, 2, 5, 6, 4]);
        assert_eq!(removable_labels(&b), vec![1, 6]);
    }

    #[test]
    fn unknown_label_is_reported() {
        let d = PipeDream::all_bumps(vec![1, 3]).unwrap();
        assert_eq!(is_removable(&d, 2), Err(Error::UnknownLabel(2)));
    }

    #[test]
    fn cores_of_2143() {
        let cores: Vec<PipeDream> = dreams_2143()
            .into_iter()
            .filter(|(d, _)| is_core(d))
            .map(|(d, _)| d)
            .collect();
        assert_eq!(cores.len(), 2);
        let mut mbts: Vec<usize> = cores.iter().map(PipeDream::mbt).collect();
        mbts.sort_unstable();
        assert_eq!(mbts, vec![1, 2]);
        assert_eq!(core_dreams_of_word(&[2, 1, 4, 3]), cores);
    }

    #[test]
    fn core_edge_cases() {
        assert!(is_core(&PipeDream::empty()));
        // a lone pipe is always removable
        assert!(!is_core(&PipeDream::all_bumps(vec![1]).unwrap()));
        assert!(core_dreams_of_word(&[1, 2, 3]).is_empty());
        assert_eq!(core_dreams_of_word(&[]).len(), 1);
    }

    #[test]
    fn cores_of_pattern_132() {
        let cores = core_dreams_of_word(&[1, 4, 3]);
        assert_eq!(cores.len(), 2);
        assert_eq!(cores[0], dream(&[1, 3, 4], &["BBB", "XB", "B"]));
        assert_eq!(cores[1], dream(&[1, 3, 4], &["BXB", "MB", "B"]));
        assert_eq!(d_poly(&[1, 4, 3]), BetaPoly::from_i64s(&[1, 1]));
        assert_eq!(d_poly(&[1, 3, 2]), BetaPoly::from_i64s(&[1, 1]));
    }

    #[test]
    fn d_poly_examples() {
        assert_eq!(d_poly(&[2, 1, 4, 3]), BetaPoly::from_i64s(&[0, 1, 1]));
        assert_eq!(d_poly(&[]), BetaPoly::one());
        assert_eq!(d_poly(&[3, 1, 2]), BetaPoly::zero());
    }

    #[test]
    fn phi_column_deletion_only() {
        // pipe 3 enters the last column of an all-bump dream
        let d = PipeDream::all_bumps(vec![1, 2, 3]).unwrap();
        let out = phi_j(&d, 3).unwrap();
        assert_eq!(out, PipeDream::all_bumps(vec![1, 2]).unwrap());
    }

    #[test]
    fn phi_rejects_non_removable() {
        let (d, _) = dreams_2143().into_iter().nth(1).unwrap(); // removable {1}
        assert_eq!(phi_j(&d, 3), Err(Error::NotRemovable(3)));
    }

    #[test]
    fn phi_chain_rank_six() {
        let start = dream(
            &[1, 2, 3, 4, 5, 6],
            &["BBXBBB", "BBXBB", "BBBB", "MBB", "BB", "B"],
        );
        assert_eq!(start.exit_word(), vec![1, 2, 4, 5, 3, 6]);
        assert_eq!(removable_labels(&start), vec![2, 4, 6]);

        let step1 = phi_j(&start, 2).unwrap();
        assert_eq!(
            step1,
            dream(&[1, 3, 4, 5, 6], &["BXBBB", "BXBB", "MBB", "BB", "B"])
        );
        assert_eq!(step1.exit_word(), vec![1, 4, 5, 3, 6]);

        let step2 = phi_j(&step1, 4).unwrap();
        assert_eq!(step2, dream(&[1, 3, 5, 6], &["BXBB", "MBB", "BB", "B"]));
        assert_eq!(step2.exit_word(), vec![1, 5, 3, 6]);

        let step3 = phi_j(&step2, 6).unwrap();
        assert_eq!(step3, dream(&[1, 3, 5], &["BXB", "MB", "B"]));
        assert_eq!(step3.exit_word(), vec![1, 5, 3]);
        assert!(is_core(&step3));

        // smallest-first reduction follows the same chain
        let r = reduce_to_core(&start);
        assert_eq!(r.removed, vec![2, 4, 6]);
        assert_eq!(r.core.dream, step3);
        assert_eq!(r.core.source.word(), vec![1, 5, 3]);
        assert_eq!(r.core.dream.mbt(), 1);
    }

    // The five marked reduced dreams of 1423 with their reduction images.
    fn reduction_images_1423() -> Vec<(PipeDream, PipeDream)> {
        let l4 = [1, 2, 3, 4];
        let l3 = [1, 2, 4];
        vec![
            (
                dream(&l4, &["BBBB", "XXB", "BB", "B"]),
                dream(&l4, &["BBBB", "XXB", "BB", "B"]),
            ),
            (
                dream(&l4, &["BBXB", "XBB", "BB", "B"]),
                dream(&l3, &["BBB", "XB", "B"]),
            ),
            (dream(&l4, &["BXXB", "BBB", "BB", "B"]), PipeDream::empty()),
            (
                dream(&l4, &["BXXB", "MBB", "BB", "B"]),
                dream(&l3, &["BXB", "MB", "B"]),
            ),
            (
                dream(&l4, &["BBXB", "XMB", "BB", "B"]),
                dream(&l4, &["BBXB", "XMB", "BB", "B"]),
            ),
        ]
    }

    #[test]
    fn reduction_images_of_1423() {
        for (i, (input, expected)) in reduction_images_1423().into_iter().enumerate() {
            assert_eq!(input.exit_word(), vec![1, 4, 2, 3]);
            if i == 2 {
                // the dream with both crossings in row 1 sheds every pipe
                assert_eq!(removable_labels(&input), vec![1, 2, 3, 4]);
            }
            let r = reduce_to_core(&input);
            assert_eq!(r.core.dream, expected, "input {:?}", input.rows());
        }
    }

    #[test]
    fn reduction_fixes_cores() {
        for core in core_dreams_of_word(&[2, 1, 4, 3]) {
            let r = reduce_to_core(&core);
            assert_eq!(r.core.dream, core);
            assert!(r.removed.is_empty());
        }
    }

    #[test]
    fn psi_round_trip_exhaustive_s4() {
        for w in Permutation::all(4) {
            for d in enumerate_mrpd(&w) {
                for &j in &removable_labels(&d) {
                    let smaller = phi_j(&d, j).unwrap();
                    let position = d.exit_word().iter().position(|&l| l == j).unwrap() + 1;
                    let (back, reduced) = psi_j(&smaller, j, position).unwrap();
                    assert!(reduced);
                    assert_eq!(back, d);
                }
            }
        }
    }

    #[test]
    fn psi_invalid_augmentations() {
        // inserting pipe 2 into the cores of the subword 143 makes it cross
        // pipe 3 twice
        let core_a = dream(&[1, 3, 4], &["BBB", "XB", "B"]);
        let (out_a, ok_a) = psi_j(&core_a, 2, 3).unwrap();
        assert!(!ok_a);
        assert_eq!(out_a, dream(&[1, 2, 3, 4], &["BXBB", "XXB", "XB", "B"]));

        let core_b = dream(&[1, 3, 4], &["BXB", "MB", "B"]);
        let (out_b, ok_b) = psi_j(&core_b, 2, 3).unwrap();
        assert!(!ok_b);
        assert_eq!(out_b, dream(&[1, 2, 3, 4], &["BXXB", "MXB", "XB", "B"]));
    }

    #[test]
    fn psi_misuse_errors() {
        let d = PipeDream::all_bumps(vec![1, 2]).unwrap();
        assert_eq!(psi_j(&d, 2, 1), Err(Error::LabelPresent(2)));
        assert_eq!(psi_j(&d, 3, 0), Err(Error::BadPosition(0, 3)));
        assert_eq!(psi_j(&d, 3, 4), Err(Error::BadPosition(4, 3)));
    }

    #[test]
    fn psi_rebuilds_from_reduction_results() {
        for (input, _) in reduction_images_1423() {
            let r = reduce_to_core(&input);
            assert_eq!(psi(&r).unwrap(), input);
        }
        // core-only results rebuild themselves
        let core = dream(&[1, 3, 5], &["BXB", "MB", "B"]);
        let r = reduce_to_core(&core);
        assert_eq!(psi(&r).unwrap(), core);
    }

    #[test]
    fn relative_core_enumeration() {
        let w = perm("2143");
        let full = Subword::full(w.entries()).unwrap();
        let empty = Subword::empty(w.entries()).unwrap();

        // no pins at all: every marked reduced dream survives
        let all = enumerate_cmrpd_rel(&full, &full).unwrap();
        assert_eq!(all.len(), 7);

        // everything pinned: exactly the cores
        let cores = enumerate_cmrpd_rel(&empty, &full).unwrap();
        assert_eq!(cores.len(), 2);
        assert_eq!(
            cores.iter().map(|c| c.dream.clone()).collect::<Vec<_>>(),
            core_dreams_of_word(w.entries())
        );

        assert_eq!(d_rel_poly(&empty, &full), d_poly(w.entries()));
        assert_eq!(d_rel_poly(&full, &full), BetaPoly::from_i64s(&[3, 3, 1]));

        // incomparable subwords give zero by convention
        let u = Subword::new(w.entries(), &[0]).unwrap();
        let v = Subword::new(w.entries(), &[1, 2]).unwrap();
        assert!(enumerate_cmrpd_rel(&u, &v).is_err());
        assert_eq!(d_rel_poly(&u, &v), BetaPoly::zero());
    }

    #[test]
    fn reduction_result_json() {
        let start = dream(&[1, 2, 3], &["BXB", "BB", "B"]);
        let r = reduce_to_core(&start);
        let v = r.to_json();
        assert!(v["core"]["rank"].is_u64());
        assert!(v["removed"].is_array());
    }
}
