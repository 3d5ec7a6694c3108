//! Staircase pipe dreams: tile grids, pipe routing, reducedness, markable
//! bumps, and enumeration.
//!
//! A dream of rank `m` has `m+1-i` left-justified tiles in row `i`. Its `m`
//! pipes enter from the top edge, travel down and to the left, and exit on
//! the left edge; the exit labels read top to bottom spell the permutation
//! (or subword) of the dream. Tiles on the southeast diagonal are always
//! plain bumps. A bump joins north-west and east-south; a cross lets both
//! strands run straight through. A bump may carry a mark only when its two
//! strands cross somewhere strictly above it.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::perm::Permutation;
use crate::poly::MultiPoly;
use crate::{Error, Result};

/// One tile of the staircase. The variant order gives the row-major
/// lexicographic order used wherever dreams are sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tile {
    Bump,
    MarkedBump,
    Cross,
}

impl Tile {
    pub fn code(self) -> &'static str {
        match self {
            Tile::Bump => "B",
            Tile::MarkedBump => "MB",
            Tile::Cross => "X",
        }
    }

    pub fn from_code(s: &str) -> Result<Self> {
        match s {
            "B" => Ok(Tile::Bump),
            "MB" => Ok(Tile::MarkedBump),
            "X" => Ok(Tile::Cross),
            other => Err(Error::DreamParse(format!("unknown tile code {other:?}"))),
        }
    }

    fn glyph(self) -> char {
        match self {
            Tile::Bump => '.',
            Tile::MarkedBump => '*',
            Tile::Cross => '+',
        }
    }

    fn from_glyph(s: &str) -> Result<Self> {
        match s {
            "." => Ok(Tile::Bump),
            "*" => Ok(Tile::MarkedBump),
            "+" => Ok(Tile::Cross),
            other => Err(Error::DreamParse(format!("unknown tile glyph {other:?}"))),
        }
    }
}

/// Which side a strand enters a tile from. Strands only move south and
/// west, so north and east are the only entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    North,
    East,
}

/// One tile visit of a pipe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Visit {
    pub row: usize,
    pub col: usize,
    pub entered: Side,
}

/// Complete routing of a dream: the exit labels down the left edge, each
/// pipe's ordered tile visits, and every tile where a pair of labels
/// crosses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Routing {
    pub exit_word: Vec<usize>,
    /// Indexed by entry column, 0-based.
    pub paths: Vec<Vec<Visit>>,
    /// Label pair `(lo, hi)` to the tiles where the two pipes cross.
    pub crossings: BTreeMap<(usize, usize), Vec<(usize, usize)>>,
}

/// A staircase pipe dream. Structural validity (row lengths, diagonal
/// bumps, increasing labels) is enforced on construction; reducedness and
/// mark placement are predicates, since augmenting can legitimately build
/// non-reduced candidates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PipeDream {
    rank: usize,
    labels: Vec<usize>,
    rows: Vec<Vec<Tile>>,
}

impl PipeDream {
    pub fn new(rank: usize, labels: Vec<usize>, rows: Vec<Vec<Tile>>) -> Result<Self> {
        if labels.len() != rank {
            return Err(Error::InvalidDream(format!(
                "{} labels for rank {rank}",
                labels.len()
            )));
        }
        if labels.first().is_some_and(|&l| l == 0) {
            return Err(Error::InvalidDream("labels must be positive".into()));
        }
        if !labels.windows(2).all(|p| p[0] < p[1]) {
            return Err(Error::InvalidDream(
                "labels must be strictly increasing".into(),
            ));
        }
        if rows.len() != rank {
            return Err(Error::InvalidDream(format!(
                "{} rows for rank {rank}",
                rows.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != rank - i {
                return Err(Error::InvalidDream(format!(
                    "row {} has {} tiles, expected {}",
                    i + 1,
                    row.len(),
                    rank - i
                )));
            }
            if *row.last().unwrap() != Tile::Bump {
                return Err(Error::InvalidDream(format!(
                    "southeast diagonal tile in row {} must be a plain bump",
                    i + 1
                )));
            }
        }
        Ok(PipeDream { rank, labels, rows })
    }

    /// The empty dream of rank zero.
    pub fn empty() -> Self {
        PipeDream {
            rank: 0,
            labels: Vec::new(),
            rows: Vec::new(),
        }
    }

    /// The all-bump dream with the given labels; its exit word is the
    /// labels in increasing order.
    pub fn all_bumps(labels: Vec<usize>) -> Result<Self> {
        let rank = labels.len();
        let rows = (0..rank).map(|i| vec![Tile::Bump; rank - i]).collect();
        Self::new(rank, labels, rows)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<Tile>] {
        &self.rows
    }

    /// Tile at `(row, col)`, both 1-based.
    pub fn tile(&self, row: usize, col: usize) -> Tile {
        self.rows[row - 1][col - 1]
    }

    fn column_height(&self, col: usize) -> usize {
        self.rank + 1 - col
    }

    pub fn is_diagonal(&self, row: usize, col: usize) -> bool {
        row + col == self.rank + 1
    }

    /// 1-based column where the pipe with this label enters.
    pub fn column_of_label(&self, label: usize) -> Result<usize> {
        self.labels
            .binary_search(&label)
            .map(|i| i + 1)
            .map_err(|_| Error::UnknownLabel(label))
    }

    pub(crate) fn columns(&self) -> Vec<Vec<Tile>> {
        (1..=self.rank)
            .map(|c| {
                (1..=self.column_height(c))
                    .map(|r| self.tile(r, c))
                    .collect()
            })
            .collect()
    }

    pub(crate) fn from_columns(labels: Vec<usize>, cols: Vec<Vec<Tile>>) -> Result<Self> {
        let rank = cols.len();
        for (ci, col) in cols.iter().enumerate() {
            if col.len() != rank - ci {
                return Err(Error::InvalidDream(format!(
                    "column {} has {} tiles, expected {}",
                    ci + 1,
                    col.len(),
                    rank - ci
                )));
            }
        }
        let rows = (0..rank)
            .map(|i| cols.iter().take(rank - i).map(|col| col[i]).collect())
            .collect();
        Self::new(rank, labels, rows)
    }

    /// Follows the pipe entering at `entry_col` (1-based) until it leaves
    /// the left edge.
    pub fn pipe_path(&self, entry_col: usize) -> Vec<Visit> {
        let mut path = Vec::new();
        let (mut r, mut c) = (1, entry_col);
        let mut entered = Side::North;
        loop {
            path.push(Visit {
                row: r,
                col: c,
                entered,
            });
            let goes_west = match (self.tile(r, c), entered) {
                (Tile::Cross, Side::North) => false,
                (Tile::Cross, Side::East) => true,
                (_, Side::North) => true,
                (_, Side::East) => false,
            };
            if goes_west {
                if c == 1 {
                    return path;
                }
                c -= 1;
                entered = Side::East;
            } else {
                r += 1;
                entered = Side::North;
                debug_assert!(r <= self.column_height(c), "pipe left the staircase");
            }
        }
    }

    /// Labels read down the left edge.
    pub fn exit_word(&self) -> Vec<usize> {
        let mut word = vec![0; self.rank];
        for c0 in 1..=self.rank {
            let exit_row = self.pipe_path(c0).last().unwrap().row;
            word[exit_row - 1] = self.labels[c0 - 1];
        }
        word
    }

    /// The exit word as a permutation, when the labels are exactly `1..=m`.
    pub fn permutation(&self) -> Option<Permutation> {
        if self.labels.iter().copied().eq(1..=self.rank) {
            Some(Permutation::from_oneline(&self.exit_word()).expect("exit word permutes labels"))
        } else {
            None
        }
    }

    pub fn trace(&self) -> Routing {
        let mut exit_word = vec![0; self.rank];
        let mut paths = Vec::with_capacity(self.rank);
        for c0 in 1..=self.rank {
            let path = self.pipe_path(c0);
            exit_word[path.last().unwrap().row - 1] = self.labels[c0 - 1];
            paths.push(path);
        }
        let mut crossings: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for ((r, c), pair) in visitor_pairs(&paths, &self.labels) {
            if self.tile(r, c) == Tile::Cross {
                crossings.entry(pair).or_default().push((r, c));
            }
        }
        Routing {
            exit_word,
            paths,
            crossings,
        }
    }

    /// Whether every pair of pipes crosses at most once.
    pub fn is_reduced(&self) -> bool {
        self.trace().crossings.values().all(|v| v.len() <= 1)
    }

    /// Bumps whose two strands cross strictly above them — the positions
    /// where a mark may sit. Diagonal tiles carry a single strand and are
    /// never markable.
    pub fn markable_bumps(&self) -> BTreeSet<(usize, usize)> {
        let routing = self.trace();
        let mut out = BTreeSet::new();
        for ((r, c), pair) in visitor_pairs(&routing.paths, &self.labels) {
            if self.tile(r, c) != Tile::Cross
                && routing
                    .crossings
                    .get(&pair)
                    .is_some_and(|tiles| tiles.iter().any(|&(rr, _)| rr < r))
            {
                out.insert((r, c));
            }
        }
        out
    }

    /// Number of marked bumping tiles.
    pub fn mbt(&self) -> usize {
        self.rows
            .iter()
            .flatten()
            .filter(|&&t| t == Tile::MarkedBump)
            .count()
    }

    pub fn marks(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for (i, row) in self.rows.iter().enumerate() {
            for (j, &t) in row.iter().enumerate() {
                if t == Tile::MarkedBump {
                    out.insert((i + 1, j + 1));
                }
            }
        }
        out
    }

    /// Copy with all marks cleared.
    pub fn unmarked(&self) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&t| if t == Tile::MarkedBump { Tile::Bump } else { t })
                    .collect()
            })
            .collect();
        PipeDream {
            rank: self.rank,
            labels: self.labels.clone(),
            rows,
        }
    }

    /// Copy carrying exactly the given marks; every position must hold a
    /// bump.
    pub fn with_marks(&self, marks: &BTreeSet<(usize, usize)>) -> Self {
        let mut out = self.unmarked();
        for &(r, c) in marks {
            debug_assert_eq!(
                out.rows[r - 1][c - 1],
                Tile::Bump,
                "mark must sit on a bump"
            );
            out.rows[r - 1][c - 1] = Tile::MarkedBump;
        }
        out
    }

    /// Reduced, with every mark on a markable bump.
    pub fn is_valid_mrpd(&self) -> bool {
        if !self.is_reduced() {
            return false;
        }
        let markable = self.markable_bumps();
        self.marks().iter().all(|p| markable.contains(p))
    }

    pub fn relabel(&self, labels: Vec<usize>) -> Result<Self> {
        Self::new(self.rank, labels, self.rows.clone())
    }

    /// The monomial `prod x_row` over crossing and marked bumping tiles, in
    /// `nvars >= rank` variables.
    pub fn weight_monomial(&self, nvars: usize) -> MultiPoly {
        assert!(nvars >= self.rank);
        let mut exps = vec![0u32; nvars + 1];
        for (i, row) in self.rows.iter().enumerate() {
            for &t in row {
                if t != Tile::Bump {
                    exps[i + 1] += 1;
                }
            }
        }
        let mut p = MultiPoly::zero(nvars);
        p.insert_term(exps, BigInt::from(1));
        p
    }

    /// Human-readable staircase with top and left labels; crosses print as
    /// `+`, bumps as `.`, marked bumps as `*`.
    pub fn render_ascii(&self) -> String {
        if self.rank == 0 {
            return "(empty)\n".to_string();
        }
        let exit = self.exit_word();
        let width = self
            .labels
            .iter()
            .chain(exit.iter())
            .map(|l| l.to_string().len())
            .max()
            .unwrap();
        let mut out = String::new();
        out.push_str(&" ".repeat(width + 1));
        for l in &self.labels {
            out.push_str(&format!(" {l:>width$}"));
        }
        out.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(&format!("{:>width$} ", exit[i]));
            for t in row {
                out.push_str(&format!(" {:>width$}", t.glyph()));
            }
            out.push('\n');
        }
        out
    }

    /// Inverse of [`render_ascii`](Self::render_ascii); the left labels must
    /// match the routed exit word.
    pub fn parse_ascii(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        if lines.first().map(|l| l.trim()) == Some("(empty)") {
            return Ok(Self::empty());
        }
        if lines.is_empty() {
            return Err(Error::DreamParse("empty input".into()));
        }
        let labels: Vec<usize> = lines[0]
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::DreamParse(format!("bad label {t:?}")))
            })
            .collect::<Result<_>>()?;
        let rank = labels.len();
        if lines.len() != rank + 1 {
            return Err(Error::DreamParse(format!(
                "expected {rank} rows, found {}",
                lines.len() - 1
            )));
        }
        let mut rows = Vec::with_capacity(rank);
        let mut lefts = Vec::with_capacity(rank);
        for line in &lines[1..] {
            let mut toks = line.split_whitespace();
            let left = toks
                .next()
                .ok_or_else(|| Error::DreamParse("missing left label".into()))?;
            lefts.push(
                left.parse::<usize>()
                    .map_err(|_| Error::DreamParse(format!("bad left label {left:?}")))?,
            );
            rows.push(toks.map(Tile::from_glyph).collect::<Result<Vec<_>>>()?);
        }
        let dream = Self::new(rank, labels, rows)?;
        if dream.exit_word() != lefts {
            return Err(Error::DreamParse(
                "left labels do not match the routed exit word".into(),
            ));
        }
        Ok(dream)
    }

    /// `{"rank": m, "labels": [...], "rows": [["B","X",...], ...]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "labels": self.labels,
            "rows": self
                .rows
                .iter()
                .map(|row| row.iter().map(|t| t.code()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::DreamParse("expected a JSON object".into()))?;
        let rank = obj
            .get("rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::DreamParse("missing rank".into()))? as usize;
        let labels = obj
            .get("labels")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::DreamParse("missing labels".into()))?
            .iter()
            .map(|l| {
                l.as_u64()
                    .map(|l| l as usize)
                    .ok_or_else(|| Error::DreamParse(format!("bad label {l}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let rows = obj
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::DreamParse("missing rows".into()))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::DreamParse("row must be an array".into()))?
                    .iter()
                    .map(|t| {
                        t.as_str()
                            .ok_or_else(|| Error::DreamParse(format!("bad tile {t}")))
                            .and_then(Tile::from_code)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rank, labels, rows)
    }
}

/// Tiles visited by exactly two pipes, with the visiting label pair.
/// Diagonal tiles see a single strand and are skipped.
fn visitor_pairs(paths: &[Vec<Visit>], labels: &[usize]) -> Vec<((usize, usize), (usize, usize))> {
    let mut visitors: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (idx, path) in paths.iter().enumerate() {
        for v in path {
            visitors
                .entry((v.row, v.col))
                .or_default()
                .push(labels[idx]);
        }
    }
    visitors
        .into_iter()
        .filter(|(_, who)| who.len() == 2)
        .map(|(pos, who)| {
            let (a, b) = (who[0].min(who[1]), who[0].max(who[1]));
            (pos, (a, b))
        })
        .collect()
}

/// All reduced pipe dreams with exit word `w` and no marks, sorted
/// lexicographically by row-major tile sequence. Each dream carries exactly
/// `length(w)` crossings.
pub fn enumerate_rpd(w: &Permutation) -> Vec<PipeDream> {
    let m = w.size();
    if m == 0 {
        return vec![PipeDream::empty()];
    }
    let mut search = RpdSearch {
        m,
        target: w.entries().to_vec(),
        total_crosses: w.length(),
        rows: Vec::with_capacity(m),
        results: Vec::new(),
    };
    let frontier: Vec<usize> = (1..=m).collect();
    search.fill_rows(1, &frontier, 0, 0);
    search.results.sort();
    search.results
}

/// Row-by-row depth-first fill. The frontier holds, per column, which pipe
/// enters the next row from the north; rows are routed right to left so
/// each tile knows its east strand. Branches die as soon as a pair would
/// cross twice, the row's exit label disagrees with the target, or the
/// remaining tiles cannot reach the required crossing count.
struct RpdSearch {
    m: usize,
    target: Vec<usize>,
    total_crosses: usize,
    rows: Vec<Vec<Tile>>,
    results: Vec<PipeDream>,
}

impl RpdSearch {
    fn fill_rows(&mut self, row: usize, frontier: &[usize], crossed: u128, used: usize) {
        if row > self.m {
            debug_assert_eq!(used, self.total_crosses);
            let dream = PipeDream::new(self.m, (1..=self.m).collect(), self.rows.clone())
                .expect("search emits valid staircases");
            self.results.push(dream);
            return;
        }
        let len = self.m + 1 - row;
        let mut tiles_rev = Vec::with_capacity(len);
        let mut souths_rev = Vec::with_capacity(len.saturating_sub(1));
        self.fill_tiles(
            row,
            len,
            frontier,
            None,
            &mut tiles_rev,
            &mut souths_rev,
            crossed,
            used,
        );
    }

    #[allow(clippy::too_many_arguments)]
    fn fill_tiles(
        &mut self,
        row: usize,
        col: usize,
        frontier: &[usize],
        east_in: Option<usize>,
        tiles_rev: &mut Vec<Tile>,
        souths_rev: &mut Vec<usize>,
        crossed: u128,
        used: usize,
    ) {
        if col == 0 {
            let exiting = east_in.expect("west strand of column 1");
            if exiting != self.target[row - 1] {
                return;
            }
            let below = self.m - row;
            let capacity = below * below.saturating_sub(1) / 2;
            if used + capacity < self.total_crosses {
                return;
            }
            let row_tiles: Vec<Tile> = tiles_rev.iter().rev().copied().collect();
            let next_frontier: Vec<usize> = souths_rev.iter().rev().copied().collect();
            self.rows.push(row_tiles);
            self.fill_rows(row + 1, &next_frontier, crossed, used);
            self.rows.pop();
            return;
        }
        let north = frontier[col - 1];
        if col == self.m + 1 - row {
            // diagonal: forced bump, no east strand, no south output
            debug_assert!(east_in.is_none());
            tiles_rev.push(Tile::Bump);
            self.fill_tiles(
                row,
                col - 1,
                frontier,
                Some(north),
                tiles_rev,
                souths_rev,
                crossed,
                used,
            );
            tiles_rev.pop();
            return;
        }
        let east = east_in.expect("non-diagonal tiles receive an east strand");
        // bump: north strand exits west, east strand drops south
        tiles_rev.push(Tile::Bump);
        souths_rev.push(east);
        self.fill_tiles(
            row,
            col - 1,
            frontier,
            Some(north),
            tiles_rev,
            souths_rev,
            crossed,
            used,
        );
        souths_rev.pop();
        tiles_rev.pop();
        // cross: both strands run straight; a second crossing of the same
        // pair would break reducedness
        if used < self.total_crosses {
            let bit = pair_bit(self.m, north, east);
            if crossed & bit == 0 {
                tiles_rev.push(Tile::Cross);
                souths_rev.push(north);
                self.fill_tiles(
                    row,
                    col - 1,
                    frontier,
                    Some(east),
                    tiles_rev,
                    souths_rev,
                    crossed | bit,
                    used + 1,
                );
                souths_rev.pop();
                tiles_rev.pop();
            }
        }
    }
}

fn pair_bit(m: usize, a: usize, b: usize) -> u128 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    1u128 << ((lo - 1) * m + (hi - 1))
}

/// All marked reduced pipe dreams of `w`: every reduced dream combined with
/// every subset of its markable bumps, sorted lexicographically.
pub fn enumerate_mrpd(w: &Permutation) -> Vec<PipeDream> {
    let mut out = Vec::new();
    for dream in enumerate_rpd(w) {
        let markable: Vec<(usize, usize)> = dream.markable_bumps().into_iter().collect();
        debug_assert!(markable.len() < 64);
        for mask in 0u64..(1 << markable.len()) {
            let marks: BTreeSet<(usize, usize)> = markable
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            out.push(dream.with_marks(&marks));
        }
    }
    out.sort();
    out
}

/// The Grothendieck polynomial of `w` as the mark-weighted sum of dream
/// monomials.
pub fn grothendieck_via_pipe_dreams(w: &Permutation) -> MultiPoly {
    let n = w.size();
    let mut sum = MultiPoly::zero(n);
    for dream in enumerate_mrpd(w) {
        let mut exps = vec![0u32; n + 1];
        exps[0] = dream.mbt() as u32;
        for (i, row) in dream.rows().iter().enumerate() {
            for &t in row {
                if t != Tile::Bump {
                    exps[i + 1] += 1;
                }
            }
        }
        sum.insert_term(exps, BigInt::from(1));
    }
    sum
}
