use pipedreams::{Permutation, PipeDream, Tile};

pub fn perm(s: &str) -> Permutation {
    s.parse().unwrap()
}

/// Compact grid helper: one string per row, one char per tile
/// (B = bump, X = cross, M = marked bump).
pub fn dream(labels: &[usize], grid: &[&str]) -> PipeDream {
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
