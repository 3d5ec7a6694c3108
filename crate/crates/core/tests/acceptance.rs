//! Acceptance suite: the frozen correctness gates of the crate, each
//! printing one pass/fail line. Every equality is exact — no tolerances.

mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pipedreams::perm::{pattern_of, subwords};
use pipedreams::pipedream::{enumerate_mrpd, enumerate_rpd, grothendieck_via_pipe_dreams};
use pipedreams::poly::grothendieck_via_divided_differences;
use pipedreams::reduction::{
    core_dreams_of_word, d_poly, d_rel_poly, phi_j, psi, reduce_to_core, removable_labels,
};
use pipedreams::special::{
    bijection_sides, c_poly, interval_sum, macdonald_value, upsilon_beta, upsilon_schubert,
    CwMethod, SpecCache, UpsilonMethod,
};
use pipedreams::{BetaPoly, MultiPoly, Permutation, PipeDream, Subword};

use common::{dream, perm};

fn shared_cache() -> &'static SpecCache {
    static CACHE: OnceLock<SpecCache> = OnceLock::new();
    CACHE.get_or_init(SpecCache::new)
}

fn avoiders(n: usize, pattern: &Permutation) -> Vec<Permutation> {
    Permutation::all(n)
        .into_iter()
        .filter(|w| w.avoids(pattern))
        .collect()
}

/// The Grothendieck polynomial of 2143, term by term.
fn grothendieck_2143() -> MultiPoly {
    let mut expected = MultiPoly::zero(4);
    for (b, xs) in [
        (0u32, [2u32, 0, 0, 0]),
        (0, [1, 1, 0, 0]),
        (0, [1, 0, 1, 0]),
        (1, [2, 1, 0, 0]),
        (1, [2, 0, 1, 0]),
        (1, [1, 1, 1, 0]),
        (2, [2, 1, 1, 0]),
    ] {
        let mut exps = vec![b];
        exps.extend(xs);
        expected.insert_term(exps, BigInt::from(1));
    }
    expected
}

#[test]
fn criterion_01_upsilon_2143() {
    let w = perm("2143");
    let expected = BetaPoly::from_i64s(&[3, 3, 1]);
    assert_eq!(upsilon_beta(&w, UpsilonMethod::PipeDreams), expected);
    assert_eq!(
        upsilon_beta(&w, UpsilonMethod::DividedDifferences),
        expected
    );
    println!(
        "criterion 01: PASS — upsilon(2143) = [3,3,1] by pipe dreams and by divided differences"
    );
}

#[test]
fn criterion_02_grothendieck_2143_term_for_term() {
    let w = perm("2143");
    let expected = grothendieck_2143();
    assert_eq!(grothendieck_via_pipe_dreams(&w), expected);
    assert_eq!(grothendieck_via_divided_differences(&w), expected);
    println!("criterion 02: PASS — Grothendieck polynomial of 2143 matches term for term by both methods");
}

#[test]
fn criterion_03_dream_counts_2143() {
    let w = perm("2143");
    assert_eq!(enumerate_rpd(&w).len(), 3);
    assert_eq!(enumerate_mrpd(&w).len(), 7);
    let cores = core_dreams_of_word(w.entries());
    assert_eq!(cores.len(), 2);
    let mbts: BTreeSet<usize> = cores.iter().map(PipeDream::mbt).collect();
    assert_eq!(mbts, BTreeSet::from([1, 2]));
    println!("criterion 03: PASS — 2143 has 3 reduced dreams, 7 marked dreams, 2 cores with mark counts {{1,2}}");
}

#[test]
fn criterion_04_pipe_dreams_match_divided_differences() {
    for w in Permutation::all(4) {
        assert_eq!(
            grothendieck_via_pipe_dreams(&w),
            grothendieck_via_divided_differences(&w),
            "disagreement at {w}"
        );
    }
    let mut sample = Permutation::all(5);
    let mut rng = ChaCha8Rng::seed_from_u64(20250810);
    sample.shuffle(&mut rng);
    for w in sample.into_iter().take(50) {
        assert_eq!(
            grothendieck_via_pipe_dreams(&w),
            grothendieck_via_divided_differences(&w),
            "disagreement at {w}"
        );
    }
    println!("criterion 04: PASS — pipe dream and divided-difference polynomials agree on all of S_4 and 50 sampled elements of S_5");
}

#[test]
fn criterion_05_macdonald_on_s5() {
    for w in Permutation::all(5) {
        assert_eq!(
            macdonald_value(&w).unwrap(),
            upsilon_schubert(&w),
            "disagreement at {w}"
        );
    }
    println!("criterion 05: PASS — reduced-word average equals the reduced dream count on all 120 elements of S_5");
}

#[test]
fn criterion_06_roundtrip_and_commutation() {
    let mut dreams_seen = 0usize;
    for w in Permutation::all(5) {
        for d in enumerate_mrpd(&w) {
            let r = reduce_to_core(&d);
            assert_eq!(psi(&r).unwrap(), d, "round trip failed at w={w}");
            dreams_seen += 1;
        }
    }
    let mut pairs_seen = 0usize;
    for w in Permutation::all(4) {
        for d in enumerate_mrpd(&w) {
            let removable = removable_labels(&d);
            for (i, &a) in removable.iter().enumerate() {
                for &b in &removable[i + 1..] {
                    let ab = phi_j(&phi_j(&d, a).unwrap(), b).unwrap();
                    let ba = phi_j(&phi_j(&d, b).unwrap(), a).unwrap();
                    assert_eq!(ab, ba, "orders disagree at w={w} a={a} b={b}");
                    pairs_seen += 1;
                }
            }
        }
    }
    assert!(pairs_seen > 0);
    println!("criterion 06: PASS — augmenting undoes reduction on all {dreams_seen} marked dreams of S_5; deletions commute on {pairs_seen} removable pairs over S_4");
}

#[test]
fn criterion_07_reduction_bijection() {
    for n in 0..=5 {
        for w in avoiders(n, &perm("1423")) {
            let (image, targets) = bijection_sides(&w);
            assert_eq!(image, targets, "bijection fails at w={w}");
        }
    }
    // the lone pattern occurrence in S_4: the image misses exactly the two
    // cores of the subword 143
    let w = perm("1423");
    let (image, targets) = bijection_sides(&w);
    let missed: Vec<(Vec<usize>, PipeDream)> = targets.difference(&image).cloned().collect();
    let expected = vec![
        (vec![1, 4, 3], dream(&[1, 3, 4], &["BBB", "XB", "B"])),
        (vec![1, 4, 3], dream(&[1, 3, 4], &["BXB", "MB", "B"])),
    ];
    assert_eq!(missed, expected);
    assert!(image.difference(&targets).next().is_none());
    println!("criterion 07: PASS — reduction is a bijection onto subword cores for every 1423-avoider up to S_5, and misses exactly the two cores of 143 for w = 1423");
}

#[test]
fn criterion_08_c_equals_d_on_s6_avoiders() {
    let cache = shared_cache();
    cache.prefill_patterns(6);
    let units = avoiders(6, &perm("1423"));
    for w in &units {
        let c = c_poly(w, CwMethod::InclusionExclusion, cache).unwrap();
        let d = d_poly(w.entries());
        assert_eq!(c, d, "c and d disagree at {w}");
    }
    println!(
        "criterion 08: PASS — expansion coefficient equals the core polynomial on all {} 1423-avoiders of S_6",
        units.len()
    );
}

#[test]
fn criterion_09_interval_sums_s4() {
    let cache = shared_cache();
    cache.prefill_patterns(4);
    let units = avoiders(4, &perm("1423"));
    for w in &units {
        let full = Subword::full(w.entries()).unwrap();
        let subs = subwords(w);
        assert_eq!(subs.len(), 16);
        for u in subs {
            let lhs = interval_sum(&u, w, cache).unwrap();
            let rhs = d_rel_poly(&u, &full);
            assert_eq!(lhs, rhs, "interval sum differs at w={w} u={u}");
            assert!(lhs.is_coeff_nonneg(), "negative coefficient at w={w} u={u}");
        }
    }
    println!(
        "criterion 09: PASS — interval sums equal relative core polynomials and are nonnegative for all {} 1423-avoiders of S_4 and every subword",
        units.len()
    );
}

#[test]
fn criterion_10_inverse_conservation_s5() {
    let cache = shared_cache();
    cache.prefill_patterns(5);
    for w in Permutation::all(5) {
        let wi = w.inverse();
        assert_eq!(
            c_poly(&w, CwMethod::InclusionExclusion, cache).unwrap(),
            c_poly(&wi, CwMethod::InclusionExclusion, cache).unwrap(),
            "c differs from inverse at {w}"
        );
        assert_eq!(
            cache.upsilon(&w),
            cache.upsilon(&wi),
            "upsilon differs from inverse at {w}"
        );
    }
    println!("criterion 10: PASS — c and upsilon are invariant under inversion on all of S_5");
}

#[test]
fn criterion_11_upper_bound_s5() {
    let cache = shared_cache();
    cache.prefill_patterns(5);
    let mut d_by_pattern = std::collections::BTreeMap::new();
    for k in 0..=5 {
        for p in Permutation::all(k) {
            d_by_pattern.insert(p.oneline_string(), d_poly(p.entries()));
        }
    }
    for w in Permutation::all(5) {
        let ups = cache.upsilon(&w);
        let mut bound = BetaPoly::zero();
        for v in subwords(&w) {
            bound += &d_by_pattern[&v.pattern().oneline_string()];
        }
        assert!(
            ups.coeff_leq(&bound),
            "bound fails at {w}: upsilon={ups} bound={bound}"
        );
    }
    println!("criterion 11: PASS — upsilon is coefficient-bounded by the sum of core polynomials over subwords on all of S_5");
}

#[test]
fn criterion_12_nonnegativity_sweep_s6() {
    let cache = shared_cache();
    cache.prefill_patterns(6);
    let mut offenders = Vec::new();
    for w in Permutation::all(6) {
        let c = c_poly(&w, CwMethod::InclusionExclusion, cache).unwrap();
        if !c.is_coeff_nonneg() {
            offenders.push((w.clone(), cache.upsilon(&w), c));
        }
    }
    if !offenders.is_empty() {
        eprintln!("NEGATIVE COEFFICIENT WITNESSES ({}):", offenders.len());
        for (w, ups, c) in &offenders {
            eprintln!("  w={w} upsilon={ups} c={c}");
        }
        panic!(
            "nonnegativity sweep found {} witnesses in S_6 — dump above",
            offenders.len()
        );
    }
    println!("criterion 12: PASS — every expansion coefficient over all 720 elements of S_6 is coefficient-nonnegative");
}

#[test]
fn criterion_13_pattern_statistics() {
    assert_eq!(perm("1432").count_pattern(&perm("132")), 3);
    assert_eq!(pattern_of(&[2, 5, 7, 4]).unwrap(), perm("1342"));
    println!("criterion 13: PASS — p_132(1432) = 3 and the pattern of 2574 is 1342");
}
