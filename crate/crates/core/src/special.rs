//! Principal specializations, pattern-expansion coefficients, interval
//! sums, the exhaustive verification harness, and the on-disk value cache.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::perm::{interval_subwords, reduced_words, subwords, Permutation, Subword};
use crate::pipedream::{enumerate_mrpd, enumerate_rpd, grothendieck_via_pipe_dreams, PipeDream};
use crate::poly::{grothendieck_via_divided_differences, BetaPoly};
use crate::reduction::{
    d_poly, d_rel_poly, enumerate_cmrpd, phi_j, psi, reduce_to_core, removable_labels,
};
use crate::{Error, Result};

fn p1423() -> Permutation {
    Permutation::from_oneline(&[1, 4, 2, 3]).unwrap()
}

fn p1342() -> Permutation {
    Permutation::from_oneline(&[1, 3, 4, 2]).unwrap()
}

/// How to compute a principal specialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpsilonMethod {
    /// Count marked reduced dreams by mark number.
    PipeDreams,
    /// Specialize the divided-difference polynomial at `x_i = 1`.
    DividedDifferences,
}

/// The principal specialization of the Grothendieck polynomial of `w`: set
/// every `x_i = 1` and collect by `beta` degree. Both methods agree.
pub fn upsilon_beta(w: &Permutation, method: UpsilonMethod) -> BetaPoly {
    match method {
        UpsilonMethod::PipeDreams => {
            let mut p = BetaPoly::zero();
            for dream in enumerate_mrpd(w) {
                p.add_power(dream.mbt());
            }
            p
        }
        UpsilonMethod::DividedDifferences => {
            grothendieck_via_divided_differences(w).specialize_ones()
        }
    }
}

/// The Schubert specialization: the constant term of `upsilon_beta`, i.e.
/// the number of reduced dreams of `w`.
pub fn upsilon_schubert(w: &Permutation) -> BigInt {
    BigInt::from(enumerate_rpd(w).len())
}

/// The reduced-word average `(sum over reduced words of the letter
/// products) / length!`. It always clears the factorial; a remainder is
/// reported as an internal error. Must agree with `upsilon_schubert`.
pub fn macdonald_value(w: &Permutation) -> Result<BigInt> {
    let ell = w.length();
    let mut sum = BigInt::zero();
    for word in reduced_words(w) {
        let mut prod = BigInt::from(1);
        for a in word {
            prod *= BigInt::from(a);
        }
        sum += prod;
    }
    let mut factorial = BigInt::from(1);
    for k in 2..=ell {
        factorial *= BigInt::from(k);
    }
    if (&sum % &factorial) != BigInt::zero() {
        return Err(Error::MacdonaldNotIntegral(w.to_string()));
    }
    Ok(sum / factorial)
}

/// How to compute the pattern-expansion coefficient `c_w(beta)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CwMethod {
    /// Alternating sum of specializations over the subword lattice.
    InclusionExclusion,
    /// Peel pattern occurrences of every smaller permutation.
    Recursive,
    /// Count core dreams; valid exactly for 1423-avoiding permutations.
    Core,
}

/// The coefficient of `w` in the pattern expansion of the principal
/// specialization, with `c` of the empty permutation set to 1. All
/// applicable methods agree; the core method is rejected when `w` contains
/// the pattern 1423.
pub fn c_poly(w: &Permutation, method: CwMethod, cache: &SpecCache) -> Result<BetaPoly> {
    match method {
        CwMethod::InclusionExclusion => Ok(c_poly_ie(w, cache)),
        CwMethod::Recursive => {
            let mut memo = BTreeMap::new();
            Ok(c_poly_rec(w, cache, &mut memo))
        }
        CwMethod::Core => {
            if !w.avoids(&p1423()) {
                return Err(Error::CoreMethodUnavailable(w.to_string()));
            }
            Ok(d_poly(w.entries()))
        }
    }
}

fn c_poly_ie(w: &Permutation, cache: &SpecCache) -> BetaPoly {
    let n = w.size();
    let mut acc = BetaPoly::zero();
    for v in subwords(w) {
        let ups = cache.upsilon(&v.pattern());
        if (n - v.len()).is_multiple_of(2) {
            acc += &ups;
        } else {
            acc -= &ups;
        }
    }
    acc
}

fn c_poly_rec(
    w: &Permutation,
    cache: &SpecCache,
    memo: &mut BTreeMap<Vec<usize>, BetaPoly>,
) -> BetaPoly {
    if let Some(c) = memo.get(w.entries()) {
        return c.clone();
    }
    let mut acc = cache.upsilon(w);
    for m in 0..w.size() {
        for v in Permutation::all(m) {
            let occurrences = w.count_pattern(&v);
            if occurrences > 0 {
                let cv = c_poly_rec(&v, cache, memo);
                acc -= &cv.scale(&BigInt::from(occurrences));
            }
        }
    }
    memo.insert(w.entries().to_vec(), acc.clone());
    acc
}

/// Alternating sum of specializations over the subword interval `[u, w]`.
/// Errors when `u` is not a subword of `w`.
pub fn interval_sum(u: &Subword, w: &Permutation, cache: &SpecCache) -> Result<BetaPoly> {
    let n = w.size();
    let mut acc = BetaPoly::zero();
    for v in interval_subwords(u, w)? {
        let ups = cache.upsilon(&v.pattern());
        if (n - v.len()).is_multiple_of(2) {
            acc += &ups;
        } else {
            acc -= &ups;
        }
    }
    Ok(acc)
}

/// Memoized specializations keyed by one-line word, optionally persisted as
/// a JSON object. Values are reproducible, so the cache is advisory:
/// loading audits one stored entry against a fresh computation and rejects
/// the file on a mismatch. Writes go through a single lock; heavy fills use
/// [`prefill`](Self::prefill), which computes misses in parallel and merges
/// them in one step.
#[derive(Debug, Default)]
pub struct SpecCache {
    table: Mutex<BTreeMap<String, BetaPoly>>,
}

impl SpecCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.table.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Get-or-compute the specialization of `w` (pipe dream route).
    pub fn upsilon(&self, w: &Permutation) -> BetaPoly {
        let key = w.oneline_string();
        if let Some(v) = self.table.lock().unwrap().get(&key) {
            return v.clone();
        }
        let value = upsilon_beta(w, UpsilonMethod::PipeDreams);
        self.table.lock().unwrap().insert(key, value.clone());
        value
    }

    /// Computes any missing entries in parallel, then merges them under the
    /// lock in a single step.
    pub fn prefill(&self, perms: &[Permutation]) {
        let missing: Vec<&Permutation> = {
            let t = self.table.lock().unwrap();
            perms
                .iter()
                .filter(|w| !t.contains_key(&w.oneline_string()))
                .collect()
        };
        let computed: Vec<(String, BetaPoly)> = missing
            .par_iter()
            .map(|w| {
                (
                    w.oneline_string(),
                    upsilon_beta(w, UpsilonMethod::PipeDreams),
                )
            })
            .collect();
        let mut t = self.table.lock().unwrap();
        for (k, v) in computed {
            t.insert(k, v);
        }
    }

    /// Every permutation of size at most `n`, so that subword-pattern
    /// lookups for `S_n` sweeps never miss.
    pub fn prefill_patterns(&self, n: usize) {
        let mut perms = Vec::new();
        for k in 0..=n {
            perms.extend(Permutation::all(k));
        }
        self.prefill(&perms);
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::CacheIo(e.to_string()))?;
        let value: Value =
            serde_json::from_str(&text).map_err(|e| Error::CacheIo(e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::CacheIo("expected a JSON object".into()))?;
        let mut table = BTreeMap::new();
        for (key, v) in obj {
            let w: Permutation = key.parse()?;
            table.insert(w.oneline_string(), BetaPoly::from_json(v)?);
        }
        if !table.is_empty() {
            let idx = rand::thread_rng().gen_range(0..table.len());
            let (key, stored) = table.iter().nth(idx).unwrap();
            let w: Permutation = key.parse()?;
            if *stored != upsilon_beta(&w, UpsilonMethod::PipeDreams) {
                return Err(Error::CacheCorrupt(path.display().to_string(), key.clone()));
            }
        }
        Ok(SpecCache {
            table: Mutex::new(table),
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let table = self.table.lock().unwrap();
        let mut obj = serde_json::Map::new();
        for (k, v) in table.iter() {
            obj.insert(k.clone(), v.to_json());
        }
        let text = serde_json::to_string_pretty(&Value::Object(obj)).expect("JSON encoding");
        std::fs::write(path, text).map_err(|e| Error::CacheIo(e.to_string()))
    }
}

/// One failed universe element of a check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckFailure {
    pub witness: String,
    pub expected: String,
    pub got: String,
}

/// Outcome of one exhaustive check: how many universe elements passed, and
/// a witness for every failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub universe: String,
    pub passes: usize,
    pub failures: Vec<CheckFailure>,
}

impl CheckReport {
    pub fn total(&self) -> usize {
        self.passes + self.failures.len()
    }

    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("JSON encoding")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} over {}: {}/{} pass",
            self.check_name,
            self.universe,
            self.passes,
            self.total()
        )?;
        for fail in &self.failures {
            writeln!(
                f,
                "  FAIL {}: expected {}, got {}",
                fail.witness, fail.expected, fail.got
            )?;
        }
        Ok(())
    }
}

/// The exhaustive checks exposed by [`verify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    /// Pipe dream and divided-difference polynomials agree.
    OracleDd,
    /// Reduced-word average equals the reduced dream count.
    Macdonald,
    /// Augmenting undoes reduction on every marked reduced dream.
    PhiPsiRoundtrip,
    /// Deletions of distinct removable pipes commute.
    PhiCommute,
    /// For 1423-avoiders, reduction hits every core of every subword
    /// exactly once.
    Bijection1423,
    /// For 1423-avoiders, the expansion coefficient equals the core count
    /// polynomial.
    ThmCEqualsD,
    /// Specializations and expansion coefficients are invariant under
    /// inversion.
    InverseConservation,
    /// Expansion coefficients of 1423-avoiders are coefficient-nonnegative.
    DenninNonneg1423,
    /// Expansion coefficients of 1342-avoiders are coefficient-nonnegative.
    DenninNonneg1342,
    /// Interval sums match relative core polynomials and are nonnegative.
    MtInterval,
    /// Specializations are bounded by the sum of core polynomials over
    /// subwords.
    UpperBound,
}

impl Check {
    pub const ALL: [Check; 11] = [
        Check::OracleDd,
        Check::Macdonald,
        Check::PhiPsiRoundtrip,
        Check::PhiCommute,
        Check::Bijection1423,
        Check::ThmCEqualsD,
        Check::InverseConservation,
        Check::DenninNonneg1423,
        Check::DenninNonneg1342,
        Check::MtInterval,
        Check::UpperBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::OracleDd => "oracle_dd",
            Check::Macdonald => "macdonald",
            Check::PhiPsiRoundtrip => "phi_psi_roundtrip",
            Check::PhiCommute => "phi_commute",
            Check::Bijection1423 => "bijection_1423",
            Check::ThmCEqualsD => "thm_c_equals_d",
            Check::InverseConservation => "inverse_conservation",
            Check::DenninNonneg1423 => "dennin_nonneg_1423",
            Check::DenninNonneg1342 => "dennin_nonneg_1342",
            Check::MtInterval => "mt_interval",
            Check::UpperBound => "upper_bound",
        }
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownCheck(s.to_string()))
    }
}

/// Runs one check exhaustively over `S_n` (restricted to the stated
/// avoidance class where applicable) and reports every failure witness.
pub fn verify(check: Check, n: usize) -> CheckReport {
    match check {
        Check::OracleDd => check_oracle_dd(n),
        Check::Macdonald => check_macdonald(n),
        Check::PhiPsiRoundtrip => check_phi_psi_roundtrip(n),
        Check::PhiCommute => check_phi_commute(n),
        Check::Bijection1423 => check_bijection_1423(n),
        Check::ThmCEqualsD => check_thm_c_equals_d(n),
        Check::InverseConservation => check_inverse_conservation(n),
        Check::DenninNonneg1423 => check_dennin_nonneg(n, p1423(), "dennin_nonneg_1423"),
        Check::DenninNonneg1342 => check_dennin_nonneg(n, p1342(), "dennin_nonneg_1342"),
        Check::MtInterval => check_mt_interval(n),
        Check::UpperBound => check_upper_bound(n),
    }
}

/// Parallel sweep of `units`; `test` returns `(expected, got)` on failure.
fn run_units<T: Sync + fmt::Display>(
    name: &str,
    universe: String,
    units: &[T],
    test: impl Fn(&T) -> Option<(String, String)> + Sync,
) -> CheckReport {
    let failures: Vec<CheckFailure> = units
        .par_iter()
        .filter_map(|u| {
            test(u).map(|(expected, got)| CheckFailure {
                witness: u.to_string(),
                expected,
                got,
            })
        })
        .collect();
    CheckReport {
        check_name: name.to_string(),
        universe,
        passes: units.len() - failures.len(),
        failures,
    }
}

fn avoiders(n: usize, pattern: &Permutation) -> Vec<Permutation> {
    Permutation::all(n)
        .into_iter()
        .filter(|w| w.avoids(pattern))
        .collect()
}

fn check_oracle_dd(n: usize) -> CheckReport {
    let units = Permutation::all(n);
    run_units("oracle_dd", format!("all w in S_{n}"), &units, |w| {
        let dd = grothendieck_via_divided_differences(w);
        let pd = grothendieck_via_pipe_dreams(w);
        (pd != dd).then(|| (dd.to_string(), pd.to_string()))
    })
}

fn check_macdonald(n: usize) -> CheckReport {
    let units = Permutation::all(n);
    run_units("macdonald", format!("all w in S_{n}"), &units, |w| {
        let expected = upsilon_schubert(w);
        match macdonald_value(w) {
            Ok(got) if got == expected => None,
            Ok(got) => Some((expected.to_string(), got.to_string())),
            Err(e) => Some((expected.to_string(), format!("error: {e}"))),
        }
    })
}

fn check_phi_psi_roundtrip(n: usize) -> CheckReport {
    let units = Permutation::all(n);
    run_units(
        "phi_psi_roundtrip",
        format!("all w in S_{n}"),
        &units,
        |w| {
            for dream in enumerate_mrpd(w) {
                let r = reduce_to_core(&dream);
                match psi(&r) {
                    Ok(back) if back == dream => {}
                    Ok(back) => {
                        return Some((dream.to_json().to_string(), back.to_json().to_string()))
                    }
                    Err(e) => return Some((dream.to_json().to_string(), format!("error: {e}"))),
                }
            }
            None
        },
    )
}

fn check_phi_commute(n: usize) -> CheckReport {
    let units = Permutation::all(n);
    run_units("phi_commute", format!("all w in S_{n}"), &units, |w| {
        for dream in enumerate_mrpd(w) {
            let removable = removable_labels(&dream);
            for (i, &a) in removable.iter().enumerate() {
                for &b in &removable[i + 1..] {
                    let ab = match phi_j(&dream, a).and_then(|d| phi_j(&d, b)) {
                        Ok(d) => d,
                        Err(e) => {
                            return Some((
                                "both deletion orders legal".into(),
                                format!("error: {e}"),
                            ))
                        }
                    };
                    let ba = match phi_j(&dream, b).and_then(|d| phi_j(&d, a)) {
                        Ok(d) => d,
                        Err(e) => {
                            return Some((
                                "both deletion orders legal".into(),
                                format!("error: {e}"),
                            ))
                        }
                    };
                    if ab != ba {
                        return Some((ab.to_json().to_string(), ba.to_json().to_string()));
                    }
                }
            }
        }
        None
    })
}

fn check_bijection_1423(n: usize) -> CheckReport {
    let units = avoiders(n, &p1423());
    run_units(
        "bijection_1423",
        format!("1423-avoiding w in S_{n}"),
        &units,
        |w| {
            bijection_defect(w).map(|(missing, extra)| {
                (
                    "reduction image equals the union of cores over subwords".into(),
                    format!("{missing} cores missed, {extra} spurious"),
                )
            })
        },
    )
}

/// Compares the reduction image of the marked reduced dreams of `w` with
/// the disjoint union of the cores of all subwords; `None` means equal.
/// Returns `(missing, extra)` counts otherwise. Injectivity failures show
/// up as `extra` after multiset bookkeeping.
pub fn bijection_defect(w: &Permutation) -> Option<(usize, usize)> {
    let (image, targets) = bijection_sides(w);
    if image == targets {
        None
    } else {
        let missing = targets.difference(&image).count();
        let extra = image.difference(&targets).count();
        Some((missing, extra))
    }
}

/// Core dreams tagged by the word they spell.
pub type TaggedDreams = BTreeSet<(Vec<usize>, PipeDream)>;

/// The two sides of the reduction bijection: reduction images of the
/// marked reduced dreams of `w`, and all cores of all subwords of `w`,
/// both tagged by source word. Reduction is injective, so sets suffice;
/// a collapse would surface as a missing core.
pub fn bijection_sides(w: &Permutation) -> (TaggedDreams, TaggedDreams) {
    let dreams = enumerate_mrpd(w);
    let mut image = BTreeSet::new();
    for dream in &dreams {
        let r = reduce_to_core(dream);
        image.insert((r.core.source.word(), r.core.dream));
    }
    debug_assert_eq!(image.len(), dreams.len(), "reduction must stay injective");
    let mut targets = BTreeSet::new();
    for v in subwords(w) {
        for core in enumerate_cmrpd(&v) {
            targets.insert((v.word(), core.dream));
        }
    }
    (image, targets)
}

fn check_thm_c_equals_d(n: usize) -> CheckReport {
    let cache = SpecCache::new();
    cache.prefill_patterns(n);
    let units = avoiders(n, &p1423());
    run_units(
        "thm_c_equals_d",
        format!("1423-avoiding w in S_{n}"),
        &units,
        |w| {
            let c = c_poly_ie(w, &cache);
            let d = d_poly(w.entries());
            (c != d).then(|| (d.to_string(), c.to_string()))
        },
    )
}

fn check_inverse_conservation(n: usize) -> CheckReport {
    let cache = SpecCache::new();
    cache.prefill_patterns(n);
    let units = Permutation::all(n);
    run_units(
        "inverse_conservation",
        format!("all w in S_{n}"),
        &units,
        |w| {
            let wi = w.inverse();
            let cw = c_poly_ie(w, &cache);
            let cwi = c_poly_ie(&wi, &cache);
            if cw != cwi {
                return Some((format!("c = {cw}"), format!("c of inverse = {cwi}")));
            }
            let uw = cache.upsilon(w);
            let uwi = cache.upsilon(&wi);
            if uw != uwi {
                return Some((
                    format!("upsilon = {uw}"),
                    format!("upsilon of inverse = {uwi}"),
                ));
            }
            None
        },
    )
}

fn check_dennin_nonneg(n: usize, pattern: Permutation, name: &str) -> CheckReport {
    let cache = SpecCache::new();
    cache.prefill_patterns(n);
    let units = avoiders(n, &pattern);
    run_units(
        name,
        format!("{pattern}-avoiding w in S_{n}"),
        &units,
        |w| {
            let c = c_poly_ie(w, &cache);
            (!c.is_coeff_nonneg()).then(|| ("nonnegative coefficients".into(), c.to_string()))
        },
    )
}

fn check_mt_interval(n: usize) -> CheckReport {
    let cache = SpecCache::new();
    cache.prefill_patterns(n);
    let units = avoiders(n, &p1423());
    run_units(
        "mt_interval",
        format!("1423-avoiding w in S_{n}"),
        &units,
        |w| {
            let full = Subword::full(w.entries()).expect("permutation entries are distinct");
            for u in subwords(w) {
                let lhs = interval_sum(&u, w, &cache).expect("u is a subword of w");
                let rhs = d_rel_poly(&u, &full);
                if lhs != rhs {
                    return Some((format!("u={u}: {rhs}"), lhs.to_string()));
                }
                if !lhs.is_coeff_nonneg() {
                    return Some((format!("u={u}: nonnegative coefficients"), lhs.to_string()));
                }
            }
            None
        },
    )
}

fn check_upper_bound(n: usize) -> CheckReport {
    let cache = SpecCache::new();
    cache.prefill_patterns(n);
    let mut patterns = Vec::new();
    for k in 0..=n {
        patterns.extend(Permutation::all(k));
    }
    let d_by_pattern: BTreeMap<String, BetaPoly> = patterns
        .par_iter()
        .map(|p| (p.oneline_string(), d_poly(p.entries())))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let units = Permutation::all(n);
    run_units("upper_bound", format!("all w in S_{n}"), &units, |w| {
        let ups = cache.upsilon(w);
        let mut bound = BetaPoly::zero();
        for v in subwords(w) {
            bound += &d_by_pattern[&v.pattern().oneline_string()];
        }
        (!ups.coeff_leq(&bound)).then(|| (format!("coefficients at most {bound}"), ups.to_string()))
    })
}

/// One row of the full-`S_n` scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub w: String,
    pub avoids_1423: bool,
    pub avoids_1342: bool,
    pub upsilon: BetaPoly,
    pub c: BetaPoly,
    pub c_nonneg: bool,
}

/// Specializations and expansion coefficients for every `w` in `S_n`, in
/// lexicographic one-line order. Refuses `n` outside `1..=8`.
pub fn sweep(n: usize, cache: &SpecCache) -> Result<Vec<SweepRow>> {
    if n == 0 || n > 8 {
        return Err(Error::SweepRange(n));
    }
    cache.prefill_patterns(n);
    let (avoid_a, avoid_b) = (p1423(), p1342());
    Ok(Permutation::all(n)
        .par_iter()
        .map(|w| {
            let upsilon = cache.upsilon(w);
            let c = c_poly_ie(w, cache);
            SweepRow {
                w: w.to_string(),
                avoids_1423: w.avoids(&avoid_a),
                avoids_1342: w.avoids(&avoid_b),
                c_nonneg: c.is_coeff_nonneg(),
                upsilon,
                c,
            }
        })
        .collect())
}
