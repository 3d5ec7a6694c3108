//! Command line front end: compute specializations and expansion
//! coefficients, enumerate pipe dreams, run exhaustive checks, and scan
//! whole symmetric groups to CSV.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use pipedreams::perm::parse_word;
use pipedreams::reduction::{core_dreams_of_word, d_poly, d_rel_poly};
use pipedreams::special::{
    c_poly, interval_sum, sweep, upsilon_beta, verify, Check, CwMethod, SpecCache, UpsilonMethod,
};
use pipedreams::{pipedream, Permutation, Subword};

#[derive(Parser)]
#[command(
    name = "pipedreams",
    version,
    about = "Grothendieck polynomial specializations via marked pipe dreams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Principal specialization of the Grothendieck polynomial of W, as an
    /// ascending coefficient list in beta
    Upsilon {
        /// Permutation, e.g. 2143 or 2,1,4,3
        w: String,
        #[arg(long, value_enum, default_value_t = PdOrDd::Pd)]
        method: PdOrDd,
    },
    /// Pattern-expansion coefficient polynomial of W
    Cw {
        w: String,
        #[arg(long, value_enum, default_value_t = CwArg::Ie)]
        method: CwArg,
        /// Specialization cache file (JSON), loaded if present and saved back
        #[arg(long, env = "PIPEDREAMS_CACHE")]
        cache: Option<PathBuf>,
    },
    /// Core-dream generating polynomial of W
    Dpoly {
        w: String,
        /// Pin only the labels outside this subword of W
        #[arg(long)]
        rel: Option<String>,
    },
    /// Alternating specialization sum over the subword interval [U, W]
    Interval {
        /// Subword of W, by its entries, e.g. 21
        u: String,
        w: String,
        #[arg(long, env = "PIPEDREAMS_CACHE")]
        cache: Option<PathBuf>,
    },
    /// List the pipe dreams of W in lexicographic tile order
    Enumerate {
        w: String,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// Run an exhaustive check over S_n and print a pass/fail report
    Verify {
        /// One of: oracle_dd, macdonald, phi_psi_roundtrip, phi_commute,
        /// bijection_1423, thm_c_equals_d, inverse_conservation,
        /// dennin_nonneg_1423, dennin_nonneg_1342, mt_interval, upper_bound
        check: String,
        #[arg(long)]
        n: usize,
        /// Worker threads (defaults to all cores)
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Scan all of S_n into a CSV of specializations and coefficients
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, env = "PIPEDREAMS_CACHE")]
        cache: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PdOrDd {
    /// Marked pipe dream count
    Pd,
    /// Divided differences
    Dd,
}

#[derive(Clone, Copy, ValueEnum)]
enum CwArg {
    /// Inclusion-exclusion over the subword lattice
    Ie,
    /// Recursive pattern peeling
    Rec,
    /// Core dream count (1423-avoiders only)
    Core,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// Reduced pipe dreams
    Rpd,
    /// Marked reduced pipe dreams
    Mrpd,
    /// Core marked reduced pipe dreams
    Core,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Upsilon { w, method } => {
            let w = parse_perm(&w)?;
            let method = match method {
                PdOrDd::Pd => UpsilonMethod::PipeDreams,
                PdOrDd::Dd => UpsilonMethod::DividedDifferences,
            };
            println!("{}", upsilon_beta(&w, method));
            Ok(ExitCode::SUCCESS)
        }
        Command::Cw { w, method, cache } => {
            let w = parse_perm(&w)?;
            let method = match method {
                CwArg::Ie => CwMethod::InclusionExclusion,
                CwArg::Rec => CwMethod::Recursive,
                CwArg::Core => CwMethod::Core,
            };
            let store = load_cache(cache.as_deref());
            let c = c_poly(&w, method, &store).map_err(|e| e.to_string())?;
            save_cache(cache.as_deref(), &store);
            println!("{c}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Dpoly { w, rel } => {
            let w = parse_perm(&w)?;
            let value = match rel {
                None => d_poly(w.entries()),
                Some(u) => {
                    let u = parse_subword_of(&u, &w)?;
                    let full =
                        Subword::full(w.entries()).expect("permutation entries are distinct");
                    d_rel_poly(&u, &full)
                }
            };
            println!("{value}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Interval { u, w, cache } => {
            let w = parse_perm(&w)?;
            let u = parse_subword_of(&u, &w)?;
            let store = load_cache(cache.as_deref());
            let value = interval_sum(&u, &w, &store).map_err(|e| e.to_string())?;
            save_cache(cache.as_deref(), &store);
            println!("{value}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Enumerate { w, kind, format } => {
            let w = parse_perm(&w)?;
            let dreams = match kind {
                Kind::Rpd => pipedream::enumerate_rpd(&w),
                Kind::Mrpd => pipedream::enumerate_mrpd(&w),
                Kind::Core => core_dreams_of_word(w.entries()),
            };
            for dream in dreams {
                match format {
                    Format::Ascii => println!("{}", dream.render_ascii()),
                    Format::Json => println!("{}", dream.to_json()),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { check, n, jobs } => {
            let check = Check::from_str(&check).map_err(|e| e.to_string())?;
            configure_jobs(jobs)?;
            let report = verify(check, n);
            print!("{report}");
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Sweep {
            n,
            out,
            jobs,
            cache,
        } => {
            configure_jobs(jobs)?;
            let store = load_cache(cache.as_deref());
            let rows = sweep(n, &store).map_err(|e| e.to_string())?;
            save_cache(cache.as_deref(), &store);
            write_sweep_csv(&out, &rows)?;
            println!("wrote {} rows to {}", rows.len(), out.display());
            let offenders: Vec<_> = rows.iter().filter(|r| !r.c_nonneg).collect();
            if offenders.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("NEGATIVE COEFFICIENT WITNESSES ({}):", offenders.len());
                for r in offenders {
                    eprintln!("  w={} upsilon={} c={}", r.w, r.upsilon, r.c);
                }
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn parse_perm(s: &str) -> Result<Permutation, String> {
    s.parse::<Permutation>()
        .map_err(|e| format!("bad permutation {s:?}: {e}"))
}

/// Parses `s` as a word and locates it as a subword of `w`: its entries
/// must occur in `w` in the same order.
fn parse_subword_of(s: &str, w: &Permutation) -> Result<Subword, String> {
    let word = parse_word(s).map_err(|e| format!("bad subword {s:?}: {e}"))?;
    let labels = word.iter().copied().collect();
    let sub = Subword::from_labels(w.entries(), &labels)
        .map_err(|_| format!("{s:?} is not a subword of {w}"))?;
    if sub.word() != word {
        return Err(format!("{s:?} is not a subword of {w} (order differs)"));
    }
    Ok(sub)
}

fn configure_jobs(jobs: Option<usize>) -> Result<(), String> {
    if let Some(k) = jobs {
        if k == 0 {
            return Err("--jobs must be positive".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn load_cache(path: Option<&Path>) -> SpecCache {
    match path {
        Some(p) if p.exists() => match SpecCache::load(p) {
            Ok(cache) => cache,
            Err(e) => {
                eprintln!("warning: ignoring cache {}: {e}", p.display());
                SpecCache::new()
            }
        },
        _ => SpecCache::new(),
    }
}

fn save_cache(path: Option<&Path>, cache: &SpecCache) {
    if let Some(p) = path {
        if let Err(e) = cache.save(p) {
            eprintln!("warning: could not save cache {}: {e}", p.display());
        }
    }
}

fn write_sweep_csv(path: &Path, rows: &[pipedreams::special::SweepRow]) -> Result<(), String> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| e.to_string())?;
    writer
        .write_record([
            "w",
            "avoids1423",
            "avoids1342",
            "upsilon_coeffs",
            "c_coeffs",
            "c_nonneg",
        ])
        .map_err(|e| e.to_string())?;
    for row in rows {
        writer
            .write_record([
                row.w.clone(),
                row.avoids_1423.to_string(),
                row.avoids_1342.to_string(),
                row.upsilon.to_string(),
                row.c.to_string(),
                row.c_nonneg.to_string(),
            ])
            .map_err(|e| e.to_string())?;
    }
    writer.flush().map_err(|e| e.to_string())
}
