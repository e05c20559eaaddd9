//! `glat`: lattices from finite Abelian groups on the command line.
//!
//! Every subcommand takes a group spec like `Z6` or `Z2xZ4`, except `verify`
//! (reads a basis file) and `covering-table` (takes dimensions). `--json`
//! switches to machine output; errors then carry a stable code. Exit codes:
//! 0 success, 1 domain error, 2 usage error.

use abelian_lattices::automorphism::{
    verify_symmetry_correspondence, DEFAULT_INDEX_CAP, DEFAULT_ORDER_CAP,
};
use abelian_lattices::basis::{build_minimal_basis, BuildOptions, DEFAULT_RESTARTS};
use abelian_lattices::covering::{
    bounds_table, cyclic_recursive_sq, deep_hole_estimate, four_digits, mu_root_lattice,
    CoveringReport, RECURSIVE_CAP,
};
use abelian_lattices::groups::FiniteAbelianGroup;
use abelian_lattices::lattice::{canonical_basis, norm_sq, LatticeBasis};
use abelian_lattices::linalg::IntMatrix;
use abelian_lattices::minvec::{classified_d_squared, minimum_distance};
use abelian_lattices::{Error, Result};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "glat",
    version,
    about = "Group lattices: minimal-vector bases, minimum distances, covering bounds, symmetries"
)]
struct Cli {
    /// Machine-readable JSON on stdout (errors included).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Group and lattice facts: order, rank, minimum distance, determinant.
    GroupInfo { spec: String },
    /// Print (or save) the canonical lattice basis.
    Basis {
        spec: String,
        /// Write the basis as text to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum distance and the set of minimal vectors.
    Minvec {
        spec: String,
        /// Write all minimal vectors (one per row) to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Build a basis of minimal vectors.
    BuildBasis {
        spec: String,
        /// Seed for the randomized fallback (echoed in the output).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fallback restart budget.
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: u32,
        /// Fallback swap budget per restart (default scales with rank).
        #[arg(long)]
        swap_budget: Option<u64>,
        /// Write the basis as text to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-validate a saved basis file and check its columns are minimal.
    Verify { file: PathBuf },
    /// Covering-radius bounds of the ambient root lattice per dimension.
    CoveringTable {
        /// Comma-separated dimensions.
        #[arg(
            long,
            value_delimiter = ',',
            default_values_t = vec![3u64, 4, 5, 6, 20, 50, 100, 1000, 10000, 100000, 1000000]
        )]
        n: Vec<u64>,
        /// Largest n for which the exact recursive column is computed.
        #[arg(long, default_value_t = RECURSIVE_CAP)]
        recursive_cap: u64,
        /// Comma-separated rows instead of the aligned table.
        #[arg(long)]
        csv: bool,
    },
    /// Estimate the covering radius from below by deep-hole search.
    CoveringEstimate {
        spec: String,
        /// Random cell points to refine.
        #[arg(long, default_value_t = 300)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check that lattice coordinate symmetries match group automorphisms.
    AutVerify {
        spec: String,
        /// Cap on the permutation degree n (the search walks n! candidates).
        #[arg(long, default_value_t = DEFAULT_INDEX_CAP)]
        cap: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let json = cli.json;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if json {
                println!(
                    "{}",
                    json!({"error": {"code": e.code(), "message": e.to_string()}})
                );
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::GroupInfo { spec } => group_info(&spec, cli.json),
        Cmd::Basis { spec, out } => basis_cmd(&spec, out.as_deref(), cli.json),
        Cmd::Minvec { spec, dump } => minvec_cmd(&spec, dump.as_deref(), cli.json),
        Cmd::BuildBasis { spec, seed, restarts, swap_budget, out } => {
            build_basis_cmd(&spec, seed, restarts, swap_budget, out.as_deref(), cli.json)
        }
        Cmd::Verify { file } => verify_cmd(&file, cli.json),
        Cmd::CoveringTable { n, recursive_cap, csv } => {
            covering_table_cmd(&n, recursive_cap, csv, cli.json)
        }
        Cmd::CoveringEstimate { spec, samples, seed } => {
            covering_estimate_cmd(&spec, samples, seed, cli.json)
        }
        Cmd::AutVerify { spec, cap } => aut_verify_cmd(&spec, cap, cli.json),
    }
}

fn matrix_entries(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    m.get(i, j)
                        .to_i64()
                        .ok_or_else(|| Error::Shape(format!("entry ({i},{j}) exceeds i64")))
                })
                .collect()
        })
        .collect()
}

fn group_info(spec: &str, json: bool) -> Result<()> {
    let g = FiniteAbelianGroup::parse(spec)?;
    let order = BigInt::from(g.order());
    let gram_det = (&order * &order) * &order;
    let d_squared = classified_d_squared(&g);
    let well_rounded = g.moduli() != [4];
    if json {
        println!(
            "{}",
            json!({
                "spec": g.spec(),
                "moduli": g.moduli(),
                "order": g.order(),
                "lattice_rank": g.n(),
                "d_squared": d_squared,
                "gram_det": gram_det.to_string(),
                "well_rounded": well_rounded,
            })
        );
    } else {
        println!("spec: {}", g.spec());
        let moduli: Vec<String> = g.moduli().iter().map(|m| m.to_string()).collect();
        println!("moduli: {}", moduli.join(","));
        println!("order: {}", g.order());
        println!("lattice rank: {}", g.n());
        println!("d^2: {d_squared}");
        println!("gram det: {gram_det}");
        println!("well rounded: {well_rounded}");
    }
    Ok(())
}

fn basis_cmd(spec: &str, out: Option<&Path>, json: bool) -> Result<()> {
    let g = FiniteAbelianGroup::parse(spec)?;
    let basis = LatticeBasis::new(g.clone(), canonical_basis(&g))?;
    let text = basis.to_text();
    if let Some(path) = out {
        std::fs::write(path, &text)?;
    }
    if json {
        println!(
            "{}",
            json!({
                "spec": g.spec(),
                "rows": g.n() + 1,
                "cols": g.n(),
                "matrix": matrix_entries(basis.matrix())?,
                "out": out.map(|p| p.display().to_string()),
            })
        );
    } else if let Some(path) = out {
        println!("wrote {} basis to {}", g.spec(), path.display());
    } else {
        print!("{text}");
    }
    Ok(())
}

fn minvec_cmd(spec: &str, dump: Option<&Path>, json: bool) -> Result<()> {
    let g = FiniteAbelianGroup::parse(spec)?;
    let rep = minimum_distance(&g)?;
    if let Some(path) = dump {
        std::fs::write(path, IntMatrix::from_rows_i64(&rep.vectors).to_text())?;
    }
    if json {
        println!(
            "{}",
            json!({
                "spec": g.spec(),
                "d_squared": rep.d_squared,
                "count": rep.vectors.len(),
                "rank": rep.rank,
                "well_rounded": rep.well_rounded,
                "dump": dump.map(|p| p.display().to_string()),
            })
        );
    } else {
        println!("spec: {}", g.spec());
        println!("d^2: {}", rep.d_squared);
        println!("minimal vectors: {}", rep.vectors.len());
        println!("rank: {}", rep.rank);
        println!("well rounded: {}", rep.well_rounded);
        if let Some(path) = dump {
            println!("wrote vectors to {}", path.display());
        }
    }
    Ok(())
}

fn build_basis_cmd(
    spec: &str,
    seed: u64,
    restarts: u32,
    swap_budget: Option<u64>,
    out: Option<&Path>,
    json: bool,
) -> Result<()> {
    let g = FiniteAbelianGroup::parse(spec)?;
    let opts = BuildOptions { seed, restarts, swap_budget };
    let (basis, trace) = build_minimal_basis(&g, &opts)?;
    let text = basis.to_text();
    if let Some(path) = out {
        std::fs::write(path, &text)?;
    }
    if json {
        println!(
            "{}",
            json!({
                "spec": g.spec(),
                "seed": trace.seed,
                "fallback_used": trace.fallback_used,
                "steps": trace.steps,
                "matrix": matrix_entries(basis.matrix())?,
                "out": out.map(|p| p.display().to_string()),
            })
        );
    } else {
        println!("spec: {}", g.spec());
        println!("seed: {}", trace.seed);
        for step in &trace.steps {
            println!("step: {} {}", step.tag, step.operands.join(" "));
        }
        println!("fallback used: {}", trace.fallback_used);
        if let Some(path) = out {
            println!("wrote basis to {}", path.display());
        } else {
            print!("{text}");
        }
    }
    Ok(())
}

fn verify_cmd(file: &Path, json: bool) -> Result<()> {
    let text = std::fs::read_to_string(file)?;
    let basis = LatticeBasis::parse_text(&text)?;
    let g = basis.group();
    let d_squared = classified_d_squared(g);
    for j in 0..g.n() {
        let ns = norm_sq(&basis.column(j));
        if ns != d_squared as i128 {
            return Err(Error::VerifyFailed(format!(
                "column {} has norm^2 {ns}, minimal vectors have {d_squared}",
                j + 1
            )));
        }
    }
    let order = BigInt::from(g.order());
    let gram_det = (&order * &order) * &order;
    if json {
        println!(
            "{}",
            json!({
                "file": file.display().to_string(),
                "spec": g.spec(),
                "order": g.order(),
                "gram_det": gram_det.to_string(),
                "d_squared": d_squared,
                "ok": true,
            })
        );
    } else {
        println!(
            "ok: basis of minimal vectors for {} ({}x{}, gram det {}, column norm^2 {})",
            g.spec(),
            g.n() + 1,
            g.n(),
            gram_det,
            d_squared
        );
    }
    Ok(())
}

fn recursive_display(row: &CoveringReport) -> (Option<String>, Option<String>) {
    match &row.recursive_sq {
        Some(q) => {
            let val = q.to_f64().map(f64::sqrt).map(four_digits);
            (val, Some(q.to_string()))
        }
        None => (None, None),
    }
}

fn covering_table_cmd(ns: &[u64], recursive_cap: u64, csv: bool, json: bool) -> Result<()> {
    let rows = bounds_table(ns, recursive_cap)?;
    if json {
        let out: Vec<_> = rows
            .iter()
            .map(|r| {
                let (rec, rec_sq) = recursive_display(r);
                json!({
                    "n": r.n,
                    "mu_an": four_digits(r.mu_an),
                    "log_bound": four_digits(r.log_bound),
                    "plus_sqrt2": four_digits(r.plus_sqrt2),
                    "recursive": rec,
                    "recursive_sq": rec_sq,
                })
            })
            .collect();
        println!("{}", json!({"recursive_cap": recursive_cap, "rows": out}));
    } else if csv {
        println!("n,mu_an,log_bound,plus_sqrt2,recursive");
        for r in &rows {
            let (rec, _) = recursive_display(r);
            println!(
                "{},{},{},{},{}",
                r.n,
                four_digits(r.mu_an),
                four_digits(r.log_bound),
                four_digits(r.plus_sqrt2),
                rec.unwrap_or_default()
            );
        }
    } else {
        println!(
            "{:>8}  {:>9}  {:>9}  {:>9}  {:>9}",
            "n", "mu(A_n)", "log-bound", "+sqrt(2)", "recursive"
        );
        for r in &rows {
            let (rec, _) = recursive_display(r);
            println!(
                "{:>8}  {:>9}  {:>9}  {:>9}  {:>9}",
                r.n,
                four_digits(r.mu_an),
                four_digits(r.log_bound),
                four_digits(r.plus_sqrt2),
                rec.as_deref().unwrap_or("-")
            );
        }
    }
    Ok(())
}

fn covering_estimate_cmd(spec: &str, samples: u64, seed: u64, json: bool) -> Result<()> {
    let g = FiniteAbelianGroup::parse(spec)?;
    let n = g.n() as u64;
    let estimate = deep_hole_estimate(&g, samples, seed)?;
    let mu_an = mu_root_lattice(n);
    let plus_sqrt2 = mu_an + 2f64.sqrt();
    let recursive_sq = (g.moduli().len() == 1).then(|| cyclic_recursive_sq(n));
    let recursive = recursive_sq.as_ref().and_then(|q| q.to_f64()).map(f64::sqrt);
    if json {
        println!(
            "{}",
            json!({
                "spec": g.spec(),
                "n": n,
                "samples": samples,
                "seed": seed,
                "estimate": estimate,
                "mu_an": mu_an,
                "plus_sqrt2": plus_sqrt2,
                "recursive": recursive,
                "recursive_sq": recursive_sq.as_ref().map(|q| q.to_string()),
            })
        );
    } else {
        println!("spec: {}", g.spec());
        println!("n: {n}");
        println!("samples: {samples}");
        println!("seed: {seed}");
        println!("deep-hole estimate: {estimate:.6}");
        println!("mu(A_n): {mu_an:.6}");
        println!("upper bound mu(A_n)+sqrt(2): {plus_sqrt2:.6}");
        match (recursive, recursive_sq) {
            (Some(r), Some(q)) => println!("recursive upper bound: {r:.6} (= sqrt({q}))"),
            _ => println!("recursive upper bound: - (cyclic spec needed)"),
        }
    }
    Ok(())
}

fn aut_verify_cmd(spec: &str, cap: u64, json: bool) -> Result<()> {
    let g = FiniteAbelianGroup::parse(spec)?;
    let order_cap = DEFAULT_ORDER_CAP.max(cap.saturating_add(1));
    let report = verify_symmetry_correspondence(&g, order_cap, cap)?;
    if json {
        println!(
            "{}",
            json!({
                "spec": g.spec(),
                "equal": report.equal,
                "order": report.order,
                "generators": report.generators,
            })
        );
    } else {
        println!("spec: {}", g.spec());
        println!("equal: {}", report.equal);
        println!("order: {}", report.order);
        if report.generators.is_empty() {
            println!("generators: none");
        } else {
            let gens: Vec<String> = report
                .generators
                .iter()
                .map(|p| {
                    let images: Vec<String> = p.iter().map(|i| i.to_string()).collect();
                    format!("({})", images.join(","))
                })
                .collect();
            println!("generators: {}", gens.join(" "));
        }
    }
    Ok(())
}
