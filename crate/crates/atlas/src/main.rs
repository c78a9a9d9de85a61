use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;

use weil_atlas::catalog::{self, Filter};
use weil_atlas::error::{AtlasError, Result};
use weil_atlas::labels::label_for_poly;
use weil_atlas::pairs::{pair_to_json, MapRecord, PairRecord};
use weil_atlas::report;
use weil_core::modules::{coker_order, hom_lattice, tau_dual};
use weil_core::weil::{enumerate_weil_polys, DEFAULT_ENUM_CAP};
use weil_core::{CoreError, PrimePower};

const DEGREE_CAP_ENV: &str = "WEIL_ATLAS_DEGREE_CAP";

#[derive(Parser)]
#[command(
    name = "weil-atlas",
    version,
    about = "Catalog of Weil polynomial classes, minimal central orders, and Frobenius lattice pairs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate all monic Weil polynomials of one even degree.
    Enumerate {
        /// Prime power q.
        #[arg(long)]
        q: u64,
        /// Even degree 2g of the polynomials.
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = EnumFormat::Json)]
        format: EnumFormat,
        /// Restrict to shard i of n contiguous leading-coefficient chunks, as "i/n".
        #[arg(long)]
        shard: Option<String>,
        #[arg(long, value_enum)]
        filter: Option<FilterArg>,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report invariants of the minimal central order of a set of classes.
    OrderInfo {
        /// Class labels such as 1.5.m1; a single rational label (0.q.s or
        /// 0.q.ms) augments the order it generates together with the rest.
        #[arg(required = true)]
        labels: Vec<String>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate and compute with Frobenius lattice pairs from JSON files.
    #[command(subcommand)]
    Pair(PairCmd),
    /// Count the degree-2 Weil polynomials for a prime p, by enumeration.
    CountElliptic { p: u64 },
}

#[derive(Subcommand)]
enum PairCmd {
    /// Validate a pair file and report its support.
    Check {
        file: PathBuf,
        /// Enforce the prime-field conditions: reject real classes.
        #[arg(long)]
        p_restricted: bool,
    },
    /// Basis of the homomorphism lattice between two pairs.
    Hom {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the dual pair, with Frobenius and Verschiebung exchanged.
    Dual {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cokernel order of a map file: the isogeny degree, or "infinite".
    Degree { map_file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    Ordinary,
    Irreducible,
}

fn main() {
    let cli = Cli::try_parse().unwrap_or_else(|e| {
        let _ = e.print();
        std::process::exit(3);
    });
    if let Err(e) = run(cli) {
        eprintln!("{}", e.error_record());
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Enumerate {
            q,
            degree,
            format,
            shard,
            filter,
            out,
        } => cmd_enumerate(q, degree, format, shard, filter, out),
        Cmd::OrderInfo {
            labels,
            format,
            out,
        } => cmd_order_info(&labels, format, out),
        Cmd::Pair(p) => match p {
            PairCmd::Check { file, p_restricted } => cmd_pair_check(&file, p_restricted),
            PairCmd::Hom {
                source,
                target,
                out,
            } => cmd_pair_hom(&source, &target, out),
            PairCmd::Dual { file, out } => cmd_pair_dual(&file, out),
            PairCmd::Degree { map_file } => cmd_pair_degree(&map_file),
        },
        Cmd::CountElliptic { p } => cmd_count_elliptic(p),
    }
}

fn degree_cap() -> Result<usize> {
    match std::env::var(DEGREE_CAP_ENV) {
        Err(_) => Ok(DEFAULT_ENUM_CAP),
        Ok(s) => s.parse().map_err(|_| {
            AtlasError::Malformed(format!("{DEGREE_CAP_ENV} must be an integer, got {s:?}"))
        }),
    }
}

fn parse_shard(s: &str) -> Result<(u32, u32)> {
    let err = || AtlasError::Malformed(format!("shard must be i/n with 1 <= i <= n, got {s:?}"));
    let (i, n) = s.split_once('/').ok_or_else(err)?;
    let i: u32 = i.parse().map_err(|_| err())?;
    let n: u32 = n.parse().map_err(|_| err())?;
    if i == 0 || n == 0 || i > n {
        return Err(err());
    }
    Ok((i, n))
}

fn emit(out: Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(&path, content)?;
            Ok(())
        }
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_enumerate(
    q: u64,
    degree: usize,
    format: EnumFormat,
    shard: Option<String>,
    filter: Option<FilterArg>,
    out: Option<PathBuf>,
) -> Result<()> {
    let shard = shard.as_deref().map(parse_shard).transpose()?;
    let filter = filter.map(|f| match f {
        FilterArg::Ordinary => Filter::Ordinary,
        FilterArg::Irreducible => Filter::Irreducible,
    });
    let shard = catalog::build_shard(q, degree, shard, filter, degree_cap()?)?;
    let content = match format {
        EnumFormat::Json => catalog::to_json(&shard)?,
        EnumFormat::Csv => catalog::to_csv(&shard),
    };
    emit(out, &content)
}

fn cmd_order_info(labels: &[String], format: ReportFormat, out: Option<PathBuf>) -> Result<()> {
    let r = report::order_report(labels)?;
    let content = match format {
        ReportFormat::Text => report::render_text(&r),
        ReportFormat::Json => report::report_json(&r)?,
    };
    emit(out, &content)
}

fn cmd_pair_check(file: &PathBuf, p_restricted: bool) -> Result<()> {
    let rec = PairRecord::parse(&std::fs::read_to_string(file)?)?;
    let pair = match rec.validate(p_restricted) {
        Ok(p) => p,
        Err(e) => {
            if let AtlasError::Core(ce) = &e {
                println!("invalid: {ce}");
            }
            return Err(e);
        }
    };
    let support = pair.support();
    let mut labels = Vec::new();
    for c in support.classes() {
        labels.push(label_for_poly(pair.prime_power(), c.minpoly())?);
    }
    let ordinary = support.classes().iter().all(|c| c.is_ordinary());
    println!(
        "valid, {}, support {}",
        if ordinary { "ordinary" } else { "not ordinary" },
        labels.join(" ")
    );
    Ok(())
}

fn cmd_pair_hom(source: &PathBuf, target: &PathBuf, out: Option<PathBuf>) -> Result<()> {
    let src = PairRecord::parse(&std::fs::read_to_string(source)?)?.validate(false)?;
    let dst = PairRecord::parse(&std::fs::read_to_string(target)?)?.validate(false)?;
    let basis = hom_lattice(&src, &dst)?;
    let mut rows = Vec::new();
    for map in &basis {
        let entries: Vec<String> = map
            .matrix()
            .entries()
            .iter()
            .map(|e| e.to_string())
            .collect();
        rows.push(format!("    [{}]", entries.join(", ")));
    }
    let content = format!(
        "{{\n  \"rank\": {},\n  \"rows\": {},\n  \"cols\": {},\n  \"basis\": [\n{}\n  ]\n}}\n",
        basis.len(),
        dst.rank(),
        src.rank(),
        rows.join(",\n")
    );
    emit(out, &content)
}

fn cmd_pair_dual(file: &PathBuf, out: Option<PathBuf>) -> Result<()> {
    let pair = PairRecord::parse(&std::fs::read_to_string(file)?)?.validate(false)?;
    let dual = tau_dual(&pair);
    let content = pair_to_json(&PairRecord::for_pair(&dual)?)?;
    emit(out, &content)
}

fn cmd_pair_degree(map_file: &PathBuf) -> Result<()> {
    let map = MapRecord::parse(&std::fs::read_to_string(map_file)?)?.validate()?;
    match coker_order(&map) {
        Some(d) if !d.is_zero() => println!("{d}"),
        _ => println!("infinite"),
    }
    Ok(())
}

fn cmd_count_elliptic(p: u64) -> Result<()> {
    let pp = PrimePower::from_u64(p)?;
    if pp.e() != 1 {
        return Err(AtlasError::Core(CoreError::NotPrime(p.to_string())));
    }
    let polys = enumerate_weil_polys(&pp, 2)?;
    println!("{}", polys.len());
    Ok(())
}
