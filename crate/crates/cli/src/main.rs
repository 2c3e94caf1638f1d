//! Command-line workbench for exact verification of toric vanishing and
//! degeneration statements over small prime fields.

mod fanfile;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use frobsplit::cech::{bott_verify, cohomology_dims, degeneration_check, splitting_verify};
use frobsplit::config::DEFAULT_SEED;
use frobsplit::divisor::{ample_check, Divisor};
use frobsplit::lattice::{hilbert_basis, Cone, LatticeTag};
use frobsplit::monomial::verify_glue_compat;
use frobsplit::oracle::{incidence_nonvanishing, quadric_nonvanishing, PnOracle};
use frobsplit::witt::{all_elements, WittPair};
use frobsplit::{Error, SessionConfig};

#[derive(Parser)]
#[command(name = "frobsplit")]
#[command(version)]
#[command(about = "Exact toric vanishing, splitting and degeneration checks over prime fields")]
struct Cli {
    /// Coefficient characteristic (a prime up to 97)
    #[arg(long, global = true, default_value_t = 2)]
    prime: u64,

    /// Additive margin around the default degree box (default: rank + 1)
    #[arg(long, global = true)]
    box_margin: Option<i64>,

    /// Seed for randomized checks; fixed default keeps runs reproducible
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Column threshold above which rank computations go sparse
    #[arg(long, global = true, default_value_t = 4096)]
    max_matrix: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the addition and multiplication tables of the length-2 Witt ring
    WittTable,
    /// Generators of the dual cone
    Dual {
        #[arg(long)]
        rank: usize,
        /// Generators, e.g. "1,0;1,2"
        #[arg(long)]
        gens: String,
    },
    /// Minimal semigroup generators of a cone in the character lattice
    Hilbert {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        gens: String,
    },
    /// Parse and validate a fan file
    CheckFan {
        #[arg(long)]
        fan: PathBuf,
    },
    /// Ampleness certificate for a divisor (exit 1 when not ample)
    CheckAmple {
        #[arg(long)]
        fan: PathBuf,
        /// Per-ray coefficients "1,0,0", or "H" / "kH" for k on the first ray
        #[arg(long)]
        divisor: Option<String>,
    },
    /// Cohomology table of twisted reflexive forms
    Cohomology {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        p_form: usize,
        #[arg(long)]
        divisor: Option<String>,
    },
    /// Verify vanishing of all positive-degree cohomology for an ample twist
    BottVerify {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        divisor: Option<String>,
    },
    /// Verify the Frobenius lift commutes with every chart inclusion
    FrobeniusVerify {
        #[arg(long)]
        fan: PathBuf,
    },
    /// Verify the splitting identities on random chart forms
    SigmaVerify {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Verify first-page degeneration of the Hodge spectral sequence
    Degeneration {
        #[arg(long)]
        fan: PathBuf,
    },
    /// Quadric hypersurface non-vanishing value via the dimension chase
    Quadric {
        #[arg(long)]
        n: usize,
    },
    /// Incidence hypersurface non-vanishing value via the dimension chase
    Incidence {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    schema: u32,
    command: String,
    config: SessionConfig,
    result: T,
}

fn emit<T: Serialize>(format: Format, command: &str, config: &SessionConfig, result: &T) {
    if format == Format::Json {
        let report = Report {
            schema: 1,
            command: command.to_string(),
            config: config.clone(),
            result,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serialization")
        );
    }
}

fn parse_vectors(s: &str) -> Result<Vec<Vec<i64>>, Error> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|w| {
                    w.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::InvalidInput(format!("bad integer {:?}", w)))
                })
                .collect()
        })
        .collect()
}

/// Divisor from the command line or the fan file. "H" and "kH" put the
/// coefficient on the first ray, which is the hyperplane class on the
/// standard projective fans.
fn resolve_divisor(
    arg: &Option<String>,
    from_file: Option<Divisor>,
    n_rays: usize,
) -> Result<Divisor, Error> {
    if let Some(s) = arg {
        let s = s.trim();
        if let Some(head) = s.strip_suffix('H') {
            let k: i64 = if head.is_empty() {
                1
            } else {
                head.parse()
                    .map_err(|_| Error::InvalidInput(format!("bad divisor {:?}", s)))?
            };
            let mut coeffs = vec![0i64; n_rays];
            if n_rays == 0 {
                return Err(Error::InvalidInput("fan has no rays".into()));
            }
            coeffs[0] = k;
            return Ok(Divisor::new(coeffs));
        }
        let rows = parse_vectors(s)?;
        if rows.len() != 1 {
            return Err(Error::InvalidInput(
                "divisor must be a single coefficient list".into(),
            ));
        }
        return Ok(Divisor::new(rows.into_iter().next().unwrap()));
    }
    from_file.ok_or_else(|| {
        Error::InvalidInput("no divisor given on the command line or in the fan file".into())
    })
}

fn run(cli: Cli) -> Result<i32, Error> {
    let mut config = SessionConfig::new(cli.prime);
    config.box_margin = cli.box_margin;
    config.seed = cli.seed;
    config.max_dense_cols = cli.max_matrix;
    let format = cli.format;
    match cli.command {
        Command::WittTable => {
            config.validate()?;
            let p = config.prime;
            let elems = all_elements(p);
            #[derive(Serialize)]
            struct WittTables {
                prime: u64,
                elements: Vec<(u64, u64)>,
                zp2_images: Vec<u64>,
                add: Vec<Vec<usize>>,
                mul: Vec<Vec<usize>>,
            }
            let index_of = |w: &WittPair| (w.a0 * p + w.a1) as usize;
            let add = elems
                .iter()
                .map(|a| {
                    elems
                        .iter()
                        .map(|b| index_of(&a.add(b).expect("same prime")))
                        .collect()
                })
                .collect();
            let mul = elems
                .iter()
                .map(|a| {
                    elems
                        .iter()
                        .map(|b| index_of(&a.mul(b).expect("same prime")))
                        .collect()
                })
                .collect();
            let result = WittTables {
                prime: p,
                elements: elems.iter().map(|w| (w.a0, w.a1)).collect(),
                zp2_images: elems.iter().map(|w| w.to_zp2()).collect(),
                add,
                mul,
            };
            emit(format, "witt-table", &config, &result);
            if format == Format::Table {
                println!("W2(F_{}) elements: {:?}", p, result.elements);
                println!("Z/p^2 images:    {:?}", result.zp2_images);
            }
            Ok(0)
        }
        Command::Dual { rank, gens } => {
            let gens = parse_vectors(&gens)?;
            let cone = Cone::new(rank, LatticeTag::N, gens)?;
            let dual = cone.dual()?;
            #[derive(Serialize)]
            struct DualResult {
                generators: Vec<Vec<i64>>,
                dual_generators: Vec<Vec<i64>>,
            }
            let result = DualResult {
                generators: cone.generators().to_vec(),
                dual_generators: dual.generators().to_vec(),
            };
            emit(format, "dual", &config, &result);
            if format == Format::Table {
                println!("dual cone generators: {:?}", result.dual_generators);
            }
            Ok(0)
        }
        Command::Hilbert { rank, gens } => {
            let gens = parse_vectors(&gens)?;
            let cone = Cone::new(rank, LatticeTag::M, gens)?;
            let basis = hilbert_basis(&cone, config.max_box_points)?;
            #[derive(Serialize)]
            struct HilbertResult {
                generators: Vec<Vec<i64>>,
                basis: Vec<Vec<i64>>,
            }
            let result = HilbertResult {
                generators: cone.generators().to_vec(),
                basis,
            };
            emit(format, "hilbert", &config, &result);
            if format == Format::Table {
                println!("semigroup generators: {:?}", result.basis);
            }
            Ok(0)
        }
        Command::CheckFan { fan } => {
            let parsed = fanfile::parse_fan_file(&fan)?;
            let f = &parsed.fan;
            #[derive(Serialize)]
            struct FanSummary {
                rank: usize,
                rays: Vec<Vec<i64>>,
                cones: usize,
                maximal_cones: usize,
                cones_by_dim: Vec<usize>,
                complete: bool,
                simplicial: bool,
                smooth: bool,
                normalized_rays: bool,
                divisor: Option<Vec<i64>>,
            }
            let mut by_dim = vec![0usize; f.rank() + 1];
            for i in 0..f.cones().len() {
                by_dim[f.cone(i).dim()] += 1;
            }
            let result = FanSummary {
                rank: f.rank(),
                rays: f.rays().to_vec(),
                cones: f.cones().len(),
                maximal_cones: f.maximal_cones().len(),
                cones_by_dim: by_dim,
                complete: f.is_complete(config.seed)?,
                simplicial: f.is_simplicial(),
                smooth: f.is_smooth(),
                normalized_rays: f.normalized_rays,
                divisor: parsed.divisor.map(|d| d.coeffs),
            };
            emit(format, "check-fan", &config, &result);
            if format == Format::Table {
                println!(
                    "rank {}  rays {}  cones {} (maximal {})  complete {}  smooth {}",
                    result.rank,
                    result.rays.len(),
                    result.cones,
                    result.maximal_cones,
                    result.complete,
                    result.smooth
                );
            }
            Ok(0)
        }
        Command::CheckAmple { fan, divisor } => {
            let parsed = fanfile::parse_fan_file(&fan)?;
            let d = resolve_divisor(&divisor, parsed.divisor, parsed.fan.rays().len())?;
            let cert = ample_check(&parsed.fan, &d, config.seed)?;
            emit(format, "check-ample", &config, &cert);
            if format == Format::Table {
                match cert.failing_wall {
                    None => println!("ample: linearizations {:?}", cert.linearizations),
                    Some((cone, ray)) => println!(
                        "not ample: wall between maximal cone {} and ray {} is not strict",
                        cone, ray
                    ),
                }
            }
            Ok(if cert.ample { 0 } else { 1 })
        }
        Command::Cohomology {
            fan,
            p_form,
            divisor,
        } => {
            let parsed = fanfile::parse_fan_file(&fan)?;
            let d = match divisor {
                Some(_) => resolve_divisor(&divisor, parsed.divisor, parsed.fan.rays().len())?,
                None => parsed
                    .divisor
                    .unwrap_or_else(|| Divisor::zero(&parsed.fan)),
            };
            let table = cohomology_dims(&parsed.fan, p_form, &d, None, &config)?;
            emit(format, "cohomology", &config, &table);
            if format == Format::Table {
                print!("p_form {}:", p_form);
                for (q, e) in table.h.iter().enumerate() {
                    print!("  h^{} = {}", q, e.lo);
                }
                println!("  (sound: {})", table.sound);
            }
            Ok(0)
        }
        Command::BottVerify { fan, divisor } => {
            let parsed = fanfile::parse_fan_file(&fan)?;
            let d = resolve_divisor(&divisor, parsed.divisor, parsed.fan.rays().len())?;
            let report = bott_verify(&parsed.fan, &d, None, &config)?;
            emit(format, "bott-verify", &config, &report);
            if format == Format::Table {
                for t in &report.tables {
                    print!("p_form {}:", t.p_form);
                    for (q, e) in t.h.iter().enumerate() {
                        print!("  h^{} = {}", q, e.lo);
                    }
                    println!("  (sound: {})", t.sound);
                }
                println!("pass: {}", report.pass);
            }
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::FrobeniusVerify { fan } => {
            config.validate()?;
            let parsed = fanfile::parse_fan_file(&fan)?;
            let report =
                verify_glue_compat(&parsed.fan, config.prime, config.seed, config.max_box_points)?;
            emit(format, "frobenius-verify", &config, &report);
            if format == Format::Table {
                println!(
                    "checked {} face pairs: {}",
                    report.pairs.len(),
                    if report.all_pass { "all pass" } else { "FAILURES" }
                );
            }
            Ok(if report.all_pass { 0 } else { 1 })
        }
        Command::SigmaVerify { fan, samples } => {
            let parsed = fanfile::parse_fan_file(&fan)?;
            let report = splitting_verify(&parsed.fan, samples, &config)?;
            emit(format, "sigma-verify", &config, &report);
            if format == Format::Table {
                println!(
                    "checked {} charts: {}",
                    report.charts.len(),
                    if report.pass { "all identities hold" } else { "FAILURES" }
                );
            }
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Degeneration { fan } => {
            let parsed = fanfile::parse_fan_file(&fan)?;
            let report = degeneration_check(&parsed.fan, None, &config)?;
            emit(format, "degeneration", &config, &report);
            if format == Format::Table {
                for row in &report.rows {
                    println!(
                        "total degree {}: first-page sum {} vs hyper {}  ({})",
                        row.n,
                        row.e1_sum,
                        row.hyper_dim,
                        if row.equal { "ok" } else { "MISMATCH" }
                    );
                }
            }
            let pass = report.degeneration
                && report.sound
                && report.betti_match != Some(false);
            Ok(if pass { 0 } else { 1 })
        }
        Command::Quadric { n } => {
            let oracle = PnOracle::new(&config)?;
            let report = quadric_nonvanishing(n, &oracle)?;
            emit(format, "quadric", &config, &report);
            if format == Format::Table {
                println!(
                    "{} = {:?} (exact: {})",
                    report.target, report.value, report.exact
                );
            }
            Ok(if report.exact { 0 } else { 1 })
        }
        Command::Incidence { n } => {
            let oracle = PnOracle::new(&config)?;
            let report = incidence_nonvanishing(n, &oracle)?;
            emit(format, "incidence", &config, &report);
            if format == Format::Table {
                println!(
                    "{} = {:?} (exact: {})",
                    report.target, report.value, report.exact
                );
            }
            Ok(if report.exact { 0 } else { 1 })
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            match e {
                Error::Capacity(_) => 3,
                _ => 2,
            }
        }
    };
    std::process::exit(code);
}
