use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use bootstrap_unique::approx::{
    approx_report, boundary_scan, madcd_grid, CellParams, GridOptions, GridSpec, SkewnessRule,
};
use bootstrap_unique::exact::distribution;
use bootstrap_unique::moments::{central_moment_capped, raw_moment_capped, DEFAULT_MAX_ORDER};
use bootstrap_unique::multivariate::{
    joint_distribution_capped, lattice_to_f64_map, marginal_category_distribution,
    CategoryProfile, DEFAULT_COMPOSITION_CAP,
};
use bootstrap_unique::output::{render, Cell, Format, Metadata, Table};
use bootstrap_unique::simulate::{empirical_distribution, tv_distance, SimConfig};
use bootstrap_unique::Error;

/// Environment variable naming the directory for relative `--out` paths.
const OUT_DIR_ENV: &str = "BOOTSTRAP_UNIQUE_OUT_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "bootstrap-unique",
    version,
    about = "Exact and approximate distribution of unique items in a bootstrap sample"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Timestamp recorded in JSON metadata (default: SOURCE_DATE_EPOCH, else now).
    #[arg(long, global = true)]
    timestamp: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Baseline {
    Unique,
    Binomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Rule2Form {
    Standard,
    Printed,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact pmf of the unique count for N items and A draws.
    Dist {
        n: u32,
        a: u32,
        /// Also emit the cumulative distribution.
        #[arg(long)]
        cdf: bool,
    },
    /// Closed-form moments of order 0..=t.
    Moments {
        n: u32,
        a: u32,
        #[arg(long, default_value_t = 2)]
        t: u32,
        /// Central instead of raw moments.
        #[arg(long)]
        central: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: u32,
    },
    /// Normal-approximation report for one (N, A).
    Check { n: u32, a: u32 },
    /// MADCD/JSD scan over a parameter grid.
    Grid {
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long, default_value_t = 150)]
        n_max: u32,
        #[arg(long, default_value_t = 1)]
        a_min: u32,
        #[arg(long, default_value_t = 150)]
        a_max: u32,
        #[arg(long, value_enum, default_value_t = Baseline::Unique)]
        baseline: Baseline,
        /// Binomial baseline: p runs over i / p_den for i = 1..=p_den/2.
        #[arg(long, default_value_t = 200)]
        p_den: u32,
        /// Binomial baseline: form of the skewness rule.
        #[arg(long, value_enum, default_value_t = Rule2Form::Standard)]
        rule2_form: Rule2Form,
        /// Largest admissible N/A (unique, default 150) or n_b (binomial, default 400).
        #[arg(long)]
        cap: Option<u32>,
    },
    /// MADCD along the edges of the acceptance region.
    Boundary {
        #[arg(long, default_value_t = 6)]
        n_min: u32,
        #[arg(long, default_value_t = 150)]
        n_max: u32,
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Exact joint pmf of unique counts per category.
    Joint {
        /// Category sizes N_1 .. N_C.
        #[arg(required = true)]
        sizes: Vec<u32>,
        #[arg(long = "A")]
        a: u32,
        /// Emit only the marginal of category s (1-based).
        #[arg(long)]
        marginal: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_COMPOSITION_CAP)]
        cap: u64,
    },
    /// Monte Carlo tallies, with TV distance to the exact law when feasible.
    Sample {
        /// N, or category sizes N_1 .. N_C.
        #[arg(required = true)]
        sizes: Vec<u32>,
        #[arg(long = "A")]
        a: u32,
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_COMPOSITION_CAP)]
        cap: u64,
    },
}

struct Output {
    table: Table,
    meta: Metadata,
}

fn timestamp(flag: Option<&str>) -> String {
    if let Some(t) = flag {
        return t.to_string();
    }
    let now = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.parse::<i64>().ok())
        .and_then(|secs| chrono::DateTime::from_timestamp(secs, 0))
        .unwrap_or_else(chrono::Utc::now);
    now.to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn params(pairs: Value) -> Map<String, Value> {
    match pairs {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

fn f64_of(r: &num_rational::BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let ts = timestamp(cli.timestamp.as_deref());
    match &cli.command {
        Command::Dist { n, a, cdf } => {
            let dist = distribution(*n, *a)?;
            let mut cols = vec!["k", "p", "p_f64"];
            if *cdf {
                cols.extend(["cdf", "cdf_f64"]);
            }
            let mut table = Table::new(cols);
            let cdfs = dist.pmf().cdf_f64();
            for (i, p) in dist.probs().iter().enumerate() {
                let mut row = vec![Cell::from(i as u32), Cell::prob(p), p.to_f64().into()];
                if *cdf {
                    row.push(Cell::prob(&dist.cdf(i as i64)));
                    row.push(cdfs[i].into());
                }
                table.push(row);
            }
            let meta = Metadata::new(
                "dist",
                params(json!({"n": n, "a": a, "cdf": cdf})),
                ts,
            );
            Ok(Output { table, meta })
        }
        Command::Moments {
            n,
            a,
            t,
            central,
            max_order,
        } => {
            let mut table = Table::new(["t", "kind", "moment", "moment_f64"]);
            let kind = if *central { "central" } else { "raw" };
            for order in 0..=*t {
                let m = if *central {
                    central_moment_capped(*n, *a, order, *max_order)?
                } else {
                    raw_moment_capped(*n, *a, order, *max_order)?
                };
                table.push(vec![
                    order.into(),
                    Cell::Text(kind.into()),
                    Cell::ratio(&m),
                    f64_of(&m).into(),
                ]);
            }
            let meta = Metadata::new(
                "moments",
                params(json!({"n": n, "a": a, "t": t, "central": central, "max_order": max_order})),
                ts,
            );
            Ok(Output { table, meta })
        }
        Command::Check { n, a } => {
            let r = approx_report(*n, *a)?;
            let mut table = Table::new([
                "N",
                "A",
                "mean",
                "sd",
                "madcd",
                "jsd",
                "jsd_base2",
                "heuristic_pass",
            ]);
            table.push(vec![
                r.n.into(),
                r.a.into(),
                r.mean.into(),
                r.sd.into(),
                r.madcd.into(),
                r.jsd.into(),
                r.jsd_base2.into(),
                r.heuristic_pass.into(),
            ]);
            let meta = Metadata::new("check", params(json!({"n": n, "a": a})), ts);
            Ok(Output { table, meta })
        }
        Command::Grid {
            n_min,
            n_max,
            a_min,
            a_max,
            baseline,
            p_den,
            rule2_form,
            cap,
        } => {
            let rule = match rule2_form {
                Rule2Form::Standard => SkewnessRule::Standard,
                Rule2Form::Printed => SkewnessRule::AsPrinted,
            };
            let spec = match baseline {
                Baseline::Unique => GridSpec::Unique {
                    n: *n_min..=*n_max,
                    a: *a_min..=*a_max,
                },
                Baseline::Binomial => GridSpec::Binomial {
                    n_b: *n_min..=*n_max,
                    p_denominator: *p_den,
                    rule,
                },
            };
            let grid = madcd_grid(&spec, GridOptions { cap: *cap })?;
            let mut table = match baseline {
                Baseline::Unique => Table::new(["N", "A", "madcd", "jsd", "heuristic_pass"]),
                Baseline::Binomial => {
                    Table::new(["n_b", "p", "p_f64", "madcd", "jsd", "rule_pass"])
                }
            };
            for cell in &grid.cells {
                let madcd = Cell::opt_float(cell.metrics.map(|m| m.madcd));
                let jsd = Cell::opt_float(cell.metrics.map(|m| m.jsd));
                let row = match cell.params {
                    CellParams::Unique { n, a } => {
                        vec![n.into(), a.into(), madcd, jsd, cell.in_region.into()]
                    }
                    CellParams::Binomial { n_b, p_num, p_den } => vec![
                        n_b.into(),
                        Cell::Text(format!("{p_num}/{p_den}")),
                        (p_num as f64 / p_den as f64).into(),
                        madcd,
                        jsd,
                        cell.in_region.into(),
                    ],
                };
                table.push(row);
            }
            let mut meta = Metadata::new(
                "grid",
                params(json!({
                    "baseline": format!("{baseline:?}").to_lowercase(),
                    "n_min": n_min, "n_max": n_max, "a_min": a_min, "a_max": a_max,
                    "p_den": p_den,
                    "rule2_form": format!("{rule2_form:?}").to_lowercase(),
                    "cap": cap,
                })),
                ts,
            );
            let best = |v: Option<(f64, CellParams)>| match v {
                Some((x, p)) => json!({"value": x, "at": p}),
                None => Value::Null,
            };
            meta.summary
                .insert("max_madcd_in_region".into(), best(grid.max_madcd_in_region()));
            meta.summary
                .insert("max_jsd_in_region".into(), best(grid.max_jsd_in_region()));
            meta.summary
                .insert("flagged_cells".into(), json!(grid.flagged()));
            Ok(Output { table, meta })
        }
        Command::Boundary { n_min, n_max, cap } => {
            let scan = boundary_scan(*n_min..=*n_max, GridOptions { cap: *cap })?;
            let mut table = Table::new(["N", "A_lower", "A_upper", "madcd_lower", "madcd_upper"]);
            for e in &scan.entries {
                table.push(vec![
                    e.n.into(),
                    e.a_lower.into(),
                    e.a_upper.into(),
                    e.madcd_lower.into(),
                    e.madcd_upper.into(),
                ]);
            }
            let mut meta = Metadata::new(
                "boundary",
                params(json!({"n_min": n_min, "n_max": n_max, "cap": cap})),
                ts,
            );
            meta.summary.insert("slope_lower".into(), json!(scan.slope_lower));
            meta.summary.insert("slope_upper".into(), json!(scan.slope_upper));
            Ok(Output { table, meta })
        }
        Command::Joint {
            sizes,
            a,
            marginal,
            cap,
        } => {
            let profile = CategoryProfile::new(sizes.clone())?;
            let table = match marginal {
                Some(s) => {
                    let index = s.checked_sub(1).ok_or(Error::IndexOutOfRange {
                        index: 0,
                        len: profile.categories(),
                    })?;
                    let pmf = marginal_category_distribution(&profile, *a, index)?;
                    let mut table = Table::new([format!("k_{s}"), "p".into(), "p_f64".into()]);
                    for (k, p) in pmf.support().zip(pmf.probs()) {
                        table.push(vec![k.into(), Cell::prob(&p), p.to_f64().into()]);
                    }
                    table
                }
                None => {
                    let joint = joint_distribution_capped(&profile, *a, *cap)?;
                    let mut cols: Vec<String> =
                        (1..=profile.categories()).map(|s| format!("k_{s}")).collect();
                    cols.extend(["numerator", "denominator", "p_f64"].map(String::from));
                    let mut table = Table::new(cols);
                    for (k, p) in joint.iter() {
                        let mut row: Vec<Cell> = k.iter().map(|&x| x.into()).collect();
                        row.push(Cell::Text(p.numer().to_string()));
                        row.push(Cell::Text(p.denom().to_string()));
                        row.push(p.to_f64().into());
                        table.push(row);
                    }
                    table
                }
            };
            let meta = Metadata::new(
                "joint",
                params(json!({"sizes": sizes, "a": a, "marginal": marginal, "cap": cap})),
                ts,
            );
            Ok(Output { table, meta })
        }
        Command::Sample {
            sizes,
            a,
            reps,
            seed,
            cap,
        } => {
            let profile = CategoryProfile::new(sizes.clone())?;
            let (config, exact) = if profile.categories() == 1 {
                let n = profile.total();
                let exact = lattice_to_f64_map(distribution(n, *a)?.pmf());
                (SimConfig::single(n, *a, *reps, *seed), Some(exact))
            } else {
                let exact = match joint_distribution_capped(&profile, *a, *cap) {
                    Ok(j) => Some(j.to_f64_map()),
                    Err(e) if e.is_cap() => None,
                    Err(e) => return Err(e),
                };
                (SimConfig::profile(profile.clone(), *a, *reps, *seed), exact)
            };
            let emp = empirical_distribution(&config)?;
            let mut cols: Vec<String> = if profile.categories() == 1 {
                vec!["k".into()]
            } else {
                (1..=profile.categories()).map(|s| format!("k_{s}")).collect()
            };
            cols.extend(["count", "frequency", "exact_f64"].map(String::from));
            let mut table = Table::new(cols);
            for (k, &c) in &emp.counts {
                let mut row: Vec<Cell> = k.iter().map(|&x| x.into()).collect();
                row.push(c.into());
                row.push((c as f64 / emp.total as f64).into());
                row.push(Cell::opt_float(
                    exact.as_ref().map(|m| m.get(k).copied().unwrap_or(0.0)),
                ));
                table.push(row);
            }
            let mut meta = Metadata::new(
                "sample",
                params(json!({"sizes": sizes, "a": a, "reps": reps, "seed": seed, "cap": cap})),
                ts,
            );
            meta.summary.insert(
                "tv_distance".into(),
                json!(exact.as_ref().map(|m| tv_distance(&emp, m))),
            );
            Ok(Output { table, meta })
        }
    }
}

fn destination(out: &PathBuf) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if out.is_relative() => PathBuf::from(dir).join(out),
        _ => out.clone(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if e.is_cap() { 3 } else { 2 });
        }
    };
    let text = render(&output.table, &output.meta, cli.format);
    if cli.format == Format::Csv {
        // CSV carries rows only; summaries go to stderr.
        for (k, v) in &output.meta.summary {
            eprintln!("# {k} = {v}");
        }
    }
    match &cli.out {
        Some(path) => {
            let path = destination(path);
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
