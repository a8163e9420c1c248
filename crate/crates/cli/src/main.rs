mod cache;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use ext_forge::bgpoly::{enumerate_summands, f_multi, Cells, Window};
use ext_forge::charts::{render_json, render_svg, render_tsv, ChartStyle};
use ext_forge::descriptor::Descriptor;
use ext_forge::hopf::Profile;
use ext_forge::resolve::{ChartOptions, FreeResolution, ResolveError};
use ext_forge::suites::{self, SUITES};

use cache::{Cache, Outcome};

#[derive(Parser)]
#[command(name = "ext-forge", version, about = "Ext charts over sub-Hopf algebras of the mod-2 Steenrod algebra")]
struct Cli {
    /// A1, A2, A3 or A (the full algebra).
    #[arg(long, global = true, default_value = "A2")]
    algebra: String,
    #[arg(long, global = true, default_value_t = 20)]
    max_s: usize,
    /// Defaults to the window's upper stem plus max-s.
    #[arg(long, global = true)]
    max_t: Option<i32>,
    #[arg(long, global = true, env = "EXT_FORGE_CACHE", default_value = ".ext-forge-cache")]
    cache_dir: PathBuf,
    /// Recompute instead of reading the cache.
    #[arg(long, global = true)]
    force: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Svg,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute (or load) a minimal resolution of F2.
    Resolve,
    /// Chart Ext of a coefficient descriptor, e.g. "bo:1 ⊗ h8v18".
    Ext {
        descriptor: String,
        /// Half-open stem window a..b.
        #[arg(long)]
        window: Option<String>,
        /// Same as --window 0..N+1.
        #[arg(long, conflicts_with = "window")]
        max_stem: Option<i32>,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
        /// Shorthand for --format svg.
        #[arg(long)]
        svg: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite (or "all"); exit code 1 on failure.
    Verify { suite: String },
    /// Brown-Gitler polynomial f_I and its summands, e.g. "2" or "1,1".
    Bgpoly {
        index: String,
        /// Half-open stem window for the summand listing.
        #[arg(long, default_value = "0..200")]
        window: String,
        #[arg(long, default_value_t = 64)]
        max_filtration: u32,
        /// point, h8 or h8v18.
        #[arg(long, default_value = "point")]
        cells: String,
        #[arg(long)]
        json: bool,
    },
}

/// Errors that map to exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Usage(msg.into()))
}

fn parse_window(w: &str) -> Result<(i32, i32)> {
    let (a, b) = w.split_once("..").ok_or_else(|| usage(format!("window {w:?} is not of the form a..b")))?;
    let a: i32 = a.trim().parse().map_err(|_| usage(format!("bad window start {a:?}")))?;
    let b: i32 = b.trim().parse().map_err(|_| usage(format!("bad window end {b:?}")))?;
    if a >= b {
        return Err(usage(format!("empty window {w}")));
    }
    Ok((a, b))
}

fn profile(name: &str) -> Result<Profile> {
    Profile::parse(name).map_err(|e| usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global().context("configuring worker threads")?;
    }
    let p = profile(&cli.algebra)?;
    match &cli.cmd {
        Cmd::Resolve => {
            let max_t = cli.max_t.ok_or_else(|| usage("resolve needs --max-t"))?;
            if cli.max_s == 0 || max_t <= 0 {
                return Err(usage("bounds must be positive"));
            }
            let cache = Cache::new(&cli.cache_dir, cli.force)?;
            let (r, outcome) = cache.resolution(&p, cli.max_s, max_t)?;
            let gens: usize = (0..=r.max_s()).map(|s| (0..=r.max_t()).map(|t| r.ext_dim(s, t)).sum::<usize>()).sum();
            let how = match outcome {
                Outcome::Hit(_) => "cache hit",
                Outcome::Computed(_) => "computed",
            };
            println!("{how}: {} (s <= {}, t <= {}, {gens} generators)", outcome.dir().display(), r.max_s(), r.max_t());
            Ok(true)
        }
        Cmd::Ext {
            descriptor,
            window,
            max_stem,
            format,
            svg,
            out,
        } => {
            let d = Descriptor::parse(descriptor).map_err(|e| usage(format!("descriptor: {e}")))?;
            let stems = match (window, max_stem) {
                (Some(w), _) => Some(parse_window(w)?),
                (None, Some(m)) => Some((0, m + 1)),
                (None, None) => None,
            };
            let max_t = match (cli.max_t, stems) {
                (Some(t), Some((_, b))) if t < b - 1 => return Err(usage(format!("window ends at stem {} beyond --max-t {t}", b - 1))),
                (Some(t), _) => t,
                (None, Some((_, b))) => b - 1 + cli.max_s as i32,
                (None, None) => return Err(usage("give --max-t or a stem window")),
            };
            let cache = Cache::new(&cli.cache_dir, cli.force)?;
            let (r, outcome) = cache.resolution(&p, cli.max_s + 1, max_t)?;
            let opts = ChartOptions {
                max_s: Some(cli.max_s),
                max_t: Some(max_t),
                stems,
                ..ChartOptions::with_products(&r, &["h0", "h1", "h2"])
            };
            let chart = d.chart(&r, &opts)?;
            for n in chart.notes.iter().filter_map(|n| n.strip_prefix("self-map ")) {
                cache.record_selection(outcome.dir(), n)?;
            }
            let format = if *svg { Format::Svg } else { *format };
            let text = match format {
                Format::Tsv => render_tsv(&chart),
                Format::Json => render_json(&chart),
                Format::Svg => render_svg(
                    &chart,
                    &ChartStyle {
                        stems,
                        max_s: Some(cli.max_s),
                        ..ChartStyle::default()
                    },
                ),
            };
            match out {
                Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        Cmd::Verify { suite } => {
            let names: Vec<&str> = match suite.as_str() {
                "all" => SUITES.to_vec(),
                s if SUITES.contains(&s) => vec![s],
                s => return Err(usage(format!("unknown suite {s:?}; expected one of {SUITES:?} or all"))),
            };
            let cache = Cache::new(&cli.cache_dir, cli.force)?;
            let resolver = |p: &Profile, s: usize, t: i32| -> Result<std::sync::Arc<FreeResolution>, ResolveError> {
                cache
                    .resolution(p, s, t)
                    .map(|x| x.0)
                    .map_err(|e| ResolveError::Malformed(format!("{e:#}")))
            };
            let mut all = true;
            let mut reports = Vec::new();
            for n in names {
                for rep in suites::run(n, &resolver)? {
                    eprintln!("{} {}: {}", if rep.passed { "PASS" } else { "FAIL" }, rep.suite, rep.summary);
                    all &= rep.passed;
                    reports.push(rep);
                }
            }
            println!("{}", serde_json::to_string_pretty(&reports)?);
            Ok(all)
        }
        Cmd::Bgpoly {
            index,
            window,
            max_filtration,
            cells,
            json,
        } => {
            let idx: Vec<u32> = index
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| usage(format!("bad index {x:?}"))))
                .collect::<Result<_>>()?;
            let cells = match cells.as_str() {
                "point" => Cells::point(),
                "h8" => Cells::h8(),
                "h8v18" => Cells::h8v18(),
                c => return Err(usage(format!("unknown cells {c:?}"))),
            };
            let w = Window::new(parse_window(window)?, (0, *max_filtration));
            let list = enumerate_summands(&idx, &w, &cells);
            if *json {
                println!("{}", serde_json::json!({"polynomial": f_multi(&idx), "summands": list}));
            } else {
                println!("{}", f_multi(&idx));
                let object = |m: u32, k: u32, l: u32| {
                    let base = match m {
                        0 => "F2".to_string(),
                        1 => "bo1".to_string(),
                        _ => format!("bo1^{m}"),
                    };
                    let shift = if k > 0 { format!("[-{k}]") } else { String::new() };
                    format!("S^{} {base}{shift}", 8 * l + k)
                };
                for d in &list.summands {
                    let l = (d.suspension - d.homological_shift) / 8;
                    println!("  {} x {}", d.multiplicity, object(d.tensor_power, d.homological_shift, l));
                }
                for a in &list.a1_terms {
                    let l = (a.suspension - a.homological_shift) / 8;
                    let rest: String = a.remaining.iter().map(|i| format!(" ⊗ bo_{i}")).collect();
                    println!(
                        "  {} x Ext over A(1) of tmf_{}{rest} ⊗ {}: {}",
                        a.multiplicity,
                        a.tmf_index,
                        object(a.tensor_power, a.homological_shift, l),
                        if a.dropped { "above the vanishing line, dropped" } else { "needs computation" }
                    );
                }
            }
            Ok(true)
        }
    }
}
