//! Command-line front end: spectra, bound checks, sweeps, and searches over
//! partial transposes of bipartite states.

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use ptspec::io::{
    self, HistogramReport, OutputMeta, ProductReport, RobustnessOutput, SearchReport,
    SpectrumReport, StateData, VerifyReport,
};
use ptspec::{
    find_product_vector, ginibre_mixed, haar_pure, npt_robustness_check, random_product_state,
    search_max_neg, sweep, verify_neg_count_bound, BipartiteDims, ProductSearchConfig, SeedSpec,
    Strategy, Subsystem,
};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "ptspec", version, about = "Partial-transpose spectra of bipartite states")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Random,
    FamilyGrid,
    LocalRefine,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Random => Strategy::Random,
            StrategyArg::FamilyGrid => Strategy::FamilyGrid,
            StrategyArg::LocalRefine => Strategy::LocalRefine,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleKind {
    Haar,
    Ginibre,
    Product,
}

#[derive(Subcommand)]
enum Cmd {
    /// Partial-transpose spectrum of a state file.
    Spectrum {
        #[arg(long = "in")]
        input: PathBuf,
        /// Scale to unit trace before transposing.
        #[arg(long)]
        normalize: bool,
        /// Emit a JSON report instead of text.
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// Emit eigenvalues as CSV rows (index, eigenvalue); metadata goes
        /// to stderr.
        #[arg(long)]
        csv: bool,
    },
    /// Build a parametric family member, save it and/or print its spectrum.
    Family {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the PT spectrum (closed form where one exists).
        #[arg(long)]
        spectrum: bool,
    },
    /// Check the negative-count and eigenvalue-range bounds. Exit code 0
    /// iff the state is within both.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Evaluate a family over a parameter grid; records to CSV, optional
    /// count histogram to JSON.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        histogram: Option<PathBuf>,
    },
    /// Search for states with many negative PT eigenvalues.
    Search {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        strategy: StrategyArg,
        #[arg(long)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mix random product states into an NPT state and check it stays NPT.
    Robustness {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
    /// Look for a product vector inside the span of a basis file.
    ProductVector {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 20)]
        restarts: u32,
        #[arg(long, default_value_t = 200)]
        iters: u32,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Draw random states and write them as state files.
    Sample {
        #[arg(long, value_enum)]
        kind: SampleKind,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Mixed-state rank for ginibre; defaults to full rank mn.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Spectrum {
            input,
            normalize,
            json,
            csv,
        } => cmd_spectrum(&input, normalize, json, csv),
        Cmd::Family {
            spec,
            out,
            spectrum,
        } => cmd_family(&spec, out.as_deref(), spectrum),
        Cmd::Verify { input } => cmd_verify(&input),
        Cmd::Sweep {
            spec,
            seed,
            stream,
            out,
            histogram,
        } => cmd_sweep(&spec, SeedSpec::new(seed).with_stream(stream), &out, histogram.as_deref()),
        Cmd::Search {
            m,
            n,
            strategy,
            budget,
            seed,
            stream,
            out,
        } => cmd_search(m, n, strategy.into(), budget, SeedSpec::new(seed).with_stream(stream), &out),
        Cmd::Robustness {
            input,
            trials,
            seed,
            stream,
        } => cmd_robustness(&input, trials, SeedSpec::new(seed).with_stream(stream)),
        Cmd::ProductVector {
            input,
            restarts,
            iters,
            tol,
            seed,
        } => cmd_product_vector(&input, restarts, iters, tol, SeedSpec::new(seed)),
        Cmd::Sample {
            kind,
            m,
            n,
            rank,
            seed,
            count,
            out,
        } => cmd_sample(kind, m, n, rank, SeedSpec::new(seed), count, &out),
    }
}

fn load(input: &std::path::Path) -> Result<StateData> {
    io::load_state(input).with_context(|| format!("loading state {}", input.display()))
}

fn cmd_spectrum(input: &std::path::Path, normalize: bool, json: bool, csv: bool) -> Result<()> {
    let state = load(input)?;
    let dims = state.dims();
    let mut rho = state.to_density();
    if normalize {
        rho = rho.normalized();
    }
    let spec = rho.pt_spectrum(Subsystem::A)?;
    if json {
        let report = SpectrumReport {
            meta: OutputMeta::new(dims, None, spec.tolerance),
            spectrum: &spec,
        };
        println!("{}", io::to_json_string(&report)?);
    } else if csv {
        let mut out = String::from("index,eigenvalue\r\n");
        for (i, v) in spec.eigenvalues.iter().enumerate() {
            out.push_str(&format!("{i},{v:.16e}\r\n"));
        }
        print!("{out}");
        eprintln!(
            "dims {}x{}  neg_count {}  negativity {:.16e}  tolerance {:.3e}",
            dims.m(),
            dims.n(),
            spec.neg_count,
            spec.negativity,
            spec.tolerance
        );
    } else {
        println!("dims: {}x{}", dims.m(), dims.n());
        println!("trace: {:.16e}", rho.trace());
        println!("eigenvalues (ascending):");
        for v in &spec.eigenvalues {
            println!("  {v:.16e}");
        }
        println!("neg_count: {}", spec.neg_count);
        println!("negativity: {:.16e}", spec.negativity);
        println!("tolerance: {:.3e}", spec.tolerance);
    }
    Ok(())
}

fn cmd_family(spec_path: &std::path::Path, out: Option<&std::path::Path>, spectrum: bool) -> Result<()> {
    if out.is_none() && !spectrum {
        bail!("nothing to do: pass --out and/or --spectrum");
    }
    let spec = io::load_family_spec(spec_path)?;
    let state = spec.build()?;
    if let Some(path) = out {
        io::save_state(path, &state)?;
        eprintln!("wrote {}", path.display());
    }
    if spectrum {
        let sp = spec.spectrum()?;
        let report = SpectrumReport {
            meta: OutputMeta::new(state.dims(), None, sp.tolerance),
            spectrum: &sp,
        };
        println!("{}", io::to_json_string(&report)?);
    }
    Ok(())
}

fn cmd_verify(input: &std::path::Path) -> Result<()> {
    let state = load(input)?;
    let report = verify_neg_count_bound(&state.to_density())?;
    let wrapped = VerifyReport {
        meta: OutputMeta::new(report.dims, None, report.tolerance),
        report: &report,
    };
    println!("{}", io::to_json_string(&wrapped)?);
    if !report.within_bounds {
        std::process::exit(1);
    }
    Ok(())
}

fn cmd_sweep(
    spec_path: &std::path::Path,
    seed: SeedSpec,
    out: &std::path::Path,
    histogram: Option<&std::path::Path>,
) -> Result<()> {
    let spec = io::load_sweep_spec(spec_path)?;
    let outcome = sweep(&spec, seed)?;
    io::save_sweep_csv(out, &outcome)?;
    // per-point counting thresholds scale this base by max(1, |lambda|_max)
    let tol = f64::EPSILON * outcome.dims.total() as f64;
    let meta = OutputMeta::new(outcome.dims, Some(seed), tol);
    io::save_meta_sidecar(out, &meta)?;
    if let Some(hist_path) = histogram {
        let report = HistogramReport {
            meta: meta.clone(),
            neg_count_histogram: &outcome.histogram,
        };
        io::write_json_file(hist_path, &report)?;
    }
    let best = outcome
        .histogram
        .iter()
        .rev()
        .find(|(_, c)| **c > 0)
        .map(|(k, _)| *k)
        .unwrap_or(0);
    eprintln!(
        "{} points, max neg_count observed {}",
        outcome.records.len(),
        best
    );
    Ok(())
}

fn cmd_search(
    m: usize,
    n: usize,
    strategy: Strategy,
    budget: u64,
    seed: SeedSpec,
    out: &std::path::Path,
) -> Result<()> {
    let dims = BipartiteDims::new(m, n)?;
    let res = search_max_neg(dims, strategy, budget, seed)?;
    let report = SearchReport::from_result(&res)?;
    io::write_json_file(out, &report)?;
    println!(
        "best neg_count {} (bound {}), negativity {:.6e}, {} samples in {:.2}s",
        res.best_count,
        dims.neg_count_bound(),
        res.best_negativity,
        res.samples_evaluated,
        res.elapsed.as_secs_f64()
    );
    Ok(())
}

fn cmd_robustness(input: &std::path::Path, trials: u64, seed: SeedSpec) -> Result<()> {
    let state = load(input)?;
    let rho = state.to_density();
    let tol = rho.pt_spectrum(Subsystem::A)?.tolerance;
    let report = npt_robustness_check(&rho, trials, seed)?;
    let wrapped = RobustnessOutput {
        meta: OutputMeta::new(report.dims, Some(seed), tol),
        report: &report,
    };
    println!("{}", io::to_json_string(&wrapped)?);
    Ok(())
}

fn cmd_product_vector(
    input: &std::path::Path,
    restarts: u32,
    iters: u32,
    tol: f64,
    seed: SeedSpec,
) -> Result<()> {
    let (dims, basis) = io::load_basis(input)?;
    let config = ProductSearchConfig {
        restarts,
        iters,
        tol,
    };
    let outcome = find_product_vector(&basis, dims, &config, seed)?;
    let report = ProductReport::from_outcome(dims, &outcome, seed, tol);
    println!("{}", io::to_json_string(&report)?);
    Ok(())
}

fn cmd_sample(
    kind: SampleKind,
    m: usize,
    n: usize,
    rank: Option<usize>,
    seed: SeedSpec,
    count: u64,
    out_dir: &std::path::Path,
) -> Result<()> {
    let dims = BipartiteDims::new(m, n)?;
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;
    let label = match kind {
        SampleKind::Haar => "haar",
        SampleKind::Ginibre => "ginibre",
        SampleKind::Product => "product",
    };
    for i in 0..count {
        let s = seed.offset(i);
        let state = match kind {
            SampleKind::Haar => StateData::Pure(haar_pure(dims, s)),
            SampleKind::Ginibre => {
                StateData::Density(ginibre_mixed(dims, rank.unwrap_or(dims.total()), s)?)
            }
            SampleKind::Product => StateData::Pure(random_product_state(dims, s)),
        };
        io::save_state(&out_dir.join(format!("{label}_{i:04}.json")), &state)?;
    }
    let meta = OutputMeta::new(dims, Some(seed), 0.0);
    io::write_json_file(&out_dir.join("meta.json"), &meta)?;
    eprintln!("wrote {count} {label} states to {}", out_dir.display());
    Ok(())
}
