mod runner;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use lfcs_core::audio;
use lfcs_core::generator::{self, BenchmarkSet, GeneratorConfig};
use lfcs_core::{Instance, TimeMode};

use runner::{run_algo, Algo, RunOptions, RunRecord, RESULTS_HEADER};

#[derive(Parser)]
#[command(name = "lfcs", version, about = "LFCS solver suite and benchmark harness")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one algorithm on one instance file.
    Solve(SolveArgs),
    /// Generate a benchmark set with a manifest.
    Generate(GenerateArgs),
    /// Run algorithms over a generated benchmark directory.
    Bench(BenchArgs),
    /// Export per-instance feature rows for a benchmark directory.
    Features(FeaturesArgs),
    /// Audio profiling and song identification.
    Audio {
        #[command(subcommand)]
        cmd: AudioCmd,
    },
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    algo: Algo,
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 600.0)]
    time_limit: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    n_rand: usize,
    /// Deterministic virtual clock instead of wall time.
    #[arg(long)]
    virtual_time: bool,
    /// Stop early once this objective is reached.
    #[arg(long)]
    target_obj: Option<usize>,
    /// Print the solution witness (deleted positions and chain).
    #[arg(long)]
    witness: bool,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_parser = parse_set)]
    set: BenchmarkSet,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// Benchmark directory containing manifest.csv.
    #[arg(long)]
    dir: PathBuf,
    /// Comma-separated algorithm list.
    #[arg(long, value_delimiter = ',', required = true)]
    algos: Vec<Algo>,
    #[arg(long, default_value_t = 600.0)]
    time_limit: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    n_rand: usize,
    #[arg(long)]
    virtual_time: bool,
    /// Results CSV path (default: <dir>/results.csv).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Aggregate CSV path (default: <dir>/aggregate.csv).
    #[arg(long)]
    agg_out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct FeaturesArgs {
    #[arg(long)]
    dir: PathBuf,
    /// Features CSV path (default: <dir>/features.csv).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum AudioCmd {
    /// Discretize a WAV file into an energy profile.
    Profile {
        #[arg(long)]
        wav: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Profile name (default: WAV file stem).
        #[arg(long)]
        name: Option<String>,
    },
    /// Rank a profile database against a degraded query.
    Identify {
        /// Directory of profile files.
        #[arg(long)]
        db: PathBuf,
        /// Reference profile the query is degraded from.
        #[arg(long)]
        query: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        rem: f64,
        #[arg(long, default_value = "cmsa")]
        algo: Algo,
        /// Per-candidate time budget in seconds.
        #[arg(long, default_value_t = 10.0)]
        budget: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Histogram prefilter keeping only the closest K candidates.
        #[arg(long)]
        top_k: Option<usize>,
        /// Ranked CSV path (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_set(s: &str) -> Result<BenchmarkSet, String> {
    match s {
        "small" => Ok(BenchmarkSet::Small),
        "large" => Ok(BenchmarkSet::Large),
        other => Err(format!("unknown set '{other}', expected small or large")),
    }
}

#[derive(Debug, Clone)]
struct ManifestRow {
    group: String,
    n: usize,
    sigma: usize,
    index: usize,
    seed: u64,
    path: PathBuf,
}

fn read_manifest(dir: &Path) -> Result<Vec<ManifestRow>, String> {
    let path = dir.join("manifest.csv");
    let text =
        std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(format!("manifest line {}: expected 6 fields", lineno + 1));
        }
        let parse = |s: &str, what: &str| {
            s.parse::<usize>()
                .map_err(|_| format!("manifest line {}: bad {what}", lineno + 1))
        };
        let raw = PathBuf::from(f[5]);
        // Manifests written elsewhere may carry stale directories.
        let path = if raw.is_file() {
            raw
        } else {
            dir.join(raw.file_name().ok_or("manifest path without file name")?)
        };
        rows.push(ManifestRow {
            group: f[0].to_string(),
            n: parse(f[1], "n")?,
            sigma: parse(f[2], "sigma")?,
            index: parse(f[3], "index")?,
            seed: f[4]
                .parse()
                .map_err(|_| format!("manifest line {}: bad seed", lineno + 1))?,
            path,
        });
    }
    Ok(rows)
}

fn time_mode(virtual_time: bool) -> TimeMode {
    if virtual_time {
        TimeMode::Virtual
    } else {
        TimeMode::Wall
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<(), String> {
    let inst = Instance::from_file(&args.instance).map_err(|e| e.to_string())?;
    let opts = RunOptions {
        time_limit: args.time_limit,
        seed: args.seed,
        n_rand: args.n_rand,
        time_mode: time_mode(args.virtual_time),
        log_path: std::env::var_os("LFCS_LOG").map(PathBuf::from),
        target_obj: args.target_obj,
    };
    let (record, solution) = run_algo(&inst, args.algo, &opts).map_err(|e| e.to_string())?;
    println!("{RESULTS_HEADER}");
    println!("{}", record.csv_row());
    if args.witness {
        match solution {
            Some(s) => {
                let dels: Vec<String> = s.del_positions.iter().map(|p| p.to_string()).collect();
                let chain: Vec<String> = s
                    .match_pairs
                    .iter()
                    .map(|(i, j)| format!("({i},{j})"))
                    .collect();
                println!("del_positions: {}", dels.join(" "));
                println!("chain: {}", chain.join(" "));
            }
            None => println!("witness: none (oracle proves the value only)"),
        }
    }
    Ok(())
}

fn cmd_generate(args: &GenerateArgs) -> Result<(), String> {
    let rows = generator::generate_benchmark(args.set, &args.out, args.seed)
        .map_err(|e| e.to_string())?;
    println!(
        "wrote {} instances and manifest.csv to {}",
        rows.len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<(), String> {
    let manifest = read_manifest(&args.dir)?;
    if manifest.is_empty() {
        return Err("manifest has no rows".into());
    }
    let mode = time_mode(args.virtual_time);

    // One task per (instance, algo); results keep task order regardless of
    // worker scheduling.
    let tasks: Vec<(usize, &ManifestRow, Algo)> = manifest
        .iter()
        .flat_map(|row| args.algos.iter().map(move |&a| (row, a)))
        .enumerate()
        .map(|(i, (row, a))| (i, row, a))
        .collect();
    let results: Mutex<Vec<Option<RunRecord>>> = Mutex::new(vec![None; tasks.len()]);
    let next = AtomicUsize::new(0);
    let worker = || -> Result<(), String> {
        loop {
            let t = next.fetch_add(1, Ordering::Relaxed);
            let Some(&(idx, row, algo)) = tasks.get(t) else {
                return Ok(());
            };
            let inst = Instance::from_file(&row.path).map_err(|e| e.to_string())?;
            let opts = RunOptions {
                time_limit: args.time_limit,
                seed: args.seed.wrapping_add(row.seed),
                n_rand: args.n_rand,
                time_mode: mode,
                log_path: None,
                target_obj: None,
            };
            let (mut record, _) = run_algo(&inst, algo, &opts).map_err(|e| e.to_string())?;
            // Group by the nominal alphabet size; small instances may not
            // realize every symbol.
            record.sigma = row.sigma;
            results.lock().unwrap()[idx] = Some(record);
        }
    };
    let jobs = args.jobs.max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs).map(|_| scope.spawn(worker)).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let records: Vec<RunRecord> = results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("all tasks completed"))
        .collect();

    let out = args
        .out
        .clone()
        .unwrap_or_else(|| args.dir.join("results.csv"));
    let mut csv = String::from(RESULTS_HEADER);
    csv.push('\n');
    for r in &records {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    std::fs::write(&out, csv).map_err(|e| e.to_string())?;

    // Aggregates per (n, sigma, algo).
    let mut groups: BTreeMap<(usize, usize, &str), (usize, usize, f64)> = BTreeMap::new();
    for r in &records {
        let e = groups
            .entry((r.n, r.sigma, r.algo.name()))
            .or_insert((0, 0, 0.0));
        e.0 += 1;
        e.1 += r.obj;
        e.2 += r.total_time_s;
    }
    let agg_out = args
        .agg_out
        .clone()
        .unwrap_or_else(|| args.dir.join("aggregate.csv"));
    let mut agg = String::from("n,sigma,algo,runs,mean_obj,mean_time_s\n");
    for ((n, sigma, algo), (runs, obj_sum, time_sum)) in &groups {
        agg.push_str(&format!(
            "{n},{sigma},{algo},{runs},{:.4},{:.6}\n",
            *obj_sum as f64 / *runs as f64,
            time_sum / *runs as f64
        ));
    }
    std::fs::write(&agg_out, agg).map_err(|e| e.to_string())?;
    println!(
        "wrote {} rows to {} and {} groups to {}",
        records.len(),
        out.display(),
        groups.len(),
        agg_out.display()
    );
    Ok(())
}

fn cmd_features(args: &FeaturesArgs) -> Result<(), String> {
    let manifest = read_manifest(&args.dir)?;
    let mut csv = String::from("instance,sigma,n,len_b,k\n");
    for row in &manifest {
        // The discarded segment count is a generation artifact, recomputed
        // from the recorded seed.
        let cfg = GeneratorConfig::new(row.n, row.sigma, row.seed);
        let name = format!("{}_n{}_s{}_i{}", row.group, row.n, row.sigma, row.index);
        let parts =
            generator::generate_instance_parts(&name, &cfg).map_err(|e| e.to_string())?;
        csv.push_str(&format!(
            "{name},{},{},{},{}\n",
            row.sigma,
            row.n,
            parts.instance.b().len(),
            parts.discarded_count
        ));
    }
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| args.dir.join("features.csv"));
    std::fs::write(&out, csv).map_err(|e| e.to_string())?;
    println!("wrote {} feature rows to {}", manifest.len(), out.display());
    Ok(())
}

fn cmd_audio(cmd: &AudioCmd) -> Result<(), String> {
    match cmd {
        AudioCmd::Profile { wav, out, name } => {
            let name = name.clone().unwrap_or_else(|| {
                wav.file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "profile".to_string())
            });
            let file = std::fs::File::open(wav).map_err(|e| e.to_string())?;
            let profile = audio::profile_from_wav(name, std::io::BufReader::new(file))
                .map_err(|e| e.to_string())?;
            std::fs::write(out, profile.to_text()).map_err(|e| e.to_string())?;
            println!(
                "wrote {} ({} seconds) to {}",
                profile.name,
                profile.symbols.len(),
                out.display()
            );
        }
        AudioCmd::Identify {
            db,
            query,
            rem,
            algo,
            budget,
            seed,
            top_k,
            out,
        } => {
            let profiles = audio::load_profile_dir(db).map_err(|e| e.to_string())?;
            if profiles.is_empty() {
                return Err(format!("no profiles in {}", db.display()));
            }
            let reference = audio::EnergyProfile::from_file(query).map_err(|e| e.to_string())?;
            let m = audio::common_histogram(&profiles);
            let q = audio::build_query(&reference, &m, *rem, *seed).map_err(|e| e.to_string())?;
            let opts = RunOptions {
                time_limit: *budget,
                seed: *seed,
                time_mode: TimeMode::Wall,
                ..RunOptions::default()
            };
            let ranked = audio::identify(&profiles, &q, *top_k, |inst| {
                match run_algo(inst, *algo, &opts) {
                    Ok((record, _)) => (record.obj, record.total_time_s),
                    Err(e) => {
                        log::error!("candidate {} failed: {e}", inst.name);
                        (0, 0.0)
                    }
                }
            });
            let mut csv = String::from("rank,name,score,time_s,algo\n");
            for r in &ranked {
                csv.push_str(&format!(
                    "{},{},{},{:.6},{}\n",
                    r.rank,
                    r.name,
                    r.score,
                    r.time_s,
                    algo.name()
                ));
            }
            match out {
                Some(path) => std::fs::write(path, csv).map_err(|e| e.to_string())?,
                None => print!("{csv}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.cmd {
        Cmd::Solve(args) => cmd_solve(args),
        Cmd::Generate(args) => cmd_generate(args),
        Cmd::Bench(args) => cmd_bench(args),
        Cmd::Features(args) => cmd_features(args),
        Cmd::Audio { cmd } => cmd_audio(cmd),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
