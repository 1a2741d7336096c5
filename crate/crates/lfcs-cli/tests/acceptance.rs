//! End-to-end acceptance gate. Each criterion is one test printing a single
//! pass/fail line; run with `cargo test --test acceptance -- --nocapture` to
//! see the lines for passing criteria too.
//!
//! The suite honors pinned per-run time budgets (notably C5's ten 60-second
//! runs), so a full pass takes on the order of ten minutes.

use std::io::Cursor;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lfcs_core::audio::{
    build_query, common_histogram, identify, profile_from_wav, random_walk_profile,
};
use lfcs_core::baselines::{
    approx_solve, local_search_solve, rand_sample_solve, LocalSearchConfig, RandSampleConfig,
};
use lfcs_core::cmsa::{adapt_cmsa_solve, modify_components, CmsaParams};
use lfcs_core::generator::{derive_seed, generate_instance, generate_instance_parts, GeneratorConfig};
use lfcs_core::instance::example1;
use lfcs_core::lcs::{all_matchings, lcs, longest_chain};
use lfcs_core::solution::{check_solution, CheckMode, Solution};
use lfcs_core::solver::{brute_force_oracle, solve_full_ilp, solve_restricted, ComponentPool};
use lfcs_core::{Instance, TimeMode};

/// Pinned tolerances and fixture seeds.
const MASTER_SEED: u64 = 4242;
const C1_BUDGET_S: f64 = 5.0;
const C4_CMSA_BUDGET_S: f64 = 60.0;
const C4_MAX_MISSES_N32: usize = 1;
const C5_CMSA_SLACK: f64 = 0.5;
const C5_BUDGET_S: f64 = 60.0;
const C7_BUDGET_S: f64 = 120.0;

fn report(name: &str, f: impl FnOnce() -> Result<(), String>) {
    match f() {
        Ok(()) => println!("{name}: PASS"),
        Err(e) => {
            println!("{name}: FAIL ({e})");
            panic!("{name}: {e}");
        }
    }
}

fn check(cond: bool, msg: impl Fn() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The 200 shared instances of criteria 2 and 3.
fn tiny_instances() -> Vec<Instance> {
    let mut out = Vec::new();
    'outer: loop {
        for index in 0.. {
            for n in [8usize, 10, 12] {
                for sigma in [2usize, 4] {
                    let seed = derive_seed(MASTER_SEED, n, sigma, index);
                    out.push(
                        generate_instance(
                            &format!("tiny_n{n}_s{sigma}_i{index}"),
                            &GeneratorConfig::new(n, sigma, seed),
                        )
                        .unwrap(),
                    );
                    if out.len() == 200 {
                        break 'outer;
                    }
                }
            }
        }
    }
    out
}

#[test]
fn c1_golden_example() {
    report("C1 golden-example", || {
        let t = Instant::now();
        let inst = example1();
        check(
            brute_force_oracle(&inst).unwrap() == 15,
            || "oracle != 15".into(),
        )?;
        let ilp = solve_full_ilp(&inst, C1_BUDGET_S, None, TimeMode::Wall);
        check(ilp.solution.obj == 15, || {
            format!("exact solver gave {}", ilp.solution.obj)
        })?;
        let mut p = CmsaParams::small(C1_BUDGET_S, 1);
        p.target_obj = Some(15);
        let run = adapt_cmsa_solve(&inst, &p);
        check(run.solution.obj == 15, || {
            format!("cmsa gave {}", run.solution.obj)
        })?;
        let ap = approx_solve(&inst);
        check(ap.obj >= 9, || format!("approx gave {}", ap.obj))?;
        let elapsed = t.elapsed().as_secs_f64();
        check(elapsed < C1_BUDGET_S, || format!("took {elapsed:.2}s"))
    });
}

#[test]
fn c2_oracle_equivalence() {
    report("C2 oracle-equivalence", || {
        let t = Instant::now();
        for inst in tiny_instances() {
            let opt = brute_force_oracle(&inst).unwrap();
            let out = solve_full_ilp(&inst, f64::INFINITY, None, TimeMode::Wall);
            check(out.solution.obj == opt, || {
                format!("{}: solver {} vs oracle {opt}", inst.name, out.solution.obj)
            })?;
        }
        let elapsed = t.elapsed().as_secs_f64();
        check(elapsed < 600.0, || format!("took {elapsed:.1}s"))
    });
}

#[test]
fn c3_approximation_guarantee() {
    report("C3 approximation-guarantee", || {
        for inst in tiny_instances() {
            let opt = brute_force_oracle(&inst).unwrap();
            let ap = approx_solve(&inst);
            // ratio >= 0.6, exact in integers.
            check(5 * ap.obj >= 3 * opt, || {
                format!("{}: approx {} vs oracle {opt}", inst.name, ap.obj)
            })?;
        }
        Ok(())
    });
}

#[test]
fn c4_small_benchmark_parity() {
    report("C4 small-benchmark-parity", || {
        let mut misses_n16 = 0;
        let mut misses_n32 = 0;
        for (n, sigma) in [(16, 2), (16, 4), (16, 8), (32, 4), (32, 8), (32, 16)] {
            for index in 0..30 {
                let seed = derive_seed(MASTER_SEED, n, sigma, index);
                let inst = generate_instance(
                    &format!("parity_n{n}_s{sigma}_i{index}"),
                    &GeneratorConfig::new(n, sigma, seed),
                )
                .unwrap();
                let opt = solve_full_ilp(&inst, f64::INFINITY, None, TimeMode::Wall)
                    .solution
                    .obj;
                let mut p = CmsaParams::small(C4_CMSA_BUDGET_S, seed);
                p.target_obj = Some(opt);
                let got = adapt_cmsa_solve(&inst, &p).solution.obj;
                if got != opt {
                    if n == 16 {
                        misses_n16 += 1;
                    } else {
                        misses_n32 += 1;
                    }
                }
            }
        }
        check(misses_n16 == 0, || format!("{misses_n16} misses at n=16"))?;
        check(misses_n32 <= C4_MAX_MISSES_N32, || {
            format!("{misses_n32} misses at n=32")
        })
    });
}

#[test]
fn c5_scaled_large_trend() {
    report("C5 scaled-large-trend", || {
        let (mut sum_rand, mut sum_ls2, mut sum_cmsa) = (0usize, 0usize, 0usize);
        for index in 0..10 {
            let seed = derive_seed(MASTER_SEED, 200, 4, index);
            let inst = generate_instance(
                &format!("large_n200_s4_i{index}"),
                &GeneratorConfig::new(200, 4, seed),
            )
            .unwrap();
            sum_rand += rand_sample_solve(&inst, &RandSampleConfig { n_rand: 10_000, seed }).obj;
            sum_ls2 += local_search_solve(&inst, &LocalSearchConfig { k: 2, seed }, None).obj;
            sum_cmsa += adapt_cmsa_solve(&inst, &CmsaParams::large(C5_BUDGET_S, seed))
                .solution
                .obj;
        }
        let (rand, ls2, cmsa) = (
            sum_rand as f64 / 10.0,
            sum_ls2 as f64 / 10.0,
            sum_cmsa as f64 / 10.0,
        );
        check(ls2 >= rand, || format!("ls2 {ls2:.2} < rand {rand:.2}"))?;
        check(cmsa >= ls2 - C5_CMSA_SLACK, || {
            format!("cmsa {cmsa:.2} < ls2 {ls2:.2} - {C5_CMSA_SLACK}")
        })
    });
}

/// Exhaustive restricted-pool optimum, independent of the solver.
fn pool_oracle(inst: &Instance, pool: &ComponentPool) -> usize {
    let dels = &pool.match_am;
    let pairs = &pool.match_b;
    let mut best = 0;
    for dmask in 0u32..(1 << dels.len()) {
        let mut used = [0usize; 256];
        let mut feasible = true;
        for (t, &p) in dels.iter().enumerate() {
            if dmask & (1 << t) != 0 {
                let s = inst.a_at(p) as usize;
                used[s] += 1;
                if used[s] > inst.m().count(s as u8) {
                    feasible = false;
                    break;
                }
            }
        }
        if !feasible {
            continue;
        }
        let deleted: Vec<usize> = dels
            .iter()
            .enumerate()
            .filter(|(t, _)| dmask & (1 << t) != 0)
            .map(|(_, &p)| p)
            .collect();
        'pairsets: for pmask in 0u32..(1 << pairs.len()) {
            let chosen: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(t, _)| pmask & (1 << t) != 0)
                .map(|(_, &p)| p)
                .collect();
            for (a, &(i, j)) in chosen.iter().enumerate() {
                if deleted.contains(&i) {
                    continue 'pairsets;
                }
                for &(x, y) in &chosen[a + 1..] {
                    if !((i < x && j < y) || (x < i && y < j)) {
                        continue 'pairsets;
                    }
                }
            }
            best = best.max(deleted.len() + chosen.len());
        }
    }
    best
}

#[test]
fn c6_property_suites() {
    report("C6 property-suites", || {
        // Algorithm 1 preservation over 10,000 randomized calls.
        let inst16 = example1();
        let inst24 =
            generate_instance("c6", &GeneratorConfig::new(24, 4, MASTER_SEED)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(MASTER_SEED);
        for round in 0..10_000 {
            let inst = if round % 2 == 0 { &inst16 } else { &inst24 };
            let start = lfcs_core::baselines::rand_sample_construct(inst, &mut rng);
            let alpha = rng.gen::<f64>();
            let out = modify_components(inst, &start, alpha, &mut rng);
            check(
                out.del_positions.len() == start.del_positions.len(),
                || format!("round {round}: cardinality changed"),
            )?;
            let (ok, diags) = check_solution(inst, &out, CheckMode::Strict);
            check(ok, || format!("round {round}: {diags:?}"))?;
        }

        // Incumbent monotonicity of trajectories.
        for seed in 0..5 {
            let mut p = CmsaParams::small(0.2, seed);
            p.time_mode = TimeMode::Virtual;
            p.t_ilp = 0.05;
            let run = adapt_cmsa_solve(&inst24, &p);
            for w in run.trajectory.windows(2) {
                check(w[0].1 <= w[1].1 && w[0].0 <= w[1].0, || {
                    format!("seed {seed}: non-monotone trajectory")
                })?;
            }
        }

        // Deletion-closure lemma vs exhaustive enumeration on 200 pools.
        for round in 0..200u64 {
            let inst = generate_instance(
                "pool",
                &GeneratorConfig::new(10, 3, derive_seed(MASTER_SEED, 10, 3, round as usize)),
            )
            .unwrap();
            let full = ComponentPool::full(&inst);
            let mut rng = ChaCha8Rng::seed_from_u64(round);
            let pool = ComponentPool {
                match_b: full
                    .match_b
                    .iter()
                    .filter(|_| rng.gen_bool(0.5))
                    .copied()
                    .take(10)
                    .collect(),
                match_am: full
                    .match_am
                    .iter()
                    .filter(|_| rng.gen_bool(0.5))
                    .copied()
                    .take(10)
                    .collect(),
            };
            let out = solve_restricted(&inst, &pool, 30.0, None, TimeMode::Wall, None);
            let want = pool_oracle(&inst, &pool);
            check(out.solution.obj == want, || {
                format!("pool {round}: solver {} vs oracle {want}", out.solution.obj)
            })?;
        }

        // longest_chain agrees with the LCS engine on 500 random pairs.
        let mut rng = ChaCha8Rng::seed_from_u64(MASTER_SEED ^ 0x5eed);
        for round in 0..500 {
            let len_x = rng.gen_range(0..=30);
            let len_y = rng.gen_range(0..=30);
            let x: Vec<u8> = (0..len_x).map(|_| b'A' + rng.gen_range(0..4u8)).collect();
            let y: Vec<u8> = (0..len_y).map(|_| b'A' + rng.gen_range(0..4u8)).collect();
            let (len, _) = longest_chain(&all_matchings(&x, &y), &[]);
            check(len == lcs(&x, &y).0, || format!("pair {round} mismatch"))?;
        }

        // Generator conservation over 1000 seeds.
        for seed in 0..1000 {
            let parts =
                generate_instance_parts("c6", &GeneratorConfig::new(24, 4, seed)).unwrap();
            check(
                parts.instance.m_len() + parts.instance.k() == parts.b_mod_len,
                || format!("seed {seed}: conservation violated"),
            )?;
        }

        // Bitwise-identical result CSVs on rerun (virtual clock).
        let dir = tempfile::tempdir().unwrap();
        let mut manifest = String::from("group,n,sigma,index,seed,path\n");
        for index in 0..3 {
            let seed = derive_seed(MASTER_SEED, 20, 4, index);
            let inst =
                generate_instance(&format!("det_i{index}"), &GeneratorConfig::new(20, 4, seed))
                    .unwrap();
            let path = dir.path().join(format!("det_i{index}.lfcs"));
            inst.write_file(&path).unwrap();
            manifest.push_str(&format!("det,20,4,{index},{seed},{}\n", path.display()));
        }
        std::fs::write(dir.path().join("manifest.csv"), manifest).unwrap();
        let run = |out: &str| {
            let status = std::process::Command::new(env!("CARGO_BIN_EXE_lfcs"))
                .args(["bench", "--algos", "approx,rand,cmsa", "--n-rand", "100"])
                .args(["--time-limit", "0.05", "--virtual-time", "--dir"])
                .arg(dir.path())
                .arg("--out")
                .arg(dir.path().join(out))
                .arg("--agg-out")
                .arg(dir.path().join(format!("agg_{out}")))
                .status()
                .unwrap();
            assert!(status.success());
            std::fs::read(dir.path().join(out)).unwrap()
        };
        check(run("a.csv") == run("b.csv"), || "CSV rerun differs".into())
    });
}

#[test]
fn c7_audio_round_trip() {
    report("C7 audio-round-trip", || {
        let t = Instant::now();
        let db: Vec<_> = (0..8)
            .map(|i| random_walk_profile(format!("song{i}"), 50, 9000 + i))
            .collect();
        let m = common_histogram(&db);
        let reference = &db[2];
        let exact = |inst: &Instance| {
            let out = solve_full_ilp(inst, 60.0, None, TimeMode::Wall);
            (out.solution.obj, out.t_solve)
        };

        let q = build_query(reference, &m, 0.0, MASTER_SEED).unwrap();
        let ranked = identify(&db, &q, None, exact);
        check(ranked[0].name == reference.name, || {
            format!("rank 1 is {}", ranked[0].name)
        })?;
        check(ranked[0].score == 50, || {
            format!("reconstruction score {}", ranked[0].score)
        })?;

        let mut prev = 50;
        for rem in [0.2, 0.4, 0.6, 0.8] {
            let q = build_query(reference, &m, rem, MASTER_SEED).unwrap();
            let ranked = identify(&db, &q, None, exact);
            let score = ranked
                .iter()
                .find(|r| r.name == reference.name)
                .unwrap()
                .score;
            check(score <= prev, || {
                format!("score rose from {prev} to {score} at rem={rem}")
            })?;
            prev = score;
        }
        let elapsed = t.elapsed().as_secs_f64();
        check(elapsed < C7_BUDGET_S, || format!("took {elapsed:.1}s"))
    });
}

#[test]
fn c8_wav_discretization_goldens() {
    report("C8 wav-goldens", || {
        let spec_int = hound::WavSpec {
            channels: 1,
            sample_rate: 100,
            bits_per_sample: 16,
            sample_format: hound::SampleFormat::Int,
        };
        let spec_float = hound::WavSpec {
            sample_format: hound::SampleFormat::Float,
            bits_per_sample: 32,
            ..spec_int
        };
        let render = |spec: hound::WavSpec, samples: &[f32]| {
            let mut buf = Cursor::new(Vec::new());
            let mut w = hound::WavWriter::new(&mut buf, spec).unwrap();
            for &s in samples {
                match spec.sample_format {
                    hound::SampleFormat::Float => w.write_sample(s).unwrap(),
                    hound::SampleFormat::Int => w.write_sample((s * 32767.0) as i16).unwrap(),
                }
            }
            w.finalize().unwrap();
            buf.into_inner()
        };

        let silence = render(spec_int, &vec![0.0; 400]);
        let p = profile_from_wav("s", Cursor::new(silence.clone())).unwrap();
        check(p.symbols == b"0000", || {
            format!("silence gave {:?}", String::from_utf8_lossy(&p.symbols))
        })?;

        let tone = render(spec_float, &vec![1.0; 500]);
        let p = profile_from_wav("t", Cursor::new(tone)).unwrap();
        check(p.symbols == b"99999", || {
            format!("tone gave {:?}", String::from_utf8_lossy(&p.symbols))
        })?;

        let partial = render(spec_int, &vec![0.4; 270]);
        let p = profile_from_wav("p", Cursor::new(partial)).unwrap();
        check(p.symbols.len() == 2, || {
            format!("2.7s gave length {}", p.symbols.len())
        })?;

        let a = profile_from_wav("s", Cursor::new(silence.clone())).unwrap();
        let b = profile_from_wav("s", Cursor::new(silence)).unwrap();
        check(a == b, || "rerun differs".into())
    });
}
