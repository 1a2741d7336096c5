//! Seeded synthetic instance generator and the two benchmark set layouts.
//!
//! `A` is a uniform random string; `B` is derived from it by per-symbol
//! modifications (duplication, deletion, substitution, each applied with
//! probability 1/2), then segmented and partially discarded, the discarded
//! symbols forming the fill multiset.

use std::fmt;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::instance::{Instance, Multiset};

#[derive(Debug, Clone, Copy)]
pub struct GeneratorConfig {
    /// Length of `A`.
    pub n: usize,
    /// Alphabet size.
    pub sigma_size: usize,
    pub seed: u64,
    /// Fraction of segments discarded into the multiset (rounded up).
    pub discard_fraction: f64,
}

impl GeneratorConfig {
    pub fn new(n: usize, sigma_size: usize, seed: u64) -> Self {
        GeneratorConfig {
            n,
            sigma_size,
            seed,
            discard_fraction: 0.3,
        }
    }

    fn validate(&self) -> Result<(), Error> {
        if self.n < 8 {
            return Err(Error::ConfigInvalid(format!(
                "n = {} < 8: segments of length n/8 not formable",
                self.n
            )));
        }
        if self.sigma_size < 2 || self.sigma_size > self.n.min(256) {
            return Err(Error::ConfigInvalid(format!(
                "sigma_size = {} outside 2..=min(n, 256)",
                self.sigma_size
            )));
        }
        if !(self.discard_fraction > 0.0 && self.discard_fraction <= 1.0) {
            return Err(Error::ConfigInvalid(format!(
                "discard_fraction = {} outside (0, 1]",
                self.discard_fraction
            )));
        }
        Ok(())
    }
}

/// Alphabet rendering: 'A'.. for small alphabets, printable-and-above byte
/// codes beyond 26 (never whitespace, so the text format stays line-based).
fn symbol(idx: usize, sigma_size: usize) -> u8 {
    if sigma_size <= 26 {
        b'A' + idx as u8
    } else {
         33 + idx as u8
    }
}

/// The intermediate modified copy of `A` together with the kept/discarded
/// split; exposed so tests can assert the conservation law `|B| + |M| =
/// |B_mod|`.
pub struct GeneratedParts {
    pub instance: Instance,
    pub b_mod_len: usize,
    pub segment_count: usize,
    pub discarded_count: usize,
}

pub fn generate_instance_parts(
    name: impl Into<String>,
    cfg: &GeneratorConfig,
) -> Result<GeneratedParts, Error> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sigma = cfg.sigma_size;

    let a: Vec<u8> = (0..cfg.n)
        .map(|_| symbol(rng.gen_range(0..sigma), sigma))
        .collect();

    let mut b_mod = Vec::with_capacity(cfg.n * 2);
    for &s in &a {
        if rng.gen_bool(0.5) {
            match rng.gen_range(0..3) {
                0 => {
                    // Duplication: copy immediately after the original.
                    b_mod.push(s);
                    b_mod.push(s);
                }
                1 => {} // Deletion.
                _ => {
                    // Substitution by a uniformly different symbol.
                    let mut idx = rng.gen_range(0..sigma - 1);
                    let own = (0..sigma).position(|k| symbol(k, sigma) == s).unwrap();
                    if idx >= own {
                        idx += 1;
                    }
                    b_mod.push(symbol(idx, sigma));
                }
            }
        } else {
            b_mod.push(s);
        }
    }

    // Left-to-right partition into segments of uniform length 1..=n/8.
    let max_len = cfg.n / 8;
    let mut segments: Vec<(usize, usize)> = Vec::new();
    let mut at = 0;
    while at < b_mod.len() {
        let len = rng.gen_range(1..=max_len).min(b_mod.len() - at);
        segments.push((at, at + len));
        at += len;
    }

    let discard = (cfg.discard_fraction * segments.len() as f64).ceil() as usize;
    let mut discarded = vec![false; segments.len()];
    if discard > 0 && !segments.is_empty() {
        for idx in rand::seq::index::sample(&mut rng, segments.len(), discard.min(segments.len())) {
            discarded[idx] = true;
        }
    }

    let mut b = Vec::new();
    let mut m = Multiset::new();
    for (idx, &(lo, hi)) in segments.iter().enumerate() {
        if discarded[idx] {
            for &s in &b_mod[lo..hi] {
                m.add(s, 1);
            }
        } else {
            b.extend_from_slice(&b_mod[lo..hi]);
        }
    }

    Ok(GeneratedParts {
        instance: Instance::new(name, a, b, m),
        b_mod_len: b_mod.len(),
        segment_count: segments.len(),
        discarded_count: discarded.iter().filter(|&&d| d).count(),
    })
}

pub fn generate_instance(name: impl Into<String>, cfg: &GeneratorConfig) -> Result<Instance, Error> {
    Ok(generate_instance_parts(name, cfg)?.instance)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchmarkSet {
    Small,
    Large,
}

impl BenchmarkSet {
    /// Instance groups as (n, sigma, count).
    pub fn groups(self) -> Vec<(usize, usize, usize)> {
        match self {
            BenchmarkSet::Small => [16, 32, 48, 64, 80]
                .iter()
                .flat_map(|&n| [n / 8, n / 4, n / 2].map(|s| (n, s, 100)))
                .collect(),
            BenchmarkSet::Large => [200, 400, 500, 600, 800, 1000]
                .iter()
                .flat_map(|&n| [4, 20].map(|s| (n, s, 10)))
                .collect(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkSet::Small => "small",
            BenchmarkSet::Large => "large",
        }
    }
}

impl fmt::Display for BenchmarkSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct ManifestRow {
    pub group: String,
    pub n: usize,
    pub sigma: usize,
    pub index: usize,
    pub seed: u64,
    pub path: PathBuf,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Per-instance seed derived from the master seed and group identity.
pub fn derive_seed(master: u64, n: usize, sigma: usize, index: usize) -> u64 {
    let mut h = splitmix64(master);
    h = splitmix64(h ^ (n as u64));
    h = splitmix64(h ^ ((sigma as u64) << 20));
    splitmix64(h ^ (index as u64))
}

/// Generates a full benchmark set into `out_dir`, writing one `.lfcs` file
/// per instance and a `manifest.csv`.
pub fn generate_benchmark(
    set: BenchmarkSet,
    out_dir: &Path,
    master_seed: u64,
) -> Result<Vec<ManifestRow>, Error> {
    std::fs::create_dir_all(out_dir)?;
    let mut manifest = Vec::new();
    for (n, sigma, count) in set.groups() {
        for index in 0..count {
            let seed = derive_seed(master_seed, n, sigma, index);
            let name = format!("{}_n{n}_s{sigma}_i{index}", set.name());
            let cfg = GeneratorConfig::new(n, sigma, seed);
            let inst = generate_instance(&name, &cfg)?;
            let path = out_dir.join(format!("{name}.lfcs"));
            inst.write_file(&path)?;
            manifest.push(ManifestRow {
                group: set.name().to_string(),
                n,
                sigma,
                index,
                seed,
                path,
            });
        }
    }
    let mut csv = String::from("group,n,sigma,index,seed,path\n");
    for row in &manifest {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.group,
            row.n,
            row.sigma,
            row.index,
            row.seed,
            row.path.display()
        ));
    }
    std::fs::write(out_dir.join("manifest.csv"), csv)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conservation_and_determinism() {
        let cfg = GeneratorConfig::new(32, 4, 99);
        let parts = generate_instance_parts("t", &cfg).unwrap();
        assert_eq!(parts.instance.n(), 32);
        assert_eq!(
            parts.instance.m_len() + parts.instance.k(),
            parts.b_mod_len
        );
        let again = generate_instance("t", &cfg).unwrap();
        assert_eq!(again.to_text(), parts.instance.to_text());
    }

    #[test]
    fn discard_band_over_seeds() {
        // Empirical band for the discarded fraction of modified symbols.
        let mut total_m = 0usize;
        let mut total_mod = 0usize;
        for seed in 0..1000 {
            let cfg = GeneratorConfig::new(16, 4, seed);
            let parts = generate_instance_parts("t", &cfg).unwrap();
            total_m += parts.instance.k();
            total_mod += parts.b_mod_len;
        }
        let frac = total_m as f64 / total_mod as f64;
        assert!((0.25..=0.40).contains(&frac), "discard fraction {frac}");
    }

    #[test]
    fn group_layouts() {
        let small = BenchmarkSet::Small.groups();
        assert_eq!(small.len(), 15);
        assert_eq!(small.iter().map(|g| g.2).sum::<usize>(), 1500);
        let large = BenchmarkSet::Large.groups();
        assert_eq!(large.len(), 12);
        assert_eq!(large.iter().map(|g| g.2).sum::<usize>(), 120);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(generate_instance("t", &GeneratorConfig::new(7, 2, 0)).is_err());
        assert!(generate_instance("t", &GeneratorConfig::new(16, 1, 0)).is_err());
        assert!(generate_instance("t", &GeneratorConfig::new(16, 17, 0)).is_err());
    }

    #[test]
    fn seed_derivation_is_stable() {
        for (n, sigma) in [(16, 2), (16, 4)] {
            for index in 0..5 {
                let seed = derive_seed(7, n, sigma, index);
                assert_eq!(seed, derive_seed(7, n, sigma, index));
                let cfg = GeneratorConfig::new(n, sigma, seed);
                let a = generate_instance("x", &cfg).unwrap();
                let b = generate_instance("x", &cfg).unwrap();
                assert_eq!(a.to_text(), b.to_text());
            }
        }
        assert_ne!(derive_seed(7, 16, 2, 0), derive_seed(7, 16, 2, 1));
        assert_ne!(derive_seed(7, 16, 2, 0), derive_seed(8, 16, 2, 0));
    }

    #[test]
    fn symbols_stay_in_alphabet() {
        let cfg = GeneratorConfig::new(64, 32, 3);
        let inst = generate_instance("t", &cfg).unwrap();
        let sigma: Vec<u8> = (0..32).map(|i| symbol(i, 32)).collect();
        for &s in inst.a().iter().chain(inst.b().iter()) {
            assert!(sigma.contains(&s));
        }
        for s in inst.m().symbols() {
            assert!(sigma.contains(&s));
        }
    }
}
