//! Audio energy profiles and song identification.
//!
//! A song is represented by one symbol per second of audio: the RMS level of
//! the second, normalized by the song's loudest second and discretized into
//! ten bins rendered as the ASCII digits '0'..'9'. Identification solves an
//! LFCSP per candidate: the candidate profile is `A`, the degraded query is
//! `B` and the common histogram is the fill multiset.

use std::io::{Read, Seek};
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::instance::{Instance, Multiset};

/// Per-second discretized energy sequence over '0'..='9'.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyProfile {
    pub name: String,
    pub symbols: Vec<u8>,
}

impl EnergyProfile {
    pub fn new(name: impl Into<String>, symbols: Vec<u8>) -> Self {
        EnergyProfile {
            name: name.into(),
            symbols,
        }
    }

    pub fn histogram(&self) -> Multiset {
        Multiset::from_symbols(&self.symbols)
    }

    /// Two-line text format: name, then the symbol string.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut lines = text.lines();
        let name = lines
            .next()
            .ok_or_else(|| Error::MalformedInstance("missing profile name line".into()))?;
        let symbols = lines.next().unwrap_or("");
        if symbols.bytes().any(|b| !b.is_ascii_digit()) {
            return Err(Error::MalformedInstance(
                "profile symbols must be digits".into(),
            ));
        }
        Ok(EnergyProfile::new(name, symbols.as_bytes().to_vec()))
    }

    pub fn to_text(&self) -> String {
        format!(
            "{}\n{}\n",
            self.name,
            String::from_utf8_lossy(&self.symbols)
        )
    }

    pub fn from_file(path: &Path) -> Result<Self, Error> {
        EnergyProfile::parse(&std::fs::read_to_string(path)?)
    }
}

/// Loads every profile in a directory, sorted by file name.
pub fn load_profile_dir(dir: &Path) -> Result<Vec<EnergyProfile>, Error> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    paths.iter().map(|p| EnergyProfile::from_file(p)).collect()
}

/// Decodes a PCM WAV and discretizes per-second RMS into digits. Channels
/// are averaged; the trailing partial second is dropped; an all-silent song
/// maps to all zeros.
pub fn profile_from_wav<R: Read + Seek>(
    name: impl Into<String>,
    reader: R,
) -> Result<EnergyProfile, Error> {
    let mut wav =
        hound::WavReader::new(reader).map_err(|e| Error::MalformedWav(e.to_string()))?;
    let spec = wav.spec();
    let channels = spec.channels as usize;
    let rate = spec.sample_rate as usize;
    if channels == 0 || rate == 0 {
        return Err(Error::MalformedWav("zero channels or sample rate".into()));
    }

    // Channel-averaged samples normalized to [-1, 1].
    let samples: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Float, 32) => wav
            .samples::<f32>()
            .map(|s| s.map(f64::from).map_err(|e| Error::MalformedWav(e.to_string())))
            .collect::<Result<_, _>>()?,
        (hound::SampleFormat::Int, bits @ (8 | 16 | 24)) => {
            let scale = (1i64 << (bits - 1)) as f64;
            wav.samples::<i32>()
                .map(|s| {
                    s.map(|v| v as f64 / scale)
                        .map_err(|e| Error::MalformedWav(e.to_string()))
                })
                .collect::<Result<_, _>>()?
        }
        (fmt, bits) => {
            return Err(Error::UnsupportedEncoding(format!(
                "{bits}-bit {fmt:?} samples"
            )))
        }
    };

    let frames: Vec<f64> = samples
        .chunks_exact(channels)
        .map(|c| c.iter().sum::<f64>() / channels as f64)
        .collect();

    let seconds = frames.len() / rate;
    let mut rms = Vec::with_capacity(seconds);
    for w in 0..seconds {
        let window = &frames[w * rate..(w + 1) * rate];
        let mean_sq = window.iter().map(|s| s * s).sum::<f64>() / rate as f64;
        rms.push(mean_sq.sqrt());
    }
    let e_max = rms.iter().cloned().fold(0.0f64, f64::max);
    let symbols = rms
        .iter()
        .map(|&e| {
            if e_max == 0.0 {
                b'0'
            } else {
                b'0' + ((10.0 * e / e_max) as usize).min(9) as u8
            }
        })
        .collect();
    Ok(EnergyProfile::new(name, symbols))
}

/// Per-symbol minimum count across all profiles.
pub fn common_histogram(profiles: &[EnergyProfile]) -> Multiset {
    assert!(!profiles.is_empty(), "common histogram of no profiles");
    let mut out = Multiset::new();
    for d in b'0'..=b'9' {
        let min = profiles
            .iter()
            .map(|p| p.histogram().count(d))
            .min()
            .unwrap_or(0);
        out.add(d, min);
    }
    out
}

/// A degraded query: evidence string `B`, the histogram multiset and the
/// extra removal level.
#[derive(Debug, Clone)]
pub struct AudioQuery {
    pub b: Vec<u8>,
    pub m: Multiset,
    pub rem: f64,
    pub reference_name: String,
}

/// Builds a query from a reference profile: remove the multiset occurrences
/// at seeded uniform positions, then remove a further `rem` fraction of the
/// remainder.
pub fn build_query(
    reference: &EnergyProfile,
    m: &Multiset,
    rem: f64,
    seed: u64,
) -> Result<AudioQuery, Error> {
    let hist = reference.histogram();
    for sym in m.symbols() {
        if m.count(sym) > hist.count(sym) {
            return Err(Error::HistogramUnderflow { symbol: sym });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut removed = vec![false; reference.symbols.len()];
    for sym in m.symbols() {
        let occurrences: Vec<usize> = reference
            .symbols
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == sym)
            .map(|(i, _)| i)
            .collect();
        for idx in rand::seq::index::sample(&mut rng, occurrences.len(), m.count(sym)) {
            removed[occurrences[idx]] = true;
        }
    }
    let b0: Vec<u8> = reference
        .symbols
        .iter()
        .enumerate()
        .filter(|(i, _)| !removed[*i])
        .map(|(_, &s)| s)
        .collect();

    let extra = (rem * b0.len() as f64).floor() as usize;
    let mut keep = vec![true; b0.len()];
    if extra > 0 {
        for idx in rand::seq::index::sample(&mut rng, b0.len(), extra.min(b0.len())) {
            keep[idx] = false;
        }
    }
    let b = b0
        .iter()
        .enumerate()
        .filter(|(i, _)| keep[*i])
        .map(|(_, &s)| s)
        .collect();

    Ok(AudioQuery {
        b,
        m: m.clone(),
        rem,
        reference_name: reference.name.clone(),
    })
}

#[derive(Debug, Clone)]
pub struct RankedCandidate {
    pub rank: usize,
    pub name: String,
    pub score: usize,
    pub time_s: f64,
}

/// Scores every candidate with the supplied solver and ranks descending by
/// score, ties by name. With `prefilter_top_k`, only the candidates whose
/// symbol histograms are closest (L1) to the query's evidence-plus-multiset
/// histogram are solved.
pub fn identify<F>(
    db: &[EnergyProfile],
    query: &AudioQuery,
    prefilter_top_k: Option<usize>,
    solve: F,
) -> Vec<RankedCandidate>
where
    F: Fn(&Instance) -> (usize, f64) + Sync,
{
    assert!(!db.is_empty(), "identify over an empty database");

    let mut candidates: Vec<&EnergyProfile> = db.iter().collect();
    if let Some(k) = prefilter_top_k {
        let mut query_hist = Multiset::from_symbols(&query.b);
        for sym in query.m.symbols() {
            query_hist.add(sym, query.m.count(sym));
        }
        let dist = |p: &EnergyProfile| -> usize {
            let h = p.histogram();
            (b'0'..=b'9')
                .map(|d| h.count(d).abs_diff(query_hist.count(d)))
                .sum()
        };
        candidates.sort_by_key(|p| (dist(p), p.name.clone()));
        candidates.truncate(k.max(1));
    }

    let mut scored: Vec<RankedCandidate> = std::thread::scope(|scope| {
        let handles: Vec<_> = candidates
            .iter()
            .map(|profile| {
                let solve = &solve;
                let query = &query;
                scope.spawn(move || {
                    let inst = Instance::new(
                        profile.name.clone(),
                        profile.symbols.clone(),
                        query.b.clone(),
                        query.m.clone(),
                    );
                    let (score, time_s) = solve(&inst);
                    RankedCandidate {
                        rank: 0,
                        name: profile.name.clone(),
                        score,
                        time_s,
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    scored.sort_by(|a, b| b.score.cmp(&a.score).then(a.name.cmp(&b.name)));
    for (i, c) in scored.iter_mut().enumerate() {
        c.rank = i + 1;
    }
    scored
}

/// Seeded random-walk profile, used as a synthetic stand-in for real songs.
pub fn random_walk_profile(name: impl Into<String>, len: usize, seed: u64) -> EnergyProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level: i32 = rng.gen_range(0..10);
    let mut symbols = Vec::with_capacity(len);
    for _ in 0..len {
        symbols.push(b'0' + level as u8);
        level = (level + rng.gen_range(-2..=2)).clamp(0, 9);
    }
    EnergyProfile::new(name, symbols)
}
