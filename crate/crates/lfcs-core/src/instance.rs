//! The LFCSP instance: strings `A`, `B` and the fill multiset `M`.
//!
//! Symbols are single bytes; positions are 1-based throughout the crate,
//! in file formats and in logs.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use crate::error::Error;

/// Per-symbol counts of a multiset over single-byte symbols.
#[derive(Clone, PartialEq, Eq)]
pub struct Multiset {
    counts: [usize; 256],
    total: usize,
}

impl Multiset {
    pub fn new() -> Self {
        Multiset {
            counts: [0; 256],
            total: 0,
        }
    }

    pub fn from_symbols(symbols: &[u8]) -> Self {
        let mut m = Multiset::new();
        for &s in symbols {
            m.add(s, 1);
        }
        m
    }

    pub fn add(&mut self, symbol: u8, n: usize) {
        self.counts[symbol as usize] += n;
        self.total += n;
    }

    /// Removes one occurrence; returns false if none is available.
    pub fn take(&mut self, symbol: u8) -> bool {
        if self.counts[symbol as usize] == 0 {
            return false;
        }
        self.counts[symbol as usize] -= 1;
        self.total -= 1;
        true
    }

    pub fn count(&self, symbol: u8) -> usize {
        self.counts[symbol as usize]
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Symbols with a positive count, in ascending byte order.
    pub fn symbols(&self) -> impl Iterator<Item = u8> + '_ {
        (0u16..256).filter_map(move |s| {
            let s = s as u8;
            (self.counts[s as usize] > 0).then_some(s)
        })
    }

    /// Canonical rendering: each symbol repeated `count` times, ascending.
    pub fn render(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.total);
        for s in self.symbols() {
            out.extend(std::iter::repeat(s).take(self.count(s)));
        }
        out
    }
}

impl Default for Multiset {
    fn default() -> Self {
        Multiset::new()
    }
}

impl fmt::Debug for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multiset({})", String::from_utf8_lossy(&self.render()))
    }
}

/// A full problem instance `I = (A, B, M)`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    a: Vec<u8>,
    b: Vec<u8>,
    m: Multiset,
}

impl Instance {
    pub fn new(name: impl Into<String>, a: Vec<u8>, b: Vec<u8>, m: Multiset) -> Self {
        Instance {
            name: name.into(),
            a,
            b,
            m,
        }
    }

    pub fn a(&self) -> &[u8] {
        &self.a
    }

    pub fn b(&self) -> &[u8] {
        &self.b
    }

    pub fn m(&self) -> &Multiset {
        &self.m
    }

    /// Length of `A`.
    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// Length of `B`.
    pub fn m_len(&self) -> usize {
        self.b.len()
    }

    /// Cardinality of the fill multiset.
    pub fn k(&self) -> usize {
        self.m.total()
    }

    /// 1-based access into `A`.
    pub fn a_at(&self, pos: usize) -> u8 {
        self.a[pos - 1]
    }

    /// The alphabet: union of symbols in `A`, `B` and `M`, ascending.
    pub fn sigma(&self) -> Vec<u8> {
        let mut set: BTreeSet<u8> = self.a.iter().chain(self.b.iter()).copied().collect();
        set.extend(self.m.symbols());
        set.into_iter().collect()
    }

    /// Occurrences of `symbol` in `A`, as 1-based positions.
    pub fn positions_of(&self, symbol: u8) -> Vec<usize> {
        self.a
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == symbol)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Parses the three-line text format: `A`, `B`, then `M` as a symbol
    /// sequence (order irrelevant, counts significant).
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self, Error> {
        let mut lines = text.split('\n');
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| Error::MalformedInstance(format!("missing line for {what}")))
        };
        let a = next("A")?;
        let b = next("B")?;
        let m = next("M")?;
        for (label, line) in [("A", a), ("B", b), ("M", m)] {
            if line.ends_with(['\r', ' ', '\t']) {
                return Err(Error::MalformedInstance(format!(
                    "trailing whitespace on line {label}"
                )));
            }
        }
        Ok(Instance::new(
            name,
            a.as_bytes().to_vec(),
            b.as_bytes().to_vec(),
            Multiset::from_symbols(m.as_bytes()),
        ))
    }

    /// Serializes to the three-line text format, newline-terminated.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&String::from_utf8_lossy(&self.a));
        out.push('\n');
        out.push_str(&String::from_utf8_lossy(&self.b));
        out.push('\n');
        out.push_str(&String::from_utf8_lossy(&self.m.render()));
        out.push('\n');
        out
    }

    pub fn from_file(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "instance".to_string());
        Instance::parse(name, &text)
    }

    pub fn write_file(&self, path: &Path) -> Result<(), Error> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// The worked example used throughout the crate's tests.
pub fn example1() -> Instance {
    Instance::parse("example1", "EGHGBCBEGECEEHDA\nEGGHHD\nEDBCBEGEEAG\n").unwrap()
}
