//! Time accounting for the anytime algorithms.
//!
//! Production runs measure wall-clock time. Tests that exercise the adaptive
//! control path of the CMSA loop need reproducible timing, so a virtual mode
//! is provided where elapsed time is a deterministic function of the work
//! performed (solver node expansions, solution constructions). Callers report
//! work units through [`Stopwatch::tick`]; in wall mode ticks are ignored.

use std::time::Instant;

/// Virtual seconds charged per reported work unit.
pub const SECS_PER_TICK: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeMode {
    #[default]
    Wall,
    Virtual,
}

/// A stopwatch that is either wall-clock backed or driven by work ticks.
#[derive(Debug, Clone)]
pub struct Stopwatch {
    mode: TimeMode,
    start: Instant,
    ticks: u64,
}

impl Stopwatch {
    pub fn start(mode: TimeMode) -> Self {
        Stopwatch {
            mode,
            start: Instant::now(),
            ticks: 0,
        }
    }

    pub fn mode(&self) -> TimeMode {
        self.mode
    }

    /// Report `n` units of work. No-op in wall mode.
    pub fn tick(&mut self, n: u64) {
        self.ticks += n;
    }

    pub fn elapsed_s(&self) -> f64 {
        match self.mode {
            TimeMode::Wall => self.start.elapsed().as_secs_f64(),
            TimeMode::Virtual => self.ticks as f64 * SECS_PER_TICK,
        }
    }
}
