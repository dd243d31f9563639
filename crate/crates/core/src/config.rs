//! Reduction configurations and the named presets.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::bounds::BoundSet;
use crate::error::{Error, Result};
use crate::reductions::ReductionKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Branching {
    Random,
    MinDeg,
    #[default]
    MaxDeg,
}

impl Branching {
    pub fn from_code(code: u8) -> Result<Branching> {
        match code {
            0 => Ok(Branching::Random),
            1 => Ok(Branching::MinDeg),
            2 => Ok(Branching::MaxDeg),
            other => Err(Error::Config(format!("branching must be 0, 1 or 2, got {other}"))),
        }
    }
}

pub const DEFAULT_SHRINK: f64 = 0.5;
pub const DEFAULT_BRUTE_FORCE_THRESHOLD: usize = 10;
pub const MAX_BRUTE_FORCE_THRESHOLD: usize = 64;
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(3600);

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionConfig {
    reductions: [bool; ReductionKind::COUNT],
    pub bounds: BoundSet,
    pub branching: Branching,
    /// Hand the remainder to fresh per-component solvers once at most this
    /// fraction of the vertices is undecided. `0` disables the check.
    pub shrink: f64,
    pub brute_force_threshold: usize,
    pub timeout: Duration,
    pub seed: u64,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        ReductionConfig {
            reductions: [false; ReductionKind::COUNT],
            bounds: BoundSet::default(),
            branching: Branching::MaxDeg,
            shrink: DEFAULT_SHRINK,
            brute_force_threshold: DEFAULT_BRUTE_FORCE_THRESHOLD,
            timeout: DEFAULT_TIMEOUT,
            seed: 0,
        }
    }
}

/// Every preset name accepted by [`ReductionConfig::preset`].
pub const PRESETS: [&str; 18] = [
    "None", "Deg1", "DD", "Cheap", "All", "Fold2", "DF2", "r0_l1", "r0_l1+U", "r1_l4", "r2_l4", "r3_l4", "Cheap+U",
    "Cheap+LP", "Cheap+LPU", "DF2+U", "DF2+LP", "DF2+LPU",
];

impl ReductionConfig {
    pub fn has(&self, kind: ReductionKind) -> bool {
        self.reductions[kind as usize]
    }

    pub fn set(&mut self, kind: ReductionKind, on: bool) -> &mut Self {
        self.reductions[kind as usize] = on;
        self
    }

    pub fn enabled(&self) -> impl Iterator<Item = ReductionKind> + '_ {
        ReductionKind::ALL.into_iter().filter(|&k| self.has(k))
    }

    pub fn with(kinds: &[ReductionKind], bounds: BoundSet) -> ReductionConfig {
        let mut c = ReductionConfig { bounds, ..Default::default() };
        for &k in kinds {
            c.set(k, true);
        }
        c
    }

    /// Every reduction, with clique, LP and cycle bounds.
    pub fn all_reductions() -> ReductionConfig {
        ReductionConfig::with(&ReductionKind::ALL, BoundSet { clique: true, lp: true, cycle: true })
    }

    /// Builds a named preset. The second value is a warning for presets
    /// that reference unsupported rules.
    pub fn preset(name: &str) -> Result<(ReductionConfig, Option<String>)> {
        use ReductionKind::*;
        let clique = BoundSet { clique: true, lp: false, cycle: false };
        let lp = BoundSet { lp: true, ..clique };
        let cycle = BoundSet { cycle: true, ..lp };
        let (kinds, bounds): (&[ReductionKind], BoundSet) = match name {
            "None" => (&[], clique),
            "Deg1" => (&[Deg1], clique),
            "DD" => (&[Deg1, Dominance], clique),
            "Cheap" => (&[Deg1, Fold2, Desk, Twin], clique),
            "All" => (&[Deg1, Dominance, Fold2, Lp, Unconfined, Funnel, Desk, Twin], lp),
            "Fold2" => (&[Fold2], clique),
            "DF2" => (&[Deg1, Fold2], clique),
            "r0_l1" => (&[Deg1, Dominance, Fold2], clique),
            "r0_l1+U" => (&[Deg1, Dominance, Fold2, Unconfined], clique),
            "r1_l4" => (&[Deg1, Dominance, Fold2, Lp], cycle),
            "r2_l4" => (&[Deg1, Dominance, Fold2, Lp, Unconfined, Twin, Funnel, Desk], cycle),
            "r3_l4" => {
                let (c, _) = ReductionConfig::preset("r2_l4")?;
                return Ok((c, Some("packing reduction is not available; r3_l4 runs as r2_l4".to_string())));
            }
            "Cheap+U" => (&[Deg1, Fold2, Unconfined, Desk, Twin], clique),
            "Cheap+LP" => (&[Deg1, Fold2, Lp, Desk, Twin], lp),
            "Cheap+LPU" => (&[Deg1, Fold2, Lp, Unconfined, Desk, Twin], lp),
            "DF2+U" => (&[Deg1, Fold2, Unconfined], clique),
            "DF2+LP" => (&[Deg1, Fold2, Lp], lp),
            "DF2+LPU" => (&[Deg1, Fold2, Lp, Unconfined], lp),
            other => return Err(Error::Config(format!("unknown preset '{other}'"))),
        };
        Ok((ReductionConfig::with(kinds, bounds), None))
    }

    pub fn validate(&self) -> Result<()> {
        if self.bounds.cycle && !(self.bounds.lp || self.has(ReductionKind::Lp)) {
            return Err(Error::Config("the cycle bound needs the LP reduction or the LP bound".into()));
        }
        if !(0.0..=1.0).contains(&self.shrink) || self.shrink.is_nan() {
            return Err(Error::Config(format!("shrink must lie in [0, 1], got {}", self.shrink)));
        }
        if self.brute_force_threshold > MAX_BRUTE_FORCE_THRESHOLD {
            return Err(Error::Config(format!(
                "brute force threshold is capped at {MAX_BRUTE_FORCE_THRESHOLD}, got {}",
                self.brute_force_threshold
            )));
        }
        Ok(())
    }

    /// Preset name whose reductions and bounds match exactly, if any.
    pub fn preset_name(&self) -> Option<&'static str> {
        PRESETS.iter().copied().filter(|&p| p != "r3_l4").find(|p| {
            let (c, _) = ReductionConfig::preset(p).expect("listed preset");
            c.reductions == self.reductions && c.bounds == self.bounds
        })
    }
}

impl FromStr for ReductionConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReductionConfig::preset(s).map(|(c, _)| c)
    }
}

impl fmt::Display for ReductionConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let reds: Vec<&str> = self.enabled().map(ReductionKind::name).collect();
        let mut bounds = Vec::new();
        if self.bounds.clique {
            bounds.push("clique");
        }
        if self.bounds.lp {
            bounds.push("lp");
        }
        if self.bounds.cycle {
            bounds.push("cycle");
        }
        write!(f, "reductions [{}] bounds [{}]", reds.join(" "), bounds.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ReductionKind::*;

    fn kinds(name: &str) -> Vec<ReductionKind> {
        ReductionConfig::preset(name).unwrap().0.enabled().collect()
    }

    #[test]
    fn presets_valid() {
        for p in PRESETS {
            let (c, warn) = ReductionConfig::preset(p).unwrap();
            c.validate().unwrap();
            assert!(c.bounds.clique, "{p}");
            assert_eq!(warn.is_some(), p == "r3_l4");
        }
    }

    #[test]
    fn table_rows() {
        assert!(kinds("None").is_empty());
        assert_eq!(kinds("DF2"), vec![Deg1, Fold2]);
        assert_eq!(kinds("r0_l1"), vec![Deg1, Dominance, Fold2]);
        let r2 = ReductionConfig::preset("r2_l4").unwrap().0;
        assert_eq!(r2.enabled().count(), 8);
        assert!(r2.bounds.cycle && r2.bounds.lp);
        assert_eq!(ReductionConfig::preset("r3_l4").unwrap().0, r2);
        assert_eq!(r2, ReductionConfig::all_reductions());
        assert_eq!(kinds("Cheap"), vec![Deg1, Fold2, Twin, Desk]);
    }

    #[test]
    fn cycle_needs_lp() {
        let c = ReductionConfig::with(&[Deg1], BoundSet { clique: true, lp: false, cycle: true });
        assert!(c.validate().is_err());
        let c = ReductionConfig::with(&[Lp], BoundSet { clique: false, lp: false, cycle: true });
        assert!(c.validate().is_ok());
    }

    #[test]
    fn names_round_trip() {
        for p in PRESETS.iter().filter(|&&p| p != "r3_l4") {
            let c: ReductionConfig = p.parse().unwrap();
            assert_eq!(c.preset_name(), Some(*p));
        }
        assert!("nope".parse::<ReductionConfig>().is_err());
    }

    #[test]
    fn branching_codes() {
        assert_eq!(Branching::from_code(2).unwrap(), Branching::MaxDeg);
        assert!(Branching::from_code(3).is_err());
    }
}
