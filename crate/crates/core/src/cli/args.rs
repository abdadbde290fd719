use std::path::PathBuf;

use clap::{Args, Parser, Subcommand as ClapSubcommand};

use super::config::{RunConfig, Subcommand};
use crate::Result;

#[derive(Debug, Parser)]
#[command(name = "kicktop", version, about = "Kicked-top periodic orbits, bifurcations and quantum correspondence")]
pub(crate) struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, ClapSubcommand)]
pub(crate) enum Command {
    /// Stroboscopic classical trajectories from a Fibonacci lattice of initial points.
    PhasePortrait(Flags),
    /// Largest stability multiplier of a catalog orbit over a κ range.
    Bifurcation(Flags),
    /// Closed-form periodic orbits and their stability at one κ.
    Catalog(Flags),
    /// Husimi snapshots (or their time average) of an evolved coherent state.
    Husimi(Flags),
    /// Time-averaged survival probabilities for a catalog orbit.
    Survival(Flags),
    /// Survival over a (j, κ) grid with bifurcation and orthogonality annotations.
    Heatmap(Flags),
    /// Pairwise coherent-state overlaps and the minimum j for orthogonality.
    Criteria(Flags),
    /// Numerical periodic-orbit search from a seed grid.
    FindOrbits(Flags),
}

#[derive(Debug, Args, Default)]
pub(crate) struct Flags {
    /// key = value config file, or a manifest.json from an earlier run
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// κ value or start:end:count
    #[arg(long, conflicts_with = "kappa_range")]
    pub kappa: Option<String>,
    /// κ range start:end:count
    #[arg(long = "kappa-range")]
    pub kappa_range: Option<String>,
    /// j value, a:b (unit steps) or a:b:count
    #[arg(long)]
    pub j: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub tau: Option<String>,
    /// Number of averaged survival terms
    #[arg(long = "L")]
    pub l: Option<String>,
    #[arg(long)]
    pub kicks: Option<String>,
    #[arg(long = "n-init")]
    pub n_init: Option<String>,
    #[arg(long)]
    pub orbit: Option<String>,
    /// Orthogonality threshold ε
    #[arg(long)]
    pub threshold: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Orbit period for find-orbits
    #[arg(long)]
    pub period: Option<String>,
    #[arg(long = "n-theta")]
    pub n_theta: Option<String>,
    #[arg(long = "n-phi")]
    pub n_phi: Option<String>,
    /// Husimi start point theta,phi
    #[arg(long)]
    pub start: Option<String>,
    /// Husimi: average over kicks 1..=kicks instead of snapshots
    #[arg(long)]
    pub average: bool,
    /// Survival: keep every per-kick probability
    #[arg(long = "per-kick")]
    pub per_kick: bool,
    /// Heatmap: allow half-integer j without a diagnostic
    #[arg(long = "half-integer-j")]
    pub half_integer_j: bool,
    /// csv or binary (Husimi grids)
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long = "out-dir")]
    pub out_dir: Option<PathBuf>,
}

impl Command {
    pub fn split(self) -> (Subcommand, Flags) {
        match self {
            Command::PhasePortrait(f) => (Subcommand::PhasePortrait, f),
            Command::Bifurcation(f) => (Subcommand::Bifurcation, f),
            Command::Catalog(f) => (Subcommand::Catalog, f),
            Command::Husimi(f) => (Subcommand::Husimi, f),
            Command::Survival(f) => (Subcommand::Survival, f),
            Command::Heatmap(f) => (Subcommand::Heatmap, f),
            Command::Criteria(f) => (Subcommand::Criteria, f),
            Command::FindOrbits(f) => (Subcommand::FindOrbits, f),
        }
    }
}

impl Flags {
    /// The flags given on the command line as a partial config.
    pub fn to_config(&self, command: Subcommand) -> Result<RunConfig> {
        let mut cfg = RunConfig::new(command);
        let pairs: [(&str, &Option<String>); 16] = [
            ("kappa", &self.kappa),
            ("kappa", &self.kappa_range),
            ("j", &self.j),
            ("p", &self.p),
            ("tau", &self.tau),
            ("L", &self.l),
            ("kicks", &self.kicks),
            ("n-init", &self.n_init),
            ("orbit", &self.orbit),
            ("threshold", &self.threshold),
            ("seed", &self.seed),
            ("period", &self.period),
            ("n-theta", &self.n_theta),
            ("n-phi", &self.n_phi),
            ("start", &self.start),
            ("format", &self.format),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        if self.average {
            cfg.average = Some(true);
        }
        if self.per_kick {
            cfg.per_kick = Some(true);
        }
        if self.half_integer_j {
            cfg.integer_j = Some(false);
        }
        cfg.out_dir = self.out_dir.clone();
        Ok(cfg)
    }
}
