//! Flat key-value scenario configuration.
//!
//! One `key = value` pair per line; `#` starts a comment; a `[name]` line
//! opens a section. Keys outside any section (or under `[scenario]`)
//! describe the run; `[search]` holds calibration-search settings. Omitted
//! scenario keys fall back to the baseline calibration, unknown keys are
//! errors, and serializing a parsed config reparses to an identical one.

use epi_core::{
    BehavioralParams, DensityMode, EpidemicParams, Geography, OutbreakMode, ParamError,
    RelocationMode,
};
use epi_engine::behavior::LockdownSelection;
use epi_engine::{BehaviorMode, LockdownPolicy, ScenarioSpec, TraceDetail};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: unknown section `{section}`")]
    UnknownSection { line: usize, section: String },
    #[error("line {line}: key `{key}` expects {expected}, got `{value}`")]
    BadValue { line: usize, key: String, expected: &'static str, value: String },
    #[error("line {line}: key `{key}` set twice")]
    DuplicateKey { line: usize, key: String },
    #[error("seeds must be non-empty")]
    NoSeeds,
    #[error(transparent)]
    Params(#[from] ParamError),
}

/// Calibration-search settings from the `[search]` section, all optional.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SearchSection {
    pub pi_min: Option<f64>,
    pub pi_max: Option<f64>,
    pub mu_min: Option<f64>,
    pub mu_max: Option<f64>,
    pub grid_points: Option<usize>,
    pub refinement_iters: Option<usize>,
}

/// A parsed configuration: the scenario, the seed list to run it over, a
/// free-text note, and calibration-search settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: ScenarioSpec,
    pub seeds: Vec<u64>,
    pub notes: String,
    pub search: SearchSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioSpec::default(),
            seeds: (1..=20).collect(),
            notes: String::new(),
            search: SearchSection::default(),
        }
    }
}

/// Seed lists accept `a..b` (inclusive) or comma-separated values.
fn parse_seeds(value: &str) -> Option<Vec<u64>> {
    if let Some((lo, hi)) = value.split_once("..") {
        let (lo, hi) = (lo.trim().parse().ok()?, hi.trim().parse().ok()?);
        if lo > hi {
            return None;
        }
        return Some((lo..=hi).collect());
    }
    value.split(',').map(|s| s.trim().parse().ok()).collect()
}

fn render_seeds(seeds: &[u64]) -> String {
    let contiguous = seeds.len() > 1
        && seeds.windows(2).all(|w| w[1] == w[0] + 1);
    if contiguous {
        format!("{}..{}", seeds[0], seeds[seeds.len() - 1])
    } else {
        seeds.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    }
}

enum Section {
    Scenario,
    Search,
}

/// Parses configuration text into a validated run description.
pub fn parse_scenario(text: &str) -> Result<RunConfig, ConfigError> {
    let mut config = RunConfig::default();
    let mut section = Section::Scenario;
    let mut seen: Vec<String> = Vec::new();

    // Lockdown and behavior keys accumulate here; the enums are assembled
    // after the scan so key order does not matter.
    let mut behavior_kind: Option<String> = None;
    let mut behavioral = BehavioralParams::default();
    let mut lockdown_share: Option<f64> = None;
    let mut lockdown_start: Option<u32> = None;
    let mut lockdown_selection = LockdownSelection::Random;
    let mut anchor = (0.25, 0.25);
    let mut outbreak_kind: Option<String> = None;
    let mut cluster_count = 4u32;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = match name.trim() {
                "scenario" => Section::Scenario,
                "search" => Section::Search,
                other => {
                    return Err(ConfigError::UnknownSection {
                        line,
                        section: other.to_string(),
                    })
                }
            };
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Malformed { line, text: content.to_string() });
        };
        let key = key.trim();
        let value = value.trim();
        let scoped = match section {
            Section::Scenario => format!("scenario.{key}"),
            Section::Search => format!("search.{key}"),
        };
        if seen.contains(&scoped) {
            return Err(ConfigError::DuplicateKey { line, key: key.to_string() });
        }
        seen.push(scoped);

        let bad = |expected: &'static str| ConfigError::BadValue {
            line,
            key: key.to_string(),
            expected,
            value: value.to_string(),
        };
        macro_rules! num {
            ($ty:ty, $what:literal) => {
                value.parse::<$ty>().map_err(|_| bad($what))?
            };
        }

        match section {
            Section::Search => match key {
                "pi_min" => config.search.pi_min = Some(num!(f64, "a number")),
                "pi_max" => config.search.pi_max = Some(num!(f64, "a number")),
                "mu_min" => config.search.mu_min = Some(num!(f64, "a number")),
                "mu_max" => config.search.mu_max = Some(num!(f64, "a number")),
                "grid_points" => config.search.grid_points = Some(num!(usize, "an integer")),
                "refinement_iters" => {
                    config.search.refinement_iters = Some(num!(usize, "an integer"))
                }
                _ => return Err(ConfigError::UnknownKey { line, key: key.to_string() }),
            },
            Section::Scenario => match key {
                "scenario_id" => config.scenario.scenario_id = value.to_string(),
                "notes" => config.notes = value.to_string(),
                "n_agents" => config.scenario.params.n_agents = num!(u64, "an integer"),
                "initial_infected" => {
                    config.scenario.params.initial_infected = num!(u64, "an integer")
                }
                "recovery_prob" => config.scenario.params.recovery_prob = num!(f64, "a number"),
                "contagion_prob" => {
                    config.scenario.params.contagion_prob = num!(f64, "a number")
                }
                "contagion_radius" => {
                    config.scenario.params.contagion_radius = num!(f64, "a number")
                }
                "move_distance" => config.scenario.params.move_distance = num!(f64, "a number"),
                "horizon" => config.scenario.params.horizon = num!(u32, "an integer"),
                "city_side" => config.scenario.geography.city_side = num!(f64, "a number"),
                "density_mode" => {
                    config.scenario.geography.density_mode = match value {
                        "uniform" => DensityMode::Uniform,
                        "heterogeneous" => DensityMode::Heterogeneous,
                        _ => return Err(bad("uniform|heterogeneous")),
                    }
                }
                "outbreak" => match value {
                    "cluster" | "random" | "symmetric_clusters" => {
                        outbreak_kind = Some(value.to_string())
                    }
                    _ => return Err(bad("cluster|random|symmetric_clusters")),
                },
                "outbreak_anchor_x" => anchor.0 = num!(f64, "a number"),
                "outbreak_anchor_y" => anchor.1 = num!(f64, "a number"),
                "cluster_count" => cluster_count = num!(u32, "an integer"),
                "relocation" => {
                    config.scenario.geography.relocation_mode = match value {
                        "walk" => RelocationMode::Walk,
                        "daily_redraw" => RelocationMode::DailyUniformRedraw,
                        "frozen" => RelocationMode::Frozen,
                        _ => return Err(bad("walk|daily_redraw|frozen")),
                    }
                }
                "behavior" => match value {
                    "off" | "global" | "local" => behavior_kind = Some(value.to_string()),
                    _ => return Err(bad("off|global|local")),
                },
                "behavior_threshold" => behavioral.threshold = num!(f64, "a number"),
                "behavior_elasticity" => behavioral.elasticity = num!(f64, "a number"),
                "lockdown_share" => lockdown_share = Some(num!(f64, "a number")),
                "lockdown_start" => lockdown_start = Some(num!(u32, "an integer")),
                "lockdown_selection" => {
                    lockdown_selection = match value {
                        "random" => LockdownSelection::Random,
                        "risk_aversion" => LockdownSelection::ByRiskAversion,
                        _ => return Err(bad("random|risk_aversion")),
                    }
                }
                "seeds" => {
                    config.seeds = parse_seeds(value).ok_or_else(|| {
                        bad("a `lo..hi` range or comma-separated integers")
                    })?
                }
                "trace" => {
                    config.scenario.trace = match value {
                        "full" => TraceDetail::Full,
                        "light" => TraceDetail::Light,
                        _ => return Err(bad("full|light")),
                    }
                }
                _ => return Err(ConfigError::UnknownKey { line, key: key.to_string() }),
            },
        }
    }

    if config.seeds.is_empty() {
        return Err(ConfigError::NoSeeds);
    }
    if let Some(kind) = outbreak_kind {
        config.scenario.geography.outbreak_mode = match kind.as_str() {
            "cluster" => OutbreakMode::Cluster { anchor },
            "random" => OutbreakMode::Random,
            _ => OutbreakMode::SymmetricClusters { k: cluster_count },
        };
    } else if anchor != (0.25, 0.25) {
        // Anchor keys without an explicit mode still mean a cluster there.
        config.scenario.geography.outbreak_mode = OutbreakMode::Cluster { anchor };
    }
    config.scenario.behavior = match behavior_kind.as_deref() {
        None | Some("off") => BehaviorMode::Off,
        Some("global") => BehaviorMode::Global(behavioral),
        Some("local") => BehaviorMode::Local(behavioral),
        Some(_) => unreachable!("behavior values validated above"),
    };
    if lockdown_share.is_some() || lockdown_start.is_some() {
        config.scenario.lockdown = Some(LockdownPolicy {
            share: lockdown_share.unwrap_or(0.25),
            start_day: lockdown_start.unwrap_or(20),
            selection: lockdown_selection,
        });
    }

    // Surface model-level validation now, so `run` cannot fail later.
    epi_core::validate_params(&config.scenario.params, &config.scenario.geography)?;
    Ok(config)
}

/// Renders a config in canonical key order; parsing it back yields an equal
/// `RunConfig`.
pub fn serialize_scenario(config: &RunConfig) -> String {
    let mut out = String::new();
    let spec = &config.scenario;
    let p = &spec.params;
    let g = &spec.geography;
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    kv("scenario_id", spec.scenario_id.clone());
    if !config.notes.is_empty() {
        kv("notes", config.notes.clone());
    }
    kv("n_agents", p.n_agents.to_string());
    kv("initial_infected", p.initial_infected.to_string());
    kv("recovery_prob", p.recovery_prob.to_string());
    kv("contagion_prob", p.contagion_prob.to_string());
    kv("contagion_radius", p.contagion_radius.to_string());
    kv("move_distance", p.move_distance.to_string());
    kv("horizon", p.horizon.to_string());
    kv("city_side", g.city_side.to_string());
    kv(
        "density_mode",
        match g.density_mode {
            DensityMode::Uniform => "uniform",
            DensityMode::Heterogeneous => "heterogeneous",
        }
        .to_string(),
    );
    match g.outbreak_mode {
        OutbreakMode::Cluster { anchor } => {
            kv("outbreak", "cluster".to_string());
            kv("outbreak_anchor_x", anchor.0.to_string());
            kv("outbreak_anchor_y", anchor.1.to_string());
        }
        OutbreakMode::Random => kv("outbreak", "random".to_string()),
        OutbreakMode::SymmetricClusters { k } => {
            kv("outbreak", "symmetric_clusters".to_string());
            kv("cluster_count", k.to_string());
        }
    }
    kv(
        "relocation",
        match g.relocation_mode {
            RelocationMode::Walk => "walk",
            RelocationMode::DailyUniformRedraw => "daily_redraw",
            RelocationMode::Frozen => "frozen",
        }
        .to_string(),
    );
    match spec.behavior {
        BehaviorMode::Off => kv("behavior", "off".to_string()),
        BehaviorMode::Global(b) | BehaviorMode::Local(b) => {
            let kind = if matches!(spec.behavior, BehaviorMode::Global(_)) {
                "global"
            } else {
                "local"
            };
            kv("behavior", kind.to_string());
            kv("behavior_threshold", b.threshold.to_string());
            kv("behavior_elasticity", b.elasticity.to_string());
        }
    }
    if let Some(lockdown) = spec.lockdown {
        kv("lockdown_share", lockdown.share.to_string());
        kv("lockdown_start", lockdown.start_day.to_string());
        kv(
            "lockdown_selection",
            match lockdown.selection {
                LockdownSelection::Random => "random",
                LockdownSelection::ByRiskAversion => "risk_aversion",
            }
            .to_string(),
        );
    }
    kv("seeds", render_seeds(&config.seeds));
    kv(
        "trace",
        match spec.trace {
            TraceDetail::Full => "full",
            TraceDetail::Light => "light",
        }
        .to_string(),
    );
    if config.search != SearchSection::default() {
        let _ = writeln!(out, "[search]");
        let s = &config.search;
        for (k, v) in [
            ("pi_min", s.pi_min),
            ("pi_max", s.pi_max),
            ("mu_min", s.mu_min),
            ("mu_max", s.mu_max),
        ] {
            if let Some(x) = v {
                let _ = writeln!(out, "{k} = {x}");
            }
        }
        for (k, v) in [("grid_points", s.grid_points), ("refinement_iters", s.refinement_iters)]
        {
            if let Some(x) = v {
                let _ = writeln!(out, "{k} = {x}");
            }
        }
    }
    out
}
