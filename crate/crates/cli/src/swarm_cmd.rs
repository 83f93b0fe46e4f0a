use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Args;
use serde::{Deserialize, Serialize};
use slimebench_core::swarm::{
    agent_image, extract_network, field_image, init_world, step_world, MetricsRow, NetworkSource,
    SwarmConfig, SwarmError, SwarmWorld, METRICS_HEADER,
};

use crate::manifest::{Outputs, RunManifest};
use crate::{fan_out, CliError, RunArgs};

#[derive(Debug, Args)]
pub struct SwarmArgs {
    /// TOML file with lattice size, nodes, inoculation and [params]
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum number of steps
    #[arg(long, default_value_t = 20_000)]
    steps: u64,
    /// Write agent and field frames every N steps (0: first and last only)
    #[arg(long, default_value_t = 1000, value_name = "N")]
    snapshot_every: u64,
    /// Stop once every node is suppressed and the network is a spanning tree
    #[arg(long)]
    stop_when_complete: bool,
    /// Steps between completion checks
    #[arg(long, default_value_t = 50, value_name = "N")]
    check_every: u64,
    /// Binarisation threshold for network extraction
    #[arg(long, default_value_t = 1.0)]
    threshold: f64,
    /// Quantity binarised for network extraction
    #[arg(long, value_enum, default_value_t = SourceArg::Occupancy)]
    source: SourceArg,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceArg {
    Occupancy,
    Trail,
}

/// Resolved configuration of one swarm run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwarmSettings {
    pub world: SwarmConfig,
    pub seed: u64,
    pub steps: u64,
    pub snapshot_every: u64,
    pub stop_when_complete: bool,
    pub check_every: u64,
    pub threshold: f64,
    pub source: SourceArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuppressionEvent {
    pub node: usize,
    pub t: u64,
    pub suppressed: bool,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwarmSummary {
    pub final_t: u64,
    /// Step at which every node was suppressed and the network was a tree.
    pub completed_at: Option<u64>,
    pub population: usize,
    pub components: usize,
    pub node_component: Vec<Option<usize>>,
    pub spanning_tree: bool,
    /// First step at which each node was suppressed.
    pub first_suppressed: Vec<Option<u64>>,
    /// Every change of a node's suppression state.
    pub events: Vec<SuppressionEvent>,
}

fn config_error(e: SwarmError) -> CliError {
    CliError::Runtime(e.to_string())
}

pub fn load_config(path: &Path) -> Result<SwarmConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

impl SwarmSettings {
    fn source(&self) -> NetworkSource {
        match self.source {
            SourceArg::Occupancy => NetworkSource::Occupancy,
            SourceArg::Trail => NetworkSource::Trail,
        }
    }

    fn frame(outputs: &mut Outputs, world: &SwarmWorld, rows: &mut String) -> Result<(), CliError> {
        outputs.write(
            &format!("frames/agents_{:06}.pgm", world.t),
            agent_image(world).encode(),
        )?;
        outputs.write(
            &format!("frames/field_{:06}.pgm", world.t),
            field_image(world).encode(),
        )?;
        rows.push_str(&MetricsRow::of(world).csv());
        rows.push('\n');
        Ok(())
    }

    /// Runs the swarm and writes frames, per-step mass, metrics, the final
    /// network and a summary into `out`. Returns the manifest path.
    pub fn execute(&self, out: &Path) -> Result<PathBuf, CliError> {
        let started = Instant::now();
        if !(self.threshold > 0.0) {
            return Err(CliError::Usage("--threshold must be positive".into()));
        }
        if self.check_every == 0 {
            return Err(CliError::Usage("--check-every must be at least 1".into()));
        }
        let mut world = init_world(&self.world, self.seed).map_err(config_error)?;
        let mut outputs = Outputs::new(out)?;
        let mut metrics = format!("{METRICS_HEADER}\n");
        let mut mass = String::from("t,field_mass,nodes_suppressed,population\n");
        let mass_row = |w: &SwarmWorld| {
            format!(
                "{},{},{},{}\n",
                w.t,
                w.field_mass(),
                w.suppressed_count(),
                w.population()
            )
        };
        Self::frame(&mut outputs, &world, &mut metrics)?;
        mass.push_str(&mass_row(&world));

        let n = world.nodes.len();
        let mut state = vec![false; n];
        let mut first_suppressed = vec![None; n];
        let mut events = Vec::new();
        let mut completed_at = None;
        let mut last_frame = 0;
        while world.t < self.steps {
            step_world(&mut world);
            mass.push_str(&mass_row(&world));
            for (i, node) in world.nodes.iter().enumerate() {
                if node.suppressed != state[i] {
                    state[i] = node.suppressed;
                    events.push(SuppressionEvent {
                        node: i,
                        t: world.t,
                        suppressed: node.suppressed,
                    });
                    if node.suppressed && first_suppressed[i].is_none() {
                        first_suppressed[i] = Some(world.t);
                    }
                }
            }
            if self.snapshot_every > 0 && world.t % self.snapshot_every == 0 {
                Self::frame(&mut outputs, &world, &mut metrics)?;
                last_frame = world.t;
            }
            if completed_at.is_none()
                && world.t % self.check_every == 0
                && world.suppressed_count() == n
                && extract_network(&world, self.threshold, self.source()).spanning_tree
            {
                completed_at = Some(world.t);
                if self.stop_when_complete {
                    break;
                }
            }
        }
        if last_frame != world.t {
            Self::frame(&mut outputs, &world, &mut metrics)?;
        }

        let report = extract_network(&world, self.threshold, self.source());
        outputs.write("metrics.csv", metrics)?;
        outputs.write("mass.csv", mass)?;
        outputs.write(
            "network.json",
            serde_json::to_string(&report.graph).expect("graph serialises") + "\n",
        )?;
        let summary = SwarmSummary {
            final_t: world.t,
            completed_at,
            population: world.population(),
            components: report.components,
            node_component: report.node_component,
            spanning_tree: report.spanning_tree,
            first_suppressed,
            events,
        };
        outputs.write(
            "summary.json",
            serde_json::to_string_pretty(&summary).expect("summary serialises") + "\n",
        )?;

        let mut manifest = RunManifest::new(
            "swarm",
            serde_json::to_value(self).expect("settings serialise"),
            Some(self.seed),
        );
        manifest.outputs = outputs.digests()?;
        manifest.duration_seconds = started.elapsed().as_secs_f64();
        manifest.save(out)
    }
}

pub fn command(args: SwarmArgs) -> Result<Vec<PathBuf>, CliError> {
    let base = SwarmSettings {
        world: load_config(&args.config)?,
        seed: args.seed,
        steps: args.steps,
        snapshot_every: args.snapshot_every,
        stop_when_complete: args.stop_when_complete,
        check_every: args.check_every,
        threshold: args.threshold,
        source: args.source,
    };
    fan_out(&args.run, args.seed, |seed, out| {
        SwarmSettings {
            seed,
            ..base.clone()
        }
        .execute(out)
    })
}
