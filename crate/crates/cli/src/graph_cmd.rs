use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use slimebench_core::proximity::{
    self, load_points, metrics, Hierarchy, PointSet, ProximityError, ProximityGraph,
};

use crate::manifest::{sha256_file, FileDigest, Outputs, RunManifest};
use crate::{fan_out, CliError, RunArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Gabriel,
    Rng,
    Mst,
    Delaunay,
    /// all four geometric graphs plus a containment report
    Hierarchy,
    /// Erdős–Rényi G(n, p)
    Er,
    /// Watts–Strogatz ring rewiring
    Ws,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatArg {
    Json,
    Dot,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// CSV with header `id,x,y` (geometric families)
    #[arg(long, value_name = "PATH.csv")]
    points: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Node count (er, ws)
    #[arg(long)]
    n: Option<usize>,
    /// Edge probability (er)
    #[arg(long)]
    p: Option<f64>,
    /// Ring degree, even (ws)
    #[arg(long)]
    k: Option<usize>,
    /// Rewiring probability (ws)
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    run: RunArgs,
}

/// Resolved configuration of one graph build.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSettings {
    pub family: FamilyArg,
    pub format: FormatArg,
    pub points: Option<PathBuf>,
    pub n: Option<usize>,
    pub p: Option<f64>,
    pub k: Option<usize>,
    pub beta: Option<f64>,
    pub seed: u64,
}

fn usage(e: ProximityError) -> CliError {
    match e {
        ProximityError::InvalidParameter(_) | ProximityError::TooFewPoints { .. } => {
            CliError::Usage(e.to_string())
        }
        other => CliError::Runtime(other.to_string()),
    }
}

fn missing(flag: &str, family: &str) -> CliError {
    CliError::Usage(format!("--{flag} is required for --family {family}"))
}

impl GraphSettings {
    fn random(&self) -> bool {
        matches!(self.family, FamilyArg::Er | FamilyArg::Ws)
    }

    fn render(&self, g: &ProximityGraph, points: Option<&PointSet>) -> (String, String) {
        match self.format {
            FormatArg::Json => (
                format!("{}.json", g.family.name()),
                serde_json::to_string(g).expect("graph serialises") + "\n",
            ),
            FormatArg::Dot => (format!("{}.dot", g.family.name()), g.to_dot(points)),
        }
    }

    /// Builds the requested graph(s) and writes them with the manifest into
    /// `out`. Returns the manifest path.
    pub fn execute(&self, out: &Path) -> Result<PathBuf, CliError> {
        let started = Instant::now();
        let mut inputs = Vec::new();
        let points = if self.random() {
            None
        } else {
            let path = self
                .points
                .as_ref()
                .ok_or_else(|| missing("points", "of a geometric graph"))?;
            let ps = load_points(path).map_err(|e| CliError::Runtime(e.to_string()))?;
            inputs.push(FileDigest {
                path: path.display().to_string(),
                sha256: sha256_file(path)?,
            });
            Some(ps)
        };

        let mut outputs = Outputs::new(out)?;
        let write_graph = |outputs: &mut Outputs, g: &ProximityGraph| {
            let (name, body) = self.render(g, points.as_ref());
            outputs.write(&name, body)
        };
        let mut failure = None;
        match self.family {
            FamilyArg::Er | FamilyArg::Ws => {
                let n = self.n.ok_or_else(|| missing("n", "er/ws"))?;
                let g = if self.family == FamilyArg::Er {
                    let p = self.p.ok_or_else(|| missing("p", "er"))?;
                    proximity::er_random(n, p, self.seed).map_err(usage)?
                } else {
                    let k = self.k.ok_or_else(|| missing("k", "ws"))?;
                    let beta = self.beta.ok_or_else(|| missing("beta", "ws"))?;
                    proximity::watts_strogatz(n, k, beta, self.seed).map_err(usage)?
                };
                write_graph(&mut outputs, &g)?;
                outputs.write(
                    "metrics.json",
                    serde_json::to_string_pretty(&metrics(&g)).expect("metrics serialise") + "\n",
                )?;
            }
            FamilyArg::Hierarchy => {
                let ps = points.as_ref().expect("loaded above");
                if ps.len() < 3 {
                    return Err(usage(ProximityError::TooFewPoints {
                        needed: 3,
                        got: ps.len(),
                    }));
                }
                let h = Hierarchy::build(ps);
                for g in h.graphs() {
                    write_graph(&mut outputs, g)?;
                }
                let report = h.containment();
                outputs.write(
                    "containment.json",
                    serde_json::to_string_pretty(&report).expect("report serialises") + "\n",
                )?;
                if !report.holds() {
                    failure = Some(CliError::Runtime(format!(
                        "containment chain violated:\n{report}"
                    )));
                }
            }
            family => {
                let ps = points.as_ref().expect("loaded above");
                let g = match family {
                    FamilyArg::Gabriel => proximity::gabriel(ps),
                    FamilyArg::Rng => proximity::rng(ps),
                    FamilyArg::Mst => proximity::mst(ps),
                    _ => {
                        if ps.len() < 3 {
                            return Err(usage(ProximityError::TooFewPoints {
                                needed: 3,
                                got: ps.len(),
                            }));
                        }
                        proximity::delaunay(ps)
                    }
                };
                write_graph(&mut outputs, &g)?;
            }
        }

        let mut manifest = RunManifest::new(
            "graph",
            serde_json::to_value(self).expect("settings serialise"),
            self.random().then_some(self.seed),
        );
        manifest.inputs = inputs;
        manifest.outputs = outputs.digests()?;
        manifest.duration_seconds = started.elapsed().as_secs_f64();
        let path = manifest.save(out)?;
        match failure {
            Some(e) => Err(e),
            None => Ok(path),
        }
    }
}

pub fn command(args: GraphArgs) -> Result<Vec<PathBuf>, CliError> {
    let base = GraphSettings {
        family: args.family,
        format: args.format,
        points: args.points,
        n: args.n,
        p: args.p,
        k: args.k,
        beta: args.beta,
        seed: args.seed,
    };
    fan_out(&args.run, args.seed, |seed, out| {
        GraphSettings {
            seed,
            ..base.clone()
        }
        .execute(out)
    })
}
