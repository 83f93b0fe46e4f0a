use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use slimebench_core::actin::{
    self, detect_localizations, Boundary, Chain, ChainPair, DetectorConfig, Localization, Palette,
    Rule, RuleSpec,
};

use crate::manifest::{Outputs, RunManifest};
use crate::{fan_out, CliError, RunArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleArg {
    C1,
    C2,
    C3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryArg {
    Fixed,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainArg {
    X,
    Y,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PaletteArg {
    /// excited 0, refractory 128, resting 255
    Standard,
    /// refractory drawn as resting
    TwoTone,
}

#[derive(Debug, Args)]
pub struct ActinArgs {
    /// Excitation rule
    #[arg(long, value_enum)]
    rule: RuleArg,
    /// Nodes per chain
    #[arg(long, default_value_t = 500)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Probability that a node starts excited
    #[arg(long, default_value_t = actin::DEFAULT_P_EXCITED)]
    p_excited: f64,
    /// Probability that a node starts refractory
    #[arg(long, default_value_t = actin::DEFAULT_P_REFRACTORY)]
    p_refractory: f64,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Fixed)]
    boundary: BoundaryArg,
    /// Chains to render and scan for localizations
    #[arg(long, value_enum, default_value_t = ChainArg::Both)]
    chain: ChainArg,
    #[arg(long, value_enum, default_value_t = PaletteArg::Standard)]
    palette: PaletteArg,
    /// Rows over which the localization detector checks recurrence
    #[arg(long, default_value_t = 24)]
    window: usize,
    /// Explicit initial chain x (`+` excited, `-` refractory, `.` resting); replaces the random start
    #[arg(long, requires = "init_y", value_name = "STATES")]
    init_x: Option<String>,
    /// Explicit initial chain y, same length as --init-x
    #[arg(long, requires = "init_x", value_name = "STATES")]
    init_y: Option<String>,
    #[command(flatten)]
    run: RunArgs,
}

/// Resolved configuration of one automaton run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActinSettings {
    pub rule: RuleArg,
    pub boundary: BoundaryArg,
    pub n: usize,
    pub steps: usize,
    pub seed: u64,
    pub p_excited: f64,
    pub p_refractory: f64,
    pub chain: ChainArg,
    pub palette: PaletteArg,
    pub window: usize,
    pub init_x: Option<String>,
    pub init_y: Option<String>,
}

#[derive(Serialize)]
struct Tagged<'a> {
    chain: Chain,
    #[serde(flatten)]
    record: &'a Localization,
}

impl ActinSettings {
    fn spec(&self) -> RuleSpec {
        let rule = match self.rule {
            RuleArg::C1 => Rule::C1,
            RuleArg::C2 => Rule::C2,
            RuleArg::C3 => Rule::C3,
        };
        let boundary = match self.boundary {
            BoundaryArg::Fixed => Boundary::Fixed,
            BoundaryArg::Periodic => Boundary::Periodic,
        };
        RuleSpec::new(rule, boundary)
    }

    fn initial(&self) -> Result<ChainPair, CliError> {
        let usage = |e: actin::ActinError| CliError::Usage(e.to_string());
        match (&self.init_x, &self.init_y) {
            (Some(x), Some(y)) => ChainPair::parse(x, y).map_err(usage),
            _ => actin::random_init(self.n, self.p_excited, self.p_refractory, self.seed)
                .map_err(usage),
        }
    }

    fn chains(&self) -> Vec<Chain> {
        match self.chain {
            ChainArg::X => vec![Chain::X],
            ChainArg::Y => vec![Chain::Y],
            ChainArg::Both => vec![Chain::X, Chain::Y],
        }
    }

    /// Runs the automaton and writes diagrams, activity, localizations and
    /// the manifest into `out`. Returns the manifest path.
    pub fn execute(&self, out: &Path) -> Result<PathBuf, CliError> {
        let started = Instant::now();
        if self.steps == 0 {
            return Err(CliError::Usage("--steps must be at least 1".into()));
        }
        let initial = self.initial()?;
        let result = actin::run(&initial, self.spec(), self.steps);
        let palette = match self.palette {
            PaletteArg::Standard => Palette::Standard,
            PaletteArg::TwoTone => Palette::TwoTone,
        };

        let mut outputs = Outputs::new(out)?;
        let detector = DetectorConfig::with_window(self.window);
        let mut found = Vec::new();
        for chain in self.chains() {
            let diagram = result.diagram(chain);
            let name = match chain {
                Chain::X => "chain_x.pgm",
                Chain::Y => "chain_y.pgm",
            };
            outputs.write(name, diagram.render(palette).encode())?;
            match detect_localizations(diagram, &detector) {
                Ok(records) => found.extend(records.into_iter().map(|r| (chain, r))),
                Err(e) => eprintln!("warning: localization scan skipped: {e}"),
            }
        }
        outputs.write("activity.csv", result.activity_csv())?;
        let tagged: Vec<Tagged> = found
            .iter()
            .map(|(chain, record)| Tagged {
                chain: *chain,
                record,
            })
            .collect();
        outputs.write(
            "localizations.json",
            serde_json::to_string_pretty(&tagged).expect("records serialise") + "\n",
        )?;

        let mut manifest = RunManifest::new(
            "actin",
            serde_json::to_value(self).expect("settings serialise"),
            Some(self.seed),
        );
        manifest.outputs = outputs.digests()?;
        manifest.duration_seconds = started.elapsed().as_secs_f64();
        manifest.save(out)
    }
}

pub fn command(args: ActinArgs) -> Result<Vec<PathBuf>, CliError> {
    let base = ActinSettings {
        rule: args.rule,
        boundary: args.boundary,
        n: args.init_x.as_ref().map_or(args.n, |x| x.chars().count()),
        steps: args.steps,
        seed: args.seed,
        p_excited: args.p_excited,
        p_refractory: args.p_refractory,
        chain: args.chain,
        palette: args.palette,
        window: args.window,
        init_x: args.init_x,
        init_y: args.init_y,
    };
    fan_out(&args.run, args.seed, |seed, out| {
        ActinSettings {
            seed,
            ..base.clone()
        }
        .execute(out)
    })
}
