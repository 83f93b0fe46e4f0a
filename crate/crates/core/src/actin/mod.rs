//! Two-chain excitable automaton.
//!
//! Two chains `x` and `y` of tri-state nodes are coupled with a half-node
//! offset: node `x[i]` sees `(x[i-1], x[i+1], y[i-1], y[i])` and node `y[i]`
//! sees `(y[i-1], y[i+1], x[i], x[i+1])`. The coupling is deliberately
//! asymmetric. A resting node fires when the excitation predicate of its
//! chain holds on the number of excited neighbours; excited nodes always
//! become refractory and refractory nodes always return to rest.

mod localize;

pub use localize::{detect_localizations, DetectorConfig, Localization, LocalizationKind};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pgm::GreyImage;
use crate::rng::SimRng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ActinError {
    #[error("chain length {0} is below the minimum of 2")]
    TooShort(usize),
    #[error("chains differ in length: x has {x}, y has {y}")]
    LengthMismatch { x: usize, y: usize },
    #[error("node index {index} out of range for chains of length {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid probabilities p_excited={p_excited}, p_refractory={p_refractory}")]
    InvalidProbabilities { p_excited: f64, p_refractory: f64 },
    #[error("unknown node symbol {0:?}")]
    BadSymbol(char),
    #[error("detector window {window} needs at least {needed} rows, diagram has {rows}")]
    WindowTooLarge {
        window: usize,
        needed: usize,
        rows: usize,
    },
    #[error("detector window must be at least 2")]
    WindowTooSmall,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum NodeState {
    Resting = 0,
    Excited = 1,
    Refractory = 2,
}

impl NodeState {
    pub fn symbol(self) -> char {
        match self {
            NodeState::Resting => '.',
            NodeState::Excited => '+',
            NodeState::Refractory => '-',
        }
    }

    pub fn from_symbol(c: char) -> Result<Self, ActinError> {
        match c {
            '.' | 'o' | '◦' => Ok(NodeState::Resting),
            '+' => Ok(NodeState::Excited),
            '-' | '−' => Ok(NodeState::Refractory),
            other => Err(ActinError::BadSymbol(other)),
        }
    }

    #[inline]
    pub fn is_excited(self) -> bool {
        self == NodeState::Excited
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chain {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    C1,
    C2,
    C3,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Out-of-range neighbours read as resting; waves leave through the ends.
    #[default]
    Fixed,
    Periodic,
}

/// Excitation condition on the excited-neighbour count of a resting node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Predicate {
    AtLeastOne,
    ExactlyOne,
}

impl Predicate {
    #[inline]
    pub fn holds(self, sigma: u8) -> bool {
        match self {
            Predicate::AtLeastOne => sigma > 0,
            Predicate::ExactlyOne => sigma == 1,
        }
    }
}

impl Rule {
    pub fn predicate(self, chain: Chain) -> Predicate {
        match (self, chain) {
            (Rule::C1, _) | (Rule::C3, Chain::X) => Predicate::AtLeastOne,
            (Rule::C2, _) | (Rule::C3, Chain::Y) => Predicate::ExactlyOne,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleSpec {
    pub rule: Rule,
    pub boundary: Boundary,
}

impl RuleSpec {
    pub fn new(rule: Rule, boundary: Boundary) -> Self {
        Self { rule, boundary }
    }
}

/// The automaton configuration at one time step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainPair {
    x: Vec<NodeState>,
    y: Vec<NodeState>,
    t: u64,
}

impl ChainPair {
    pub fn new(x: Vec<NodeState>, y: Vec<NodeState>) -> Result<Self, ActinError> {
        if x.len() != y.len() {
            return Err(ActinError::LengthMismatch {
                x: x.len(),
                y: y.len(),
            });
        }
        if x.len() < 2 {
            return Err(ActinError::TooShort(x.len()));
        }
        Ok(Self { x, y, t: 0 })
    }

    pub fn resting(n: usize) -> Result<Self, ActinError> {
        Self::new(vec![NodeState::Resting; n], vec![NodeState::Resting; n])
    }

    /// Builds a pair from symbol strings (`+` excited, `-` refractory,
    /// `.` or `o` resting).
    pub fn parse(x: &str, y: &str) -> Result<Self, ActinError> {
        let row = |s: &str| {
            s.chars()
                .map(NodeState::from_symbol)
                .collect::<Result<Vec<_>, _>>()
        };
        Self::new(row(x)?, row(y)?)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn x(&self) -> &[NodeState] {
        &self.x
    }

    pub fn y(&self) -> &[NodeState] {
        &self.y
    }

    pub fn chain(&self, chain: Chain) -> &[NodeState] {
        match chain {
            Chain::X => &self.x,
            Chain::Y => &self.y,
        }
    }

    pub fn set(&mut self, chain: Chain, i: usize, state: NodeState) {
        match chain {
            Chain::X => self.x[i] = state,
            Chain::Y => self.y[i] = state,
        }
    }

    pub fn excited(&self, chain: Chain) -> usize {
        self.chain(chain).iter().filter(|s| s.is_excited()).count()
    }

    pub fn is_quiescent(&self) -> bool {
        self.x
            .iter()
            .chain(self.y.iter())
            .all(|&s| s == NodeState::Resting)
    }

    /// Rotates both chains so that node `i` moves to `i + k (mod n)`.
    pub fn rotated(&self, k: usize) -> Self {
        let n = self.n();
        let k = k % n;
        let mut out = self.clone();
        out.x.rotate_right(k);
        out.y.rotate_right(k);
        out
    }
}

impl fmt::Display for ChainPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |v: &[NodeState]| v.iter().map(|s| s.symbol()).collect::<String>();
        write!(f, "x={} y={} t={}", row(&self.x), row(&self.y), self.t)
    }
}

#[inline]
fn fetch(chain: &[NodeState], i: isize, boundary: Boundary) -> NodeState {
    let n = chain.len() as isize;
    if (0..n).contains(&i) {
        chain[i as usize]
    } else {
        match boundary {
            Boundary::Fixed => NodeState::Resting,
            Boundary::Periodic => chain[i.rem_euclid(n) as usize],
        }
    }
}

/// The 4-tuple of neighbour states read by node `i` of `chain`.
pub fn neighborhood(
    config: &ChainPair,
    chain: Chain,
    i: usize,
    boundary: Boundary,
) -> Result<[NodeState; 4], ActinError> {
    let n = config.n();
    if i >= n {
        return Err(ActinError::IndexOutOfRange { index: i, n });
    }
    let i = i as isize;
    let (own, other, cross) = match chain {
        Chain::X => (&config.x, &config.y, [i - 1, i]),
        Chain::Y => (&config.y, &config.x, [i, i + 1]),
    };
    Ok([
        fetch(own, i - 1, boundary),
        fetch(own, i + 1, boundary),
        fetch(other, cross[0], boundary),
        fetch(other, cross[1], boundary),
    ])
}

/// Number of excited entries in a neighbourhood tuple.
pub fn sigma(neighbors: &[NodeState; 4]) -> u8 {
    neighbors.iter().filter(|s| s.is_excited()).count() as u8
}

#[inline]
fn transition(state: NodeState, fire: bool) -> NodeState {
    match state {
        NodeState::Excited => NodeState::Refractory,
        NodeState::Refractory => NodeState::Resting,
        NodeState::Resting if fire => NodeState::Excited,
        NodeState::Resting => NodeState::Resting,
    }
}

/// One synchronous update of all `2n` nodes.
pub fn step(config: &ChainPair, spec: RuleSpec) -> ChainPair {
    let mut next = config.clone();
    step_into(config, spec, &mut next);
    next
}

/// Writes the successor of `config` into `next`, reusing its buffers.
pub fn step_into(config: &ChainPair, spec: RuleSpec, next: &mut ChainPair) {
    let n = config.n();
    let ex: Vec<u8> = config.x.iter().map(|&s| s.is_excited() as u8).collect();
    let ey: Vec<u8> = config.y.iter().map(|&s| s.is_excited() as u8).collect();
    let px = spec.rule.predicate(Chain::X);
    let py = spec.rule.predicate(Chain::Y);

    next.x.resize(n, NodeState::Resting);
    next.y.resize(n, NodeState::Resting);

    // Interior nodes never read past either end.
    for i in 1..n - 1 {
        let sx = ex[i - 1] + ex[i + 1] + ey[i - 1] + ey[i];
        let sy = ey[i - 1] + ey[i + 1] + ex[i] + ex[i + 1];
        next.x[i] = transition(config.x[i], px.holds(sx));
        next.y[i] = transition(config.y[i], py.holds(sy));
    }

    let at = |v: &[u8], i: isize| -> u8 {
        let len = n as isize;
        if (0..len).contains(&i) {
            v[i as usize]
        } else {
            match spec.boundary {
                Boundary::Fixed => 0,
                Boundary::Periodic => v[i.rem_euclid(len) as usize],
            }
        }
    };
    for i in [0, n - 1] {
        let j = i as isize;
        let sx = at(&ex, j - 1) + at(&ex, j + 1) + at(&ey, j - 1) + at(&ey, j);
        next.x[i] = transition(config.x[i], px.holds(sx));
    }
    for i in [0, n - 1] {
        let j = i as isize;
        let sy = at(&ey, j - 1) + at(&ey, j + 1) + at(&ex, j) + at(&ex, j + 1);
        next.y[i] = transition(config.y[i], py.holds(sy));
    }
    next.t = config.t + 1;
}

pub const DEFAULT_P_EXCITED: f64 = 0.25;
pub const DEFAULT_P_REFRACTORY: f64 = 0.25;

/// Independent per-node draw: excited with `p_excited`, refractory with
/// `p_refractory`, otherwise resting. Chain `x` is drawn first, then `y`.
pub fn random_init(
    n: usize,
    p_excited: f64,
    p_refractory: f64,
    seed: u64,
) -> Result<ChainPair, ActinError> {
    let valid = |p: f64| p.is_finite() && (0.0..=1.0).contains(&p);
    if !valid(p_excited) || !valid(p_refractory) || p_excited + p_refractory > 1.0 {
        return Err(ActinError::InvalidProbabilities {
            p_excited,
            p_refractory,
        });
    }
    if n < 2 {
        return Err(ActinError::TooShort(n));
    }
    let mut rng = SimRng::new(seed);
    let mut draw = || {
        let u = rng.next_f64();
        if u < p_excited {
            NodeState::Excited
        } else if u < p_excited + p_refractory {
            NodeState::Refractory
        } else {
            NodeState::Resting
        }
    };
    let x = (0..n).map(|_| draw()).collect();
    let y = (0..n).map(|_| draw()).collect();
    ChainPair::new(x, y)
}

/// Row-per-step record of one chain. Row 0 is the initial configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceTimeDiagram {
    pub chain: Chain,
    width: usize,
    cells: Vec<NodeState>,
}

/// Grey levels used when rendering a diagram.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Palette {
    /// Excited black, refractory grey, resting white.
    #[default]
    Standard,
    /// Refractory drawn white as well.
    TwoTone,
}

impl Palette {
    pub fn grey(self, s: NodeState) -> u8 {
        match (self, s) {
            (_, NodeState::Excited) => 0,
            (Palette::Standard, NodeState::Refractory) => 128,
            _ => 255,
        }
    }
}

impl SpaceTimeDiagram {
    pub fn new(chain: Chain, width: usize) -> Self {
        Self {
            chain,
            width,
            cells: Vec::new(),
        }
    }

    /// Builds a diagram from pre-made rows (all of equal length).
    pub fn from_rows(chain: Chain, rows: &[Vec<NodeState>]) -> Self {
        let width = rows.first().map_or(0, Vec::len);
        let mut d = Self::new(chain, width);
        for r in rows {
            d.push_row(r);
        }
        d
    }

    pub fn push_row(&mut self, row: &[NodeState]) {
        assert_eq!(row.len(), self.width, "row width");
        self.cells.extend_from_slice(row);
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn steps(&self) -> usize {
        if self.width == 0 {
            0
        } else {
            self.cells.len() / self.width
        }
    }

    pub fn row(&self, k: usize) -> &[NodeState] {
        &self.cells[k * self.width..(k + 1) * self.width]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[NodeState]> {
        self.cells.chunks_exact(self.width.max(1))
    }

    pub fn render(&self, palette: Palette) -> GreyImage {
        GreyImage::new(
            self.width,
            self.steps(),
            self.cells.iter().map(|&s| palette.grey(s)).collect(),
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivitySeries {
    pub per_step_excited: Vec<usize>,
}

impl ActivitySeries {
    /// Mean excited count over rows `from..to` (clamped to the series).
    pub fn mean(&self, from: usize, to: usize) -> f64 {
        let to = to.min(self.per_step_excited.len());
        if from >= to {
            return 0.0;
        }
        let total: usize = self.per_step_excited[from..to].iter().sum();
        total as f64 / (to - from) as f64
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub x: SpaceTimeDiagram,
    pub y: SpaceTimeDiagram,
    pub activity_x: ActivitySeries,
    pub activity_y: ActivitySeries,
    pub last: ChainPair,
}

impl RunOutput {
    pub fn diagram(&self, chain: Chain) -> &SpaceTimeDiagram {
        match chain {
            Chain::X => &self.x,
            Chain::Y => &self.y,
        }
    }

    /// `step,excited_x,excited_y` with one line per recorded row.
    pub fn activity_csv(&self) -> String {
        let mut out = String::from("step,excited_x,excited_y\n");
        for (k, (ax, ay)) in self
            .activity_x
            .per_step_excited
            .iter()
            .zip(&self.activity_y.per_step_excited)
            .enumerate()
        {
            out.push_str(&format!("{k},{ax},{ay}\n"));
        }
        out
    }
}

/// Applies [`step`] `steps` times, recording `steps + 1` rows per chain.
pub fn run(initial: &ChainPair, spec: RuleSpec, steps: usize) -> RunOutput {
    let n = initial.n();
    let mut x = SpaceTimeDiagram::new(Chain::X, n);
    let mut y = SpaceTimeDiagram::new(Chain::Y, n);
    x.cells.reserve(n * (steps + 1));
    y.cells.reserve(n * (steps + 1));
    let mut ax = Vec::with_capacity(steps + 1);
    let mut ay = Vec::with_capacity(steps + 1);

    let mut current = initial.clone();
    let mut next = initial.clone();
    let mut record = |c: &ChainPair| {
        x.push_row(&c.x);
        y.push_row(&c.y);
        ax.push(c.excited(Chain::X));
        ay.push(c.excited(Chain::Y));
    };
    record(&current);
    for _ in 0..steps {
        step_into(&current, spec, &mut next);
        std::mem::swap(&mut current, &mut next);
        record(&current);
    }
    RunOutput {
        x,
        y,
        activity_x: ActivitySeries {
            per_step_excited: ax,
        },
        activity_y: ActivitySeries {
            per_step_excited: ay,
        },
        last: current,
    }
}

macro_rules! lowercase_parse {
    ($ty:ty, $($name:literal => $val:expr),+ $(,)?) => {
        impl FromStr for $ty {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s.to_ascii_lowercase().as_str() {
                    $($name => Ok($val),)+
                    other => Err(format!("unknown value {other:?}")),
                }
            }
        }
    };
}

lowercase_parse!(Rule, "c1" => Rule::C1, "c2" => Rule::C2, "c3" => Rule::C3);
lowercase_parse!(Boundary, "fixed" => Boundary::Fixed, "periodic" => Boundary::Periodic);
