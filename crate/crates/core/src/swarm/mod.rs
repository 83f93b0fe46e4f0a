//! Lattice multi-agent plasmodium.
//!
//! Agents carry a continuous position and a heading. Each step they sense
//! a shared chemoattractant field with three forward sensors, turn toward
//! the strongest reading, step forward if the destination cell has room
//! and deposit into the cell they land on. Stimulus nodes project into the
//! same field until the population covers a strict majority of the cells
//! around them, after which their projection is scaled by
//! `suppression_factor`.
//!
//! Cell `(x, y)` covers `[x, x+1) × [y, y+1)`; arrays are row-major with
//! index `y * width + x`. Headings are measured from `+x` toward `+y`.

mod network;
mod snapshot;

pub use network::{extract_network, NetworkReport, NetworkSource};
pub use snapshot::{agent_image, field_image, snapshot, MetricsRow, METRICS_HEADER};

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::SimRng;

#[derive(Debug, Error, PartialEq)]
pub enum SwarmError {
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Local crowding test for reproduction and removal. The window is the
/// `(2·radius+1)²` square around an agent's cell, not counting the cell
/// itself; the count is the number of occupied cells in it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GrowthParams {
    pub radius: usize,
    /// Spawn into a free Moore neighbour when the count is in `grow_min..=grow_max`.
    pub grow_min: usize,
    pub grow_max: usize,
    /// Remove the agent when the count is in `death_min..=death_max`.
    pub death_min: usize,
    pub death_max: usize,
    /// Per-agent, per-step chance of running the test at all.
    pub probability: f64,
}

impl Default for GrowthParams {
    fn default() -> Self {
        Self {
            radius: 1,
            grow_min: 1,
            grow_max: 8,
            death_min: 0,
            death_max: 0,
            probability: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SwarmParams {
    pub sensor_offset: f64,
    /// radians
    pub sensor_angle: f64,
    /// radians
    pub rotation_angle: f64,
    pub step_size: f64,
    pub deposit_amount: f64,
    pub diffusion_kernel_size: usize,
    pub decay_factor: f64,
    pub occupancy_limit: u16,
    pub growth: GrowthParams,
    pub engulf_radius: f64,
    pub suppression_factor: f64,
    /// Once suppressed, a node stays suppressed.
    pub permanent_suppression: bool,
}

impl Default for SwarmParams {
    fn default() -> Self {
        Self {
            sensor_offset: 9.0,
            sensor_angle: TAU / 8.0,
            rotation_angle: TAU / 8.0,
            step_size: 1.0,
            deposit_amount: 5.0,
            diffusion_kernel_size: 3,
            decay_factor: 0.9,
            occupancy_limit: 1,
            growth: GrowthParams::default(),
            engulf_radius: 3.0,
            suppression_factor: 0.0,
            permanent_suppression: false,
        }
    }
}

impl SwarmParams {
    pub fn validate(&self) -> Result<(), SwarmError> {
        let bad = |m: String| Err(SwarmError::Config(m));
        for (name, v) in [
            ("sensor_offset", self.sensor_offset),
            ("sensor_angle", self.sensor_angle),
            ("rotation_angle", self.rotation_angle),
            ("step_size", self.step_size),
            ("engulf_radius", self.engulf_radius),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.deposit_amount.is_finite() && self.deposit_amount >= 0.0) {
            return bad(format!(
                "deposit_amount must be >= 0, got {}",
                self.deposit_amount
            ));
        }
        if self.diffusion_kernel_size == 0 || self.diffusion_kernel_size % 2 == 0 {
            return bad(format!(
                "diffusion_kernel_size must be odd, got {}",
                self.diffusion_kernel_size
            ));
        }
        if !(self.decay_factor > 0.0 && self.decay_factor < 1.0) {
            return bad(format!(
                "decay_factor must lie in (0, 1), got {}",
                self.decay_factor
            ));
        }
        if self.occupancy_limit == 0 {
            return bad("occupancy_limit must be at least 1".into());
        }
        if !(0.0..1.0).contains(&self.suppression_factor) {
            return bad(format!(
                "suppression_factor must lie in [0, 1), got {}",
                self.suppression_factor
            ));
        }
        let g = &self.growth;
        if !(0.0..=1.0).contains(&g.probability) {
            return bad(format!(
                "growth.probability must lie in [0, 1], got {}",
                g.probability
            ));
        }
        if g.grow_min > g.grow_max || g.death_min > g.death_max {
            return bad("growth ranges must have min <= max".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    pub x: f64,
    pub y: f64,
    /// `[0, 2π)`
    pub heading: f64,
}

impl Agent {
    pub fn cell(&self) -> (usize, usize) {
        (self.x as usize, self.y as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub x: usize,
    pub y: usize,
    pub projection: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StimulusNode {
    pub x: usize,
    pub y: usize,
    pub projection_value: f64,
    pub suppressed: bool,
}

impl StimulusNode {
    pub fn effective_projection(&self, params: &SwarmParams) -> f64 {
        if self.suppressed {
            self.projection_value * params.suppression_factor
        } else {
            self.projection_value
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inoculation {
    pub node: usize,
    pub population: usize,
}

/// Everything needed to build a world, as read from a config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwarmConfig {
    pub width: usize,
    pub height: usize,
    pub nodes: Vec<NodeSpec>,
    pub inoculation: Inoculation,
    #[serde(default)]
    pub params: SwarmParams,
}

impl SwarmConfig {
    /// Five nodes in a loose vertical chain on a 200×200 lattice, inoculated
    /// at the bottom node (y = 180). Fast decay keeps the field near its
    /// equilibrium so that engulfing a node visibly lowers the total mass;
    /// the wide kernel lets each plume reach the next node.
    pub fn chain_layout() -> Self {
        Self {
            width: 200,
            height: 200,
            nodes: [(100, 180), (90, 140), (110, 100), (95, 60), (105, 20)]
                .into_iter()
                .map(|(x, y)| NodeSpec {
                    x,
                    y,
                    projection: 1000.0,
                })
                .collect(),
            inoculation: Inoculation {
                node: 0,
                population: 3,
            },
            params: SwarmParams {
                decay_factor: 0.95,
                diffusion_kernel_size: 7,
                deposit_amount: 1.0,
                engulf_radius: 6.0,
                // the window holds at most 8 other cells, so nothing dies
                growth: GrowthParams {
                    radius: 1,
                    grow_min: 1,
                    grow_max: 3,
                    death_min: 9,
                    death_max: 9,
                    probability: 0.15,
                },
                ..SwarmParams::default()
            },
        }
    }
}

/// Cells whose centres lie within `radius` of the centre of `(cx, cy)`.
pub(crate) fn disc_cells(
    width: usize,
    height: usize,
    cx: usize,
    cy: usize,
    radius: f64,
) -> Vec<usize> {
    let r = radius.floor() as i64;
    let r2 = radius * radius;
    let mut out = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            let (x, y) = (cx as i64 + dx, cy as i64 + dy);
            if x < 0 || y < 0 || x >= width as i64 || y >= height as i64 {
                continue;
            }
            if ((dx * dx + dy * dy) as f64) <= r2 {
                out.push(y as usize * width + x as usize);
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct SwarmWorld {
    pub width: usize,
    pub height: usize,
    pub field: Vec<f64>,
    pub occupancy: Vec<u16>,
    pub agents: Vec<Agent>,
    pub nodes: Vec<StimulusNode>,
    pub params: SwarmParams,
    pub rng: SimRng,
    pub t: u64,
    node_discs: Vec<Vec<usize>>,
    scratch: Vec<f64>,
}

impl PartialEq for SwarmWorld {
    fn eq(&self, other: &Self) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.t == other.t
            && self
                .field
                .iter()
                .map(|v| v.to_bits())
                .eq(other.field.iter().map(|v| v.to_bits()))
            && self.occupancy == other.occupancy
            && self.agents == other.agents
            && self.nodes == other.nodes
    }
}

impl SwarmWorld {
    #[inline]
    pub fn idx(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    pub fn population(&self) -> usize {
        self.agents.len()
    }

    pub fn field_mass(&self) -> f64 {
        self.field.iter().sum()
    }

    pub fn suppressed_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.suppressed).count()
    }

    /// Lattice cells within `engulf_radius` of node `i`.
    pub fn node_disc(&self, i: usize) -> &[usize] {
        &self.node_discs[i]
    }

    fn occupied_in_disc(&self, i: usize) -> usize {
        self.node_discs[i]
            .iter()
            .filter(|&&c| self.occupancy[c] > 0)
            .count()
    }

    /// Field value at the cell containing `(x, y)`, clamped to the lattice.
    pub fn sample(&self, x: f64, y: f64) -> f64 {
        let cx = (x.floor().max(0.0) as usize).min(self.width - 1);
        let cy = (y.floor().max(0.0) as usize).min(self.height - 1);
        self.field[cy * self.width + cx]
    }
}

pub fn init_world(config: &SwarmConfig, seed: u64) -> Result<SwarmWorld, SwarmError> {
    let SwarmConfig {
        width,
        height,
        nodes,
        inoculation,
        params,
    } = config;
    let (width, height) = (*width, *height);
    params.validate()?;
    if width == 0 || height == 0 {
        return Err(SwarmError::Config(
            "lattice dimensions must be positive".into(),
        ));
    }
    if nodes.is_empty() {
        return Err(SwarmError::Config(
            "at least one stimulus node is required".into(),
        ));
    }
    for (i, n) in nodes.iter().enumerate() {
        if n.x >= width || n.y >= height {
            return Err(SwarmError::Config(format!(
                "node {i} at ({}, {}) lies outside the {width}x{height} lattice",
                n.x, n.y
            )));
        }
        if !(n.projection.is_finite() && n.projection >= 0.0) {
            return Err(SwarmError::Config(format!(
                "node {i} has a bad projection value"
            )));
        }
    }
    let Some(home) = nodes.get(inoculation.node) else {
        return Err(SwarmError::Config(format!(
            "inoculation node {} does not exist",
            inoculation.node
        )));
    };
    let node_discs: Vec<Vec<usize>> = nodes
        .iter()
        .map(|n| disc_cells(width, height, n.x, n.y, params.engulf_radius))
        .collect();
    let mut slots: Vec<usize> = Vec::new();
    for &c in &node_discs[inoculation.node] {
        slots.extend(std::iter::repeat_n(c, params.occupancy_limit as usize));
    }
    if inoculation.population > slots.len() {
        return Err(SwarmError::Config(format!(
            "inoculation of {} agents overfills the {} places around node {} at ({}, {})",
            inoculation.population,
            slots.len(),
            inoculation.node,
            home.x,
            home.y
        )));
    }

    let mut rng = SimRng::new(seed);
    rng.shuffle(&mut slots);
    let mut occupancy = vec![0u16; width * height];
    let mut agents = Vec::with_capacity(inoculation.population);
    for &c in &slots[..inoculation.population] {
        occupancy[c] += 1;
        agents.push(Agent {
            x: (c % width) as f64 + 0.5,
            y: (c / width) as f64 + 0.5,
            heading: rng.angle(),
        });
    }
    Ok(SwarmWorld {
        width,
        height,
        field: vec![0.0; width * height],
        occupancy,
        agents,
        nodes: nodes
            .iter()
            .map(|n| StimulusNode {
                x: n.x,
                y: n.y,
                projection_value: n.projection,
                suppressed: false,
            })
            .collect(),
        params: params.clone(),
        rng,
        t: 0,
        node_discs,
        scratch: vec![0.0; width * height],
    })
}

fn normalize(h: f64) -> f64 {
    let r = h.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Heading after one sensing step. Sensors sit `sensor_offset` ahead at
/// `h - sensor_angle` (left), `h` (front) and `h + sensor_angle` (right).
/// The agent turns toward the largest reading; equal maxima are resolved by
/// a uniform draw among them.
pub fn sense_and_orient(
    agent: &Agent,
    world: &SwarmWorld,
    params: &SwarmParams,
    rng: &mut SimRng,
) -> f64 {
    let h = agent.heading;
    let probe = |a: f64| {
        world.sample(
            agent.x + params.sensor_offset * a.cos(),
            agent.y + params.sensor_offset * a.sin(),
        )
    };
    let readings = [
        probe(h - params.sensor_angle),
        probe(h),
        probe(h + params.sensor_angle),
    ];
    let best = readings[0].max(readings[1]).max(readings[2]);
    let tied: Vec<usize> = (0..3).filter(|&i| readings[i] == best).collect();
    let pick = if tied.len() == 1 {
        tied[0]
    } else {
        tied[rng.index(tied.len())]
    };
    match pick {
        0 => normalize(h - params.rotation_angle),
        2 => normalize(h + params.rotation_angle),
        _ => h,
    }
}

/// Advances agent `i` by `step_size` if the destination lies on the lattice
/// and its cell has room; the agent then deposits into that cell. Otherwise
/// it stays, deposits nothing and draws a fresh heading. Returns whether it
/// moved.
pub fn move_and_deposit(world: &mut SwarmWorld, i: usize, rng: &mut SimRng) -> bool {
    let a = world.agents[i];
    let step = world.params.step_size;
    let (nx, ny) = (a.x + step * a.heading.cos(), a.y + step * a.heading.sin());
    let inside = nx >= 0.0 && ny >= 0.0 && nx < world.width as f64 && ny < world.height as f64;
    let from = world.idx(a.x as usize, a.y as usize);
    let to = if inside {
        Some(world.idx(nx as usize, ny as usize))
    } else {
        None
    };
    match to {
        Some(to) if to == from || world.occupancy[to] < world.params.occupancy_limit => {
            world.occupancy[from] -= 1;
            world.occupancy[to] += 1;
            world.field[to] += world.params.deposit_amount;
            world.agents[i].x = nx;
            world.agents[i].y = ny;
            true
        }
        _ => {
            world.agents[i].heading = rng.angle();
            false
        }
    }
}

/// Replaces every cell by the sum over its `k×k` neighbourhood divided by
/// `k²`, then scales by `decay_factor`. Cells beyond the border count as
/// zero, so mass leaks out at the edges and never grows.
pub fn diffuse_and_decay(world: &mut SwarmWorld) {
    let (w, h) = (world.width, world.height);
    let r = world.params.diffusion_kernel_size / 2;
    let scale = world.params.decay_factor;
    let k2 = (world.params.diffusion_kernel_size * world.params.diffusion_kernel_size) as f64;
    let field = &mut world.field;
    let tmp = &mut world.scratch;
    for y in 0..h {
        let row = &field[y * w..(y + 1) * w];
        for x in 0..w {
            let lo = x.saturating_sub(r);
            let hi = (x + r).min(w - 1);
            let mut s = 0.0;
            for v in &row[lo..=hi] {
                s += v;
            }
            tmp[y * w + x] = s;
        }
    }
    for y in 0..h {
        let lo = y.saturating_sub(r);
        let hi = (y + r).min(h - 1);
        for x in 0..w {
            let mut s = 0.0;
            for yy in lo..=hi {
                s += tmp[yy * w + x];
            }
            field[y * w + x] = s / k2 * scale;
        }
    }
}

/// Re-evaluates suppression for every node, then adds each node's
/// effective projection to its cell. A node is suppressed while occupied
/// cells are a strict majority of its disc.
pub fn project_and_suppress(world: &mut SwarmWorld) {
    for i in 0..world.nodes.len() {
        let engulfed = 2 * world.occupied_in_disc(i) > world.node_discs[i].len();
        let node = &mut world.nodes[i];
        node.suppressed = engulfed || (world.params.permanent_suppression && node.suppressed);
        let c = node.y * world.width + node.x;
        world.field[c] += world.nodes[i].effective_projection(&world.params);
    }
}

fn occupied_in_window(world: &SwarmWorld, cx: usize, cy: usize, r: usize) -> usize {
    let mut n = 0;
    for y in cy.saturating_sub(r)..=(cy + r).min(world.height - 1) {
        for x in cx.saturating_sub(r)..=(cx + r).min(world.width - 1) {
            if (x, y) != (cx, cy) && world.occupancy[y * world.width + x] > 0 {
                n += 1;
            }
        }
    }
    n
}

/// Runs the crowding test on each agent present at the start of the pass,
/// in index order. Removal is checked before reproduction; newborns land at
/// the centre of a uniformly chosen free Moore neighbour and are not tested
/// until the next pass.
pub fn reproduce_and_die(world: &mut SwarmWorld) {
    let g = world.params.growth.clone();
    if g.probability <= 0.0 || world.agents.is_empty() {
        return;
    }
    let n = world.agents.len();
    let mut dead = vec![false; n];
    let mut born = Vec::new();
    for (i, is_dead) in dead.iter_mut().enumerate() {
        if !world.rng.chance(g.probability) {
            continue;
        }
        let (cx, cy) = world.agents[i].cell();
        let count = occupied_in_window(world, cx, cy, g.radius);
        if (g.death_min..=g.death_max).contains(&count) {
            *is_dead = true;
            let c = world.idx(cx, cy);
            world.occupancy[c] -= 1;
            continue;
        }
        if !(g.grow_min..=g.grow_max).contains(&count) {
            continue;
        }
        let mut free = Vec::with_capacity(8);
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                let (x, y) = (cx as i64 + dx, cy as i64 + dy);
                if (dx, dy) == (0, 0) || x < 0 || y < 0 {
                    continue;
                }
                let (x, y) = (x as usize, y as usize);
                if x < world.width
                    && y < world.height
                    && world.occupancy[world.idx(x, y)] < world.params.occupancy_limit
                {
                    free.push((x, y));
                }
            }
        }
        if free.is_empty() {
            continue;
        }
        let (x, y) = free[world.rng.index(free.len())];
        let c = world.idx(x, y);
        world.occupancy[c] += 1;
        born.push(Agent {
            x: x as f64 + 0.5,
            y: y as f64 + 0.5,
            heading: world.rng.angle(),
        });
    }
    let mut k = 0;
    world.agents.retain(|_| {
        k += 1;
        !dead[k - 1]
    });
    world.agents.extend(born);
}

/// One full cycle: projection and suppression, agents in shuffled order
/// (sense, then move), diffusion and decay, growth and death.
pub fn step_world(world: &mut SwarmWorld) {
    project_and_suppress(world);
    let mut order: Vec<usize> = (0..world.agents.len()).collect();
    world.rng.shuffle(&mut order);
    let params = world.params.clone();
    let mut rng = std::mem::replace(&mut world.rng, SimRng::new(0));
    for i in order {
        world.agents[i].heading = sense_and_orient(&world.agents[i], world, &params, &mut rng);
        move_and_deposit(world, i, &mut rng);
    }
    world.rng = rng;
    diffuse_and_decay(world);
    reproduce_and_die(world);
    world.t += 1;
}
