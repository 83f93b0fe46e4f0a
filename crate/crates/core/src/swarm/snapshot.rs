use std::io;
use std::path::Path;

use super::SwarmWorld;
use crate::pgm::GreyImage;

pub const METRICS_HEADER: &str = "t,population,nodes_suppressed,field_mass";

#[derive(Clone, Debug, PartialEq)]
pub struct MetricsRow {
    pub t: u64,
    pub population: usize,
    pub nodes_suppressed: usize,
    pub field_mass: f64,
}

impl MetricsRow {
    pub fn of(world: &SwarmWorld) -> Self {
        Self {
            t: world.t,
            population: world.population(),
            nodes_suppressed: world.suppressed_count(),
            field_mass: world.field_mass(),
        }
    }

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{}",
            self.t, self.population, self.nodes_suppressed, self.field_mass
        )
    }
}

/// Occupied cells black on white.
pub fn agent_image(world: &SwarmWorld) -> GreyImage {
    let pixels = world
        .occupancy
        .iter()
        .map(|&o| if o > 0 { 0 } else { 255 })
        .collect();
    GreyImage::new(world.width, world.height, pixels)
}

/// `255 - 255·ln(1+v)/ln(1+max)`: white for zero, black at the maximum.
pub fn field_image(world: &SwarmWorld) -> GreyImage {
    let max = world.field.iter().fold(0.0f64, |m, &v| m.max(v));
    let denom = max.ln_1p();
    let pixels = world
        .field
        .iter()
        .map(|&v| {
            if denom > 0.0 {
                255 - (255.0 * v.ln_1p() / denom).round() as u8
            } else {
                255
            }
        })
        .collect();
    GreyImage::new(world.width, world.height, pixels)
}

/// Writes `agents_NNNNNN.pgm` and `field_NNNNNN.pgm` (numbered by `t`) into
/// `dir` and returns the metrics row for this frame.
pub fn snapshot(world: &SwarmWorld, dir: &Path) -> io::Result<MetricsRow> {
    std::fs::write(
        dir.join(format!("agents_{:06}.pgm", world.t)),
        agent_image(world).encode(),
    )?;
    std::fs::write(
        dir.join(format!("field_{:06}.pgm", world.t)),
        field_image(world).encode(),
    )?;
    Ok(MetricsRow::of(world))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::swarm::{init_world, Inoculation, NodeSpec, SwarmConfig, SwarmParams};

    fn world() -> SwarmWorld {
        let cfg = SwarmConfig {
            width: 8,
            height: 4,
            nodes: vec![NodeSpec {
                x: 2,
                y: 2,
                projection: 1.0,
            }],
            inoculation: Inoculation {
                node: 0,
                population: 3,
            },
            params: SwarmParams::default(),
        };
        init_world(&cfg, 0).unwrap()
    }

    #[test]
    fn zero_field_is_white() {
        let w = world();
        assert!(field_image(&w).pixels.iter().all(|&p| p == 255));
        assert_eq!(
            agent_image(&w).pixels.iter().filter(|&&p| p == 0).count(),
            3
        );
    }

    #[test]
    fn field_pixels_monotone() {
        let mut w = world();
        for (i, v) in w.field.iter_mut().enumerate() {
            *v = ((i * 7919) % 31) as f64 * 0.37;
        }
        let img = field_image(&w);
        for i in 0..w.field.len() {
            for j in 0..w.field.len() {
                if w.field[i] < w.field[j] {
                    assert!(img.pixels[i] >= img.pixels[j]);
                }
            }
        }
        let max_at = (0..w.field.len())
            .max_by(|&a, &b| w.field[a].total_cmp(&w.field[b]))
            .unwrap();
        assert_eq!(img.pixels[max_at], 0);
    }

    #[test]
    fn one_row_per_call() {
        let dir = tempfile::tempdir().unwrap();
        let mut w = world();
        let mut rows = Vec::new();
        for _ in 0..3 {
            rows.push(snapshot(&w, dir.path()).unwrap());
            crate::swarm::step_world(&mut w);
        }
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[2].t, 2);
        assert!(dir.path().join("field_000002.pgm").exists());
        let bytes = std::fs::read(dir.path().join("agents_000000.pgm")).unwrap();
        assert_eq!(GreyImage::decode(&bytes).unwrap(), agent_image(&world()));
    }
}
