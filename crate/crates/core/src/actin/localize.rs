//! Detection of travelling localizations (gliders), stationary oscillators
//! and generators (guns) in a space-time diagram.
//!
//! Each row is cut into *objects*: maximal runs of non-resting cells, where
//! runs separated by fewer than `gap` resting cells are merged. An object
//! seen at row `k` and position `a` is a localization with period `p` and
//! displacement `d` when, for every `m` in `1..=window / p`, row `k + m*p`
//! holds an object with identical cells starting at `a + m*d`. The smallest
//! such period wins; for that period the smallest `|d|` (negative first).
//! Consecutive sightings of the same localization are merged into one
//! record.
//!
//! A generator is a site that launches at least `min_emissions` identical
//! mobile localizations from the same origin at a constant interval.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ActinError, NodeState, SpaceTimeDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectorConfig {
    /// Rows over which a pattern must keep recurring.
    pub window: usize,
    pub max_width: usize,
    pub max_period: usize,
    /// Minimum number of resting cells separating two objects.
    pub gap: usize,
    pub min_emissions: usize,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            window: 24,
            max_width: 32,
            max_period: 64,
            gap: 1,
            min_emissions: 3,
        }
    }
}

impl DetectorConfig {
    pub fn with_window(window: usize) -> Self {
        Self {
            window,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocalizationKind {
    Mobile,
    Stationary,
    Generator,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Localization {
    pub kind: LocalizationKind,
    /// Rows per recurrence (for generators: rows between emissions).
    pub period: usize,
    /// Cells moved per period; 0 for stationary objects and generators.
    pub displacement: i64,
    pub first_seen_step: usize,
    /// Leftmost cell of the pattern when first seen (emission origin for
    /// generators).
    pub position: usize,
    pub width: usize,
    /// Sightings merged into this record.
    pub sightings: usize,
}

#[derive(Clone, Copy, Debug)]
struct Object {
    start: usize,
    end: usize,
}

fn objects(row: &[NodeState], gap: usize, max_width: usize) -> Vec<Object> {
    let mut out: Vec<Object> = Vec::new();
    let mut i = 0;
    let gap = gap.max(1);
    while i < row.len() {
        if row[i] == NodeState::Resting {
            i += 1;
            continue;
        }
        let start = i;
        let mut end = i + 1;
        let mut j = end;
        while j < row.len() {
            if row[j] != NodeState::Resting {
                end = j + 1;
                j += 1;
            } else if j - end + 1 >= gap {
                break;
            } else {
                j += 1;
            }
        }
        out.push(Object { start, end });
        i = end.max(j);
    }
    out.retain(|o| {
        o.end - o.start <= max_width && row[o.start..o.end].contains(&NodeState::Excited)
    });
    out
}

struct Rows<'a> {
    diagram: &'a SpaceTimeDiagram,
    objects: Vec<Vec<Object>>,
}

impl Rows<'_> {
    /// True when row `k` holds an object at exactly `start` with `cells`.
    fn has_object(&self, k: usize, start: i64, cells: &[NodeState]) -> bool {
        if start < 0 {
            return false;
        }
        let start = start as usize;
        let objs = &self.objects[k];
        match objs.binary_search_by_key(&start, |o| o.start) {
            Ok(idx) => {
                let o = objs[idx];
                o.end - o.start == cells.len() && &self.diagram.row(k)[o.start..o.end] == cells
            }
            Err(_) => false,
        }
    }
}

struct Track {
    period: usize,
    displacement: i64,
    last_row: usize,
    last_start: usize,
    last_end: usize,
    record: usize,
}

/// Scans the whole diagram for localizations and generators.
pub fn detect_localizations(
    diagram: &SpaceTimeDiagram,
    config: &DetectorConfig,
) -> Result<Vec<Localization>, ActinError> {
    let rows = diagram.steps();
    if config.window < 2 {
        return Err(ActinError::WindowTooSmall);
    }
    if rows < 2 * config.window {
        return Err(ActinError::WindowTooLarge {
            window: config.window,
            needed: 2 * config.window,
            rows,
        });
    }
    let table = Rows {
        diagram,
        objects: diagram
            .rows()
            .map(|r| objects(r, config.gap, config.max_width))
            .collect(),
    };
    let max_period = config.max_period.min(config.window / 2);

    let mut records: Vec<Localization> = Vec::new();
    // Exact pattern identity of the first sighting of each mobile record.
    let mut signatures: Vec<Vec<NodeState>> = Vec::new();
    let mut tracks: Vec<Track> = Vec::new();

    for k in 0..rows {
        tracks.retain(|t| k - t.last_row <= t.period);
        for obj in &table.objects[k] {
            let cells = &diagram.row(k)[obj.start..obj.end];
            let Some((period, displacement)) =
                find_motion(&table, k, obj, cells, max_period, config.window)
            else {
                continue;
            };
            let width = obj.end - obj.start;
            let slack = period + config.gap;
            let continuing = tracks.iter_mut().find(|t| {
                t.period == period
                    && t.displacement == displacement
                    && obj.start < t.last_end + slack
                    && t.last_start < obj.end + slack
            });
            match continuing {
                Some(t) => {
                    t.last_row = k;
                    t.last_start = obj.start;
                    t.last_end = obj.end;
                    records[t.record].sightings += 1;
                }
                None => {
                    tracks.push(Track {
                        period,
                        displacement,
                        last_row: k,
                        last_start: obj.start,
                        last_end: obj.end,
                        record: records.len(),
                    });
                    records.push(Localization {
                        kind: if displacement == 0 {
                            LocalizationKind::Stationary
                        } else {
                            LocalizationKind::Mobile
                        },
                        period,
                        displacement,
                        first_seen_step: k,
                        position: obj.start,
                        width,
                        sightings: 1,
                    });
                    signatures.push(cells.to_vec());
                }
            }
        }
    }

    let generators = find_generators(&records, &signatures, config.min_emissions);
    records.extend(generators);
    Ok(records)
}

fn find_motion(
    table: &Rows<'_>,
    k: usize,
    obj: &Object,
    cells: &[NodeState],
    max_period: usize,
    window: usize,
) -> Option<(usize, i64)> {
    let rows = table.objects.len();
    for p in 1..=max_period {
        let repeats = window / p;
        if repeats < 2 || k + repeats * p >= rows {
            continue;
        }
        let pi = p as i64;
        // candidate displacements, smallest |d| first, negative before positive
        let mut candidates = Vec::with_capacity(2 * p + 1);
        candidates.push(0i64);
        for d in 1..=pi {
            candidates.push(-d);
            candidates.push(d);
        }
        for d in candidates {
            let a = obj.start as i64;
            if (1..=repeats).all(|m| table.has_object(k + m * p, a + m as i64 * d, cells)) {
                return Some((p, d));
            }
        }
    }
    None
}

fn find_generators(
    records: &[Localization],
    signatures: &[Vec<NodeState>],
    min_emissions: usize,
) -> Vec<Localization> {
    // Emissions are mobile records with identical motion, pattern and origin.
    let mut groups: BTreeMap<(usize, i64, usize, &[NodeState]), Vec<usize>> = BTreeMap::new();
    for (rec, sig) in records.iter().zip(signatures) {
        if rec.kind == LocalizationKind::Mobile {
            groups
                .entry((rec.period, rec.displacement, rec.position, sig.as_slice()))
                .or_default()
                .push(rec.first_seen_step);
        }
    }
    let mut out = Vec::new();
    for ((_, _, position, sig), starts) in groups {
        let min_emissions = min_emissions.max(2);
        if starts.len() < min_emissions {
            continue;
        }
        // longest run of equally spaced launches
        let mut best: Option<(usize, usize, usize)> = None; // (count, first, interval)
        let mut i = 0;
        while i + 1 < starts.len() {
            let interval = starts[i + 1] - starts[i];
            let mut j = i + 1;
            while j + 1 < starts.len() && starts[j + 1] - starts[j] == interval {
                j += 1;
            }
            let count = j - i + 1;
            if interval > 0 && best.is_none_or(|(c, _, _)| count > c) {
                best = Some((count, starts[i], interval));
            }
            i = j;
        }
        if let Some((count, first, interval)) = best {
            if count >= min_emissions {
                out.push(Localization {
                    kind: LocalizationKind::Generator,
                    period: interval,
                    displacement: 0,
                    first_seen_step: first,
                    position,
                    width: sig.len(),
                    sightings: count,
                });
            }
        }
    }
    out.sort_by_key(|g| (g.first_seen_step, g.position));
    out
}
