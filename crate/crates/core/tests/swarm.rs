mod oracles;

use proptest::prelude::*;
use slimebench_core::rng::SimRng;
use slimebench_core::swarm::{
    diffuse_and_decay, extract_network, init_world, step_world, GrowthParams, Inoculation,
    NetworkSource, NodeSpec, SwarmConfig, SwarmParams, SwarmWorld,
};

fn config(
    w: usize,
    h: usize,
    nodes: &[(usize, usize)],
    pop: usize,
    params: SwarmParams,
) -> SwarmConfig {
    SwarmConfig {
        width: w,
        height: h,
        nodes: nodes
            .iter()
            .map(|&(x, y)| NodeSpec {
                x,
                y,
                projection: 50.0,
            })
            .collect(),
        inoculation: Inoculation {
            node: 0,
            population: pop,
        },
        params,
    }
}

fn occupancy_matches_agents(w: &SwarmWorld) -> bool {
    let mut count = vec![0u16; w.width * w.height];
    for a in &w.agents {
        let (x, y) = a.cell();
        count[w.idx(x, y)] += 1;
    }
    count == w.occupancy && count.iter().all(|&c| c <= w.params.occupancy_limit)
}

#[test]
fn lone_source_settles_into_the_oracle_plume() {
    for (k, decay) in [(3, 0.9), (5, 0.8), (7, 0.95)] {
        let params = SwarmParams {
            diffusion_kernel_size: k,
            decay_factor: decay,
            ..SwarmParams::default()
        };
        let cfg = config(30, 24, &[(7, 15)], 0, params);
        let mut w = init_world(&cfg, 1).unwrap();
        for _ in 0..1500 {
            step_world(&mut w);
        }
        let want = oracles::plume(30, 24, (7, 15), 50.0, k, decay);
        for (got, want) in w.field.iter().zip(&want) {
            assert!(
                (got - want).abs() <= 1e-9 * want.max(1e-3),
                "k={k}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn diffusion_matches_the_cell_by_cell_kernel() {
    let mut rng = SimRng::new(2);
    for k in [1, 3, 5, 9] {
        let params = SwarmParams {
            diffusion_kernel_size: k,
            decay_factor: 0.7,
            ..SwarmParams::default()
        };
        let mut w = init_world(&config(13, 11, &[(3, 3)], 0, params), 0).unwrap();
        for v in w.field.iter_mut() {
            *v = rng.next_f64() * 10.0;
        }
        let want = oracles::diffuse(&w.field, 13, 11, k, 0.7);
        diffuse_and_decay(&mut w);
        for (a, b) in w.field.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn isolated_agent_lifetime_is_geometric() {
    let p = 0.1;
    let params = SwarmParams {
        growth: GrowthParams {
            radius: 1,
            grow_min: 1,
            grow_max: 8,
            death_min: 0,
            death_max: 0,
            probability: p,
        },
        ..SwarmParams::default()
    };
    let cfg = config(21, 21, &[(10, 10)], 1, params);
    let runs = 2000;
    let mut total = 0.0;
    for seed in 0..runs {
        let mut w = init_world(&cfg, seed).unwrap();
        while w.population() > 0 {
            step_world(&mut w);
        }
        total += w.t as f64;
    }
    let mean = total / runs as f64;
    let se = (1.0 - p).sqrt() / p / (runs as f64).sqrt();
    assert!((mean - 1.0 / p).abs() < 4.0 * se, "mean lifetime {mean}");
}

#[test]
fn chain_layout_is_valid() {
    let cfg = SwarmConfig::chain_layout();
    assert_eq!(cfg.nodes.len(), 5);
    let w = init_world(&cfg, 0).unwrap();
    assert_eq!(w.population(), cfg.inoculation.population);
    // bottom node first, then upward
    assert!(cfg.nodes.windows(2).all(|p| p[0].y > p[1].y));
}

fn params_strategy() -> impl Strategy<Value = (SwarmParams, u64)> {
    (1u16..3, 0usize..3, 0.0f64..0.5, 0usize..3, any::<u64>()).prop_map(
        |(limit, k, p, death, seed)| {
            (
                SwarmParams {
                    occupancy_limit: limit,
                    diffusion_kernel_size: 2 * k + 1,
                    growth: GrowthParams {
                        radius: 1,
                        grow_min: 1,
                        grow_max: 5,
                        death_min: 6 + death,
                        death_max: 8,
                        probability: p,
                    },
                    ..SwarmParams::default()
                },
                seed,
            )
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn occupancy_never_exceeds_the_limit((params, seed) in params_strategy()) {
        let cfg = config(24, 20, &[(5, 5), (18, 14)], 6, params);
        let mut w = init_world(&cfg, seed).unwrap();
        for _ in 0..150 {
            step_world(&mut w);
            prop_assert!(occupancy_matches_agents(&w));
            prop_assert!(w.population() <= 24 * 20 * w.params.occupancy_limit as usize);
        }
    }

    #[test]
    fn field_mass_only_shrinks_in_diffusion((params, seed) in params_strategy()) {
        let cfg = config(24, 20, &[(0, 0), (23, 19)], 6, params);
        let mut w = init_world(&cfg, seed).unwrap();
        for _ in 0..60 {
            step_world(&mut w);
            let before = w.field_mass();
            let mut copy = w.clone();
            diffuse_and_decay(&mut copy);
            prop_assert!(copy.field_mass() <= w.params.decay_factor * before * (1.0 + 1e-12));
        }
    }

    #[test]
    fn network_components_match_flood_fill((params, seed) in params_strategy()) {
        let cfg = config(30, 30, &[(8, 8), (22, 20)], 10, params);
        let mut w = init_world(&cfg, seed).unwrap();
        for _ in 0..80 {
            step_world(&mut w);
        }
        let report = extract_network(&w, 1.0, NetworkSource::Occupancy);
        let mask: Vec<bool> = w.occupancy.iter().map(|&o| o >= 1).collect();
        prop_assert_eq!(report.components, oracles::components(&mask, 30, 30));
        let trail = extract_network(&w, 2.0, NetworkSource::Trail);
        let mask: Vec<bool> = w.field.iter().map(|&v| v >= 2.0).collect();
        prop_assert_eq!(trail.components, oracles::components(&mask, 30, 30));
    }

    #[test]
    fn same_seed_same_world((params, seed) in params_strategy()) {
        let cfg = config(20, 20, &[(4, 4), (15, 15)], 5, params);
        let mut a = init_world(&cfg, seed).unwrap();
        let mut b = init_world(&cfg, seed).unwrap();
        for _ in 0..40 {
            step_world(&mut a);
            step_world(&mut b);
        }
        prop_assert!(a == b);
    }
}
