//! Round trips through the re-exported API surface.

use cutforge_core::io::{format_edge_list, format_update_script, parse_edge_list, parse_update_script, UpdateScript};
use cutforge_core::streaming::stream_from_graph;
use cutforge_core::{
    apmc_pipeline, brute_force_apmc, build_gomory_hu, fixtures, two_pass_apmc, DynamicEngine, EdgeUpdate, Multigraph, StreamConfig,
    UpdateKind,
};

fn sample_graph() -> Multigraph {
    let a = fixtures::k(5);
    let b = fixtures::cycle(4);
    let mut g = fixtures::disjoint_union(&a, &b).to_builder();
    g.add_edges(0, 5, 2).unwrap();
    g.add_edge(4, 7).unwrap();
    g.build()
}

#[test]
fn edge_list_and_json_round_trip() {
    let g = sample_graph();
    assert_eq!(parse_edge_list(&format_edge_list(&g)).unwrap(), g);
    let json = serde_json::to_string(&g).unwrap();
    let back: Multigraph = serde_json::from_str(&json).unwrap();
    assert_eq!(back, g);
}

#[test]
fn update_script_round_trip() {
    let script = UpdateScript {
        n: Some(4),
        updates: vec![
            EdgeUpdate { kind: UpdateKind::Insert, u: 0, v: 1 },
            EdgeUpdate { kind: UpdateKind::Insert, u: 2, v: 3 },
            EdgeUpdate { kind: UpdateKind::Delete, u: 0, v: 1 },
        ],
    };
    let back = parse_update_script(&format_update_script(&script)).unwrap();
    assert_eq!(back.n, script.n);
    assert_eq!(back.updates, script.updates);
}

#[test]
fn all_entry_points_agree_with_brute_force() {
    let g = sample_graph();
    let truth = brute_force_apmc(&g).unwrap();
    assert_eq!(build_gomory_hu(&g).lambda_table(), truth);
    assert_eq!(apmc_pipeline(&g).unwrap().lambda_table(), truth);

    let stream = stream_from_graph(&g, 6, 3);
    let out = two_pass_apmc(g.n(), &stream, &StreamConfig::default()).unwrap();
    assert_eq!(out.tree.lambda_table(), truth);

    let mut engine = DynamicEngine::new(g.n()).unwrap();
    engine.process_all(&stream).unwrap();
    assert_eq!(engine.graph(), g);
    assert_eq!(engine.lambda_table(), truth);
}
