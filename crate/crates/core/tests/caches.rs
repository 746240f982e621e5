use walkbound::oracle::{build_avoider_graph, count_walks, read_graph, write_graph, EdgeRule};
use walkbound::quotient::{
    build_quotient_a, build_quotient_c, read_quotient, write_quotient, Boundary,
};
use walkbound::spectral::{power_iteration, PowerOptions, SparseOperator};
use walkbound::{Exec, PatternSpec};

#[test]
fn graph_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (pattern, rule) in [
        ("1324", EdgeRule::VersionTwo),
        ("2134", EdgeRule::VersionOne),
    ] {
        let g = build_avoider_graph(
            Exec::Parallel,
            &PatternSpec::parse(pattern).unwrap(),
            7,
            rule,
        )
        .unwrap();
        let path = dir.path().join(format!("{pattern}.graph"));
        write_graph(&g, &path).unwrap();
        let back = read_graph(&path).unwrap();
        assert_eq!(back.vertices, g.vertices);
        assert_eq!(back.edge_rule, g.edge_rule);
        assert_eq!(
            count_walks(Exec::Parallel, &back, 25).unwrap(),
            count_walks(Exec::Parallel, &g, 25).unwrap()
        );
        let first = std::fs::read(&path).unwrap();
        write_graph(&back, &path).unwrap();
        assert_eq!(
            std::fs::read(&path).unwrap(),
            first,
            "{pattern}: cache is not byte-stable"
        );
    }
}

#[test]
fn quotient_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let quotients = [
        build_quotient_a(Exec::Parallel, 12, Boundary::Drop).unwrap(),
        build_quotient_c(Exec::Parallel, 8).unwrap(),
    ];
    for (i, q) in quotients.iter().enumerate() {
        let path = dir.path().join(format!("{i}.quot"));
        write_quotient(q, &path).unwrap();
        let back = read_quotient(&path).unwrap();
        assert_eq!(&back, q);
        let opts = PowerOptions::default();
        let a = power_iteration(&SparseOperator::from_quotient(q), &opts).unwrap();
        let b = power_iteration(&SparseOperator::from_quotient(&back), &opts).unwrap();
        assert_eq!(a.lambda, b.lambda);
    }
}
