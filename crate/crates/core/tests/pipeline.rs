use invbraid::coxeter::preset;
use invbraid::engine::{
    build_all_forests, build_forest, equivalent_over_hat, extract_relations, minimize,
    relevant_pairs, union_relations, EngineConfig,
};
use invbraid::involutions::{hat_relations, InvolutionTable};
use invbraid::json::{to_canonical_string, ForestJson};
use invbraid::parabolic::{find_bounded_embedding, is_parabolic_config, Catalog};
use invbraid::rewriting::RelationIndex;
use invbraid::TwistedSystem;

fn spanned_by_hat_and_minimal(sys: &TwistedSystem, bound: Option<usize>) {
    let cfg = EngineConfig::default();
    let forests = build_all_forests(sys, &cfg).unwrap();
    let rels = union_relations(sys, &forests);
    let table = InvolutionTable::new(sys, bound).unwrap();
    for r in &rels {
        let a = table.follow(&r.left);
        assert!(
            a.is_some(),
            "{}: {} is not reduced",
            sys.name(),
            r.display(sys)
        );
        assert_eq!(
            a,
            table.follow(&r.right),
            "{}: {} is not genuine",
            sys.name(),
            r.display(sys)
        );
    }
    let min = minimize(sys, &rels, 2).unwrap();
    let index = RelationIndex::new(hat_relations(sys).iter().chain(&min));
    for i in 0..table.len() {
        assert!(
            index.spans(&table.words(i)),
            "{}: element #{i} not spanned",
            sys.name()
        );
    }
}

#[test]
fn finite_types_are_spanned() {
    for (k, r) in [("A", 3), ("B", 3), ("H", 3), ("D", 4)] {
        spanned_by_hat_and_minimal(&preset(k, r, "id").unwrap(), None);
    }
    spanned_by_hat_and_minimal(&preset("A", 3, "reverse").unwrap(), None);
}

#[test]
fn affine_rank_two_is_spanned_up_to_bound() {
    for k in ["~A", "~C", "~G"] {
        spanned_by_hat_and_minimal(&preset(k, 2, "id").unwrap(), Some(10));
    }
}

#[test]
fn forest_json_is_deterministic() {
    let sys = preset("B", 3, "id").unwrap();
    let cfg = EngineConfig::default();
    let render = |s, t| {
        let f = build_forest(&sys, s, t, &cfg).unwrap();
        to_canonical_string(&ForestJson::new(&sys, &f, &extract_relations(&sys, &f))).unwrap()
    };
    for (s, t) in relevant_pairs(&sys) {
        assert_eq!(render(s, t), render(s, t));
    }
}

#[test]
fn a5_configuration_transports_into_a6() {
    let catalog = Catalog::builtin();
    let cfg = EngineConfig::default();
    let spec = catalog.config("A5").unwrap();
    let source = is_parabolic_config(&spec, &cfg).unwrap();
    assert!(source.is_parabolic());
    let target = preset("A", 6, "id").unwrap();
    let mut transported = 0;
    for (s2, t2) in relevant_pairs(&target) {
        let Some(phi) = find_bounded_embedding(&spec, &target, s2, t2) else {
            continue;
        };
        let mapped: Vec<_> = source
            .relations()
            .iter()
            .map(|r| phi.apply(&target, r))
            .collect();
        let forest = build_forest(&target, s2, t2, &cfg).unwrap();
        let native = extract_relations(&target, &forest);
        assert!(
            equivalent_over_hat(&target, &mapped, &native, 2).unwrap(),
            "pair ({},{}) does not match the transported relations",
            target.label(s2),
            target.label(t2)
        );
        transported += 1;
    }
    assert!(
        transported > 0,
        "no A6 pair admits a bounded embedding of A5"
    );
}
