mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use imog_core::fp::*;
use imog_core::*;
use proptest::prelude::*;

fn tree_valid_sets(tree: &BasicFeatureTree) -> Vec<BTreeSet<String>> {
    let ids: Vec<&str> = tree.nodes.iter().map(|n| n.id.as_str()).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << ids.len()) {
        let cfg = Configuration::of((0..ids.len()).filter(|i| mask >> i & 1 == 1).map(|i| ids[i]));
        if is_valid_configuration(tree, &cfg).unwrap().is_valid() {
            out.push(cfg.selected.iter().map(|s| s.as_str().to_string()).collect());
        }
    }
    out.sort();
    out
}

fn all(tree: &BasicFeatureTree) -> Vec<Configuration> {
    enumerate_configurations(tree, &EnumerationCap::default()).unwrap().configurations
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_models_are_valid(g in genes(12)) {
        let m = build(&g);
        let errors: Vec<_> = validate_model(&m).into_iter().filter(|d| d.is_error()).collect();
        prop_assert!(errors.is_empty(), "{errors:?}");
    }

    #[test]
    fn enumeration_matches_powerset_oracle(g in genes(12), groups: bool) {
        let m = build(&g);
        let tree = normalize(&m, groups);
        let configs = all(&tree);
        prop_assert_eq!(as_sets(&configs), oracle_configurations(&m, groups));
        let count = count_configurations(&tree, &EnumerationCap::default()).unwrap();
        prop_assert_eq!(count.count as usize, configs.len());
        prop_assert_eq!(is_void(&tree), configs.is_empty());
    }

    #[test]
    fn normalize_preserves_configuration_set(g in genes(12), groups: bool) {
        let m = build(&g);
        let tree = normalize(&m, groups);
        prop_assert_eq!(tree_valid_sets(&tree), oracle_configurations(&m, groups));
    }

    #[test]
    fn enumeration_order_is_strictly_ascending(g in genes(12)) {
        let tree = normalize(&build(&g), false);
        let sets: Vec<_> = all(&tree).iter().map(|c| tree.block_set(c).unwrap()).collect();
        prop_assert!(sets.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn enabled_group_is_all_or_none(g in genes(12)) {
        let m = build(&g);
        let Some(group) = m.functional.groups.first().filter(|g| g.enabled) else { return Ok(()) };
        let without = as_sets(&all(&normalize(&m, false)));
        let expected: Vec<_> = without
            .into_iter()
            .filter(|c| {
                let n = group.members.iter().filter(|x| c.contains(x.as_str())).count();
                n == 0 || n == group.members.len()
            })
            .collect();
        prop_assert_eq!(as_sets(&all(&normalize(&m, true))), expected);
    }

    #[test]
    fn grafted_derivation_matches_oracle(g in genes(8), at: u8) {
        let m = with_derivation(build(&g), at);
        prop_assert!(validate_model(&m).iter().all(|d| !d.is_error()));
        let tree = normalize(&m, false);
        prop_assert_eq!(as_sets(&all(&tree)), oracle_configurations(&m, false));
    }

    #[test]
    fn derivation_is_sound(g in genes(8), at: u8) {
        let m = with_derivation(build(&g), at);
        let tree = normalize(&m, false);
        let vps: BTreeMap<&str, &FpRelation> = m.functional.relations.iter()
            .filter_map(|r| r.variation_point.as_ref().map(|vp| (vp.id.as_str(), r)))
            .collect();
        for d in m.functional.relations.iter().filter(|r| r.kind == FpRelationKind::VpDerivation) {
            let (src, dst) = (&vps[d.parent.as_str()], &vps[d.children[0].as_str()]);
            let configs = all(&tree);
            for cfg in configs {
                let label = &cfg.vp_choices.get(&src.variation_point.as_ref().unwrap().id);
                if let Some(label) = label {
                    prop_assert_eq!(cfg.vp_choices.get(&dst.variation_point.as_ref().unwrap().id), Some(*label));
                }
            }
        }
    }

    #[test]
    fn dead_blocks_complement_union(g in genes(12), groups: bool) {
        let tree = normalize(&build(&g), groups);
        let mut alive = BTreeSet::new();
        for c in all(&tree) {
            alive.extend(c.selected);
        }
        let expected: BTreeSet<ElementId> = tree.nodes.iter().map(|n| n.id.clone()).filter(|id| !alive.contains(id)).collect();
        prop_assert_eq!(dead_blocks(&tree, &EnumerationCap::default()).unwrap(), expected);
    }

    #[test]
    fn propagation_matches_filtered_enumeration(g in genes(10), picks in prop::collection::vec((any::<u8>(), any::<bool>()), 0..4)) {
        let tree = normalize(&build(&g), false);
        let mut decisions = BTreeMap::new();
        for (i, inside) in picks {
            decisions.insert(tree.id(i as usize % tree.len()).clone(), if inside { Decision::In } else { Decision::Out });
        }
        let r = propagate(&tree, &decisions, &EnumerationCap::default()).unwrap();
        let consistent: Vec<_> = all(&tree).into_iter().filter(|c| {
            decisions.iter().all(|(id, d)| c.selected.contains(id) == (*d == Decision::In))
        }).collect();
        prop_assert_eq!(r.remaining as usize, consistent.len());
        if consistent.is_empty() {
            let conflict = r.conflict.expect("conflict");
            // the explanation is itself unsatisfiable and minimal
            let sub = propagate(&tree, &conflict.decisions, &EnumerationCap::default()).unwrap();
            prop_assert!(sub.conflict.is_some());
            for id in conflict.decisions.keys() {
                let mut fewer = conflict.decisions.clone();
                fewer.remove(id);
                prop_assert!(propagate(&tree, &fewer, &EnumerationCap::default()).unwrap().conflict.is_none());
            }
        } else {
            prop_assert!(r.conflict.is_none());
            for n in &tree.nodes {
                let every = consistent.iter().all(|c| c.selected.contains(&n.id));
                let none = consistent.iter().all(|c| !c.selected.contains(&n.id));
                prop_assert_eq!(r.forced_in.contains(&n.id), every);
                prop_assert_eq!(r.forced_out.contains(&n.id), none);
            }
        }
    }

    #[test]
    fn propagation_is_monotone(g in genes(10), a in (any::<u8>(), any::<bool>()), b in (any::<u8>(), any::<bool>())) {
        let tree = normalize(&build(&g), false);
        let decide = |(i, inside): (u8, bool)| (tree.id(i as usize % tree.len()).clone(), if inside { Decision::In } else { Decision::Out });
        let one: BTreeMap<_, _> = [decide(a)].into_iter().collect();
        let mut two = one.clone();
        let (k, v) = decide(b);
        two.entry(k).or_insert(v);
        let r1 = propagate(&tree, &one, &EnumerationCap::default()).unwrap();
        let r2 = propagate(&tree, &two, &EnumerationCap::default()).unwrap();
        if r1.conflict.is_none() && r2.conflict.is_none() {
            prop_assert!(r1.forced_in.is_subset(&r2.forced_in));
            prop_assert!(r1.forced_out.is_subset(&r2.forced_out));
        }
    }

    #[test]
    fn forced_sets_are_disjoint(g in genes(12)) {
        let tree = normalize(&build(&g), false);
        let r = propagate(&tree, &BTreeMap::new(), &EnumerationCap::default()).unwrap();
        if r.conflict.is_none() {
            prop_assert!(r.forced_in.is_disjoint(&r.forced_out));
        }
    }
}
