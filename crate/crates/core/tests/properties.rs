mod common;

use std::sync::Arc;

use proptest::prelude::*;
use scs_core::instances::aumann_scs;
use scs_core::random::{random_aumann_model, random_distributive_lattice, random_scs, rng};
use scs_core::{
    agent_projection, delta_oracle, delta_table, extrusion_sup, has_right_inverse_precheck,
    is_surjective, join_projection, Agent, Group, OracleLimits, Scs, SpaceFunction, Variant,
};

use common::{adjoint_scan, all_space_functions, implies_scan, is_join_hom, subgroups};

fn arb_scs() -> impl Strategy<Value = Scs> {
    (any::<u64>(), 1usize..=3).prop_map(|(seed, m)| {
        let mut r = rng(seed);
        let l = random_distributive_lattice(4, &mut r);
        random_scs(Arc::new(l), m, &mut r).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lattice_laws(seed in any::<u64>()) {
        let l = random_distributive_lattice(4, &mut rng(seed));
        for a in l.elements() {
            prop_assert_eq!(l.join(a, a), a);
            prop_assert_eq!(l.join(a, l.bottom()), a);
            prop_assert_eq!(l.meet(a, l.top()), a);
            for b in l.elements() {
                prop_assert_eq!(l.join(a, b), l.join(b, a));
                prop_assert_eq!(l.join(a, l.meet(a, b)), a);
                prop_assert_eq!(l.meet(a, l.join(a, b)), a);
                prop_assert_eq!(l.leq(a, b), l.join(a, b) == b);
                for c in l.elements() {
                    prop_assert_eq!(l.meet(a, l.join(b, c)), l.join(l.meet(a, b), l.meet(a, c)));
                }
            }
        }
    }

    #[test]
    fn implication_matches_scan(seed in any::<u64>()) {
        let l = random_distributive_lattice(4, &mut rng(seed));
        for c in l.elements() {
            for d in l.elements() {
                let imp = l.implies(c, d).unwrap();
                prop_assert_eq!(imp, implies_scan(&l, c, d));
                prop_assert_eq!(l.join(c, imp), l.join(c, d));
                prop_assert!(l.leq(imp, d));
            }
        }
    }

    #[test]
    fn space_functions_are_monotone_and_closed_under_join(scs in arb_scs()) {
        let l = scs.lattice();
        let agents: Vec<Agent> = scs.agents().collect();
        for &a in &agents {
            let f = scs.space(a);
            prop_assert!(is_join_hom(l, f.table()));
            prop_assert!(SpaceFunction::lambda_bot(l.clone()).leq(f).unwrap());
            prop_assert!(f.leq(&SpaceFunction::lambda_top(l.clone())).unwrap());
            for x in l.elements() {
                for y in l.elements() {
                    if l.leq(x, y) {
                        prop_assert!(l.leq(f.apply(x), f.apply(y)));
                    }
                }
            }
            for &b in &agents {
                let j = f.join(scs.space(b)).unwrap();
                prop_assert!(is_join_hom(l, j.table()));
            }
        }
    }

    #[test]
    fn variants_agree_with_oracle(scs in arb_scs()) {
        for g in subgroups(&scs.all_agents()).into_iter().filter(|g| !g.is_empty()) {
            let oracle = delta_oracle(&scs, &g, OracleLimits::DEFAULT).unwrap();
            for v in Variant::ALL {
                prop_assert_eq!(&delta_table(&scs, &g, v).unwrap().table, &oracle.table);
            }
        }
    }

    #[test]
    fn oracle_is_greatest_lower_space_function(scs in arb_scs()) {
        let l = scs.lattice();
        if l.len() > 5 {
            return Ok(());
        }
        let all = all_space_functions(l);
        for g in subgroups(&scs.all_agents()) {
            let delta = delta_oracle(&scs, &g, OracleLimits::DEFAULT).unwrap().table;
            for f in &all {
                let below = g.members().iter().all(|&a| {
                    l.elements().all(|c| l.leq(f[c.0], scs.space(a).apply(c)))
                });
                if below {
                    prop_assert!(l.elements().all(|c| l.leq(f[c.0], delta.apply(c))));
                }
            }
        }
    }

    #[test]
    fn projections_bracket_the_adjoint(scs in arb_scs()) {
        let l = scs.lattice();
        for g in subgroups(&scs.all_agents()) {
            let delta = delta_oracle(&scs, &g, OracleLimits::DEFAULT).unwrap().table;
            for c in l.elements() {
                let upper = adjoint_scan(l, delta.table(), c);
                prop_assert!(l.leq(join_projection(&scs, &g, c), upper));
            }
        }
        for a in scs.agents() {
            let f = scs.space(a);
            for c in l.elements() {
                prop_assert_eq!(agent_projection(&scs, a, c), adjoint_scan(l, f.table(), c));
            }
        }
    }

    #[test]
    fn surjective_projection_is_an_extrusion(scs in arb_scs()) {
        let l = scs.lattice();
        for a in scs.agents() {
            let f = scs.space(a);
            if !has_right_inverse_precheck(f) {
                prop_assert!(!is_surjective(f));
            }
            if is_surjective(f) {
                for c in l.elements() {
                    prop_assert_eq!(f.apply(agent_projection(&scs, a, c)), c);
                }
                let up = extrusion_sup(f).unwrap();
                for c in l.elements() {
                    prop_assert_eq!(up.apply(c), agent_projection(&scs, a, c));
                }
            }
        }
    }

    #[test]
    fn message_passing_derivation(scs in arb_scs()) {
        // If i holds a and j holds a → e, the pair {i, j} jointly holds e.
        let l = scs.lattice();
        let agents: Vec<Agent> = scs.agents().collect();
        for &i in &agents {
            for &j in &agents {
                let g = Group::new(vec![i, j]);
                let delta = delta_oracle(&scs, &g, OracleLimits::DEFAULT).unwrap().table;
                for a in l.elements() {
                    for e in l.elements() {
                        let held = l.join(scs.space(i).apply(a), scs.space(j).apply(l.implies(a, e).unwrap()));
                        prop_assert!(l.leq(delta.apply(e), held));
                    }
                }
            }
        }
    }

    #[test]
    fn aumann_knowledge_is_union_of_blocks(seed in any::<u64>()) {
        let model = random_aumann_model(5, 3, &mut rng(seed));
        let scs = aumann_scs(&model).unwrap();
        for (idx, a) in scs.agents().enumerate() {
            let blocks = model.blocks(idx);
            for e in scs.lattice().elements() {
                let k = scs.space(a).apply(e).0 as u64;
                prop_assert_eq!(k, model.knowledge(idx, e.0 as u64));
                for b in &blocks {
                    prop_assert!(k & b == 0 || k & b == *b);
                }
            }
        }
    }
}
