mod common;

use common::*;
use defcheck::definability::{enumerate_definables, witness_pair};
use defcheck::formula::{evaluate, parse_formula, relation_table, Assignment};
use defcheck::seqspace::{check_almost_preserves, lift, RelationSpec, Sequence, SequenceMap};
use defcheck::symmetry::{
    automorphisms, is_automorphism, orbits, type_partition, Depth, Permutation,
};
use defcheck::tuples::all_tuples;
use defcheck::Structure;
use proptest::prelude::*;
use rand::Rng;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 96,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn structure_text_round_trips(seed in any::<u64>()) {
        let s = random_structure(&mut rng(seed), 5);
        let back: Structure = s.to_string().parse().unwrap();
        prop_assert_eq!(back.to_string(), s.to_string());
        prop_assert_eq!(back, s);
    }

    #[test]
    fn formula_render_round_trips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_structure(&mut r, 3);
        let f = random_formula(&mut r, &s, 2, 2, 10);
        let back = parse_formula(&f.to_string(), &s.full_signature()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn table_matches_pointwise_evaluation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_structure(&mut r, 4);
        let f = random_formula(&mut r, &s, 2, 2, 8);
        let table = relation_table(&s, &f, &[0, 1]).unwrap();
        for t in all_tuples(s.size(), 2) {
            let holds = evaluate(&s, &f, &Assignment::from_tuple(&t)).unwrap();
            prop_assert_eq!(table.contains(&t), holds);
        }
        let simplified = relation_table(&s, &f.simplify(), &[0, 1]).unwrap();
        prop_assert_eq!(simplified, table);
    }

    #[test]
    fn automorphisms_form_a_group(seed in any::<u64>()) {
        let s = random_structure(&mut rng(seed), 5);
        let group = automorphisms(&s);
        let n = s.size();
        prop_assert!(group.contains(&Permutation::identity(n)));
        let mut sorted = group.clone();
        sorted.sort_by(|a, b| a.image().cmp(b.image()));
        prop_assert_eq!(&sorted, &group);
        for p in &group {
            prop_assert!(is_automorphism(&s, p));
            prop_assert!(group.contains(&p.inverse()));
            for q in &group {
                prop_assert!(group.contains(&p.compose(q)));
            }
        }
    }

    #[test]
    fn stable_types_are_orbits(seed in any::<u64>()) {
        let s = random_structure(&mut rng(seed), 6);
        for arity in 1..=3 {
            let tp = type_partition(&s, arity, Depth::Stable).unwrap();
            prop_assert_eq!(&tp.partition, &orbits(&s, arity).unwrap());
            let coarser = type_partition(&s, arity, Depth::Fixed(0)).unwrap();
            prop_assert!(tp.partition.refines(&coarser.partition));
        }
    }

    #[test]
    fn witness_pairs_die_monotonically(seed in any::<u64>()) {
        let s = random_structure(&mut rng(seed), 5);
        for mode in ["orbit-atoms", "by-rank"] {
            let e = enumerate_definables(&s, s.target_arity(), mode).unwrap();
            let mut dead = false;
            for m in 0..=e.len() {
                let alive = witness_pair(&s, m, &e).unwrap().is_some();
                prop_assert!(!(dead && alive), "{} revived at {}", mode, m);
                dead |= !alive;
            }
        }
    }

    #[test]
    fn perturbed_lifts_only_fail_on_perturbed_indices(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_structure(&mut r, 5);
        let n = s.size();
        let group = automorphisms(&s);
        let p = &group[r.gen_range(0..group.len())];
        let k = 10;
        let fs = distinct_sequences(&mut r, n, k, 3);
        let exact = lift(p, &fs).unwrap();
        let spots: Vec<usize> = (0..k).filter(|_| r.gen_bool(0.2)).collect();
        let mut noisy = SequenceMap::new(k);
        for (f, g) in exact.entries() {
            let mut values = g.values().to_vec();
            for &i in &spots {
                values[i] = r.gen_range(0..n);
            }
            let g = Sequence::new(values);
            if noisy.preimage(&g).is_some() {
                continue;
            }
            noisy.insert(f.clone(), g).unwrap();
        }
        let mut names: Vec<String> = s.signature().symbols().iter().map(|x| x.name.clone()).collect();
        names.push("=".into());
        for name in names {
            let v = check_almost_preserves(&s, &noisy, &RelationSpec::Named(name), 0).unwrap();
            prop_assert!(v.report.union.iter().all(|i| spots.contains(&i)));
        }
    }
}
