//! Property suites over randomized instances and flip walks.

use std::cmp::Ordering;

use num_bigint::BigUint;
use proptest::prelude::*;

use cyclone::enumerate::{root, Checkpoint, WorkUnit};
use cyclone::gkz::{gkz, gkz_entry_sum, lex_compare, orient_flip};
use cyclone::{
    apply_flip, check_triangulation, circuit_of, find_flips, lowest_triangulation,
    normalized_volume, total_volume, FlipDirection, PointConfig, Simplex, Triangulation,
};

fn instance() -> impl Strategy<Value = (u32, u32)> {
    // d and the codimension c = n - d; small enough that every walk step is fast
    (1u32..=5, 2u32..=4).prop_map(|(d, c)| (d + c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Walk random flips from the lowest triangulation and check, at every
    /// step: flip involution, neighborhood symmetry, canonical-text round
    /// trip, validity, the GKZ entry-sum and delta-locality laws, agreement
    /// of incremental and full GKZ computation, and the orientation law.
    /// Afterwards the parent chain must climb strictly in GKZ order back to
    /// the root.
    #[test]
    fn flip_walk_invariants((n, d) in instance(), choices in prop::collection::vec(any::<u8>(), 0..12)) {
        let cfg = PointConfig::new(n, d).unwrap();
        let expected_sum = total_volume(&cfg).into_biguint() * BigUint::from(d + 1);
        let mut t = lowest_triangulation(&cfg);
        for &choice in &choices {
            let flips = find_flips(&cfg, &t);
            if flips.is_empty() {
                break;
            }
            let f = &flips[choice as usize % flips.len()];
            let next = apply_flip(&t, f).unwrap();

            let back = apply_flip(&next, &f.reversed()).unwrap();
            prop_assert_eq!(&back, &t);

            let reverse_exists = find_flips(&cfg, &next)
                .iter()
                .any(|g| apply_flip(&next, g).unwrap() == t);
            prop_assert!(reverse_exists, "flip neighborhood must be symmetric");

            let reparsed: Triangulation = next.to_string().parse().unwrap();
            prop_assert_eq!(&reparsed, &next);

            prop_assert!(check_triangulation(&cfg, &next).unwrap().is_valid());

            let v_t = gkz(&cfg, &t).clone();
            let v_next = gkz(&cfg, &next).clone();
            prop_assert_eq!(gkz_entry_sum(&v_next), expected_sum.clone());
            for label in 1..=n {
                if f.circuit().support().contains(&label) {
                    prop_assert_ne!(v_t.entry(label), v_next.entry(label));
                } else {
                    prop_assert_eq!(v_t.entry(label), v_next.entry(label));
                }
            }
            prop_assert_eq!(&v_t.apply_flip(&cfg, f).unwrap(), &v_next);

            let cert = orient_flip(&cfg, &t, f).unwrap();
            let expected_cmp = match (f.direction(), d % 2 == 0) {
                (FlipDirection::Up, true) | (FlipDirection::Down, false) => Ordering::Greater,
                _ => Ordering::Less,
            };
            prop_assert_eq!(cert.comparison, expected_cmp);

            t = next;
        }

        let the_root = root(&cfg).unwrap();
        let mut cur = t;
        let mut steps = 0u32;
        while let Some(p) = cyclone::enumerate::parent(&cfg, &cur).unwrap() {
            prop_assert_eq!(
                lex_compare(gkz(&cfg, &p), gkz(&cfg, &cur)).unwrap(),
                Ordering::Greater,
                "parent must strictly increase the GKZ vector"
            );
            cur = p;
            steps += 1;
            prop_assert!(steps < 10_000, "parent chain must terminate");
        }
        prop_assert_eq!(cur, the_root);
    }

    /// Circuit sides partition the one-deleted subsets and carry equal
    /// volume, for arbitrary supports.
    #[test]
    fn circuit_partition_and_volume_balance(
        d in 1u32..=7,
        picks in prop::collection::vec(any::<u16>(), 9),
        extra in 0u32..=6,
    ) {
        let n = d + 2 + extra;
        let cfg = PointConfig::new(n, d).unwrap();
        // choose a (d+2)-subset from the picks deterministically
        let mut support: Vec<u32> = Vec::new();
        let mut pool: Vec<u32> = (1..=n).collect();
        for &p in &picks {
            if support.len() == d as usize + 2 {
                break;
            }
            let idx = p as usize % pool.len();
            support.push(pool.remove(idx));
        }
        prop_assume!(support.len() == d as usize + 2);
        support.sort_unstable();

        let circuit = circuit_of(&cfg, &support).unwrap();
        let k = d as usize + 2;
        prop_assert_eq!(circuit.lower_cells().len() + circuit.upper_cells().len(), k);
        let mut all: Vec<&Simplex> = circuit.lower_cells().iter().chain(circuit.upper_cells()).collect();
        all.sort_unstable();
        all.dedup();
        prop_assert_eq!(all.len(), k);

        let side_volume = |cells: &[Simplex]| -> BigUint {
            cells
                .iter()
                .map(|c| normalized_volume(&cfg, c).unwrap().into_biguint())
                .fold(BigUint::from(0u32), |a, b| a + b)
        };
        prop_assert_eq!(
            side_volume(circuit.lower_cells()),
            side_volume(circuit.upper_cells()),
            "both circuit sides triangulate the same polytope"
        );
    }

    /// Volume values are invariant under shifting the parameters to any
    /// other run of consecutive integers.
    #[test]
    fn volume_shift_invariance(
        d in 1u32..=6,
        extra in 0u32..=5,
        seed in any::<u64>(),
        shift in 0u32..=1000,
    ) {
        let n = d + 1 + extra;
        let cfg = PointConfig::new(n, d).unwrap();
        // pseudo-random (d+1)-subset from the seed
        let mut pool: Vec<u32> = (1..=n).collect();
        let mut state = seed | 1;
        let mut labels = Vec::new();
        for _ in 0..=d {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            labels.push(pool.remove((state >> 33) as usize % pool.len()));
        }
        labels.sort_unstable();
        let vol = normalized_volume(&cfg, &Simplex::new(labels.clone()).unwrap()).unwrap();
        // independent evaluation on shifted parameters
        let shifted: Vec<u64> = labels.iter().map(|&x| (x + shift) as u64).collect();
        let mut product = BigUint::from(1u32);
        for (i, &a) in shifted.iter().enumerate() {
            for &b in &shifted[i + 1..] {
                product *= BigUint::from(b - a);
            }
        }
        prop_assert_eq!(vol.into_biguint(), product);
    }

    /// Checkpoint files round-trip bit-exactly for arbitrary unit queues.
    #[test]
    fn checkpoint_round_trip(
        walk in prop::collection::vec(any::<u8>(), 0..8),
        budgets in prop::collection::vec(1u64..=10_000, 1..6),
        visited in any::<u64>(),
        flip_edges in any::<u64>(),
        max_depth in 0usize..=1000,
    ) {
        let cfg = PointConfig::new(6, 2).unwrap();
        // derive a few distinct triangulations by walking flips
        let mut t = lowest_triangulation(&cfg);
        let mut nodes = vec![t.clone()];
        for &choice in &walk {
            let flips = find_flips(&cfg, &t);
            t = apply_flip(&t, &flips[choice as usize % flips.len()]).unwrap();
            nodes.push(t.clone());
        }
        let units: Vec<WorkUnit> = budgets
            .iter()
            .enumerate()
            .map(|(i, &budget)| WorkUnit {
                node: nodes[i % nodes.len()].clone(),
                budget,
                depth: i,
            })
            .collect();
        let ckpt = Checkpoint {
            n: 6,
            d: 2,
            units,
            visited: BigUint::from(visited),
            flip_edges: BigUint::from(flip_edges),
            max_depth,
        };
        let mut bytes = Vec::new();
        ckpt.write_to(&mut bytes).unwrap();
        let back = Checkpoint::read_from(&bytes[..]).unwrap();
        prop_assert_eq!(&back, &ckpt);
        let mut again = Vec::new();
        back.write_to(&mut again).unwrap();
        prop_assert_eq!(again, bytes);
    }
}
