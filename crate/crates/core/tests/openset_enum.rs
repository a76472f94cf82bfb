use hrq_core::enumsolver::{
    fpt_all_verdicts, solve_count_open, solve_fpt_subsets, solve_fpt_subsets_ties, CountMode,
};
use hrq_core::openset::{
    gale_shapley_resident_optimal, hopcroft_karp, solve_fixed_open_hrqlu,
    solve_fixed_open_strict_noupper, solve_fixed_open_ties_noupper, OpenSet,
};
use hrq_core::oracle::{enumerate_feasible, enumerate_stable, DEFAULT_CAP};
use hrq_core::q2::solve_q2;
use hrq_core::random::{random_instance, RandomParams};
use hrq_core::stability::is_stable;
use hrq_core::{Exec, Instance, Matching};
use proptest::prelude::*;

fn open_sets(inst: &Instance) -> Vec<OpenSet> {
    (0..1u64 << inst.m())
        .map(|bits| OpenSet::from_bits(inst.m(), &(0..inst.m()).collect::<Vec<_>>(), bits))
        .collect()
}

fn opens(inst: &Instance, m: &Matching, open: &OpenSet) -> bool {
    m.open_hospitals(inst.m()) == open.hospitals()
}

type FixedOpen = fn(&Instance, &OpenSet) -> hrq_core::Result<Option<Matching>>;

fn agree_fixed_open(params: &RandomParams, solver: FixedOpen, seeds: std::ops::Range<u64>) {
    for seed in seeds {
        let inst = random_instance(seed, params);
        let stable = enumerate_stable(&inst, DEFAULT_CAP).unwrap();
        for open in open_sets(&inst) {
            let expect = stable.iter().any(|m| opens(&inst, m, &open));
            let got = solver(&inst, &open).unwrap();
            assert_eq!(
                got.is_some(),
                expect,
                "seed {seed}, open {:?}",
                open.hospitals()
            );
            if let Some(m) = got {
                assert!(is_stable(&inst, &m) && opens(&inst, &m, &open));
            }
        }
    }
}

#[test]
fn fixed_open_hrqlu_matches_oracle() {
    agree_fixed_open(
        &RandomParams::strict(6, 4, 3),
        solve_fixed_open_hrqlu,
        0..300,
    );
    agree_fixed_open(
        &RandomParams::strict(6, 4, 3).planted_cycle(),
        solve_fixed_open_hrqlu,
        0..200,
    );
}

#[test]
fn fixed_open_strict_noupper_matches_oracle() {
    agree_fixed_open(
        &RandomParams::strict(6, 4, 3).no_upper(),
        solve_fixed_open_strict_noupper,
        1000..1300,
    );
}

#[test]
fn fixed_open_ties_matches_oracle() {
    agree_fixed_open(
        &RandomParams::strict(6, 4, 3).no_upper().with_ties(0.5),
        solve_fixed_open_ties_noupper,
        2000..2300,
    );
}

/// Every lower quota set to one makes the quota-free instance's stable matchings exactly the
/// stable matchings in which any hospital may stay empty.
#[test]
fn gale_shapley_is_resident_optimal() {
    let params = RandomParams::strict(6, 4, 1);
    for seed in 0..300 {
        let inst = random_instance(seed, &params);
        let all = OpenSet::new(inst.m(), &(0..inst.m()).collect::<Vec<_>>()).unwrap();
        let gs = gale_shapley_resident_optimal(&inst, &all).unwrap();
        let stable = enumerate_stable(&inst, DEFAULT_CAP).unwrap();
        assert!(stable.contains(&gs), "seed {seed}");
        for other in &stable {
            for r in 0..inst.n() {
                if let Some(h) = other.hospital_of(r) {
                    assert!(!inst.prefers(r, h, gs.hospital_of(r)), "seed {seed}");
                }
            }
        }
    }
}

fn brute_force_matching(left: usize, right: usize, edges: &[(usize, usize)]) -> usize {
    fn go(u: usize, left: usize, used: &mut Vec<bool>, adj: &[Vec<usize>]) -> usize {
        if u == left {
            return 0;
        }
        let mut best = go(u + 1, left, used, adj);
        for &v in &adj[u] {
            if !used[v] {
                used[v] = true;
                best = best.max(1 + go(u + 1, left, used, adj));
                used[v] = false;
            }
        }
        best
    }
    let mut adj = vec![Vec::new(); left];
    for &(u, v) in edges {
        adj[u].push(v);
    }
    go(0, left, &mut vec![false; right], &adj)
}

proptest! {
    #[test]
    fn hopcroft_karp_is_maximum(
        left in 0usize..=8,
        right in 0usize..=8,
        raw in proptest::collection::vec((0usize..8, 0usize..8), 0..30),
    ) {
        let edges: Vec<(usize, usize)> = raw
            .into_iter()
            .filter(|&(u, v)| u < left && v < right)
            .collect();
        let got = hopcroft_karp(left, right, &edges).unwrap();
        prop_assert_eq!(got.len(), brute_force_matching(left, right, &edges));
        let mut rights: Vec<usize> = got.iter().map(|&(_, v)| v).collect();
        rights.sort_unstable();
        rights.dedup();
        prop_assert_eq!(rights.len(), got.len());
        prop_assert!(got.iter().all(|e| edges.contains(e)));
    }
}

#[test]
fn fpt_matches_oracle() {
    for (i, params) in [
        RandomParams::strict(6, 4, 3),
        RandomParams::strict(6, 4, 3).no_upper(),
        RandomParams::strict(6, 4, 3).planted_cycle(),
        RandomParams::strict(6, 4, 3).no_upper().planted_cycle(),
    ]
    .iter()
    .enumerate()
    {
        for seed in 0..300 {
            let inst = random_instance(seed + 10_000 * i as u64, params);
            let exists = !enumerate_stable(&inst, DEFAULT_CAP).unwrap().is_empty();
            let got = solve_fpt_subsets(&inst, Exec::Sequential).unwrap();
            assert_eq!(got.is_some(), exists, "seed {seed}");
            if let Some(m) = got {
                assert!(is_stable(&inst, &m));
            }
        }
    }
}

#[test]
fn fpt_ties_matches_oracle() {
    let plain = RandomParams::strict(6, 4, 3).no_upper().with_ties(0.5);
    let planted = plain.clone().planted_cycle();
    let mut no = 0;
    for seed in 0..600 {
        let inst = random_instance(seed, if seed % 2 == 0 { &plain } else { &planted });
        let exists = !enumerate_stable(&inst, DEFAULT_CAP).unwrap().is_empty();
        let got = solve_fpt_subsets_ties(&inst, Exec::Sequential).unwrap();
        assert_eq!(got.is_some(), exists, "seed {seed}");
        match got {
            Some(m) => assert!(is_stable(&inst, &m)),
            None => no += 1,
        }
    }
    assert!(no > 0);
}

#[test]
fn count_open_matches_oracle() {
    let params = RandomParams::strict(6, 4, 3);
    for seed in 0..200 {
        let inst = random_instance(seed, &params);
        let stable = enumerate_stable(&inst, DEFAULT_CAP).unwrap();
        for k in 0..=inst.m() {
            let expect = stable.iter().any(|m| m.open_hospitals(inst.m()).len() == k);
            let open = solve_count_open(&inst, k, CountMode::Open, Exec::Sequential).unwrap();
            let closed =
                solve_count_open(&inst, inst.m() - k, CountMode::Closed, Exec::Sequential).unwrap();
            assert_eq!(open.is_some(), expect, "seed {seed} k {k}");
            assert_eq!(open, closed);
        }
    }
}

#[test]
fn fpt_agrees_with_q2() {
    let plain = RandomParams::strict(8, 5, 2);
    let planted = plain.clone().planted_cycle();
    for seed in 0..600 {
        let inst = random_instance(seed, if seed % 2 == 0 { &plain } else { &planted });
        let q2 = solve_q2(&inst, false).unwrap().matching.is_some();
        let fpt = solve_fpt_subsets(&inst, Exec::Sequential)
            .unwrap()
            .is_some();
        assert_eq!(q2, fpt, "seed {seed}");
    }
}

#[test]
fn parallel_and_sequential_agree() {
    let params = RandomParams::strict(7, 6, 3);
    for seed in 0..100 {
        let inst = random_instance(seed, &params);
        assert_eq!(
            solve_fpt_subsets(&inst, Exec::Sequential).unwrap(),
            solve_fpt_subsets(&inst, Exec::Parallel).unwrap()
        );
        assert_eq!(
            fpt_all_verdicts(&inst, Exec::Sequential).unwrap(),
            fpt_all_verdicts(&inst, Exec::Parallel).unwrap()
        );
    }
}

#[test]
fn fixed_open_results_are_feasible_members() {
    let params = RandomParams::strict(5, 3, 2);
    for seed in 0..100 {
        let inst = random_instance(seed, &params);
        let feasible = enumerate_feasible(&inst, DEFAULT_CAP).unwrap();
        for open in open_sets(&inst) {
            if let Some(m) = solve_fixed_open_hrqlu(&inst, &open).unwrap() {
                assert!(feasible.contains(&m));
            }
        }
    }
}
