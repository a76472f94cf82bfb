use hrq_core::ilp::{
    build_haqlu_model, build_hrqlut_model, decode_solution, enumerate_guesses, export_lp,
    solve_haqlu_ilp, solve_hrqlut_xp, solve_naive, DEFAULT_NODE_BUDGET,
};
use hrq_core::oracle::{enumerate_stable, DEFAULT_CAP};
use hrq_core::random::{random_instance, RandomParams};
use hrq_core::stability::find_blocking_pairs;
use hrq_core::{check_stability, Exec};

#[test]
fn house_allocation_model_matches_oracle() {
    let families = [
        RandomParams::strict(6, 3, 3).house_allocation(),
        RandomParams::strict(6, 3, 2).house_allocation().no_upper(),
        RandomParams::strict(6, 3, 3)
            .with_ties(0.4)
            .house_allocation(),
        RandomParams::strict(6, 3, 3)
            .planted_cycle()
            .house_allocation(),
        RandomParams::strict(5, 3, 3)
            .with_ties(0.4)
            .planted_cycle()
            .house_allocation(),
    ];
    let mut yes = 0;
    for (f, params) in families.iter().enumerate() {
        for seed in 0..100 {
            let inst = random_instance(seed + 1000 * f as u64, params);
            let exists = !enumerate_stable(&inst, DEFAULT_CAP).unwrap().is_empty();
            let got = solve_haqlu_ilp(&inst, DEFAULT_NODE_BUDGET).unwrap();
            assert_eq!(got.is_some(), exists, "family {f} seed {seed}");
            if let Some(m) = got {
                yes += 1;
                assert!(check_stability(&inst, &m).unwrap().stable);
            }
        }
    }
    let total = 100 * families.len();
    assert!(yes > 0 && yes < total, "yes = {yes} of {total}");
}

#[test]
fn xp_model_matches_oracle() {
    let families = [
        RandomParams::strict(6, 3, 3).with_ties(0.4),
        RandomParams::strict(6, 3, 2),
        RandomParams::strict(5, 3, 2).with_ties(0.6).no_upper(),
        RandomParams::strict(6, 3, 3).with_ties(0.4).planted_cycle(),
        RandomParams::strict(5, 3, 2).planted_cycle(),
    ];
    let mut yes = 0;
    for (f, params) in families.iter().enumerate() {
        for seed in 0..100 {
            let inst = random_instance(seed + 1000 * f as u64, params);
            let exists = !enumerate_stable(&inst, DEFAULT_CAP).unwrap().is_empty();
            let got = solve_hrqlut_xp(&inst, Exec::Sequential, DEFAULT_NODE_BUDGET).unwrap();
            assert_eq!(got.is_some(), exists, "family {f} seed {seed}");
            if let Some(m) = got {
                yes += 1;
                assert!(check_stability(&inst, &m).unwrap().stable);
            }
        }
    }
    let total = 100 * families.len();
    assert!(yes > 0 && yes < total, "yes = {yes} of {total}");
}

#[test]
fn xp_parallel_matches_sequential() {
    let params = RandomParams::strict(6, 3, 3).with_ties(0.4);
    for seed in 0..40 {
        let inst = random_instance(seed, &params);
        assert_eq!(
            solve_hrqlut_xp(&inst, Exec::Sequential, DEFAULT_NODE_BUDGET).unwrap(),
            solve_hrqlut_xp(&inst, Exec::Parallel, DEFAULT_NODE_BUDGET).unwrap()
        );
    }
}

/// Residents of one type are interchangeable, so none of them can form a blocking pair with
/// a hospital holding another member of the type.
#[test]
fn decoding_respects_type_interchangeability() {
    let params = RandomParams::strict(6, 3, 2).with_ties(0.3);
    for seed in 0..60 {
        let inst = random_instance(seed, &params);
        for g in enumerate_guesses(&inst).take(200) {
            let model = build_hrqlut_model(&inst, &g).unwrap();
            let Some(values) = solve_naive(&model, DEFAULT_NODE_BUDGET).unwrap() else {
                continue;
            };
            let m = decode_solution(&inst, &model, &values).unwrap();
            let bps = find_blocking_pairs(&inst, &m).unwrap();
            for ty in &model.types {
                for &(r, h) in &bps {
                    let same_type_at_h = ty
                        .members
                        .iter()
                        .any(|&s| s != r && m.hospital_of(s) == Some(h));
                    assert!(!(ty.members.contains(&r) && same_type_at_h));
                }
            }
        }
    }
}

#[test]
fn lp_export_is_deterministic() {
    let params = RandomParams::strict(6, 3, 3).house_allocation();
    for seed in 0..20 {
        let inst = random_instance(seed, &params);
        let a = export_lp(&build_haqlu_model(&inst).unwrap());
        let b = export_lp(&build_haqlu_model(&inst).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with("Minimize\n") && a.ends_with("End\n"));
    }
}
