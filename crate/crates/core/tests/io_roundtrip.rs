use hrq_core::fixtures::{f1, f2, f3, f4};
use hrq_core::gadgets::*;
use hrq_core::io::{
    parse_instance, parse_matching, serialize_instance, serialize_matching, Variant,
};
use hrq_core::oracle::{enumerate_stable, DEFAULT_CAP};
use hrq_core::random::{random_instance, RandomParams};
use hrq_core::{Error, Instance, Matching};
use proptest::prelude::*;

fn round_trip(inst: &Instance) {
    let text = serialize_instance(inst);
    assert!(text.ends_with('\n'));
    let back = parse_instance(&text).unwrap();
    assert_eq!(&back, inst);
    assert_eq!(serialize_instance(&back), text);
}

fn corpus() -> Vec<Instance> {
    let mut out = vec![f1(), f2(), f3(), f4(), f1().as_house_allocation()];
    out.push(
        gen_sat(&CnfFormula::random(1, 3).unwrap())
            .unwrap()
            .instance,
    );
    out.push(gen_mcis_unchecked(&two_color_demo()).unwrap().instance);
    let (g, k) = four_vertex_demo();
    out.push(gen_clique(&g, k).unwrap().instance);
    out.push(gen_smti(&Smti::random(2, 3, 3, 0.7, 0.4)).unwrap().instance);
    out
}

#[test]
fn fixture_and_generator_corpus_round_trips() {
    for inst in corpus() {
        round_trip(&inst);
    }
}

#[test]
fn variant_tags() {
    let tag = |i: &Instance| Variant::of(i);
    assert_eq!(tag(&f1()), Variant::Hr);
    assert_eq!(tag(&f1().as_house_allocation()), Variant::Ha);
    let smti =
        gen_smti(&Smti::new(vec![vec![vec![0, 1]]], vec![vec![vec![0]], vec![vec![0]]]).unwrap());
    assert_eq!(tag(&smti.unwrap().instance), Variant::HrTies);
    assert!(serialize_instance(&f1()).contains("\"variant\": \"hr\""));
}

#[test]
fn keys_are_sorted() {
    let text = serialize_instance(&f1());
    let pos = |k: &str| text.find(&format!("\"{k}\"")).unwrap();
    assert!(pos("hospitals") < pos("residents") && pos("residents") < pos("variant"));
    assert!(pos("id") < pos("lower") && pos("lower") < pos("prefs") && pos("prefs") < pos("upper"));
}

fn single_hospital(lower: usize, upper: &str, resident_prefs: &str) -> String {
    format!(
        r#"{{"variant": "hr",
 "hospitals": [{{"id": "h1", "lower": {lower}, "upper": {upper}, "prefs": [["r1"]]}}],
 "residents": [{{"id": "r1", "prefs": {resident_prefs}}}]}}"#
    )
}

#[test]
fn lower_above_upper_is_invalid() {
    match parse_instance(&single_hospital(2, "1", r#"[["h1"]]"#)) {
        Err(Error::Invalid(problems)) => assert!(problems.iter().any(|p| p.contains("l>u"))),
        other => panic!("{other:?}"),
    }
}

#[test]
fn unknown_hospital_is_asymmetry() {
    match parse_instance(&single_hospital(1, "null", r#"[["h9"]]"#)) {
        Err(Error::Parse { line, message, .. }) => {
            assert_eq!(line, 3);
            assert!(
                message.contains("asymmetry") && message.contains("h9"),
                "{message}"
            );
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn one_sided_acceptance_is_invalid() {
    match parse_instance(&single_hospital(1, "null", "[]")) {
        Err(Error::Invalid(problems)) => assert!(problems.iter().any(|p| p.contains("asymmetry"))),
        other => panic!("{other:?}"),
    }
}

#[test]
fn variant_mismatch_is_invalid() {
    let text = serialize_instance(&f1()).replace("\"hr\"", "\"ha\"");
    assert!(matches!(parse_instance(&text), Err(Error::Invalid(_))));
    let text = serialize_instance(&f1()).replace("\"hr\"", "\"hr_ties\"");
    assert_eq!(parse_instance(&text).unwrap(), f1());
}

#[test]
fn duplicate_ids_rejected() {
    let text = r#"{"variant": "hr", "hospitals": [],
 "residents": [{"id": "r1", "prefs": []}, {"id": "r1", "prefs": []}]}"#;
    assert!(matches!(
        parse_instance(text),
        Err(Error::Parse { line: 2, .. })
    ));
}

#[test]
fn f2_matchings_round_trip() {
    let inst = f2();
    for m in enumerate_stable(&inst, DEFAULT_CAP).unwrap() {
        let text = serialize_matching(&inst, &m);
        assert_eq!(parse_matching(&inst, &text).unwrap(), m);
    }
    let m1 = inst.matching(&[("h3", &["r1", "r2", "r3", "r4"])]).unwrap();
    let text = serialize_matching(&inst, &m1);
    assert_eq!(text.matches("\"h3\"").count(), 4);
    assert_eq!(parse_matching(&inst, &text).unwrap(), m1);
}

#[test]
fn matching_with_explicit_null() {
    let inst = f2();
    let text = r#"[{"resident": "r2", "hospital": null}, {"resident": "r1", "hospital": "h1"}]"#;
    let m = parse_matching(&inst, text).unwrap();
    assert_eq!(m.pairs(), vec![(0, 0)]);
    assert!(parse_matching(&inst, r#"[{"resident": "r9", "hospital": null}]"#).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_instances_round_trip(seed in 0u64..1_000_000, ties in 0usize..3, ha: bool) {
        let mut params = RandomParams::strict(7, 5, 3);
        if ties > 0 {
            params = params.with_ties(0.3 * ties as f64);
        }
        if ha {
            params = params.house_allocation();
        }
        let inst = random_instance(seed, &params);
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(serialize_instance(&back), text);
    }

    #[test]
    fn random_matchings_round_trip(seed in 0u64..1_000_000, picks in proptest::collection::vec(0usize..6, 7)) {
        let inst = random_instance(seed, &RandomParams::strict(7, 5, 2));
        let mut m = Matching::empty(inst.n());
        for (r, &p) in picks.iter().enumerate().take(inst.n()) {
            let list = inst.resident_list(r);
            m.assignment[r] = list.get(p).copied();
        }
        let text = serialize_matching(&inst, &m);
        prop_assert_eq!(parse_matching(&inst, &text).unwrap(), m);
    }
}
