//! Integration tests across the public API: atlas inventories for every
//! fiber type up to a bound, suite determinism across independent runs,
//! scalar genericity, section-level entry points, and mutation smoke
//! tests on further fiber types.

use hj_atlas::verify::{
    check_equivariance_suite, check_exceptional_chain, check_quotient_compatibility,
    check_za_collapse, run_suite, run_suite_mutated, standard_mutations, CheckConfig,
};
use hj_atlas::{Atlas4, Atlas5, FiberType, MapTag};

fn gcd(mut x: i64, mut y: i64) -> i64 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

fn small_cfg() -> CheckConfig {
    CheckConfig {
        samples_per_check: 32,
        group_samples: 8,
        ..CheckConfig::default()
    }
}

#[test]
fn atlas_inventories_hold_for_all_types_up_to_200() {
    for r in 2..=200i64 {
        for a in (1..r).filter(|&a| gcd(r, a) == 1) {
            let fiber = FiberType::new(r, a).unwrap();
            let exp = fiber.expansion().unwrap();
            let n = exp.coefficients.len();

            let a5 = Atlas5::for_fiber(fiber).unwrap();
            assert_eq!(a5.charts.len(), n + 1, "({r},{a}) 5-d chart count");
            assert_eq!(a5.transitions.len(), n, "({r},{a}) 5-d transition count");
            assert_eq!(a5.exceptional.components.len(), n);
            assert_eq!(a5.exceptional.circles.len(), n - 1);
            assert!(a5
                .charts
                .iter()
                .chain([&a5.model])
                .all(|c| c.weights.is_some()));

            let a4 = Atlas4::for_fiber(fiber).unwrap();
            assert_eq!(a4.charts.len(), n + 1, "({r},{a}) 4-d chart count");
            assert_eq!(a4.transitions.len(), n, "({r},{a}) 4-d gluing count");
            assert_eq!(a4.embeddings.len(), 2);
            assert_eq!(a4.two_chart.is_some(), a >= 2);
            assert_eq!(a4.curves.len(), n);
            for (i, c) in a4.curves.iter().enumerate() {
                assert_eq!(c.self_intersection, -exp.coefficients[i]);
            }
        }
    }
}

#[test]
fn independent_runs_agree_byte_for_byte() {
    let fiber = FiberType::new(11, 7).unwrap();
    let cfg = CheckConfig {
        seed: 7,
        ..small_cfg()
    };
    let first = run_suite::<f64>(fiber, &cfg).unwrap();
    let second = run_suite::<f64>(fiber, &cfg).unwrap();
    assert_eq!(
        first.to_canonical_json().unwrap(),
        second.to_canonical_json().unwrap()
    );
    assert_eq!(first.to_markdown(), second.to_markdown());
}

#[test]
fn suite_runs_in_single_precision() {
    let fiber = FiberType::new(5, 3).unwrap();
    let cfg = CheckConfig {
        tol: 1e-3,
        samples_per_check: 64,
        group_samples: 16,
        ..CheckConfig::default()
    };
    let report = run_suite::<f32>(fiber, &cfg).unwrap();
    assert!(
        report.passed,
        "f32 suite failed: {:?}",
        report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| (&c.name, c.max_error))
            .collect::<Vec<_>>()
    );
}

#[test]
fn an_unreachable_tolerance_makes_the_suite_fail() {
    let fiber = FiberType::new(7, 3).unwrap();
    let cfg = CheckConfig {
        tol: 1e-17,
        ..small_cfg()
    };
    let report = run_suite::<f64>(fiber, &cfg).unwrap();
    assert!(!report.passed);
    assert!(report.failed_checks > 0);
}

#[test]
fn section_entry_points_pass_for_a_sample_fiber() {
    let fiber = FiberType::new(7, 4).unwrap();
    let cfg = small_cfg();
    let atlas = Atlas5::for_fiber(fiber).unwrap();

    let equiv = check_equivariance_suite::<f64>(&atlas, &cfg).unwrap();
    assert!(equiv.iter().all(|c| c.passed));
    assert!(equiv.iter().all(|c| c.name.starts_with("equivariance/")));
    // every transition and embedding of the atlas is covered
    assert!(equiv.len() > atlas.transitions.len());

    let collapse = check_za_collapse::<f64>(fiber, &cfg).unwrap();
    assert!(collapse.passed && collapse.samples > 0);

    let quot = check_quotient_compatibility::<f64>(fiber, &cfg).unwrap();
    assert!(quot.iter().all(|c| c.passed));
    assert!(quot.iter().any(|c| c.name == "quotient/square_final"));

    let exc = check_exceptional_chain::<f64>(&atlas, &cfg).unwrap();
    assert!(exc.iter().all(|c| c.passed));
    assert!(exc.iter().any(|c| c.name == "exceptional/final_gluing"));
}

#[test]
fn mutations_are_detected_on_further_fiber_types() {
    let cfg = CheckConfig {
        samples_per_check: 48,
        group_samples: 12,
        ..CheckConfig::default()
    };
    for (r, a) in [(5, 2), (4, 1)] {
        let fiber = FiberType::new(r, a).unwrap();
        for m in standard_mutations(fiber).unwrap() {
            let report = run_suite_mutated::<f64>(fiber, &cfg, &m).unwrap();
            assert!(!report.passed, "({r},{a}) mutation {m} went undetected");
            let note = report.note.expect("mutated reports carry a note");
            assert!(note.starts_with("mutated: "));
        }
    }
}

#[test]
fn report_renderings_expose_the_run_parameters() {
    let fiber = FiberType::new(7, 3).unwrap();
    let cfg = CheckConfig {
        seed: 42,
        ..small_cfg()
    };
    let report = run_suite::<f64>(fiber, &cfg).unwrap();

    let md = report.to_markdown();
    assert!(md.starts_with("# Verification report"));
    assert!(md.contains("- fiber type: 1/7 (1, 3)"));
    assert!(md.contains("- expansion: [3, 2, 2]"));
    assert!(md.contains("- seed: 42"));
    assert!(md.contains("- result: PASS"));
    assert!(md.contains("| hj/roundtrip | pass |"));

    let json = report.to_canonical_json().unwrap();
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["fiber"]["r"], 7);
    assert_eq!(value["fiber"]["a"], 3);
    assert_eq!(value["passed"], true);
    assert_eq!(value["config"]["seed"], 42);
    assert_eq!(
        value["total_checks"].as_u64().unwrap(),
        report.checks.len() as u64
    );
}

#[test]
fn atlases_serialize_with_tagged_maps() {
    let fiber = FiberType::new(7, 3).unwrap();
    let a5 = Atlas5::for_fiber(fiber).unwrap();
    let json = hj_atlas::jsonfmt::to_canonical_json(&a5).unwrap();
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["charts"][0]["id"], "X0");
    assert_eq!(value["transitions"][0]["tag"], "chain_g");
    assert_eq!(value["transitions"][0]["b"], 3);
    assert_eq!(value["embedding"]["tag"], "embed_e1");
    assert_eq!(
        value["exceptional"]["components"][2]["topology"],
        "three_sphere"
    );

    let a4 = Atlas4::for_fiber(fiber).unwrap();
    let json = hj_atlas::jsonfmt::to_canonical_json(&a4).unwrap();
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["transitions"][0]["tag"], "reid_f");
    assert_eq!(value["curves"][0]["self_intersection"], -3);
    assert_eq!(value["two_chart"]["za"][0], 3);
}

#[test]
fn chain_transitions_expose_their_coefficients() {
    let fiber = FiberType::new(12, 5).unwrap();
    let exp = fiber.expansion().unwrap();
    let a5 = Atlas5::for_fiber(fiber).unwrap();
    for (i, t) in a5
        .transitions
        .iter()
        .take(exp.coefficients.len() - 1)
        .enumerate()
    {
        match t.tag {
            MapTag::ChainG { b, index } => {
                assert_eq!(b, exp.coefficients[i]);
                assert_eq!(index, i + 1);
            }
            ref other => panic!("unexpected chain tag {other:?}"),
        }
    }
    assert_eq!(a5.transitions.last().unwrap().tag, MapTag::GlueF);
}
