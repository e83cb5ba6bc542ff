//! The default build against its recorded tuned parameters and margins.

use kleinian_tree::builder::{build_all, BuildParams};

const REL_TOL: f64 = 1e-6;

#[test]
fn default_build_matches_golden_file() {
    let golden: serde_json::Value = serde_json::from_str(include_str!("golden/build_depth3.json")).unwrap();
    let levels = build_all(3, &BuildParams::default()).unwrap();
    for (expected, tuned) in golden["levels"].as_array().unwrap().iter().zip(&levels[1..]) {
        assert_eq!(expected["k"].as_u64().unwrap() as usize, tuned.rep.depth);
        assert_eq!(expected["L"].as_f64().unwrap(), tuned.l_used.unwrap());
        let attempt = tuned.ladder.last().unwrap();
        for (key, got) in [
            ("nesting_margin", attempt.nesting_margin),
            ("old_margin", attempt.old_margin),
            ("new_margin", attempt.new_margin),
        ] {
            let want = expected[key].as_f64().unwrap();
            assert!(((got - want) / want).abs() < REL_TOL, "level {} {key}: {got:e} vs {want:e}", tuned.rep.depth);
        }
    }
}
