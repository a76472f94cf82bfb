//! Small named instances used throughout the tests, the CLI and the README.

use crate::model::Instance;

/// Three residents in a preference cycle over three hospitals with lower quota two and no
/// upper quota. Admits no stable matching.
pub fn f1() -> Instance {
    Instance::builder()
        .hospital("h1", 2, None)
        .hospital("h2", 2, None)
        .hospital("h3", 2, None)
        .resident("r1", &["h1", "h2"])
        .resident("r2", &["h2", "h3"])
        .resident("r3", &["h3", "h1"])
        .build()
        .expect("fixture")
}

/// Four residents, no upper quotas, lower quotas 1, 2 and 4. Exactly two stable matchings:
/// everyone at h3, or r1 at h1 with r2, r3 at h2.
pub fn f2() -> Instance {
    Instance::builder()
        .hospital("h1", 1, None)
        .hospital("h2", 2, None)
        .hospital("h3", 4, None)
        .resident("r1", &["h3", "h1"])
        .resident("r2", &["h2", "h3"])
        .resident("r3", &["h3", "h2"])
        .resident("r4", &["h3"])
        .build()
        .expect("fixture")
}

/// Quota-one h1 and quota-two h2, h3, h4 (upper quota two). Phase 1 empties h4.
pub fn f3() -> Instance {
    Instance::builder()
        .hospital("h1", 1, Some(1))
        .hospital("h2", 2, Some(2))
        .hospital("h3", 2, Some(2))
        .hospital("h4", 2, Some(2))
        .resident("r1", &["h1", "h2"])
        .resident("r2", &["h4", "h2", "h3"])
        .resident("r3", &["h3", "h1", "h4"])
        .hospital_prefs("h1", &["r3", "r1"])
        .hospital_prefs("h2", &["r1", "r2"])
        .hospital_prefs("h3", &["r2", "r3"])
        .hospital_prefs("h4", &["r2", "r3"])
        .build()
        .expect("fixture")
}

/// F3 without h4: the instance left after Phase 1 on F3. Needs one rotation.
pub fn f4() -> Instance {
    Instance::builder()
        .hospital("h1", 1, Some(1))
        .hospital("h2", 2, Some(2))
        .hospital("h3", 2, Some(2))
        .resident("r1", &["h1", "h2"])
        .resident("r2", &["h2", "h3"])
        .resident("r3", &["h3", "h1"])
        .hospital_prefs("h1", &["r3", "r1"])
        .hospital_prefs("h2", &["r1", "r2"])
        .hospital_prefs("h3", &["r2", "r3"])
        .build()
        .expect("fixture")
}

/// Two hospitals with `l = u = 2` and two residents who both rank h1 first.
pub fn two_hospitals_same_order() -> Instance {
    two_hospitals(&["h1", "h2"])
}

/// As [`two_hospitals_same_order`] but r2 ranks h2 first; both hospitals are then stable
/// homes for the pair.
pub fn two_hospitals_crossed() -> Instance {
    two_hospitals(&["h2", "h1"])
}

fn two_hospitals(r2: &[&str]) -> Instance {
    Instance::builder()
        .hospital("h1", 2, Some(2))
        .hospital("h2", 2, Some(2))
        .resident("r1", &["h1", "h2"])
        .resident("r2", r2)
        .build()
        .expect("fixture")
}
