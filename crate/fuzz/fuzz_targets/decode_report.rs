#![no_main]

use libfuzzer_sys::fuzz_target;
use serde::de::DeserializeOwned;
use serde::Serialize;
use spiral_delone::cli::{DensityOutput, PointsOutput, WindowOutput};
use spiral_delone::gaps::{DeloneReport, GapProfile, GapReport};
use spiral_delone::report::{from_json, to_json};
use spiral_delone::stats::{GapHistogram, PairCorrelationReport};

/// A decoded report re-encodes to text that decodes to the same value.
fn check<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(text: &str) {
    let Ok(env) = from_json::<T>(text) else { return };
    let encoded = to_json(&env.kind, &env.report).expect("decoded report encodes");
    let again = from_json::<T>(&encoded).expect("encoded report decodes");
    assert_eq!(again.kind, env.kind);
    assert_eq!(to_json(&again.kind, &again.report).unwrap(), encoded);
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    check::<PointsOutput>(text);
    check::<WindowOutput>(text);
    check::<GapReport>(text);
    check::<GapProfile>(text);
    check::<DeloneReport>(text);
    check::<DensityOutput>(text);
    check::<GapHistogram>(text);
    check::<PairCorrelationReport>(text);
});
