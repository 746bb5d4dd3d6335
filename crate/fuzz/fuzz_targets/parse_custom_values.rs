#![no_main]

use libfuzzer_sys::fuzz_target;
use spiral_delone::parse::parse_custom_values;
use spiral_delone::phase::{frac_phase, PhaseFamily};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(values) = parse_custom_values(text) else { return };
    assert!(values.iter().all(|v| v.is_finite()));
    if let Ok(family) = PhaseFamily::custom(values.clone()) {
        for n in 1..=values.len() as u64 {
            let f = frac_phase(&family, n).expect("index within the value list");
            assert!((0.0..1.0).contains(&f));
        }
    }
});
