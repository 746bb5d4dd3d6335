#![no_main]

use libfuzzer_sys::fuzz_target;
use spiral_delone::gaps::circular_gaps;

fuzz_target!(|raw: Vec<u32>| {
    let values: Vec<f64> = raw.iter().map(|&v| f64::from(v) / 4294967296.0).collect();
    match circular_gaps(&values) {
        Ok(gaps) => {
            assert_eq!(gaps.len(), values.len());
            assert!(gaps.iter().all(|&g| (0.0..=1.0).contains(&g)));
            let total: f64 = gaps.iter().sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
        Err(_) => assert!(values.is_empty()),
    }
});
