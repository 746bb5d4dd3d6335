#![no_main]

use libfuzzer_sys::fuzz_target;
use spiral_delone::phase::Alpha;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(alpha) = Alpha::parse(text) {
        assert!(alpha.value().is_finite());
        let again = Alpha::parse(&alpha.to_string()).expect("display output parses");
        assert_eq!(again, alpha);
    }
});
