#![no_main]

use libfuzzer_sys::fuzz_target;
use spiral_delone::parse::parse_sector;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = parse_sector(text) {
        let width = s.b() - s.a();
        assert!((0.0..=1.0).contains(&width));
        assert!(0.0 <= s.c() && s.c() <= s.d());
        let range = s.index_range();
        assert!(range.start <= range.end);
        assert!(s.normalized_area() >= 0.0);
    }
});
