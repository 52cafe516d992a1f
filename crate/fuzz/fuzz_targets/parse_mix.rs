#![no_main]

use libfuzzer_sys::fuzz_target;
use rankmon::ingest::parse_mix;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(mix) = parse_mix(src) {
        let n = src.len() % 1000;
        assert_eq!(mix.counts(n).values().sum::<usize>(), n);
    }
});
