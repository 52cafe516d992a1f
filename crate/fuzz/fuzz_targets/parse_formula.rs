#![no_main]

use libfuzzer_sys::fuzz_target;
use rankmon::{parse_formula, print_formula};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    match parse_formula(src) {
        Ok(f) => {
            let text = print_formula(&f);
            assert_eq!(parse_formula(&text).as_ref(), Ok(&f), "{text}");
        }
        Err(err) => {
            assert!(err.span.end <= src.len());
            let _ = err.render(src);
        }
    }
});
