#![no_main]

use libfuzzer_sys::fuzz_target;
use rankmon::ingest::{read_csv, write_csv, DEFAULT_DAYS};

fuzz_target!(|data: &[u8]| {
    if let Ok(ds) = read_csv(data, DEFAULT_DAYS) {
        let mut out = Vec::new();
        write_csv(&mut out, &ds).unwrap();
        assert_eq!(read_csv(out.as_slice(), DEFAULT_DAYS).unwrap(), ds);
    }
});
