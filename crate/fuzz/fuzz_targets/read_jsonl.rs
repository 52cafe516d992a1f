#![no_main]

use libfuzzer_sys::fuzz_target;
use rankmon::ingest::{read_jsonl, write_jsonl, DEFAULT_DAYS};

fuzz_target!(|data: &[u8]| {
    if let Ok(ds) = read_jsonl(data, DEFAULT_DAYS) {
        let mut out = Vec::new();
        write_jsonl(&mut out, &ds).unwrap();
        assert_eq!(read_jsonl(out.as_slice(), DEFAULT_DAYS).unwrap(), ds);
    }
});
