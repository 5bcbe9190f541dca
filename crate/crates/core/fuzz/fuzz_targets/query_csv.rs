#![no_main]

use libfuzzer_sys::fuzz_target;
use surfspline::harness::io::read_query_csv;

fuzz_target!(|data: &[u8]| {
    if let Ok((cols, rows)) = read_query_csv(data) {
        assert!(rows.iter().all(|r| r.len() == cols.len()));
    }
});
