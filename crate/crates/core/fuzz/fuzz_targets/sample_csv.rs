#![no_main]

use libfuzzer_sys::fuzz_target;
use surfspline::harness::io::read_sample_csv;

fuzz_target!(|data: &[u8]| {
    if let Ok(d) = read_sample_csv(data) {
        assert_eq!(d.points.len(), d.values.len());
        assert!(d.points.iter().all(|p| p.len() == d.dim()));
        assert!(d.values.iter().all(|v| v.is_finite()));
    }
});
