#![no_main]

use libfuzzer_sys::fuzz_target;
use surfspline::harness::io::{read_convergence_csv, write_convergence_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(records) = read_convergence_csv(data) else {
        return;
    };
    let mut out = Vec::new();
    write_convergence_csv(&mut out, &[], &records).expect("write to memory");
    let again = read_convergence_csv(out.as_slice()).expect("reparse own output");
    assert_eq!(records.len(), again.len());
    assert!(records.iter().zip(&again).all(|(a, b)| a.bitwise_eq(b)));
});
