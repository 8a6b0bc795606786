#![no_main]

use libfuzzer_sys::fuzz_target;
use pontryagin_core::verify::{summary_table, RunReport};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(report) = RunReport::from_json(text) {
        let _ = summary_table(&report);
    }
});
