#![no_main]

use libfuzzer_sys::fuzz_target;
use pontryagin_core::convex::{CoproductPoint, CoproductSpace};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let space = CoproductSpace::density(&[1, 1, 2]).expect("valid dims");
    if let Ok(p) = CoproductPoint::from_json_str(text, &space, 1e-9) {
        let total: f64 = p.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-6);
    }
});
