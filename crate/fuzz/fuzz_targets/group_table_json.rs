#![no_main]

use libfuzzer_sys::fuzz_target;
use pontryagin_core::group::FiniteGroup;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = FiniteGroup::from_table_json("fuzz", text) {
        let n = g.order();
        for a in 0..n {
            assert_eq!(g.mul(a, g.inverse(a)), g.identity());
        }
    }
});
