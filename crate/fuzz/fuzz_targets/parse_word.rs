#![no_main]

use hecke_core::word::parse_syllables;
use hecke_core::{GroupParams, Word};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&p, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let _ = parse_syllables(text);
    let Ok(params) = GroupParams::new(i64::from(p % 14)) else { return };
    if let Ok(w) = Word::parse(params, text) {
        let again = Word::parse(params, &w.to_string()).expect("display output must parse");
        assert_eq!(again, w);
        assert!(w.multiply(&w.inverse()).unwrap().is_identity());
    }
});
