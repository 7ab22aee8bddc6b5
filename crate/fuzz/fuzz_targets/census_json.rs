#![no_main]

use hecke_core::CensusTable;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(table) = CensusTable::from_json(text) {
        let again = CensusTable::from_json(&table.to_json()).unwrap();
        assert_eq!(again, table);
    }
});
