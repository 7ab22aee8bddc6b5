#![no_main]

use hecke_core::{CensusTable, GroupParams};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for p in [4, 6] {
        if let Ok(table) = CensusTable::from_csv(GroupParams::new(p).unwrap(), text) {
            let again = CensusTable::from_csv(GroupParams::new(p).unwrap(), &table.to_csv()).unwrap();
            assert_eq!(again, table);
        }
    }
});
