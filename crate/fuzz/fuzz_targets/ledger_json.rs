#![no_main]

use hecke_core::ledger::ClaimLedger;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ledger) = ClaimLedger::from_json(text) {
        let _ = ledger.tally();
        let again = ClaimLedger::from_json(&ledger.to_json()).unwrap();
        assert_eq!(again, ledger);
    }
});
