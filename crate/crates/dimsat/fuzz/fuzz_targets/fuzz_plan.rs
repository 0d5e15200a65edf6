//! Feeds arbitrary bytes to the bench-plan JSON deserializer; accepted plans
//! must validate without panicking.

#![no_main]

use libfuzzer_sys::fuzz_target;

use dimsat::bench::BenchPlan;

fuzz_target!(|data: &[u8]| {
    let Ok(plan) = serde_json::from_slice::<BenchPlan>(data) else {
        return;
    };
    let _ = plan.validate();
});
