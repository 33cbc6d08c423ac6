use shiftlab_core::zoo;
use shiftlab_core::SearchConfig;

#[test]
fn every_catalogued_expectation_holds() {
    let cfg = SearchConfig::default();
    let mut failures = Vec::new();
    for entry in zoo::entries() {
        for check in &entry.checks {
            let t = std::time::Instant::now();
            match check.run(&entry.spec, &cfg) {
                Ok(o) if o.passed => {}
                Ok(o) => failures.push(format!("{}: {} ({})", entry.name, check.note, o.detail)),
                Err(e) => failures.push(format!("{}: {} (error: {e})", entry.name, check.note)),
            }
            eprintln!(
                "{:>8.3}s {} {}",
                t.elapsed().as_secs_f64(),
                entry.name,
                check.note
            );
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}
