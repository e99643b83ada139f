//! Acceptance suite: every closed-form identity the engine must reproduce,
//! at tolerance zero, one pass/fail line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines;
//! the extended criteria (slower enumerative counts) run in a second test.

use gwloc::selfcheck::criteria;

fn run(extended: bool) {
    let mut failures: Vec<String> = Vec::new();
    for c in criteria().into_iter().filter(|c| c.extended == extended) {
        let started = std::time::Instant::now();
        match (c.run)() {
            Ok(()) => {
                println!("PASS {:>3}  {} [{:?}]", c.id, c.summary, started.elapsed());
            }
            Err(msg) => {
                println!("FAIL {:>3}  {}: {msg}", c.id, c.summary);
                failures.push(format!("{}: {msg}", c.id));
            }
        }
    }
    assert!(failures.is_empty(), "criteria failed:\n{}", failures.join("\n"));
}

#[test]
fn acceptance_criteria() {
    run(false);
}

#[test]
fn acceptance_extended() {
    run(true);
}
