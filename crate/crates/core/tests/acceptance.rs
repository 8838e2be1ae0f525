//! Runs every acceptance criterion over its full window and prints one line
//! per criterion.

use adlv_core::selfcheck::{Criterion, Selfcheck, Window};

#[test]
fn acceptance() {
    let sc = Selfcheck::new(Window::default());
    let mut failed = Vec::new();
    for c in Criterion::ALL {
        let outcome = sc.run(c);
        println!("{}", outcome.summary());
        for note in &outcome.notes {
            println!("    note: {note}");
        }
        for f in &outcome.failures {
            println!("    {f}");
        }
        if !outcome.passed() {
            failed.push(c);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
