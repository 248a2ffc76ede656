//! Parse an Aggregate Report log and print the inter-arrival summary.
//!
//! Uses the bundled fourteen-row sample. The "cv" column is the headline
//! metric: the coefficient of variation of the gaps between request launch
//! times. Values near 1.0 mean the launches look like independent real
//! users; higher means bunching, lower means assembly-line spacing.
//!
//! Run with: cargo run -p arrivalkit --example analyze_sample_log

use arrivalkit::analysis::{interarrival_diffs, per_label_report};
use arrivalkit::ingest::TrimWindow;
use arrivalkit::report::{render_summary_table, summary_title, OutputFormat};
use arrivalkit::sample::aggregate_report;

fn main() {
    let log = aggregate_report();
    println!(
        "parsed {} records spanning {} ms from {} source file(s)\n",
        log.len(),
        log.span_ms(),
        log.source_count()
    );

    let diffs = interarrival_diffs(&log).expect("at least two records");
    let head: Vec<String> = diffs
        .diffs_ms
        .iter()
        .take(6)
        .map(|d| format!("{d:.0}"))
        .collect();
    println!("first gaps (ms): {}", head.join(", "));
    println!(
        "gap count {} over a {:.0} ms window\n",
        diffs.diffs_ms.len(),
        diffs.window_ms
    );

    let rows = per_label_report(&log).expect("non-empty log");
    let title = summary_title("sample", &TrimWindow::ZERO, log.span_ms() / 1000);
    print!(
        "{}",
        render_summary_table(&rows, OutputFormat::Text, Some(&title))
    );
    println!("\n(rows with n < 2 carry dashes: one event is not enough for gap statistics)");
}
