//! Statistical contracts of the simulator, measured through the analysis
//! pipeline the way a user would.

use arrivalkit::analysis::{
    closed_loop_observed, default_thread_ordering, interarrival_diffs, summarize, thread_curve,
};
use arrivalkit::ingest::{parse_log, trim, HeaderMode, TrimWindow};
use arrivalkit::report::write_records_csv;
use arrivalkit::simulator::{
    simulate_closed_loop, simulate_open_loop, ClosedLoopConfig, LabelMix, OpenLoopConfig,
    SutModelSpec, ThinkTimeSpec, DEFAULT_EPOCH_MS,
};

fn uniform_think(mean_ms: f64) -> ThinkTimeSpec {
    ThinkTimeSpec::Uniform {
        offset_ms: 0.0,
        range_ms: 2.0 * mean_ms,
    }
}

fn closed(
    threads: u32,
    think: ThinkTimeSpec,
    sut: SutModelSpec,
    horizon_ms: u64,
    seed: u64,
) -> ClosedLoopConfig {
    ClosedLoopConfig {
        threads,
        horizon_ms,
        think,
        sut,
        seed,
        labels: LabelMix::single(),
        epoch_ms: DEFAULT_EPOCH_MS,
    }
}

/// Tps × RT_mean recovers the thread count (within 2%) for closed loops with
/// independent response times, across the whole seven-run load ladder.
#[test]
fn closed_loop_throughput_times_cycle_time_recovers_thread_count() {
    let ladder: [(f64, f64, f64); 7] = [
        (12_500.0, 53.0, 2.89),
        (6_250.0, 53.0, 2.95),
        (4_200.0, 54.0, 3.08),
        (3_250.0, 59.0, 3.03),
        (2_500.0, 75.0, 3.06),
        (1_563.0, 134.0, 2.67),
        (1_000.0, 254.0, 2.11),
    ];
    let window = TrimWindow::new(120_000, 180_000).unwrap();
    for (z_mean, r_mean, cov_r) in ladder {
        let sut = SutModelSpec::Independent {
            r_mean_ms: r_mean,
            cov_r,
        };
        let cfg = closed(200, uniform_think(z_mean), sut, 1_500_000, 1830);
        let set = simulate_closed_loop(&cfg).unwrap();
        let trimmed = trim(&set, &window).unwrap();
        let observed = closed_loop_observed(&trimmed).unwrap();
        let err = (observed.n_estimate - 200.0).abs() / 200.0;
        assert!(
            err <= 0.02,
            "z {z_mean}: n_estimate {:.2} off by {:.2}%",
            observed.n_estimate,
            err * 100.0
        );
    }
}

/// Merging k uniform-think threads drives the gap CoV from 1/sqrt(3) toward
/// 1 as k grows, with at least 20000 events behind every point.
#[test]
fn superposition_of_uniform_renewal_streams_approaches_poisson() {
    let expectations: [(u32, f64, f64); 5] = [
        // (threads, lower bound, upper bound)
        (1, 0.557, 0.597),
        (2, 0.68, 0.83),
        (10, 0.93, f64::INFINITY),
        (50, 0.97, f64::INFINITY),
        (200, 0.97, 1.03),
    ];
    for (threads, lo, hi) in expectations {
        // Horizon sized so every point rests on at least 20000 launches
        // (mean cycle ~6253 ms, padded for horizon-edge truncation).
        let horizon = (20_000.0 * 6_500.0 / threads as f64).ceil() as u64;
        let cfg = closed(
            threads,
            uniform_think(6_250.0),
            SutModelSpec::Zero,
            horizon,
            1,
        );
        let set = simulate_closed_loop(&cfg).unwrap();
        assert!(
            set.len() >= 20_000,
            "{threads} threads: {} events",
            set.len()
        );
        let cv = summarize(&interarrival_diffs(&set).unwrap(), "t")
            .stats
            .unwrap()
            .cv
            .unwrap();
        assert!(
            cv >= lo && cv <= hi,
            "{threads} threads: cv {cv:.4} outside [{lo}, {hi}]"
        );
    }
}

/// The emitted CSV is identical bytes for identical configs, and survives a
/// parse round trip.
#[test]
fn emitted_csv_is_deterministic_and_parseable() {
    let sut = SutModelSpec::Queue {
        servers: 2,
        service_mean_ms: 12.0,
        service_cov: 2.0,
    };
    let cfg = closed(
        8,
        ThinkTimeSpec::Exponential { mean_ms: 150.0 },
        sut,
        120_000,
        99,
    );
    let a = write_records_csv(&simulate_closed_loop(&cfg).unwrap());
    let b = write_records_csv(&simulate_closed_loop(&cfg).unwrap());
    assert_eq!(a, b, "same config, same seed must emit identical bytes");

    let reparsed = parse_log(a.as_bytes(), HeaderMode::Present).unwrap();
    assert_eq!(write_records_csv(&reparsed), a);

    let open = OpenLoopConfig {
        arrivals: 5_000,
        horizon_ms: 10_000_000,
        seed: 5,
        labels: LabelMix::parse("a:2,b:1").unwrap(),
        epoch_ms: DEFAULT_EPOCH_MS,
    };
    let c = write_records_csv(&simulate_open_loop(&open).unwrap());
    let d = write_records_csv(&simulate_open_loop(&open).unwrap());
    assert_eq!(c, d);
}

/// The full-pool CoV of the curve equals the Total summary CoV on the same
/// simulated log, tying the two analysis paths together end to end.
#[test]
fn curve_endpoint_agrees_with_total_summary_on_simulated_log() {
    let cfg = closed(20, uniform_think(500.0), SutModelSpec::Zero, 600_000, 3);
    let set = simulate_closed_loop(&cfg).unwrap();
    let total_cv = summarize(&interarrival_diffs(&set).unwrap(), "t")
        .stats
        .unwrap()
        .cv;
    let ordering = default_thread_ordering(&set);
    let points = thread_curve(&set, &ordering, &[20]).unwrap();
    assert_eq!(points[0].cov_drt, total_cv);
}
