//! Thread count from throughput and cycle time: N = Tps x RT_mean.
//!
//! In a closed loop the thread count, the transaction rate, and the mean
//! round trip (think + response) are locked together. Given a run's scalar
//! summary the toolkit recovers N — a quick sanity check that a test really
//! ran the thread pool it claimed, and an estimator for how many real users
//! a measured page rate represents.
//!
//! Run with: cargo run -p arrivalkit --example cycle_time_capacity

use arrivalkit::analysis::{closed_loop_observed, closed_loop_ratios};
use arrivalkit::ingest::{trim, TrimWindow};
use arrivalkit::simulator::{
    simulate_closed_loop, ClosedLoopConfig, LabelMix, SutModelSpec, ThinkTimeSpec, DEFAULT_EPOCH_MS,
};

fn main() {
    // A seven-step load ladder on 200 threads: load rises as think time
    // falls, and the recovered N stays put.
    let ladder: [(u64, f64, f64, f64, f64); 7] = [
        // run, tps, z_mean, r_mean, r_sdev (milliseconds)
        (1800, 15.91, 12_500.0, 53.0, 155.0),
        (1830, 31.73, 6_250.0, 53.0, 156.0),
        (1900, 46.79, 4_200.0, 54.0, 167.0),
        (1930, 60.26, 3_250.0, 59.0, 179.0),
        (2000, 77.56, 2_500.0, 75.0, 229.0),
        (2030, 118.03, 1_563.0, 134.0, 357.0),
        (2100, 159.16, 1_000.0, 254.0, 536.0),
    ];
    println!("run   tps     z_mean   r_mean  cov_r  rort    n_estimate");
    for (run, tps, z, r, r_sdev) in ladder {
        let ratios = closed_loop_ratios(z, r, r_sdev, tps).expect("valid inputs");
        println!(
            "{run}  {tps:7.2} {z:8.0} {r:8.0}   {:.2}  {:5.2}%  {:8.2}",
            ratios.cov_r.unwrap(),
            ratios.rort_mean * 100.0,
            ratios.n_estimate
        );
    }

    // The same number falls out of a simulated log, measured end to end.
    let config = ClosedLoopConfig {
        threads: 200,
        horizon_ms: 1_500_000,
        think: ThinkTimeSpec::Uniform {
            offset_ms: 0.0,
            range_ms: 12_500.0,
        },
        sut: SutModelSpec::Independent {
            r_mean_ms: 53.0,
            cov_r: 2.95,
        },
        seed: 1830,
        labels: LabelMix::single(),
        epoch_ms: DEFAULT_EPOCH_MS,
    };
    let log = simulate_closed_loop(&config).expect("valid config");
    let trimmed = trim(&log, &TrimWindow::new(120_000, 180_000).unwrap()).expect("window");
    let observed = closed_loop_observed(&trimmed).expect("closed-loop log");
    println!(
        "\nsimulated check: tps {:.2} x rt {:.3} s = {:.1} threads (configured 200)",
        observed.tps,
        observed.rt_mean / 1000.0,
        observed.n_estimate
    );
}
