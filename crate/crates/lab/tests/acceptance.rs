//! Every acceptance criterion at its stated tolerance, one PASS/FAIL line
//! each. Runs the shipped configs through the library.

use std::path::PathBuf;
use std::process::ExitCode;

use minorlab::{ExperimentConfig, ResultRecord, Suite, SuiteReport};

fn config(suite: Suite) -> ExperimentConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("configs/{}.json", suite.name()));
    ExperimentConfig::load(&path).unwrap()
}

fn run(cfg: &ExperimentConfig) -> SuiteReport {
    minorlab::run(cfg).unwrap_or_else(|e| panic!("{} failed to run: {e}", cfg.experiment))
}

fn rows<'a>(r: &'a SuiteReport, prefix: &'a str) -> impl Iterator<Item = &'a ResultRecord> + 'a {
    r.records.iter().filter(move |x| x.statistic.starts_with(prefix))
}

fn row<'a>(r: &'a SuiteReport, name: &str) -> &'a ResultRecord {
    r.records
        .iter()
        .find(|x| x.statistic == name)
        .unwrap_or_else(|| panic!("no row {name}"))
}

fn all_pass<'a>(it: impl IntoIterator<Item = &'a ResultRecord>) -> (bool, usize) {
    let v: Vec<_> = it.into_iter().collect();
    (!v.is_empty() && v.iter().all(|r| r.pass), v.len())
}

struct Tally {
    failed: Vec<u32>,
}

impl Tally {
    fn check(&mut self, id: u32, what: &str, ok: bool, detail: String) {
        println!("criterion {id:>2} {} {what}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failed.push(id);
        }
    }
}

fn fmt_row(r: &ResultRecord) -> String {
    match r.p_value {
        Some(p) => format!("{} = {:.4e}, p = {p:.4}", r.statistic, r.distance),
        None => format!("{} = {:.4e}", r.statistic, r.distance),
    }
}

fn main() -> ExitCode {
    let mut t = Tally { failed: Vec::new() };

    let oracles = run(&config(Suite::Oracles));
    let int = row(&oracles, "lpp_dp_vs_bruteforce_int");
    let real = row(&oracles, "lpp_dp_vs_bruteforce_real");
    let ms = int.ms + real.ms;
    t.check(
        1,
        "lattice DP = brute force (500 integer, 200 real arrays)",
        int.pass && real.pass && ms < 30_000,
        format!("{} mismatches, real residual {:.1e}, {ms} ms", int.distance, real.distance),
    );
    let rsk = row(&oracles, "lpp_dp_vs_rsk_shape");
    t.check(
        2,
        "lattice DP = RSK shape partial sums (1000 geometric arrays)",
        rsk.pass && rsk.ms < 60_000,
        format!("{} mismatches, {} ms", rsk.distance, rsk.ms),
    );
    let paths = row(&oracles, "path_normalization_failures");
    t.check(
        3,
        "path normalization postconditions (1e4 collections)",
        paths.pass && paths.ms < 60_000,
        format!("{} failures, {} ms", paths.distance, paths.ms),
    );

    let markov = run(&config(Suite::Markov));
    let (ok, n) = all_pass(rows(&markov, "pathwise_residual"));
    let worst = rows(&markov, "pathwise_residual").map(|r| r.distance).fold(0.0, f64::max);
    t.check(4, "pathwise literal = optimized Markov functional, k = 2..6", ok && n == 5, format!("max residual {worst:.1e}"));

    let (ok, _) = all_pass(["forced_collection_residual", "diagonal_telescoping_residual", "interlacing_defect"].map(|s| row(&oracles, s)));
    t.check(
        5,
        "forced collection, diagonal telescoping, interlacing",
        ok,
        ["forced_collection_residual", "diagonal_telescoping_residual", "interlacing_defect"]
            .map(|s| fmt_row(row(&oracles, s)))
            .join("; "),
    );

    let cfg = config(Suite::Theorem1);
    let th = run(&cfg);
    let pair_rows: Vec<&ResultRecord> = th.records.iter().filter(|r| r.statistic == "w1" || r.statistic == "ks").collect();
    let mean_w1 = |r: &SuiteReport| {
        let w: Vec<f64> = r.records.iter().filter(|x| x.statistic == "w1").map(|x| x.distance).collect();
        w.iter().sum::<f64>() / w.len() as f64
    };
    let mut fine = cfg.clone();
    fine.n_steps *= 2;
    fine.null_runs = 0;
    let th_fine = run(&fine);
    let (m0, m1) = (mean_w1(&th), mean_w1(&th_fine));
    let (ok, n) = all_pass(pair_rows.iter().copied());
    let worst_w1 = pair_rows.iter().filter(|r| r.statistic == "w1").map(|r| r.distance).fold(0.0, f64::max);
    let min_p = pair_rows.iter().filter_map(|r| r.p_value).fold(1.0, f64::min);
    t.check(
        6,
        "GUE minors vs maximal Brownian functional, M = 3",
        ok && n == 12 && m1 - m0 <= 0.01 && th.wall_ms < 600_000,
        format!(
            "max W1 {worst_w1:.4}, min KS p {min_p:.4}; mean W1 {m0:.4} at {} steps, {m1:.4} at {} steps; {} ms",
            cfg.n_steps, fine.n_steps, th.wall_ms
        ),
    );

    let pre = run(&config(Suite::Prelimit));
    let (ok_w, n_w) = all_pass(rows(&pre, "w1_coord"));
    let energy = row(&pre, "energy_joint");
    let worst = rows(&pre, "w1_coord").map(|r| r.distance).fold(0.0, f64::max);
    t.check(
        7,
        "geometric-array shape pattern vs GUE minor spectra, M = 2",
        ok_w && n_w == 3 && energy.pass,
        format!("max W1 {worst:.4}; {}", fmt_row(energy)),
    );

    let c1 = run(&config(Suite::Corollary1));
    let (ok, n) = all_pass(&c1.records);
    t.check(
        8,
        "longest nondecreasing subsequence vs GUE limit, uniform k = 3",
        ok && n == 3,
        c1.records.iter().map(fmt_row).collect::<Vec<_>>().join("; "),
    );

    let c2 = run(&config(Suite::Corollary2));
    let energy = row(&c2, "energy_joint");
    t.check(9, "word RSK shape vs traceless 3x3 GUE spectrum (joint)", energy.pass, fmt_row(energy));

    let (ok_a, n_a) = all_pass(rows(&markov, "corr_max_dev"));
    let worst = rows(&markov, "corr_max_dev").map(|r| r.distance).fold(0.0, f64::max);
    let b = row(&markov, "w1_k3_vs_traceless_gue");
    let c = row(&markov, "sigma_u_disagreements");
    t.check(
        10,
        "Markov covariance, k = 3 reduction, Sigma_u criterion",
        ok_a && n_a == 15 && b.pass && c.pass,
        format!("(a) max dev {worst:.4} over {n_a} specs; (b) {}; (c) {} disagreements", fmt_row(b), c.distance),
    );

    let null = th
        .records
        .iter()
        .find(|r| r.statistic.starts_with("null_ks_runs"))
        .expect("theorem1 config enables the null calibration");
    t.check(
        11,
        "null calibration of the GUE side",
        null.pass && cfg.null_runs == 200,
        format!("{} of {} runs with every KS p >= 1e-3", null.distance, cfg.null_runs),
    );

    if t.failed.is_empty() {
        println!("acceptance: all 11 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {:?}", t.failed);
        ExitCode::FAILURE
    }
}
