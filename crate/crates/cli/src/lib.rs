//! Configuration, execution and report emission behind the `pb` binary.

pub mod config;
pub mod output;

use pb_core::verify::{run_suite, Report};

use config::RunConfig;

/// Runs every point of `config`, at most `jobs` at a time (`None` uses all
/// cores). Reports come back in point order.
pub fn execute(config: &RunConfig, jobs: Option<usize>) -> Vec<Report> {
    let points = config.model_points();
    let run = || pb_core::par::Exec::default().map(&points, |p| run_suite(p, &config.suite));
    #[cfg(feature = "parallel")]
    {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = jobs {
            builder = builder.num_threads(n.max(1));
        }
        match builder.build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        run()
    }
}
