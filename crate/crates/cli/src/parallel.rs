use std::collections::BTreeMap;

use qsl_core::sweep::{evaluate_chi, evaluate_row, ChiKey, SweepSpec, SweepTable};
use qsl_core::Result;
use rayon::prelude::*;

/// Same table as [`qsl_core::sweep::run_sweep`], with chi values and rows
/// evaluated on `threads` workers (0 = rayon's default). Every row is a pure
/// function of its task, and `collect` keeps grid order, so the output does
/// not depend on the worker count.
pub fn run_sweep_parallel(spec: &SweepSpec, threads: usize) -> Result<SweepTable> {
    let tasks = spec.tasks()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    let rows = pool.install(|| {
        let chis: BTreeMap<ChiKey, Result<f64>> = SweepSpec::chi_keys(&tasks)
            .into_par_iter()
            .map(|(key, packet)| (key, evaluate_chi(&packet, spec.tol)))
            .collect();
        tasks
            .par_iter()
            .map(|t| evaluate_row(t, chis[&ChiKey::of(&t.params.packet)], spec))
            .collect()
    });
    Ok(SweepTable {
        spec: spec.clone(),
        rows,
    })
}
