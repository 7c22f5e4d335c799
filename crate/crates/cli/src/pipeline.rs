//! Worker pool for batch stages. Output order always follows input
//! order, so results are independent of the worker count.

use anyhow::Result;
use rayon::prelude::*;

pub fn run_pool<T, R, F>(jobs: Option<usize>, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| anyhow::anyhow!("building worker pool: {e}"))?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_matches_input_regardless_of_jobs() {
        let items: Vec<usize> = (0..500).collect();
        let serial = run_pool(Some(1), &items, |n| n * 3).unwrap();
        let parallel = run_pool(Some(8), &items, |n| n * 3).unwrap();
        let default = run_pool(None, &items, |n| n * 3).unwrap();
        assert_eq!(serial, parallel);
        assert_eq!(serial, default);
        assert_eq!(serial[499], 1497);
    }
}
