//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature (default) work is spread over a rayon pool;
//! without it, or with one worker, everything runs on the calling thread.
//! Either way results come back in input order, so output never depends on
//! the worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug)]
pub struct Executor {
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
}

impl Default for Executor {
    fn default() -> Self {
        Self::with_workers(0)
    }
}

impl Executor {
    pub fn sequential() -> Self {
        Executor {
            #[cfg(feature = "parallel")]
            pool: None,
        }
    }

    /// `0` means one worker per available core; `1` is sequential.
    pub fn with_workers(workers: usize) -> Self {
        if workers == 1 {
            return Self::sequential();
        }
        #[cfg(feature = "parallel")]
        {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .expect("failed to start worker pool");
            Executor { pool: Some(pool) }
        }
        #[cfg(not(feature = "parallel"))]
        Self::sequential()
    }

    pub fn workers(&self) -> usize {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            return pool.current_num_threads();
        }
        1
    }

    pub fn is_parallel(&self) -> bool {
        #[cfg(feature = "parallel")]
        return self.pool.is_some();
        #[cfg(not(feature = "parallel"))]
        false
    }

    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            return pool.install(|| items.par_iter().map(&f).collect());
        }
        items.iter().map(f).collect()
    }

    pub fn try_map<T, R, E, F>(&self, items: &[T], f: F) -> Result<Vec<R>, E>
    where
        T: Sync,
        R: Send,
        E: Send,
        F: Fn(&T) -> Result<R, E> + Sync + Send,
    {
        // Collect everything, then surface the first error in input order so the
        // reported failure does not depend on scheduling.
        self.map(items, f).into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..10_000).collect();
        let seq = Executor::sequential().map(&items, |x| x * x);
        let par = Executor::with_workers(4).map(&items, |x| x * x);
        assert_eq!(seq, par);
    }

    #[test]
    fn first_error_in_order() {
        let items: Vec<u64> = (0..100).collect();
        let res: Result<Vec<u64>, u64> =
            Executor::sequential().try_map(&items, |&x| if x >= 50 { Err(x) } else { Ok(x) });
        assert_eq!(res, Err(50));
    }
}
