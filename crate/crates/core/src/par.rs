//! Data-parallel helpers. With the `parallel` feature, work is spread over
//! a rayon pool of the requested size; otherwise, or with `jobs == 1`,
//! everything runs sequentially in input order.

/// Worker count for the parallel helpers. `0` means "use the rayon
/// default".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Jobs(pub usize);

impl Default for Jobs {
    fn default() -> Self {
        Jobs(1)
    }
}

impl Jobs {
    pub fn sequential() -> Self {
        Jobs(1)
    }

    pub fn is_sequential(&self) -> bool {
        self.0 == 1 || !cfg!(feature = "parallel")
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(jobs: Jobs, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Send + Sync,
{
    if jobs.is_sequential() {
        return items.into_iter().map(f).collect();
    }
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        with_pool(jobs, || items.into_par_iter().map(&f).collect())
    }
    #[cfg(not(feature = "parallel"))]
    unreachable!()
}

/// Runs `f` inside a pool of `jobs` threads.
#[cfg(feature = "parallel")]
fn with_pool<R: Send>(jobs: Jobs, f: impl FnOnce() -> R + Send) -> R {
    if jobs.0 == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs.0).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let v: Vec<u64> = (0..1000).collect();
        let seq = map(Jobs(1), v.clone(), |x| x * x);
        let par = map(Jobs(4), v, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(seq[999], 999 * 999);
    }
}
