//! Deterministic chunked execution.
//!
//! Samples are split into fixed-size chunks; chunk `i` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` on stream `i`. Chunk results are
//! returned in chunk order, so any reduction over them is independent of how
//! many workers ran the chunks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Samples per chunk.
pub const CHUNK_SIZE: u64 = 8192;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "FDCAP_WORKERS";

/// `FDCAP_WORKERS` if set to a positive integer, else the available
/// parallelism.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// The generator for chunk `index`.
pub fn chunk_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn chunk_len(n: u64, index: u64) -> u64 {
    (n - index * CHUNK_SIZE).min(CHUNK_SIZE)
}

fn chunk_count(n: u64) -> u64 {
    n.div_ceil(CHUNK_SIZE)
}

/// Runs `f(chunk_len, rng)` for every chunk on the calling thread.
pub fn run_chunks_sequential<T, F>(seed: u64, n: u64, f: F) -> Vec<T>
where
    F: Fn(u64, &mut ChaCha8Rng) -> T,
{
    (0..chunk_count(n))
        .map(|i| f(chunk_len(n, i), &mut chunk_rng(seed, i)))
        .collect()
}

/// Runs the chunks on a dedicated pool of `workers` threads.
#[cfg(feature = "parallel")]
pub fn run_chunks_parallel<T, F>(seed: u64, n: u64, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> T + Sync,
{
    use rayon::prelude::*;
    let job = || {
        (0..chunk_count(n))
            .into_par_iter()
            .map(|i| f(chunk_len(n, i), &mut chunk_rng(seed, i)))
            .collect()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(job),
        Err(_) => run_chunks_sequential(seed, n, f),
    }
}

/// Parallel when built with `parallel` and `workers > 1`, else sequential.
pub fn run_chunks<T, F>(seed: u64, n: u64, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> T + Sync,
{
    #[cfg(feature = "parallel")]
    if workers > 1 {
        return run_chunks_parallel(seed, n, workers, f);
    }
    let _ = workers;
    run_chunks_sequential(seed, n, f)
}
