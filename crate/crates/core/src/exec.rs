//! Data-parallel helpers.
//!
//! With the `parallel` feature (default) the helpers dispatch to rayon;
//! without it, or inside [`sequential`], they run on the calling thread.
//! Every helper preserves input order, so results never depend on the
//! execution strategy.

use std::cell::Cell;

thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Runs `f` with all helpers on this thread forced onto the sequential path.
pub fn sequential<R>(f: impl FnOnce() -> R) -> R {
    let prev = FORCE_SEQUENTIAL.with(|c| c.replace(true));
    let out = f();
    FORCE_SEQUENTIAL.with(|c| c.set(prev));
    out
}

/// True when the helpers would currently use rayon.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel") && !FORCE_SEQUENTIAL.with(|c| c.get())
}

/// Order-preserving map over a slice.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() && items.len() > 1 {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Order-preserving map over `0..n`.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if is_parallel() && n > 1 {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// Applies `f(row_index, row)` to every row of a row-major buffer.
/// Falls back to a plain loop when the buffer holds fewer than `min_len`
/// entries.
pub fn for_each_row_mut<T, F>(buf: &mut [T], cols: usize, min_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    if cols == 0 {
        return;
    }
    #[cfg(feature = "parallel")]
    if is_parallel() && buf.len() >= min_len {
        use rayon::prelude::*;
        buf.par_chunks_mut(cols).enumerate().for_each(|(i, row)| f(i, row));
        return;
    }
    let _ = min_len;
    for (i, row) in buf.chunks_mut(cols).enumerate() {
        f(i, row);
    }
}
