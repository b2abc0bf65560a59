use super::estimate::{estimate, EstimateInputs, ResourceEstimate};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    Sequential,
    /// Data-parallel over the worker pool; sequential when built without
    /// the `parallel` feature.
    #[default]
    Parallel,
}

/// Order-preserving map over independent cells.
pub(crate) fn map_cells<T, R, F>(items: &[T], mode: ExecMode, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        ExecMode::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        #[cfg(not(feature = "parallel"))]
        ExecMode::Parallel => items.iter().map(f).collect(),
    }
}

/// Evaluate many independent estimates; results keep input order.
pub fn evaluate_all(cells: &[EstimateInputs<'_>], mode: ExecMode) -> Vec<Result<ResourceEstimate>> {
    map_cells(cells, mode, estimate)
}
