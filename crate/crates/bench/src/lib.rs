//! Shared fixtures for the benchmarks.

use percolab_core::percolation::{assign_uniforms, Configuration, EdgeLabels};
use percolab_core::GraphWindow;

/// A `side × side` square window.
pub fn square(side: usize) -> GraphWindow {
    GraphWindow::hypercubic(2, side).expect("valid window")
}

/// Labels of sample `sample` under seed 1, and the configuration at `p`.
pub fn sample(window: &GraphWindow, sample: u64, p: f64) -> (EdgeLabels, Configuration) {
    let labels = assign_uniforms(window, 1, sample);
    let config = labels.threshold(p).expect("valid level");
    (labels, config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_agree() {
        let w = square(8);
        let (labels, config) = sample(&w, 3, 0.5);
        assert_eq!(labels.len(), w.num_edges());
        assert_eq!(config.num_edges(), w.num_edges());
    }
}
