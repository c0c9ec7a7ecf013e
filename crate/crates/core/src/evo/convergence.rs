use serde::{Deserialize, Serialize};

pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// How far ahead improvements are measured when looking for convergence.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "generations")]
pub enum ConvergenceWindow {
    /// Up to the last generation of the run.
    #[default]
    Tail,
    /// The next `w` generations.
    Fixed(usize),
}

/// 1-based generation after which the best-so-far trace never improves by
/// more than `threshold` within the window. Generations with no feasible
/// solution yet are never converged. Returns `trace.len()` when only the
/// final generation qualifies and 0 for an empty trace.
pub fn detect_convergence(trace: &[Option<f64>], threshold: f64, window: ConvergenceWindow) -> usize {
    let n = trace.len();
    for k in 0..n {
        let Some(here) = trace[k] else { continue };
        let end = match window {
            ConvergenceWindow::Tail => n - 1,
            ConvergenceWindow::Fixed(w) => (k + w).min(n - 1),
        };
        let ahead = trace[k..=end].iter().all(|v| v.is_some_and(|v| v - here <= threshold));
        if ahead {
            return k + 1;
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[f64]) -> Vec<Option<f64>> {
        v.iter().copied().map(Some).collect()
    }

    #[test]
    fn constant_trace() {
        assert_eq!(detect_convergence(&s(&[3.0; 10]), 0.5, ConvergenceWindow::Tail), 1);
    }

    #[test]
    fn steady_improvement_never_converges_early() {
        let t: Vec<f64> = (0..20).map(f64::from).collect();
        assert_eq!(detect_convergence(&s(&t), 0.5, ConvergenceWindow::Tail), 20);
    }

    #[test]
    fn plateau_after_jump() {
        let t = s(&[0.0, 10.0, 10.3, 10.4, 10.45, 10.45]);
        assert_eq!(detect_convergence(&t, 0.5, ConvergenceWindow::Tail), 2);
    }

    #[test]
    fn window_reading_is_looser() {
        let t = s(&[0.0, 0.3, 0.6, 0.9, 1.2, 1.5]);
        assert_eq!(detect_convergence(&t, 0.5, ConvergenceWindow::Tail), 5);
        assert_eq!(detect_convergence(&t, 0.5, ConvergenceWindow::Fixed(1)), 1);
    }

    #[test]
    fn infeasible_prefix() {
        let t = vec![None, None, Some(4.0), Some(4.1)];
        assert_eq!(detect_convergence(&t, 0.5, ConvergenceWindow::Tail), 3);
        assert_eq!(detect_convergence(&[None, None], 0.5, ConvergenceWindow::Tail), 2);
        assert_eq!(detect_convergence(&[], 0.5, ConvergenceWindow::Tail), 0);
    }
}
