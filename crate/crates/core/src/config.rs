//! Tolerances and search parameters shared across the crate.

use serde::{Deserialize, Serialize};

/// Numerical tolerances. Defaults: 1e-12 for linear algebra, 1e-9 for
/// geometric predicates, and a separate window for treating two angles as
/// equal when deduplicating angle value sets.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Tolerances {
    /// Matrix-level tolerance (determinant normalization, relator residuals).
    pub matrix: f64,
    /// Geometric predicate tolerance (incidence, equality of lengths/angles).
    pub geometric: f64,
    /// Deduplication window for angle value sets.
    pub angle_dedup: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            matrix: 1e-12,
            geometric: 1e-9,
            angle_dedup: 1e-7,
        }
    }
}

/// Parameters of the translate-search used when locating crossings between
/// geodesics. The defaults are generous for surfaces whose Fenchel-Nielsen
/// lengths lie in roughly `[0.5, 4]`; saturation tests double them and check
/// that nothing changes.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SearchParams {
    /// Radius of the local ball of deck translates examined around each
    /// frame of the word walk.
    pub local_ball_radius: f64,
    /// Extra slack added to breadth-first pruning when enumerating orbit
    /// balls; covers backtracking of non-geodesic words.
    pub bfs_slack: f64,
    /// Half-width of the window (along the walked geodesic) in which
    /// candidate crossings are accepted in each frame.
    pub frame_window: f64,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            local_ball_radius: 9.0,
            bfs_slack: 2.5,
            frame_window: 5.0,
        }
    }
}
