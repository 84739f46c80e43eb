//! Fixtures shared by the benchmarks.

use laminar_core::{CriticalPortrait, CriticalQuadrilateral};

/// Two preperiodic critical leaves; dendritic.
pub fn leaf_pair() -> CriticalPortrait {
    portrait(&[
        [(1, 9), (1, 9), (4, 9), (4, 9)],
        [(2, 3), (2, 3), (0, 1), (0, 1)],
    ])
}

fn portrait(quads: &[[(i64, i64); 4]]) -> CriticalPortrait {
    let q = quads
        .iter()
        .map(|v| CriticalQuadrilateral::fracs(3, *v).expect("critical"))
        .collect();
    CriticalPortrait::new(3, q).expect("portrait")
}
