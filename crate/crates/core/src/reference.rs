//! Published reference values the CLI diffs against.

use crate::paths::{PathClass, PathClassSet};

/// Average distance table: `(n, HC, BH, BVH)`.
pub const AVERAGE_DISTANCE: [(u32, f64, f64, f64); 6] = [
    (1, 1.0, 1.0, 1.0),
    (2, 1.0, 2.25, 1.93),
    (3, 1.5, 3.156, 2.83),
    (4, 2.0, 4.14, 3.82),
    (5, 2.5, 5.12, 4.81),
    (6, 3.0, 6.11, 5.79),
];

/// Tolerance applied to BH/BVH average-distance cells.
pub const AVERAGE_DISTANCE_TOLERANCE: f64 = 0.07;

pub const RHO_GRID: [f64; 3] = [0.1, 0.2, 0.3];

/// Cost-effectiveness factor for BVH, rows `n = 1..=6`, columns `RHO_GRID`.
pub const CEF: [[f64; 3]; 6] = [
    [0.909, 0.833, 0.769],
    [0.833, 0.714, 0.625],
    [0.769, 0.625, 0.526],
    [0.714, 0.555, 0.454],
    [0.666, 0.500, 0.400],
    [0.625, 0.454, 0.357],
];

pub const CEF_TOLERANCE: f64 = 0.001;

/// Time-cost-effectiveness factor for BVH, same layout as [`CEF`].
pub const TCEF: [[f64; 3]; 6] = [
    [1.48148, 1.37931, 1.29032],
    [1.58415, 1.36752, 1.20300],
    [1.52019, 1.23791, 1.04404],
    [1.42459, 1.1087, 0.90748],
    [1.33246, 0.9995, 0.79968],
    [1.249809, 0.90899, 0.71422],
];

pub const TCEF_TOLERANCE: f64 = 0.0001;

/// Hand-listed classes for BVH_2, `(0,0)` to `(3,3)`: two 3-link and two 4-link paths.
pub fn bvh2_path_classes() -> PathClassSet {
    PathClassSet::from_classes([
        PathClass {
            count: 2,
            links: 3,
            processors: 2,
        },
        PathClass {
            count: 2,
            links: 4,
            processors: 3,
        },
    ])
}

/// Hand-listed classes for BVH_3, `(0,0,0)` to `(3,3,0)`: four 5-link and two 3-link paths.
pub fn bvh3_path_classes() -> PathClassSet {
    PathClassSet::from_classes([
        PathClass {
            count: 4,
            links: 5,
            processors: 4,
        },
        PathClass {
            count: 2,
            links: 3,
            processors: 2,
        },
    ])
}

/// Terminal reliability reported for the two class sets at `R_l = 0.9`, `R_p = 0.8`.
pub const TR_BVH2: f64 = 0.8745;
pub const TR_BVH3: f64 = 0.9059;
