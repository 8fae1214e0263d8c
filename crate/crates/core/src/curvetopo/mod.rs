//! Topology of sampled curves: zero sets on the sphere, winding numbers
//! about the axis through `[0:0:1]`, and per-sample depth.

pub mod contour;
pub mod depth;
pub mod mesh;
pub mod mollified;
pub mod montecarlo;

pub use contour::{extract_loops, winding_number, CurveLoop, LoopSet};
pub use depth::{assess_sample, depth_of_sample, harnack_bound, DepthSampleReport};
pub use mesh::SphereMesh;
pub use mollified::{mollified_count, MollifierGrid};
pub use montecarlo::{
    monte_carlo_depth, rotation_about_axis, rotation_taking_pole_to, MonteCarloConfig, MonteCarloSummary,
};
