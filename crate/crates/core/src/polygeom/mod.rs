//! Geometry of the two-dimensional slice `H = col(D') ∩ {x_1 + .. + x_n = 1}`:
//! the outer polygon cut from the simplex, the inner points given by the
//! columns of `D'`, slack matrices and their diagonal-scaling equivalence,
//! the `w` point cycle and quadratic recovery of `1/a_k`.
//!
//! Every predicate is an exact sign test on rationals.

mod chart;
mod geom;
mod slack;
mod slice;
mod wpoly;

pub use chart::AffineChart;
pub use geom::{
    convex_hull, cross, on_segment, orient, orient_sign, verify_convex_combination, Point2,
    Polygon2, PolygonKind,
};
pub use slack::{
    oriented_volume_matrix, scaling_equivalence, slack_matrix_polygon,
    slack_matrix_simplex_slice, Scaling, SlackMatrix,
};
pub use slice::{
    edges_touched, inner_points, outer_polygon, outer_vertices, slice_geometry, OuterPolygon,
    SliceGeometry,
};
pub use wpoly::{
    claim5_rhs, symbolic_w, verify_claim5_identity, verify_claim5_identity_scaled, vieta_recover,
    w_polygon, Claim5Report, PointCycle, VietaRecovery, DEFAULT_SYMBOLIC_LIMIT,
};
