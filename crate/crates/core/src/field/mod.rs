//! The doubly periodic field of catenoids on the square torus: data,
//! periods, meshing, replication and an embeddedness probe.

mod data;
mod mesh;
mod periods;
mod probe;
mod replicate;

pub use data::{
    build_field_data, catenoid_reference, verify_square_torus, FieldConfig, FieldData, FieldPoints, GaussFn,
    SquareTorusReport,
};
pub use mesh::{
    collinearity_residual, format_g, marker, mean_curvature, mean_curvature_stats, mesh_fundamental_domain,
    plane_fit, total_curvature, CurvatureReport, MeanCurvatureStats, SurfaceMesh,
};
pub use periods::{
    b_to_a_integral, end_loops, end_period_closure, period_integral_1d, translation_periods, TranslationPeriods,
};
pub use probe::{embedding_probe, projection_overlaps, triangles_intersect, EmbeddingReport, Intersection};
pub use replicate::{end_loops_count, fundamental_piece, quotient_piece, replicate, weld};
