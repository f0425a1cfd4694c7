pub mod cell_classifier;
pub mod corner_cuts;
pub mod cube_geometry;
pub mod exact_kernel;
pub mod intersection_theory;
pub mod strata_atlas;
pub mod subdivisions;
pub mod torus_cohomology;
pub mod vinberg;
