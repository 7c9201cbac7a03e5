//! Elastic shape analysis of plane curves through the `F_{a,b}` transforms.
//!
//! `F_{a,b}(c) = 2b |c'|^{1/2} (c'/|c'|)^{a/2b}` carries the elastic metric
//! with bending weight `a` and stretching weight `b` to the flat L2 metric,
//! so geodesics, distances and optimal alignments reduce to computations on
//! piecewise-constant complex functions.

// Negated comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod closed;
pub mod curve;
pub mod error;
pub mod geodesics;
pub mod matching;
pub mod reparam;
pub mod samples;
pub mod transform;

pub use classify::{arclength_distance, leave_one_out, ClassificationReport, DistanceMatrix};
pub use closed::{
    check_membership_v, closure_defect, closure_gradients, project_to_closed, ClosureDefect, Projection,
    ProjectionOptions,
};
pub use curve::{secant_sample, CurveGenerator, ElasticParams, PlaneCurve, PolarDerivative};
pub use error::{ElasticError, Result};
pub use geodesics::{
    closed_geodesic, flat_geodesic, shape_distance, shape_geodesic, sphere_geodesic, GeodesicOptions, GeodesicPath,
    ShapeGeodesic, SpaceTag,
};
pub use matching::{
    dp_reparameterize, injectivity_check, match_closed, match_curves, match_open, optimal_rotation, InjectivityReport,
    MatchOptions, MatchResult,
};
pub use reparam::Reparameterization;
pub use samples::LabeledCurve;
pub use transform::{
    branch_images, cone_projection, forward, inverse, pullback_metric_eval, reparam_action, rotate_curve,
    rotate_transform, scale_equivariance_check, BranchCount, BranchSet, TransformedCurve,
};
