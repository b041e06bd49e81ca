//! Explicit box covers of cube skeletons and tangency point sets, with an
//! exact rational verifier.
//!
//! The crate builds covers of the `(n-2)`-skeleton of `[0,1]^n` by boxes whose
//! side lengths sum to less than one, including the 96-box cover in four
//! dimensions, and checks every claim by exact cell decomposition.

pub mod bounds;
pub mod certificate;
pub mod dim4;
pub mod error;
pub mod general;
pub mod geometry;
pub mod rational;
pub mod sampling;
pub mod skeleton;
pub mod symmetry;
pub mod verify;

pub use bounds::{bounds_table, lassak_bound, paper_bound, rogers_bound, BoundsRow};
pub use certificate::{check_certificate, Certificate, CertificateReport, FORMAT_VERSION};
pub use dim4::{
    a4_cover, assemble96, cover88, paper_face_typing, A4Case, A4CoverResult, Assembly, FaceType,
    FaceTyping,
};
pub use error::{CoverError, Result};
pub use general::{
    base_star_cover, compress_along, expand_eps, prop1_cover, tangency_cover, EpsilonSchedule,
};
pub use geometry::{enumerate_faces, BoxClass, CubeFace, Cuboid, Point};
pub use rational::{r, Rational};
pub use skeleton::{
    classify_segment, skeleton_target, validate_tangency_set, Segment, SegmentKind, TangencySet,
    Target,
};
pub use symmetry::{all_symmetries, apply_symmetry, CubeSymmetry, Transform};
pub use verify::{
    covers_face, covers_target, find_witness, union_equals_box, verify_class, Cover, CoverageReport,
};
