//! Centers, central lines and symmetry analysis for labelled plane polygons.
//!
//! A center is computed from a center function `g` on the distance matrix: the
//! weight of vertex `k` is `g` evaluated on the k-th cyclic shift, normalized to
//! sum to one. See [`center::coordinate_map`].

pub mod center;
pub mod corpus;
pub mod dsl;
pub mod geom;
pub mod linalg;
pub mod lines;
pub mod symmetry;
pub mod tangential;
pub mod tol;

pub use center::{builtin, coordinate_map, CenterEvaluation, CenterFunction, CoefficientVector};
pub use geom::{DihedralElement, DistanceMatrix, Point, Polygon, Similarity, Vector};
