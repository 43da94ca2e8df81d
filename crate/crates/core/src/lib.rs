//! Exact-arithmetic tools for counting point-line incidences on low-degree
//! varieties: polynomials, line geometry, flecnodes, surfaces, incidence
//! counts with their bounds, and a seeded experiment lab.

// dense matrix eliminations read more clearly with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod flecnode;
pub mod geometry;
pub mod incidence;
pub mod json;
pub mod lab;
pub mod poly;
pub mod sampling;
pub mod surfaces;
