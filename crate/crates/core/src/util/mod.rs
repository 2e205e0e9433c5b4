//! Shared numerical infrastructure: quadrature, compensated arithmetic,
//! root finding, least squares, and the parallel/sequential batch helpers.

pub mod dd;
pub mod fit;
pub mod par;
pub mod quad;
pub mod roots;
