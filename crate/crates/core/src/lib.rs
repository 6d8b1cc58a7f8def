//! Symbolic engine for the curve algebra of a triangulated punctured surface.
//!
//! The curve algebra is spanned over `ℤ[v^{±}]` (one variable per puncture) by
//! reduced multicurves: disjoint unions of loops and arcs between punctures,
//! with no trivial loops and no loops around a single puncture. Curves are
//! stored by their generalized corner coordinates relative to an ideal
//! triangulation, kept as doubled integers so that arc ends (`−½`) stay exact.
//!
//! | module               | contents                                                                 |
//! |----------------------|--------------------------------------------------------------------------|
//! | [`triangulation`]    | ideal triangulations, vertex stars, local planarity, edge star labels     |
//! | [`normal_curves`]    | corner coordinates, the reduced-curve conditions, enumeration             |
//! | [`strand_oracle`]    | explicit diagrams: superposition, state sums, normalization               |
//! | [`curve_algebra`]    | elements, products, positive/negative resolutions, edge degree            |
//! | [`lambda_expansion`] | Laurent expansion in lambda lengths and localization round trips          |
//! | [`goldman_bracket`]  | the Poisson bracket from signed single-point resolutions                  |
//! | [`quantum_skein`]    | the product over `ℤ[q^{±½}][v^{±}]` and its classical limit               |
//! | [`verification`]     | seeded suites comparing fast paths with oracles                           |
//! | [`cli`]              | the command-line front end                                                |
//! | [`laurent`]          | exact sparse multivariate Laurent polynomials over `ℚ`                    |
//!
//! Every fast algorithm has an explicit-diagram counterpart in
//! [`strand_oracle`], which is authoritative; the verification suites compare
//! the two on exhaustive enumerations.
//!
//! ```
//! use punctured_skein::curve_algebra::{AlgebraElement, CurveAlgebra};
//! use punctured_skein::normal_curves::flip_arc;
//! use punctured_skein::triangulation::tetrahedron;
//!
//! let alg = CurveAlgebra::new(tetrahedron());
//! let diagonal = AlgebraElement::basis(flip_arc(alg.triangulation(), 0).unwrap(), alg.nvars());
//! let product = alg.multiply(&alg.edge(0), &diagonal).unwrap();
//! assert_eq!(product.len(), 2);
//! ```

pub mod cli;
pub mod curve_algebra;
pub mod error;
pub mod goldman_bracket;
pub mod lambda_expansion;
pub mod laurent;
pub mod normal_curves;
pub mod quantum_skein;
pub mod strand_oracle;
pub mod triangulation;
pub mod verification;

pub use error::{Error, Result};
