//! Constructive toolkit behind a linear diameter bound for closed hyperbolic
//! 3-manifolds, `diam(M) < R·ℓ(P)`.
//!
//! Everything that is explicitly computable in the argument lives here:
//!
//! - [`presentation`] — group presentations, their length `ℓ(P)`, and the
//!   triangularization `ℓ(P′) ≤ 3ℓ(P)`.
//! - [`hyp3`] — upper-half-space numerics: distances, triangle areas, ball
//!   volumes, Margulis-tube geometry, and the constants `C₁, C₂, C₃`.
//! - [`flat_torus`] — the lattice toolkit for the Euclidean boundary torus:
//!   systole, short bases, coefficient bounds, the intersection inequality,
//!   covering indices, and kernel bases.
//! - [`metric_graph`] — finite metric graphs: cycle rank, girth, the
//!   `32N²/ε²` rank bound, coarse subdivisions, and good subgraphs.
//! - [`handle_complex`] — the combinatorial model of the tube preimage:
//!   0-/1-/monkey-handles, spines, boundary graphs, and the three surgeries
//!   that produce a good complex.
//! - [`abelian_bound`] — Smith normal forms and the presentation-length
//!   lower bound for finite cyclic groups, with a brute-force oracle.
//! - [`pipeline`] — the full constant chain
//!   `ε̃ → C₁ → C₂ → C₃ → B₁ → B₂ → B₃ → B₄ → R` and the audit report.
//!
//! The geometry of an actual hyperbolic manifold never enters: handle
//! complexes carry externally supplied essentiality annotations, and the
//! level-length data of the coarea argument is sampled input. Every
//! inequality the chain depends on is re-derived and certified numerically,
//! with paper-stated and recomputed values reported side by side wherever
//! they disagree.

pub mod abelian_bound;
pub mod flat_torus;
pub mod handle_complex;
pub mod hyp3;
pub mod metric_graph;
pub mod pipeline;
pub mod presentation;
pub mod rng;

pub use presentation::{Presentation, TriangularPresentation, Word};
