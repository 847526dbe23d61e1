//! torsionkit computes leading-order terms of Turaev torsion for compact
//! orientable 3-manifolds with boundary directly from group presentations,
//! computes the matching cohomology determinant invariants, and checks the
//! congruences relating the two: the integral comparison modulo I^n, the
//! mod-r comparison for prime powers r, and the Massey-product refinement.
//!
//! Everything is exact: integer and Z_r arithmetic only, no floats. The six
//! modules layer as
//!
//! * [`abelian`]: f.g. abelian groups, Smith normal form, primary parts,
//!   linking forms and the mod-r dot pairing;
//! * [`groupring`]: sparse group rings Z[H] / Z_r[H] and their truncations by
//!   powers of the augmentation ideal, with the q-substitution maps;
//! * [`fox`]: free words, Fox calculus, Alexander matrices, Nielsen
//!   normalization into nice block shape;
//! * [`detform`]: alternating and Massey-type forms and their determinant
//!   polynomials (the unique d with det θ(i) = (-1)^i a_i* d);
//! * [`volform`]: paired volume forms, duality, mod-r reduction, the linking
//!   volume form, and determinant refinement;
//! * [`pipeline`]: presentation files, cup forms from commutator expansions,
//!   the three congruence checkers, and JSON reports.
//!
//! [`synth`] generates seeded random inputs (forms, expansions, whole nice
//! presentations) used by the self-test battery and the acceptance suite.

pub mod abelian;
pub mod detform;
pub mod error;
pub mod fox;
pub mod groupring;
pub mod pipeline;
pub mod poly;
pub mod ring;
pub mod synth;
pub mod volform;
pub(crate) mod zmat;

pub use error::{Error, Result};

pub mod zmatrix {
    //! Re-exported integer-matrix helpers for callers that need raw SNF input.
    pub use crate::zmat::{det, from_i64, identity, mul, ZMat};
}
