//! Solver, verifier and brute-force oracle for the functional equation
//!
//! ```text
//! f(x + y) = f(x) * f(y) - phi(x, y),    x, y in K^n,  K in {R, C},
//! ```
//!
//! where `phi(x, y) = x^T M y` is a bilinear form given by a matrix.
//!
//! The structure of the answer: if `phi` is symmetric and takes a nonzero
//! value on the diagonal, the equation has solutions exactly when
//! `M = w w^T` for a vector `w`, and then the only solutions are
//! `f(x) = +-(w . x) + 1`; over the reals a negative diagonal value rules
//! solutions out. If `phi` vanishes on the diagonal it is zero, and the
//! equation degenerates to the multiplicative Cauchy equation with the
//! family `f = 0` or `f = exp(a . x)`.
//!
//! * [`scalar`]: exact rational / Gaussian-rational and floating scalars;
//! * [`form`]: vectors, bilinear forms, symmetric rank-one factorization;
//! * [`solver`]: the decision procedure and solution constructors;
//! * [`verifier`]: residual checks of candidates against a form;
//! * [`oracle`]: independent re-derivation by polynomial coefficient
//!   matching, for cross-validation on small instances;
//! * [`cli`]: the `expdiff` command-line tool.

pub mod cli;
pub mod form;
pub mod oracle;
pub mod scalar;
pub mod solver;
pub mod verifier;

pub use form::{BilinearForm, FormError, Rank1Factorization, Vector};
pub use scalar::{approx_eq, sqrt_principal, FieldTag, Scalar, ScalarError, DEFAULT_TOL};
pub use solver::{
    eval_exponential, recover_parameters, solve_matrix, solve_scalar, AffineSolution,
    ExponentialFamilyDescriptor, NoSolutionReason, SolutionParams, SolutionSet, SolverError,
    Witness,
};
pub use verifier::{
    cross_check_solution_set, residual, verify, Candidate, FailingPair, VerificationReport,
    VerifyError,
};
