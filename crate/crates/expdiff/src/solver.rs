//! Decision procedure for `f(x+y) = f(x) f(y) - phi(x, y)`.
//!
//! For a symmetric form with a nonzero diagonal value the equation has
//! either no solutions or exactly the two affine ones `f(x) = +-(w . x) + 1`
//! with `M = w w^T`; for the zero form it degenerates to the multiplicative
//! Cauchy equation, whose solution family (`f = 0` or `f = exp(a . x)`)
//! cannot be enumerated and is returned as a descriptor. Non-existence is
//! data, not an error: callers legitimately query unsolvable forms.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::form::{BilinearForm, FormError, Vector};
use crate::scalar::{approx_eq, FieldTag, Scalar};

#[derive(Debug, Error, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("solution set is inconsistent with the form: {0}")]
    InconsistentSolution(String),
}

/// Affine solution `f(x) = w . x + 1`; the constant term is pinned to 1
/// because every solution of the equation has `f(0) = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AffineSolution {
    w: Vector,
}

impl AffineSolution {
    pub fn new(w: Vector) -> Self {
        AffineSolution { w }
    }

    pub fn w(&self) -> &Vector {
        &self.w
    }

    pub fn dim(&self) -> usize {
        self.w.dim()
    }

    /// Evaluates `w . x + 1`.
    pub fn eval(&self, x: &Vector) -> Result<Scalar, FormError> {
        Ok(self.w.dot(x)? + Scalar::one())
    }
}

/// Marker for the zero-form case: the solution family is `{f = 0}` together
/// with `f(x) = exp(a . x)` for every `a` in `K^n`.
///
/// Only these closed-form members are representable here; the family is a
/// continuum and is therefore described rather than enumerated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentialFamilyDescriptor {
    pub dim: usize,
    pub note: String,
}

impl ExponentialFamilyDescriptor {
    pub fn new(dim: usize) -> Self {
        ExponentialFamilyDescriptor {
            dim,
            note: format!("f = 0 or f(x) = exp(a.x) for a in K^{dim}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoSolutionReason {
    NotSymmetric,
    NotRankOne,
    NegativeDiagonal,
}

impl fmt::Display for NoSolutionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoSolutionReason::NotSymmetric => f.write_str("form is not symmetric"),
            NoSolutionReason::NotRankOne => f.write_str("rank exceeds one"),
            NoSolutionReason::NegativeDiagonal => f.write_str("negative diagonal value"),
        }
    }
}

/// Machine-readable certificate attached to a no-solution outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Entry pair `(i, j)` violating symmetry.
    Pair([usize; 2]),
    /// Vector `z0` certifying the obstruction, e.g. `phi(z0, z0) < 0`.
    Vector(Vector),
}

/// The `(a, z0)` parametrization of a solvable instance: `f(x) =
/// a * phi(x, z0) + 1` with `a^2 phi(x, z0)^2 = phi(x, x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionParams {
    pub a: Scalar,
    pub z0: Vector,
}

/// Complete answer for one form.
#[derive(Clone, Debug, PartialEq)]
pub enum SolutionSet {
    NoSolution {
        reason: NoSolutionReason,
        witness: Option<Witness>,
    },
    TwoAffine {
        plus: AffineSolution,
        minus: AffineSolution,
        params: Option<SolutionParams>,
    },
    ExponentialFamily(ExponentialFamilyDescriptor),
}

impl SolutionSet {
    /// Builds the two-solution outcome from one coefficient vector,
    /// canonicalizing the sign: the first nonzero coordinate of `plus` has
    /// positive real part, ties broken by positive imaginary part.
    pub fn two_affine(w: Vector, tol: f64) -> SolutionSet {
        let plus = canonicalize_sign(&w, tol);
        let minus = plus.neg();
        SolutionSet::TwoAffine {
            plus: AffineSolution::new(plus),
            minus: AffineSolution::new(minus),
            params: None,
        }
    }

    pub fn is_two_affine(&self) -> bool {
        matches!(self, SolutionSet::TwoAffine { .. })
    }
}

/// Flips `w` if needed so its first nonzero coordinate has positive real
/// part (ties by positive imaginary part).
pub fn canonicalize_sign(w: &Vector, tol: f64) -> Vector {
    let scale = 1.0 + w.max_modulus();
    for c in w.coords() {
        let nonzero = if c.is_exact() {
            !c.is_zero()
        } else {
            c.modulus() > tol * scale
        };
        if !nonzero {
            continue;
        }
        let flip = match c.exact_parts() {
            Some((re, im)) => {
                use num_traits::{Signed, Zero};
                re.is_negative() || (re.is_zero() && im.is_negative())
            }
            None => {
                let z = c.to_c64();
                z.re < 0.0 || (z.re == 0.0 && z.im < 0.0)
            }
        };
        return if flip { w.neg() } else { w.clone() };
    }
    w.clone()
}

/// Solves the equation for a bilinear form.
///
/// Order of the decision: symmetry first (a solution forces `phi(x, y) =
/// phi(y, x)`), then the zero form (exponential family), then the rank-one
/// factorization, whose failures map to the remaining no-solution reasons.
pub fn solve_matrix(m: &BilinearForm, tol: f64) -> SolutionSet {
    if let Some((i, j)) = m.asymmetry_witness(tol) {
        return SolutionSet::NoSolution {
            reason: NoSolutionReason::NotSymmetric,
            witness: Some(Witness::Pair([i, j])),
        };
    }
    let z0 = match m.diagonal_witness(tol) {
        Ok(Some(z0)) => z0,
        Ok(None) => {
            return SolutionSet::ExponentialFamily(ExponentialFamilyDescriptor::new(m.dim()))
        }
        Err(_) => unreachable!("symmetry was just checked"),
    };
    match m.rank1_factor(tol) {
        Ok(f) => {
            let mut sol = SolutionSet::two_affine(f.w, tol);
            if let SolutionSet::TwoAffine { plus, params, .. } = &mut sol {
                *params = derive_params(plus.w(), &z0);
            }
            sol
        }
        Err(FormError::NegativeDiagonal { index }) => SolutionSet::NoSolution {
            reason: NoSolutionReason::NegativeDiagonal,
            witness: Some(Witness::Vector(Vector::basis(m.dim(), index))),
        },
        Err(FormError::NotRankOne { .. }) => SolutionSet::NoSolution {
            reason: NoSolutionReason::NotRankOne,
            witness: None,
        },
        Err(FormError::ZeroForm) => {
            SolutionSet::ExponentialFamily(ExponentialFamilyDescriptor::new(m.dim()))
        }
        Err(_) => unreachable!("symmetry and shape were already validated"),
    }
}

/// `a = 1 / (w . z0)`, valid because `phi(z0, z0) = (w . z0)^2 != 0`.
fn derive_params(w: &Vector, z0: &Vector) -> Option<SolutionParams> {
    let denom = w.dot(z0).ok()?;
    if denom.is_zero() || (!denom.is_exact() && denom.modulus() < f64::MIN_POSITIVE) {
        return None;
    }
    Some(SolutionParams {
        a: &Scalar::one() / &denom,
        z0: z0.clone(),
    })
}

/// Scalar instance `phi(x, y) = alpha * x * y`; equivalent to solving the
/// `1 x 1` matrix `[[alpha]]`.
pub fn solve_scalar(alpha: &Scalar, tag: FieldTag, tol: f64) -> Result<SolutionSet, FormError> {
    let m = BilinearForm::from_scalar(alpha.clone(), tag)?;
    Ok(solve_matrix(&m, tol))
}

/// Evaluates the exponential-family member `f(x) = exp(a . x)`.
///
/// Always lands on the floating backend: exp is transcendental.
pub fn eval_exponential(a: &Vector, x: &Vector) -> Result<Scalar, FormError> {
    let t = a.dot(x)?;
    Ok(Scalar::from_c64(t.to_c64().exp()))
}

/// Recovers the `(a, z0)` parametrization from a two-solution outcome and
/// re-checks it against the form: `plus.w = a * (M z0)` and, on every basis
/// vector, `a^2 phi(x, z0)^2 = phi(x, x)`. A violation signals a solver bug.
pub fn recover_parameters(
    m: &BilinearForm,
    sol: &SolutionSet,
    tol: f64,
) -> Result<SolutionParams, SolverError> {
    let SolutionSet::TwoAffine { plus, .. } = sol else {
        return Err(SolverError::InconsistentSolution(
            "outcome carries no affine solutions".into(),
        ));
    };
    let z0 = m
        .diagonal_witness(tol)?
        .ok_or_else(|| SolverError::InconsistentSolution("form is zero".into()))?;
    let params = derive_params(plus.w(), &z0)
        .ok_or_else(|| SolverError::InconsistentSolution("phi(w, z0) vanishes".into()))?;
    let mz0 = m.apply(&z0)?;
    let scaled = mz0.scale(&params.a);
    for i in 0..m.dim() {
        if !approx_eq(plus.w().get(i), scaled.get(i), tol) {
            return Err(SolverError::InconsistentSolution(format!(
                "w[{i}] != a * (M z0)[{i}]"
            )));
        }
    }
    for i in 0..m.dim() {
        let e = Vector::basis(m.dim(), i);
        let lhs = {
            let p = m.eval(&e, &z0)?;
            &(&params.a * &params.a) * &(&p * &p)
        };
        let rhs = m.eval(&e, &e)?;
        if !approx_eq(&lhs, &rhs, tol) {
            return Err(SolverError::InconsistentSolution(format!(
                "a^2 phi(e{i}, z0)^2 != phi(e{i}, e{i})"
            )));
        }
    }
    Ok(params)
}

#[derive(Serialize, Deserialize)]
struct SolutionSetRepr {
    outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    plus: Option<AffineSolution>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    minus: Option<AffineSolution>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reason: Option<NoSolutionReason>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<Witness>,
    #[serde(
        default,
        rename = "paper_params",
        skip_serializing_if = "Option::is_none"
    )]
    params: Option<SolutionParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

impl From<SolutionSet> for SolutionSetRepr {
    fn from(s: SolutionSet) -> SolutionSetRepr {
        let mut r = SolutionSetRepr {
            outcome: String::new(),
            plus: None,
            minus: None,
            reason: None,
            witness: None,
            params: None,
            dim: None,
            note: None,
        };
        match s {
            SolutionSet::NoSolution { reason, witness } => {
                r.outcome = "no_solution".into();
                r.reason = Some(reason);
                r.witness = witness;
            }
            SolutionSet::TwoAffine {
                plus,
                minus,
                params,
            } => {
                r.outcome = "two_affine".into();
                r.plus = Some(plus);
                r.minus = Some(minus);
                r.params = params;
            }
            SolutionSet::ExponentialFamily(d) => {
                r.outcome = "exponential_family".into();
                r.dim = Some(d.dim);
                r.note = Some(d.note);
            }
        }
        r
    }
}

impl TryFrom<SolutionSetRepr> for SolutionSet {
    type Error = String;
    fn try_from(r: SolutionSetRepr) -> Result<SolutionSet, String> {
        match r.outcome.as_str() {
            "no_solution" => Ok(SolutionSet::NoSolution {
                reason: r.reason.ok_or("no_solution requires a reason")?,
                witness: r.witness,
            }),
            "two_affine" => {
                let plus = r.plus.ok_or("two_affine requires plus")?;
                let minus = r.minus.ok_or("two_affine requires minus")?;
                if minus.w() != &plus.w().neg() {
                    return Err("minus must be the negation of plus".into());
                }
                Ok(SolutionSet::TwoAffine {
                    plus,
                    minus,
                    params: r.params,
                })
            }
            "exponential_family" => {
                let dim = r.dim.ok_or("exponential_family requires dim")?;
                let note = r
                    .note
                    .unwrap_or_else(|| ExponentialFamilyDescriptor::new(dim).note);
                Ok(SolutionSet::ExponentialFamily(
                    ExponentialFamilyDescriptor { dim, note },
                ))
            }
            other => Err(format!("unknown outcome `{other}`")),
        }
    }
}

impl Serialize for SolutionSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SolutionSetRepr::from(self.clone()).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SolutionSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<SolutionSet, D::Error> {
        let repr = SolutionSetRepr::deserialize(deserializer)?;
        SolutionSet::try_from(repr).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::DEFAULT_TOL;
    use proptest::prelude::*;

    fn real_form(rows: &[&[i64]]) -> BilinearForm {
        BilinearForm::from_int_rows(FieldTag::Real, rows)
    }

    fn expect_two(sol: &SolutionSet) -> (&AffineSolution, &AffineSolution) {
        match sol {
            SolutionSet::TwoAffine { plus, minus, .. } => (plus, minus),
            other => panic!("expected two solutions, got {other:?}"),
        }
    }

    #[test]
    fn scalar_alpha_four() {
        // 1 + 2x and 1 - 2x.
        let sol = solve_scalar(&Scalar::integer(4), FieldTag::Real, DEFAULT_TOL).unwrap();
        let (plus, minus) = expect_two(&sol);
        assert_eq!(plus.w(), &Vector::from_ints(&[2]));
        assert_eq!(minus.w(), &Vector::from_ints(&[-2]));
    }

    #[test]
    fn identity_has_no_solution_in_dim_two() {
        let sol = solve_matrix(&BilinearForm::identity(FieldTag::Real, 2), DEFAULT_TOL);
        assert_eq!(
            sol,
            SolutionSet::NoSolution {
                reason: NoSolutionReason::NotRankOne,
                witness: None,
            }
        );
    }

    #[test]
    fn zero_form_gives_exponential_family() {
        for dim in 1..=3 {
            let sol = solve_matrix(&BilinearForm::zero(FieldTag::Real, dim), DEFAULT_TOL);
            assert_eq!(
                sol,
                SolutionSet::ExponentialFamily(ExponentialFamilyDescriptor::new(dim))
            );
        }
    }

    #[test]
    fn complex_minus_one_gives_plus_minus_i() {
        let sol = solve_scalar(&Scalar::integer(-1), FieldTag::Complex, DEFAULT_TOL).unwrap();
        let (plus, minus) = expect_two(&sol);
        assert_eq!(plus.w(), &Vector::new(vec![Scalar::i()]).unwrap());
        assert_eq!(minus.w(), &Vector::new(vec![-Scalar::i()]).unwrap());
    }

    #[test]
    fn rank_one_two_by_two() {
        let m = real_form(&[&[1, 2], &[2, 4]]);
        let sol = solve_matrix(&m, DEFAULT_TOL);
        let (plus, minus) = expect_two(&sol);
        assert_eq!(plus.w(), &Vector::from_ints(&[1, 2]));
        assert_eq!(minus.w(), &Vector::from_ints(&[-1, -2]));
        // Residual identity: M - w w^T = 0 exactly.
        assert_eq!(BilinearForm::outer(FieldTag::Real, plus.w()).unwrap(), m);
    }

    #[test]
    fn scalar_golden_cases() {
        let sol = solve_scalar(&Scalar::integer(9), FieldTag::Real, DEFAULT_TOL).unwrap();
        assert_eq!(expect_two(&sol).0.w(), &Vector::from_ints(&[3]));

        let sol = solve_scalar(&Scalar::zero(), FieldTag::Real, DEFAULT_TOL).unwrap();
        assert!(matches!(sol, SolutionSet::ExponentialFamily(_)));

        let sol = solve_scalar(&Scalar::integer(-4), FieldTag::Complex, DEFAULT_TOL).unwrap();
        let (plus, _) = expect_two(&sol);
        assert_eq!(
            plus.w(),
            &Vector::new(vec![Scalar::complex_int(0, 2)]).unwrap()
        );

        let sol = solve_scalar(&Scalar::integer(-4), FieldTag::Real, DEFAULT_TOL).unwrap();
        assert!(matches!(
            sol,
            SolutionSet::NoSolution {
                reason: NoSolutionReason::NegativeDiagonal,
                ..
            }
        ));
    }

    #[test]
    fn asymmetric_is_rejected_with_pair_witness() {
        let sol = solve_matrix(&real_form(&[&[0, 1], &[-1, 0]]), DEFAULT_TOL);
        assert_eq!(
            sol,
            SolutionSet::NoSolution {
                reason: NoSolutionReason::NotSymmetric,
                witness: Some(Witness::Pair([0, 1])),
            }
        );
    }

    #[test]
    fn negative_diagonal_carries_vector_witness() {
        let m = real_form(&[&[1, 0], &[0, -2]]);
        let sol = solve_matrix(&m, DEFAULT_TOL);
        match sol {
            SolutionSet::NoSolution {
                reason: NoSolutionReason::NegativeDiagonal,
                witness: Some(Witness::Vector(z0)),
            } => {
                let v = m.eval(&z0, &z0).unwrap();
                assert_eq!(v, Scalar::integer(-2));
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn eval_affine_examples() {
        let s = AffineSolution::new(Vector::from_ints(&[1, 2]));
        assert_eq!(s.eval(&Vector::zero(2)).unwrap(), Scalar::one());
        assert_eq!(
            s.eval(&Vector::from_ints(&[1, 1])).unwrap(),
            Scalar::integer(4)
        );
        let t = AffineSolution::new(Vector::from_ints(&[2]));
        let x = Vector::new(vec![Scalar::rational(-1, 2)]).unwrap();
        assert_eq!(t.eval(&x).unwrap(), Scalar::zero());
    }

    #[test]
    fn eval_exponential_examples() {
        let a0 = Vector::zero(3);
        let x = Vector::from_ints(&[5, -1, 2]);
        assert_eq!(eval_exponential(&a0, &x).unwrap(), Scalar::from_f64(1.0));

        let a = Vector::from_ints(&[1]);
        assert_eq!(
            eval_exponential(&a, &Vector::zero(1)).unwrap(),
            Scalar::from_f64(1.0)
        );
        let ln2 = Vector::new(vec![Scalar::from_f64(std::f64::consts::LN_2)]).unwrap();
        let v = eval_exponential(&a, &ln2).unwrap();
        assert!((v.re_f64() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn recover_parameters_examples() {
        let m = real_form(&[&[4]]);
        let sol = solve_matrix(&m, DEFAULT_TOL);
        let p = recover_parameters(&m, &sol, DEFAULT_TOL).unwrap();
        assert_eq!(p.z0, Vector::basis(1, 0));
        assert_eq!(p.a, Scalar::rational(1, 2));

        let m = real_form(&[&[1, 2], &[2, 4]]);
        let sol = solve_matrix(&m, DEFAULT_TOL);
        let p = recover_parameters(&m, &sol, DEFAULT_TOL).unwrap();
        assert_eq!(p.z0, Vector::basis(2, 0));
        assert_eq!(p.a, Scalar::one());
    }

    #[test]
    fn hyperbolic_form_is_unsolvable_not_recovered() {
        // Zero diagonal but phi((1,-1),(1,-1)) = -6 < 0: the solver must
        // reject before any parametrization is reachable.
        let m = real_form(&[&[0, 3], &[3, 0]]);
        assert_eq!(m.entry(0, 0), &Scalar::zero());
        assert_eq!(m.entry(1, 1), &Scalar::zero());
        let v = Vector::from_ints(&[1, -1]);
        assert_eq!(m.eval(&v, &v).unwrap(), Scalar::integer(-6));
        let sol = solve_matrix(&m, DEFAULT_TOL);
        assert!(matches!(
            sol,
            SolutionSet::NoSolution {
                reason: NoSolutionReason::NotRankOne | NoSolutionReason::NegativeDiagonal,
                ..
            }
        ));
        assert!(recover_parameters(&m, &sol, DEFAULT_TOL).is_err());
    }

    #[test]
    fn canonical_sign_rules() {
        let w = Vector::from_ints(&[-1, 3]);
        assert_eq!(
            canonicalize_sign(&w, DEFAULT_TOL),
            Vector::from_ints(&[1, -3])
        );
        let w = Vector::new(vec![Scalar::complex_int(0, -2), Scalar::one()]).unwrap();
        assert_eq!(
            canonicalize_sign(&w, DEFAULT_TOL),
            Vector::new(vec![Scalar::complex_int(0, 2), -Scalar::one()]).unwrap()
        );
        // Leading (exact) zeros are skipped.
        let w = Vector::from_ints(&[0, -5]);
        assert_eq!(
            canonicalize_sign(&w, DEFAULT_TOL),
            Vector::from_ints(&[0, 5])
        );
    }

    #[test]
    fn solution_set_serde_roundtrip() {
        let m = real_form(&[&[1, 2], &[2, 4]]);
        let sol = solve_matrix(&m, DEFAULT_TOL);
        let json = serde_json::to_string(&sol).unwrap();
        assert!(json.contains("\"outcome\":\"two_affine\""));
        assert!(json.contains("\"paper_params\""));
        let back: SolutionSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sol);

        let none = solve_matrix(&real_form(&[&[0, 1], &[-1, 0]]), DEFAULT_TOL);
        let json = serde_json::to_string(&none).unwrap();
        assert_eq!(
            json,
            "{\"outcome\":\"no_solution\",\"reason\":\"not_symmetric\",\"witness\":{\"pair\":[0,1]}}"
        );
        assert_eq!(serde_json::from_str::<SolutionSet>(&json).unwrap(), none);

        // Tampered minus is rejected on deserialize.
        let bad = "{\"outcome\":\"two_affine\",\"plus\":[\"1\"],\"minus\":[\"1\"]}";
        assert!(serde_json::from_str::<SolutionSet>(bad).is_err());
    }

    fn small_alpha() -> impl Strategy<Value = Scalar> {
        (-9i64..=9, 1i64..=4).prop_map(|(p, q)| Scalar::rational(p, q))
    }

    proptest! {
        #[test]
        fn scalar_and_matrix_paths_agree(alpha in small_alpha()) {
            let by_scalar = solve_scalar(&alpha, FieldTag::Real, DEFAULT_TOL).unwrap();
            let m = BilinearForm::from_scalar(alpha, FieldTag::Real).unwrap();
            prop_assert_eq!(by_scalar, solve_matrix(&m, DEFAULT_TOL));
        }

        #[test]
        fn two_affine_members_negate_each_other(alpha in small_alpha()) {
            if let SolutionSet::TwoAffine { plus, minus, .. } =
                solve_scalar(&alpha, FieldTag::Complex, DEFAULT_TOL).unwrap()
            {
                prop_assert_eq!(minus.w(), &plus.w().neg());
                prop_assert!(!plus.w().is_zero());
                prop_assert!(plus.eval(&Vector::zero(1)).unwrap().is_one());
            }
        }
    }
}
