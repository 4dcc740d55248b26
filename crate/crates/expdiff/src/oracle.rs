//! Brute-force oracle: re-derives solution sets by symbolic coefficient
//! matching, without using the solver's characterization.
//!
//! A polynomial ansatz `f(x) = sum_k c_k x^k` (total degree <= 2, dimension
//! <= 3) is substituted into `f(x+y) - f(x) f(y) + x^T M y` and the result
//! is expanded as a polynomial in the 2n variables `(x, y)`. Equating every
//! monomial coefficient to zero gives a quadratic system in the unknown
//! `c_k`, solved by a finite case analysis:
//!
//! * each `x^k y^k` coefficient with `|k| = 2` is `-c_k^2`, forcing the
//!   degree-2 coefficients to zero;
//! * the constant coefficient is `c_0 - c_0^2`, so `c_0` is 0 or 1;
//! * `c_0 = 0` forces `f = 0` via the `x^e_i` coefficients;
//! * `c_0 = 1` leaves `w_i w_j = M_ij` for the linear coefficients `w`.
//!
//! Every candidate assignment is resubstituted into the full system before
//! it is accepted, so the reduction above is a completeness argument, not a
//! trusted code path. All expansion arithmetic is exact.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::form::{BilinearForm, Vector};
use crate::scalar::{approx_eq, sqrt_principal_lossy, FieldTag, Scalar, ScalarError, DEFAULT_TOL};
use crate::solver::{solve_matrix, SolutionSet};

pub const MAX_DIM: usize = 3;
pub const MAX_DEGREE: u32 = 2;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("ansatz too large: dim {dim} (max {MAX_DIM}), degree {degree} (max {MAX_DEGREE})")]
    AnsatzTooLarge { dim: usize, degree: u32 },
    #[error("the oracle requires exact (rational) form entries")]
    ExactBackendRequired,
    #[error("form dimension {form_dim} does not match ansatz dimension {ansatz_dim}")]
    DimensionMismatch { form_dim: usize, ansatz_dim: usize },
}

pub type MultiIndex = Vec<u32>;

fn total(k: &[u32]) -> u32 {
    k.iter().sum()
}

/// Polynomial ansatz: one unknown coefficient per multi-index of total
/// degree at most `degree` in `dim` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyAnsatz {
    dim: usize,
    degree: u32,
    indices: Vec<MultiIndex>,
    positions: BTreeMap<MultiIndex, usize>,
}

impl PolyAnsatz {
    pub fn new(dim: usize, degree: u32) -> Result<Self, OracleError> {
        if dim == 0 || dim > MAX_DIM || degree > MAX_DEGREE {
            return Err(OracleError::AnsatzTooLarge { dim, degree });
        }
        let mut indices = Vec::new();
        for t in 0..=degree {
            let mut k = vec![0u32; dim];
            gen_indices(&mut k, 0, t, &mut indices);
        }
        let positions = indices
            .iter()
            .enumerate()
            .map(|(p, k)| (k.clone(), p))
            .collect();
        Ok(PolyAnsatz {
            dim,
            degree,
            indices,
            positions,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Multi-indices in enumeration order (by total degree, then lexicographic).
    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn position(&self, k: &[u32]) -> Option<usize> {
        self.positions.get(k).copied()
    }

    fn constant_position(&self) -> usize {
        self.position(&vec![0; self.dim]).expect("degree >= 0")
    }

    fn linear_position(&self, var: usize) -> Option<usize> {
        if self.degree == 0 {
            return None;
        }
        let mut k = vec![0u32; self.dim];
        k[var] = 1;
        self.position(&k)
    }
}

fn gen_indices(k: &mut MultiIndex, var: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if var + 1 == k.len() {
        k[var] = remaining;
        out.push(k.clone());
        k[var] = 0;
        return;
    }
    for v in 0..=remaining {
        k[var] = v;
        gen_indices(k, var + 1, remaining - v, out);
    }
    k[var] = 0;
}

/// One coefficient of the expanded identity, as a polynomial equation in
/// the unknowns: `sum quad[(i,j)] c_i c_j + sum lin[i] c_i + constant = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub quad: BTreeMap<(usize, usize), Scalar>,
    pub lin: BTreeMap<usize, Scalar>,
    pub constant: Scalar,
}

impl Equation {
    pub fn eval(&self, assignment: &[Scalar]) -> Scalar {
        let mut acc = self.constant.clone();
        for (&(i, j), coeff) in &self.quad {
            acc = acc + coeff * &(&assignment[i] * &assignment[j]);
        }
        for (&i, coeff) in &self.lin {
            acc = acc + coeff * &assignment[i];
        }
        acc
    }
}

/// The full system of monomial-coefficient equations for one form.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub ansatz: PolyAnsatz,
    pub field: FieldTag,
    pub equations: Vec<Equation>,
}

impl ConstraintSystem {
    /// True when the assignment satisfies every equation (exactly on the
    /// all-exact path, within a relative tolerance otherwise).
    pub fn is_satisfied(&self, assignment: &[Scalar], tol: f64) -> bool {
        self.equations.iter().all(|eq| {
            let v = eq.eval(assignment);
            if v.is_exact() {
                v.is_zero()
            } else {
                v.modulus() <= tol * (1.0 + eq.constant.modulus())
            }
        })
    }
}

fn binom(n: u32, k: u32) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * u64::from(n - i) / (i as u64 + 1))
}

/// Expands `f(x+y) - f(x) f(y) + x^T M y` into monomial-coefficient
/// equations; structurally identical equations (e.g. the `(a, b)` and
/// `(b, a)` images for symmetric `M`) are emitted once.
pub fn expand_constraints(
    m: &BilinearForm,
    ansatz: &PolyAnsatz,
) -> Result<ConstraintSystem, OracleError> {
    if !m.is_exact() {
        return Err(OracleError::ExactBackendRequired);
    }
    if m.dim() != ansatz.dim {
        return Err(OracleError::DimensionMismatch {
            form_dim: m.dim(),
            ansatz_dim: ansatz.dim,
        });
    }
    let mut equations: Vec<Equation> = Vec::new();
    for (pa, a) in ansatz.indices.iter().enumerate() {
        for (pb, b) in ansatz.indices.iter().enumerate() {
            let mut eq = Equation {
                quad: BTreeMap::new(),
                lin: BTreeMap::new(),
                constant: Scalar::zero(),
            };
            // f(x+y): expanding (x+y)^k scatters c_k over the pairs
            // (a, b) with a + b = k, weighted by products of binomials.
            let k: MultiIndex = a.iter().zip(b).map(|(&ai, &bi)| ai + bi).collect();
            if total(&k) <= ansatz.degree {
                let pk = ansatz.position(&k).expect("within degree bound");
                let coeff: u64 = a
                    .iter()
                    .zip(b)
                    .map(|(&ai, &bi)| binom(ai + bi, ai))
                    .product();
                let entry = eq.lin.entry(pk).or_insert_with(Scalar::zero);
                *entry = &*entry + &Scalar::integer(coeff as i64);
            }
            // -f(x) f(y) contributes -c_a c_b to the x^a y^b coefficient.
            let key = (pa.min(pb), pa.max(pb));
            let entry = eq.quad.entry(key).or_insert_with(Scalar::zero);
            *entry = &*entry - &Scalar::one();
            // phi(x, y) contributes M_ij to the x^{e_i} y^{e_j} coefficient.
            if total(a) == 1 && total(b) == 1 {
                let i = a.iter().position(|&v| v == 1).expect("degree one");
                let j = b.iter().position(|&v| v == 1).expect("degree one");
                eq.constant = &eq.constant + m.entry(i, j);
            }
            if !equations.contains(&eq) {
                equations.push(eq);
            }
        }
    }
    Ok(ConstraintSystem {
        ansatz: ansatz.clone(),
        field: m.field(),
        equations,
    })
}

/// A value for every ansatz coefficient, in `ansatz.indices()` order.
pub type Assignment = Vec<Scalar>;

/// Reads the target of the quadratic conditions back out of the system:
/// `T[(i, j)] = ` constant of the equation whose product term is
/// `-c_{e_i} c_{e_j}`. Returns `None` if two such equations conflict
/// (asymmetric input), which makes the `c_0 = 1` branch unsatisfiable.
fn quadratic_targets(cs: &ConstraintSystem) -> Option<BTreeMap<(usize, usize), Scalar>> {
    let ansatz = &cs.ansatz;
    let lin_pos: Vec<Option<usize>> = (0..ansatz.dim).map(|i| ansatz.linear_position(i)).collect();
    let coord_of = |p: usize| -> Option<usize> { (0..ansatz.dim).find(|&i| lin_pos[i] == Some(p)) };
    let mut targets: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
    for eq in &cs.equations {
        if eq.quad.len() != 1 {
            continue;
        }
        let (&(p, q), coeff) = eq.quad.iter().next().expect("len 1");
        let (Some(i), Some(j)) = (coord_of(p), coord_of(q)) else {
            continue;
        };
        if coeff != &(-Scalar::one()) {
            continue;
        }
        // Only degree-2 unknowns may appear linearly here; they are zero in
        // every accepted assignment, so the equation reads c_i c_j = const.
        let key = (i.min(j), i.max(j));
        match targets.get(&key) {
            Some(existing) if existing != &eq.constant => return None,
            Some(_) => {}
            None => {
                targets.insert(key, eq.constant.clone());
            }
        }
    }
    Some(targets)
}

/// Solves the system by the case analysis described in the module docs,
/// returning every satisfying coefficient assignment. Assignments whose
/// linear part needs an irrational square root are returned on the floating
/// backend and checked within the default tolerance.
pub fn solve_constraints(cs: &ConstraintSystem) -> Vec<Assignment> {
    let ansatz = &cs.ansatz;
    let n = ansatz.dim;
    let mut out: Vec<Assignment> = Vec::new();

    // Branch c_0 = 0: everything collapses to f = 0.
    let zero_assignment = vec![Scalar::zero(); ansatz.len()];
    if cs.is_satisfied(&zero_assignment, DEFAULT_TOL) {
        out.push(zero_assignment);
    }

    // Branch c_0 = 1: degree-2 coefficients vanish and the linear part w
    // must satisfy w_i w_j = T_ij.
    let Some(targets) = quadratic_targets(cs) else {
        return out;
    };
    let diag = |i: usize| targets.get(&(i, i)).cloned().unwrap_or_else(Scalar::zero);
    let pivot = (0..n).find(|&i| !diag(i).is_zero());
    let candidates: Vec<Vec<Scalar>> = match pivot {
        None => vec![vec![Scalar::zero(); n]],
        Some(p) => {
            let tpp = diag(p);
            match sqrt_principal_lossy(&tpp, cs.field) {
                Err(ScalarError::NegativeRealSqrt) => Vec::new(),
                Err(ScalarError::InexactSqrt) => unreachable!("lossy sqrt"),
                Ok(wp) => {
                    let w: Vec<Scalar> = (0..n)
                        .map(|j| {
                            let key = (p.min(j), p.max(j));
                            let t = targets.get(&key).cloned().unwrap_or_else(Scalar::zero);
                            &t / &wp
                        })
                        .collect();
                    let neg: Vec<Scalar> = w.iter().map(|c| -c).collect();
                    if w == neg {
                        vec![w]
                    } else {
                        vec![w, neg]
                    }
                }
            }
        }
    };
    for w in candidates {
        let mut assignment = vec![Scalar::zero(); ansatz.len()];
        assignment[ansatz.constant_position()] = Scalar::one();
        for (i, wi) in w.into_iter().enumerate() {
            if let Some(p) = ansatz.linear_position(i) {
                assignment[p] = wi;
            }
        }
        if cs.is_satisfied(&assignment, DEFAULT_TOL) {
            out.push(assignment);
        }
    }
    out
}

/// Shape of one oracle assignment, for comparing against the solver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleSolution {
    /// `f = 0` (all coefficients zero); solves the equation only for `M = 0`.
    IdenticallyZero,
    /// `f = 1` (`c_0 = 1`, all others zero); solves only for `M = 0`.
    IdenticallyOne,
    /// `f(x) = w . x + 1` with nonzero `w`.
    Affine { w: Vector },
}

/// Classifies an assignment; `None` if it is not one of the shapes the
/// case analysis can produce (which would be a bug).
pub fn classify_assignment(ansatz: &PolyAnsatz, assignment: &[Scalar]) -> Option<OracleSolution> {
    let c0 = &assignment[ansatz.constant_position()];
    for (p, k) in ansatz.indices().iter().enumerate() {
        if total(k) >= 2 && !assignment[p].is_zero() {
            return None;
        }
    }
    let w: Vec<Scalar> = (0..ansatz.dim)
        .map(|i| {
            ansatz
                .linear_position(i)
                .map(|p| assignment[p].clone())
                .unwrap_or_else(Scalar::zero)
        })
        .collect();
    let w_zero = w.iter().all(Scalar::is_zero);
    if c0.is_zero() {
        return w_zero.then_some(OracleSolution::IdenticallyZero);
    }
    if !c0.is_one() {
        return None;
    }
    if w_zero {
        Some(OracleSolution::IdenticallyOne)
    } else {
        Some(OracleSolution::Affine {
            w: Vector::new(w).expect("dim > 0"),
        })
    }
}

fn vectors_match(a: &Vector, b: &Vector, tol: f64) -> bool {
    a.dim() == b.dim()
        && a.coords()
            .iter()
            .zip(b.coords())
            .all(|(x, y)| approx_eq(x, y, tol))
}

/// Cross-validates the solver against the oracle on one (exact) form.
///
/// Agreement means: a two-solution outcome matches exactly the two
/// nontrivial affine assignments `{+w, -w}`; a no-solution outcome matches
/// an empty assignment set; the zero form matches `{f = 0, f = 1}` (the
/// general exponential members are not polynomial and invisible to the
/// ansatz, while `a = 0` gives `f = 1`).
pub fn oracle_agrees(m: &BilinearForm) -> Result<bool, OracleError> {
    let ansatz = PolyAnsatz::new(m.dim(), MAX_DEGREE)?;
    let cs = expand_constraints(m, &ansatz)?;
    let assignments = solve_constraints(&cs);
    let mut zero_count = 0usize;
    let mut one_count = 0usize;
    let mut affine: Vec<Vector> = Vec::new();
    for assignment in &assignments {
        match classify_assignment(&ansatz, assignment) {
            Some(OracleSolution::IdenticallyZero) => zero_count += 1,
            Some(OracleSolution::IdenticallyOne) => one_count += 1,
            Some(OracleSolution::Affine { w }) => affine.push(w),
            None => return Ok(false),
        }
    }
    let agrees = match solve_matrix(m, DEFAULT_TOL) {
        SolutionSet::TwoAffine { plus, minus, .. } => {
            zero_count == 0
                && one_count == 0
                && affine.len() == 2
                && [plus.w(), minus.w()]
                    .iter()
                    .all(|w| affine.iter().any(|v| vectors_match(v, w, DEFAULT_TOL)))
        }
        SolutionSet::NoSolution { .. } => assignments.is_empty(),
        SolutionSet::ExponentialFamily(_) => zero_count == 1 && one_count == 1 && affine.is_empty(),
    };
    Ok(agrees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn real_form(rows: &[&[i64]]) -> BilinearForm {
        BilinearForm::from_int_rows(FieldTag::Real, rows)
    }

    fn eq(quad: &[((usize, usize), i64)], lin: &[(usize, i64)], constant: i64) -> Equation {
        Equation {
            quad: quad.iter().map(|&(k, v)| (k, Scalar::integer(v))).collect(),
            lin: lin.iter().map(|&(k, v)| (k, Scalar::integer(v))).collect(),
            constant: Scalar::integer(constant),
        }
    }

    #[test]
    fn ansatz_enumeration() {
        let a = PolyAnsatz::new(2, 2).unwrap();
        assert_eq!(
            a.indices(),
            &[
                vec![0, 0],
                vec![0, 1],
                vec![1, 0],
                vec![0, 2],
                vec![1, 1],
                vec![2, 0]
            ]
        );
        assert_eq!(PolyAnsatz::new(3, 2).unwrap().len(), 10);
        assert!(matches!(
            PolyAnsatz::new(4, 2),
            Err(OracleError::AnsatzTooLarge { .. })
        ));
        assert!(matches!(
            PolyAnsatz::new(1, 3),
            Err(OracleError::AnsatzTooLarge { .. })
        ));
    }

    #[test]
    fn expand_univariate_alpha_system() {
        // Hand expansion for f = c0 + c1 x + c2 x^2 and phi = alpha x y
        // (alpha = 4), unknown positions: c0 = 0, c1 = 1, c2 = 2.
        let ansatz = PolyAnsatz::new(1, 2).unwrap();
        let cs = expand_constraints(&real_form(&[&[4]]), &ansatz).unwrap();
        let expected = [
            eq(&[((0, 0), -1)], &[(0, 1)], 0), // c0 - c0^2
            eq(&[((0, 1), -1)], &[(1, 1)], 0), // c1 - c0 c1
            eq(&[((0, 2), -1)], &[(2, 1)], 0), // c2 - c0 c2
            eq(&[((1, 1), -1)], &[(2, 2)], 4), // 2 c2 - c1^2 + alpha
            eq(&[((1, 2), -1)], &[], 0),       // -c1 c2
            eq(&[((2, 2), -1)], &[], 0),       // -c2^2
        ];
        assert_eq!(cs.equations.len(), 6);
        for e in &expected {
            assert!(cs.equations.contains(e), "missing equation {e:?}");
        }
    }

    #[test]
    fn expand_zero_form_degree_one() {
        let ansatz = PolyAnsatz::new(1, 1).unwrap();
        let cs = expand_constraints(&real_form(&[&[0]]), &ansatz).unwrap();
        let expected = [
            eq(&[((0, 0), -1)], &[(0, 1)], 0), // c0 - c0^2
            eq(&[((0, 1), -1)], &[(1, 1)], 0), // c1 - c0 c1
            eq(&[((1, 1), -1)], &[], 0),       // -c1^2
        ];
        assert_eq!(cs.equations.len(), 3);
        for e in &expected {
            assert!(cs.equations.contains(e), "missing equation {e:?}");
        }
    }

    #[test]
    fn expand_identity_form_has_product_conditions() {
        // The x_i y_j coefficients give c_i c_j = M_ij.
        let ansatz = PolyAnsatz::new(2, 1).unwrap();
        let cs = expand_constraints(&BilinearForm::identity(FieldTag::Real, 2), &ansatz).unwrap();
        // positions: c0 = 0, c_{x2} = 1, c_{x1} = 2 (lex on [0,1] < [1,0]).
        let p1 = ansatz.linear_position(0).unwrap();
        let p2 = ansatz.linear_position(1).unwrap();
        for (key, want) in [((p1, p1), 1), ((p2, p2), 1), ((p1.min(p2), p1.max(p2)), 0)] {
            let e = eq(&[(key, -1)], &[], want);
            assert!(cs.equations.contains(&e), "missing {e:?}");
        }
    }

    #[test]
    fn solve_constraints_alpha_four() {
        let ansatz = PolyAnsatz::new(1, 2).unwrap();
        let cs = expand_constraints(&real_form(&[&[4]]), &ansatz).unwrap();
        let sols = solve_constraints(&cs);
        // (c0, c1, c2) in {(1, 2, 0), (1, -2, 0)}.
        assert_eq!(sols.len(), 2);
        for s in &sols {
            assert_eq!(s[0], Scalar::one());
            assert_eq!(s[2], Scalar::zero());
        }
        let c1s: Vec<&Scalar> = sols.iter().map(|s| &s[1]).collect();
        assert!(c1s.contains(&&Scalar::integer(2)));
        assert!(c1s.contains(&&Scalar::integer(-2)));
    }

    #[test]
    fn solve_constraints_negative_alpha_real_is_empty() {
        let ansatz = PolyAnsatz::new(1, 2).unwrap();
        let cs = expand_constraints(&real_form(&[&[-1]]), &ansatz).unwrap();
        assert!(solve_constraints(&cs).is_empty());
    }

    #[test]
    fn solve_constraints_identity_dim_two_is_empty() {
        let ansatz = PolyAnsatz::new(2, 2).unwrap();
        let cs = expand_constraints(&BilinearForm::identity(FieldTag::Real, 2), &ansatz).unwrap();
        assert!(solve_constraints(&cs).is_empty());
    }

    #[test]
    fn solve_constraints_zero_form_finds_trivial_pair() {
        let ansatz = PolyAnsatz::new(2, 2).unwrap();
        let cs = expand_constraints(&BilinearForm::zero(FieldTag::Real, 2), &ansatz).unwrap();
        let sols = solve_constraints(&cs);
        let kinds: Vec<OracleSolution> = sols
            .iter()
            .map(|s| classify_assignment(&ansatz, s).unwrap())
            .collect();
        assert_eq!(kinds.len(), 2);
        assert!(kinds.contains(&OracleSolution::IdenticallyZero));
        assert!(kinds.contains(&OracleSolution::IdenticallyOne));
    }

    #[test]
    fn antisymmetric_system_is_unsatisfiable() {
        let ansatz = PolyAnsatz::new(2, 2).unwrap();
        let cs = expand_constraints(&real_form(&[&[0, 1], &[-1, 0]]), &ansatz).unwrap();
        assert!(solve_constraints(&cs).is_empty());
    }

    #[test]
    fn oracle_agrees_on_golden_cases() {
        assert!(oracle_agrees(&real_form(&[&[4]])).unwrap());
        assert!(oracle_agrees(&real_form(&[&[1, 2], &[2, 4]])).unwrap());
        assert!(oracle_agrees(&real_form(&[&[0, 1], &[-1, 0]])).unwrap());
        assert!(oracle_agrees(&BilinearForm::identity(FieldTag::Real, 2)).unwrap());
        assert!(oracle_agrees(&BilinearForm::zero(FieldTag::Real, 3)).unwrap());
        // Irrational slope: both sides fall back to floating and still agree.
        assert!(oracle_agrees(&real_form(&[&[2]])).unwrap());
        // Complex field, including a negative-definite rank-one form.
        let v = Vector::new(vec![Scalar::complex_int(1, 1), Scalar::integer(2)]).unwrap();
        let m = BilinearForm::outer(FieldTag::Complex, &v)
            .unwrap()
            .scaled(&Scalar::integer(-1))
            .unwrap();
        assert!(oracle_agrees(&m).unwrap());
    }

    #[test]
    fn oracle_requires_exact_entries() {
        let m = BilinearForm::new(FieldTag::Real, vec![vec![Scalar::from_f64(4.0)]]).unwrap();
        assert_eq!(oracle_agrees(&m), Err(OracleError::ExactBackendRequired));
    }

    fn small_symmetric_form(dim: usize) -> impl Strategy<Value = BilinearForm> {
        proptest::collection::vec(-2i64..=2, dim * dim).prop_map(move |vals| {
            let rows = (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| Scalar::integer(vals[i * dim + j] + vals[j * dim + i]))
                        .collect()
                })
                .collect();
            BilinearForm::new(FieldTag::Real, rows).unwrap()
        })
    }

    proptest! {
        #[test]
        fn returned_assignments_satisfy_every_equation(m in small_symmetric_form(2)) {
            let ansatz = PolyAnsatz::new(2, 2).unwrap();
            let cs = expand_constraints(&m, &ansatz).unwrap();
            for assignment in solve_constraints(&cs) {
                if assignment.iter().all(Scalar::is_exact) {
                    for e in &cs.equations {
                        prop_assert!(e.eval(&assignment).is_zero());
                    }
                } else {
                    prop_assert!(cs.is_satisfied(&assignment, DEFAULT_TOL));
                }
            }
        }

        #[test]
        fn degree_two_coefficients_always_vanish(m in small_symmetric_form(2)) {
            let ansatz = PolyAnsatz::new(2, 2).unwrap();
            let cs = expand_constraints(&m, &ansatz).unwrap();
            for assignment in solve_constraints(&cs) {
                for (p, k) in ansatz.indices().iter().enumerate() {
                    if total(k) == 2 {
                        prop_assert!(assignment[p].is_zero());
                    }
                }
            }
        }

        #[test]
        fn oracle_and_solver_agree_on_random_forms(m in small_symmetric_form(3)) {
            prop_assert!(oracle_agrees(&m).unwrap());
        }
    }
}
