//! Multiplicative n-Hom-Leibniz algebras, their morphisms and representations,
//! given by structure constants, with exhaustive axiom checkers.
//!
//! The bracket of an algebra of arity `n` and dimension `d` is a tensor with
//! `n` input slots of size `d` and an output slot of size `d`. The identity
//! checked on every basis tuple is
//!
//! ```text
//! [[x_1..x_n], a(y_1)..a(y_{n-1})] = sum_i [a(x_1)..[x_i, y_1..y_{n-1}]..a(x_n)]
//! ```
//!
//! where `a` is the twist. A representation `(M, a_M)` carries `n` actions;
//! action `i` is a tensor whose slot `i` takes the module element. Its axioms
//! are the `2n-1` specialisations of the identity with exactly one variable in
//! `M` (and `a_M` in place of `a` on that variable). They are generated here
//! rather than written out by hand.
//!
//! Two conventions are not fixed by the defining identity and are taken from
//! the usual background literature: a morphism must preserve the bracket *and*
//! intertwine the twists (`phi a = b phi`), and a fundamental object is a plain
//! `(n-1)`-tuple of algebra elements.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// Which identity a [`Violation`] breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    /// The fundamental identity; `module_slot` is the position (0-based over
    /// `x_1..x_n, y_1..y_{n-1}`) holding the module element, if any.
    HomLeibniz { module_slot: Option<usize> },
    Multiplicative,
    BracketPreservation,
    /// `phi a = b phi` fails on the basis vector in the tuple.
    Intertwining,
}

/// One failing basis tuple together with its (nonzero) residual vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub tuple: Vec<usize>,
    pub residual: Vec<Scalar>,
}

fn violations(kind: ViolationKind, residual: &Tensor) -> Vec<Violation> {
    let out = residual.output_dim();
    residual
        .data()
        .chunks(out.max(1))
        .enumerate()
        .filter(|(_, r)| r.iter().any(|x| !x.is_zero()))
        .map(|(offset, r)| {
            let mut tuple = residual.multi_index(offset * out);
            tuple.pop();
            Violation { kind, tuple, residual: r.to_vec() }
        })
        .collect()
}

/// A finite-dimensional n-ary algebra with a twist, given by structure
/// constants: `[e_{i_1}..e_{i_n}] = sum_k bracket[i_1..i_n][k] e_k` and
/// `alpha(e_j) = sum_i alpha[i][j] e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomNaryAlgebra {
    arity: usize,
    labels: Vec<String>,
    bracket: Tensor,
    alpha: Matrix,
}

impl HomNaryAlgebra {
    /// Validates shapes only; the axioms are checked by [`Self::check_hom_leibniz`]
    /// and [`Self::check_multiplicative`].
    pub fn new(arity: usize, labels: Vec<String>, bracket: Tensor, alpha: Matrix) -> Result<Self> {
        let d = labels.len();
        if arity < 2 {
            return Err(Error::Shape(format!("arity must be at least 2, got {arity}")));
        }
        if d == 0 {
            return Err(Error::Shape("algebra must have at least one basis element".into()));
        }
        if bracket.dims() != vec![d; arity + 1].as_slice() {
            return Err(Error::Shape(format!("bracket tensor has dims {:?}, expected {} slots of size {d}", bracket.dims(), arity + 1)));
        }
        if alpha.rows() != d || alpha.cols() != d {
            return Err(Error::Shape(format!("twist is {}x{}, expected {d}x{d}", alpha.rows(), alpha.cols())));
        }
        Ok(HomNaryAlgebra { arity, labels, bracket, alpha })
    }

    /// Same bracket and twist with generated labels `e0, e1, ..`.
    pub fn unlabeled(arity: usize, bracket: Tensor, alpha: Matrix) -> Result<Self> {
        let labels = (0..alpha.rows()).map(|i| format!("e{i}")).collect();
        Self::new(arity, labels, bracket, alpha)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn bracket(&self) -> &Tensor {
        &self.bracket
    }

    pub fn alpha(&self) -> &Matrix {
        &self.alpha
    }

    /// The bracket evaluated on coordinate vectors.
    pub fn bracket_of(&self, elements: &[&[Scalar]]) -> Vec<Scalar> {
        self.bracket.eval(elements)
    }

    /// Same algebra with a different bracket (used for deformation terms).
    pub fn with_bracket(&self, bracket: Tensor) -> Result<Self> {
        Self::new(self.arity, self.labels.clone(), bracket, self.alpha.clone())
    }

    /// Residual tensor of the fundamental identity, with `2n-1` inputs
    /// `x_1..x_n, y_1..y_{n-1}`.
    pub fn hom_leibniz_residual(&self) -> Tensor {
        fundamental_residual(self, None)
    }

    pub fn check_hom_leibniz(&self) -> Vec<Violation> {
        violations(ViolationKind::HomLeibniz { module_slot: None }, &self.hom_leibniz_residual())
    }

    /// `alpha [x_1..x_n] = [alpha x_1 .. alpha x_n]` on all basis tuples.
    pub fn check_multiplicative(&self) -> Vec<Violation> {
        let lhs = self.bracket.postcompose(&self.alpha);
        let rhs = self.bracket.precompose_all(0..self.arity, &self.alpha);
        violations(ViolationKind::Multiplicative, &lhs.sub(&rhs))
    }

    /// Both axioms hold.
    pub fn is_valid(&self) -> bool {
        self.check_hom_leibniz().is_empty() && self.check_multiplicative().is_empty()
    }

    /// The representation of the algebra on itself: `M = L`, `a_M = a`, and
    /// every action is the bracket.
    pub fn adjoint_representation(&self) -> Representation {
        Representation {
            algebra: self.clone(),
            labels: self.labels.clone(),
            alpha_m: self.alpha.clone(),
            actions: vec![self.bracket.clone(); self.arity],
        }
    }

    /// Twists an untwisted algebra (`alpha = id`) by an endomorphism `t` of its
    /// bracket: the result has bracket `t [..]` and twist `t`.
    pub fn yau_twist(&self, t: &Matrix) -> Result<Self> {
        if !self.alpha.is_identity() {
            return Err(Error::Shape("Yau twist expects an algebra with identity twist".into()));
        }
        if t.rows() != self.dim() || t.cols() != self.dim() {
            return Err(Error::Shape(format!("twist map is {}x{}, expected {}x{}", t.rows(), t.cols(), self.dim(), self.dim())));
        }
        let lhs = self.bracket.postcompose(t);
        let rhs = self.bracket.precompose_all(0..self.arity, t);
        let bad = violations(ViolationKind::Multiplicative, &lhs.sub(&rhs)).len();
        if bad > 0 {
            return Err(Error::NotEndomorphism { violations: bad });
        }
        Self::new(self.arity, self.labels.clone(), lhs, t.clone())
    }
}

/// A linear map between two algebras of the same arity, given by its
/// `dim(target) x dim(source)` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    source: HomNaryAlgebra,
    target: HomNaryAlgebra,
    matrix: Matrix,
}

impl Morphism {
    /// Validates shapes only; see [`Self::check`].
    pub fn new(source: HomNaryAlgebra, target: HomNaryAlgebra, matrix: Matrix) -> Result<Self> {
        if source.arity() != target.arity() {
            return Err(Error::Shape(format!("arities {} and {} differ", source.arity(), target.arity())));
        }
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::Shape(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        Ok(Morphism { source, target, matrix })
    }

    pub fn identity(algebra: &HomNaryAlgebra) -> Self {
        Morphism { source: algebra.clone(), target: algebra.clone(), matrix: Matrix::identity(algebra.dim()) }
    }

    pub fn zero(source: &HomNaryAlgebra, target: &HomNaryAlgebra) -> Result<Self> {
        Self::new(source.clone(), target.clone(), Matrix::zeros(target.dim(), source.dim()))
    }

    pub fn source(&self) -> &HomNaryAlgebra {
        &self.source
    }

    pub fn target(&self) -> &HomNaryAlgebra {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Bracket preservation on all basis tuples and `phi a = b phi`.
    pub fn check(&self) -> Vec<Violation> {
        let n = self.source.arity();
        let lhs = self.source.bracket().postcompose(&self.matrix);
        let rhs = self.target.bracket().precompose_all(0..n, &self.matrix);
        let mut report = violations(ViolationKind::BracketPreservation, &lhs.sub(&rhs));
        let left = self.matrix.mul(self.source.alpha()).expect("shapes checked");
        let right = self.target.alpha().mul(&self.matrix).expect("shapes checked");
        let diff = left.sub(&right).expect("same shape");
        for j in 0..diff.cols() {
            let col = diff.column(j);
            if col.iter().any(|x| !x.is_zero()) {
                report.push(Violation { kind: ViolationKind::Intertwining, tuple: vec![j], residual: col });
            }
        }
        report
    }

    /// The target as a representation of the source, through `phi`: the action
    /// in slot `i` is the target bracket with `phi` applied to every other slot,
    /// and the module twist is the target twist.
    pub fn pullback_representation(&self) -> Result<Representation> {
        let bad = self.check().len();
        if bad > 0 {
            return Err(Error::InvalidMorphism { violations: bad });
        }
        let n = self.source.arity();
        let actions = (0..n)
            .map(|i| self.target.bracket().precompose_all((0..n).filter(|&s| s != i), &self.matrix))
            .collect();
        Ok(Representation {
            algebra: self.source.clone(),
            labels: self.target.labels().to_vec(),
            alpha_m: self.target.alpha().clone(),
            actions,
        })
    }
}

/// A representation `(M, a_M)` of an algebra with its `n` actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    algebra: HomNaryAlgebra,
    labels: Vec<String>,
    alpha_m: Matrix,
    actions: Vec<Tensor>,
}

impl Representation {
    /// Validates shapes: action `i` must have the module in slot `i`.
    pub fn new(algebra: HomNaryAlgebra, labels: Vec<String>, alpha_m: Matrix, actions: Vec<Tensor>) -> Result<Self> {
        let n = algebra.arity();
        let d = algebra.dim();
        let m = labels.len();
        if m == 0 {
            return Err(Error::Shape("module must have at least one basis element".into()));
        }
        if alpha_m.rows() != m || alpha_m.cols() != m {
            return Err(Error::Shape(format!("module twist is {}x{}, expected {m}x{m}", alpha_m.rows(), alpha_m.cols())));
        }
        if actions.len() != n {
            return Err(Error::Shape(format!("{} actions given, expected {n}", actions.len())));
        }
        for (i, a) in actions.iter().enumerate() {
            let expected: Vec<usize> = (0..=n).map(|s| if s == i || s == n { m } else { d }).collect();
            if a.dims() != expected.as_slice() {
                return Err(Error::Shape(format!("action {i} has dims {:?}, expected {expected:?}", a.dims())));
            }
        }
        Ok(Representation { algebra, labels, alpha_m, actions })
    }

    pub fn algebra(&self) -> &HomNaryAlgebra {
        &self.algebra
    }

    pub fn module_dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn alpha_m(&self) -> &Matrix {
        &self.alpha_m
    }

    /// Action with the module element in slot `i`.
    pub fn action(&self, i: usize) -> &Tensor {
        &self.actions[i]
    }

    pub fn actions(&self) -> &[Tensor] {
        &self.actions
    }

    /// Residual of the specialisation with the module element at `position`
    /// (0-based over `x_1..x_n, y_1..y_{n-1}`).
    pub fn residual_at(&self, position: usize) -> Tensor {
        assert!(position < 2 * self.algebra.arity() - 1, "position out of range");
        fundamental_residual(&self.algebra, Some((position, self)))
    }

    /// All `2n-1` specialisations on all basis tuples.
    pub fn check(&self) -> Vec<Violation> {
        (0..2 * self.algebra.arity() - 1)
            .flat_map(|q| violations(ViolationKind::HomLeibniz { module_slot: Some(q) }, &self.residual_at(q)))
            .collect()
    }
}

/// Fundamental identity residual, optionally with a module element at one
/// position. The returned tensor has inputs `x_1..x_n, y_1..y_{n-1}`.
fn fundamental_residual(alg: &HomNaryAlgebra, module: Option<(usize, &Representation)>) -> Tensor {
    let n = alg.arity();
    let q = module.map(|(q, _)| q);
    let bracket_at = |slot: Option<usize>| -> &Tensor {
        match (slot, module) {
            (Some(s), Some((_, rep))) => rep.action(s),
            _ => alg.bracket(),
        }
    };
    let twist = |pos: usize| -> &Matrix {
        match module {
            Some((p, rep)) if p == pos => rep.alpha_m(),
            _ => alg.alpha(),
        }
    };
    let on_module = |pos: usize| q == Some(pos);
    let y_module = q.filter(|&p| p >= n).map(|p| 1 + p - n);

    // [[x_1..x_n], a(y)..]
    let inner = bracket_at(q.filter(|&p| p < n));
    let outer_slot = if q.is_some_and(|p| p < n) { Some(0) } else { y_module };
    let mut lhs = bracket_at(outer_slot).substitute(0, inner);
    for pos in n..2 * n - 1 {
        lhs = lhs.precompose(pos, twist(pos));
    }

    let mut residual = lhs;
    for i in 0..n {
        let inner_slot = if on_module(i) { Some(0) } else { y_module };
        let outer_slot = if inner_slot.is_some() { Some(i) } else { q.filter(|&p| p < n) };
        let mut outer = bracket_at(outer_slot).clone();
        for pos in (0..n).filter(|&p| p != i) {
            outer = outer.precompose(pos, twist(pos));
        }
        let term = outer.substitute(i, bracket_at(inner_slot));
        // slots now: x_1..x_i, (x_{i+1}, y_1..y_{n-1}), x_{i+2}..x_n, out
        let mut dest: Vec<usize> = (0..i).collect();
        dest.push(i);
        dest.extend(n..2 * n - 1);
        dest.extend(i + 1..n);
        dest.push(2 * n - 1);
        residual = residual.sub(&term.arrange(&dest));
    }
    residual
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::int;

    #[test]
    fn zero_bracket_is_valid_for_any_twist() {
        let alpha = Matrix::from_rows(vec![vec![int(2), int(1)], vec![int(0), int(-3)]]).unwrap();
        let a = HomNaryAlgebra::unlabeled(2, Tensor::zeros(vec![2, 2, 2]), alpha).unwrap();
        assert!(a.check_hom_leibniz().is_empty());
        assert!(a.check_multiplicative().is_empty());
    }

    #[test]
    fn ff_e_is_leibniz() {
        let a = fixtures::ff_e();
        assert!(a.check_hom_leibniz().is_empty());
        assert!(a.check_multiplicative().is_empty());
    }

    #[test]
    fn ee_f_ff_e_violates_identity() {
        // Brute-force oracle: evaluate both sides on all 8 triples.
        let a = fixtures::ee_f_ff_e();
        let report = a.check_hom_leibniz();
        assert!(!report.is_empty());
        for v in &report {
            let e = |i: usize| -> Vec<Scalar> { (0..2).map(|k| int((k == i) as i64)).collect() };
            let (x1, x2, y) = (e(v.tuple[0]), e(v.tuple[1]), e(v.tuple[2]));
            let lhs = a.bracket_of(&[&a.bracket_of(&[&x1, &x2]), &y]);
            let r1 = a.bracket_of(&[&a.bracket_of(&[&x1, &y]), &x2]);
            let r2 = a.bracket_of(&[&x1, &a.bracket_of(&[&x2, &y])]);
            let expected: Vec<Scalar> = (0..2).map(|k| &lhs[k] - &r1[k] - &r2[k]).collect();
            assert_eq!(v.residual, expected);
        }
        // x1 = e, x2 = e, y = f: [[e,e],f] = [f,f] = e, [[e,f],e] = 0, [e,[e,f]] = 0.
        assert!(report.iter().any(|v| v.tuple == vec![0, 0, 1] && v.residual == vec![int(1), int(0)]));
    }

    #[test]
    fn multiplicativity_violation() {
        let alpha = Matrix::from_rows(vec![vec![int(0), int(0)], vec![int(0), int(1)]]).unwrap();
        let a = fixtures::ff_e().with_bracket(fixtures::ff_e().bracket().clone()).unwrap();
        let a = HomNaryAlgebra::new(2, a.labels().to_vec(), a.bracket().clone(), alpha).unwrap();
        let report = a.check_multiplicative();
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].tuple, vec![1, 1]);
        // alpha[f,f] - [alpha f, alpha f] = 0 - e
        assert_eq!(report[0].residual, vec![int(-1), int(0)]);
    }

    #[test]
    fn morphism_checks() {
        let a = fixtures::ff_e();
        assert!(Morphism::identity(&a).check().is_empty());
        assert!(Morphism::zero(&a, &fixtures::abelian(2, 3)).unwrap().check().is_empty());
        let swap = Morphism::new(a.clone(), a.clone(), Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap()).unwrap();
        let report = swap.check();
        // phi[f,f] = f but [phi f, phi f] = [e,e] = 0
        assert!(report.iter().any(|v| v.kind == ViolationKind::BracketPreservation && v.tuple == vec![1, 1] && v.residual == vec![int(0), int(1)]));
        assert!(matches!(swap.pullback_representation(), Err(Error::InvalidMorphism { .. })));
    }

    #[test]
    fn intertwining_is_checked() {
        let l = fixtures::ff_e_twisted();
        let phi = Morphism::new(l.clone(), l.clone(), Matrix::from_rows(vec![vec![int(1), int(1)], vec![int(0), int(1)]]).unwrap()).unwrap();
        assert!(phi.check().iter().any(|v| v.kind == ViolationKind::Intertwining));
    }

    #[test]
    fn adjoint_and_pullback_satisfy_axioms() {
        for a in fixtures::battery() {
            assert!(a.adjoint_representation().check().is_empty(), "adjoint of {a:?}");
        }
        for phi in fixtures::morphisms() {
            let rep = phi.pullback_representation().unwrap();
            assert!(rep.check().is_empty());
            assert_eq!(rep.alpha_m(), phi.target().alpha());
        }
    }

    #[test]
    fn adjoint_of_ff_e_transcribes_constants() {
        let rep = fixtures::ff_e().adjoint_representation();
        assert_eq!(rep.action(0).value(&[1, 1]), &[int(1), int(0)]);
        let zero = fixtures::abelian(2, 2).adjoint_representation();
        assert!(zero.actions().iter().all(Tensor::is_zero));
    }

    #[test]
    fn pullback_of_identity_and_zero() {
        let l = fixtures::ff_e_twisted();
        assert_eq!(Morphism::identity(&l).pullback_representation().unwrap(), l.adjoint_representation());
        let z = Morphism::zero(&l, &l).unwrap().pullback_representation().unwrap();
        assert!(z.actions().iter().all(Tensor::is_zero));
        assert_eq!(z.alpha_m(), l.alpha());
    }

    #[test]
    fn representation_with_twisted_module_oracle() {
        // sl2 acting on itself with a module twist that does not intertwine.
        let a = fixtures::sl2();
        let alpha_m = fixtures::sl2_automorphism().scale(&int(2));
        let rep = Representation::new(a.clone(), a.labels().to_vec(), alpha_m.clone(), vec![a.bracket().clone(); 2]).unwrap();
        let e = |i: usize| -> Vec<Scalar> { (0..3).map(|k| int((k == i) as i64)).collect() };
        let br = |u: &[Scalar], v: &[Scalar]| a.bracket_of(&[u, v]);
        let tw = |pos: usize, q: usize, v: &[Scalar]| if pos == q { alpha_m.mul_vec(v).unwrap() } else { v.to_vec() };
        let mut expected = Vec::new();
        for q in 0..3 {
            for t in 0..27usize {
                let (i, j, k) = (t / 9, (t / 3) % 3, t % 3);
                let (x1, x2, y) = (e(i), e(j), e(k));
                let lhs = br(&br(&x1, &x2), &tw(2, q, &y));
                let r1 = br(&br(&x1, &y), &tw(1, q, &x2));
                let r2 = br(&tw(0, q, &x1), &br(&x2, &y));
                let res: Vec<Scalar> = (0..3).map(|c| &lhs[c] - &r1[c] - &r2[c]).collect();
                if res.iter().any(|x| !x.is_zero()) {
                    expected.push((q, vec![i, j, k], res));
                }
            }
        }
        let got: Vec<_> = rep
            .check()
            .into_iter()
            .map(|v| match v.kind {
                ViolationKind::HomLeibniz { module_slot: Some(q) } => (q, v.tuple, v.residual),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(got, expected);
        assert!(!got.is_empty());
    }

    #[test]
    fn adjoint_check_matches_algebra_check() {
        let bad = fixtures::ee_f_ff_e();
        let base: Vec<_> = bad.check_hom_leibniz().into_iter().map(|v| (v.tuple, v.residual)).collect();
        let rep = bad.adjoint_representation();
        for q in 0..3 {
            let got: Vec<_> = violations(ViolationKind::Multiplicative, &rep.residual_at(q)).into_iter().map(|v| (v.tuple, v.residual)).collect();
            assert_eq!(got, base, "module position {q}");
        }
    }

    #[test]
    fn yau_twist_examples() {
        let a = fixtures::ff_e();
        assert_eq!(a.yau_twist(&Matrix::identity(2)).unwrap(), a);
        let zero = a.yau_twist(&Matrix::zeros(2, 2)).unwrap();
        assert!(zero.bracket().is_zero() && zero.alpha().is_zero());
        let t = fixtures::diag(&[4, 2]);
        let tw = a.yau_twist(&t).unwrap();
        assert_eq!(tw.bracket().value(&[1, 1]), &[int(4), int(0)]);
        assert_eq!(tw.alpha(), &t);
        assert!(tw.is_valid());
        assert!(matches!(a.yau_twist(&fixtures::diag(&[1, 2])), Err(Error::NotEndomorphism { .. })));
    }

    #[test]
    fn shape_errors() {
        assert!(HomNaryAlgebra::unlabeled(2, Tensor::zeros(vec![2, 2]), Matrix::identity(2)).is_err());
        assert!(HomNaryAlgebra::unlabeled(1, Tensor::zeros(vec![2, 2]), Matrix::identity(2)).is_err());
        let a = fixtures::ff_e();
        assert!(Morphism::new(a.clone(), fixtures::ff_f_e3(), Matrix::identity(2)).is_err());
        assert!(Representation::new(a.clone(), a.labels().to_vec(), Matrix::identity(2), vec![a.bracket().clone()]).is_err());
    }
}
