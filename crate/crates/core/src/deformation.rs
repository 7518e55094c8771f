//! Truncated formal deformations of algebras and of morphisms, their
//! order-by-order equations, obstruction cochains and the extension solver.
//!
//! All identities are checked on basis tuples; coefficients above the stored
//! order count as zero.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::algebra::{HomNaryAlgebra, Morphism};
use crate::cochain::{satisfies_constraint, SignConvention};
use crate::error::{Error, Result};
use crate::linalg::{solve, Matrix};
use crate::morphism_complex::{differential_tensors, MorphismCochain, MorphismReps};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// `xi_0 + xi_1 t + .. + xi_N t^N` with `xi_0` the base bracket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedDeformation {
    base: HomNaryAlgebra,
    coeffs: Vec<Tensor>,
}

impl TruncatedDeformation {
    /// `higher[k]` is the coefficient of `t^{k+1}`.
    pub fn new(base: HomNaryAlgebra, higher: Vec<Tensor>) -> Result<Self> {
        for (k, t) in higher.iter().enumerate() {
            if t.dims() != base.bracket().dims() {
                return Err(Error::Shape(alloc::format!(
                    "coefficient of order {} has dims {:?}, expected {:?}",
                    k + 1,
                    t.dims(),
                    base.bracket().dims()
                )));
            }
        }
        let mut coeffs = vec![base.bracket().clone()];
        coeffs.extend(higher);
        Ok(TruncatedDeformation { base, coeffs })
    }

    /// All higher coefficients zero.
    pub fn trivial(base: HomNaryAlgebra, order: usize) -> Self {
        let zero = Tensor::zeros(base.bracket().dims().to_vec());
        let coeffs = vec![zero; order];
        Self::new(base, coeffs).expect("shapes match")
    }

    pub fn base(&self) -> &HomNaryAlgebra {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `xi_i`, or `None` above the stored order.
    pub fn coeff(&self, i: usize) -> Option<&Tensor> {
        self.coeffs.get(i)
    }

    pub fn coeffs(&self) -> &[Tensor] {
        &self.coeffs
    }

    /// Keeps orders `0..=order`.
    pub fn truncate(&self, order: usize) -> Self {
        TruncatedDeformation { base: self.base.clone(), coeffs: self.coeffs[..=order.min(self.order())].to_vec() }
    }

    /// Appends zero coefficients up to `order`.
    pub fn pad(&self, order: usize) -> Self {
        let mut out = self.clone();
        while out.order() < order {
            out.coeffs.push(Tensor::zeros(self.base.bracket().dims().to_vec()));
        }
        out
    }

    /// Replaces (or appends, padding with zeros) the coefficient of `t^i`.
    pub fn with_coeff(&self, i: usize, t: Tensor) -> Result<Self> {
        if i == 0 || t.dims() != self.base.bracket().dims() {
            return Err(Error::Shape(alloc::format!("cannot set coefficient {i} to a tensor with dims {:?}", t.dims())));
        }
        let mut out = self.pad(i);
        out.coeffs[i] = t;
        Ok(out)
    }

    /// Whether `alpha xi_i = xi_i alpha^{x n}` for every `i`.
    pub fn multiplicative_coefficients(&self) -> Vec<usize> {
        let rep = self.base.adjoint_representation();
        (0..self.coeffs.len()).filter(|&i| !satisfies_constraint(&rep, &self.coeffs[i])).collect()
    }

    /// Orders `0..=order` whose equation fails.
    pub fn invalid_orders(&self, through: usize) -> Vec<usize> {
        (0..=through).filter(|&l| !algebra_order_residual(self, l).is_zero()).collect()
    }
}

/// `outer(inner(X), a Y)` with slots `x_1..x_n, y_1..y_{n-1}`.
pub fn leibniz_lhs(outer: &Tensor, inner: &Tensor, alpha: &Matrix) -> Tensor {
    let n = outer.arity();
    outer.substitute(0, inner).precompose_all(n..2 * n - 1, alpha)
}

/// `sum_k outer(a x_1, .., inner(x_k, Y), .., a x_n)` with slots
/// `x_1..x_n, y_1..y_{n-1}`.
pub fn leibniz_rhs(outer: &Tensor, inner: &Tensor, alpha: &Matrix) -> Tensor {
    let n = outer.arity();
    let mut dims = vec![alpha.rows(); 2 * n - 1];
    dims.push(outer.output_dim());
    let mut out = Tensor::zeros(dims);
    for k in 0..n {
        let g = outer.precompose_all((0..n).filter(|&s| s != k), alpha).substitute(k, inner);
        let mut dest: Vec<usize> = (0..k).collect();
        dest.push(k);
        dest.extend(n..2 * n - 1);
        dest.extend(k + 1..n);
        dest.push(2 * n - 1);
        out.add_assign(&g.arrange(&dest));
    }
    out
}

fn leibniz_term(outer: &Tensor, inner: &Tensor, alpha: &Matrix) -> Tensor {
    leibniz_lhs(outer, inner, alpha).sub(&leibniz_rhs(outer, inner, alpha))
}

/// `sum_{i+j=l} [xi_i(xi_j(X), a Y) - sum_k xi_i(.., xi_j(x_k, Y), ..)]`.
pub fn algebra_order_residual(d: &TruncatedDeformation, l: usize) -> Tensor {
    let alpha = d.base.alpha();
    let mut out = Tensor::zeros(leibniz_dims(&d.base));
    for i in 0..=l {
        if let (Some(outer), Some(inner)) = (d.coeff(i), d.coeff(l - i)) {
            out.add_assign(&leibniz_term(outer, inner, alpha));
        }
    }
    out
}

fn leibniz_dims(a: &HomNaryAlgebra) -> Vec<usize> {
    vec![a.dim(); 2 * a.arity()]
}

/// The quadratic part of the order-`l` algebra equation: the same sum over
/// `i + j = l` with `i, j > 0`.
pub fn quadratic_part(d: &TruncatedDeformation, l: usize) -> Tensor {
    let alpha = d.base.alpha();
    let mut out = Tensor::zeros(leibniz_dims(&d.base));
    for i in 1..l {
        if let (Some(outer), Some(inner)) = (d.coeff(i), d.coeff(l - i)) {
            out.add_assign(&leibniz_term(outer, inner, alpha));
        }
    }
    out
}

/// The part of the order-`l` equation that is linear in `xi_l`: the four
/// groups `xi_0(xi_l(X), aY)`, `xi_l(xi_0(X), aY)` and the two sums on the
/// right-hand side.
pub fn linear_part(d: &TruncatedDeformation, l: usize) -> Tensor {
    let alpha = d.base.alpha();
    let mut out = Tensor::zeros(leibniz_dims(&d.base));
    if l == 0 {
        return out;
    }
    let xi0 = d.base.bracket();
    if let Some(xl) = d.coeff(l) {
        out.add_assign(&leibniz_lhs(xi0, xl, alpha));
        out.add_assign(&leibniz_lhs(xl, xi0, alpha));
        out = out.sub(&leibniz_rhs(xi0, xl, alpha));
        out = out.sub(&leibniz_rhs(xl, xi0, alpha));
    }
    out
}

/// Outcome of [`regrouping_identity_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regrouping {
    pub linear: Tensor,
    pub quadratic: Tensor,
    pub residual: Tensor,
    pub holds: bool,
}

/// Confirms `linear + quadratic = residual` for the order-`l` equation. This
/// is an algebraic identity and holds for arbitrary coefficients.
pub fn regrouping_identity_check(d: &TruncatedDeformation, l: usize) -> Result<Regrouping> {
    if l == 0 {
        return Err(Error::InvalidDegree(0));
    }
    let linear = linear_part(d, l);
    let quadratic = quadratic_part(d, l);
    let residual = algebra_order_residual(d, l);
    let mut sum = linear.clone();
    sum.add_assign(&quadratic);
    let holds = sum == residual;
    Ok(Regrouping { linear, quadratic, residual, holds })
}

/// `(xi_t, eta_t, phi_t)` truncated at a common order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismDeformation {
    phi: Morphism,
    xi: TruncatedDeformation,
    eta: TruncatedDeformation,
    maps: Vec<Matrix>,
}

impl MorphismDeformation {
    /// `maps[k]` is `phi_{k+1}`. The three series are padded with zeros to a
    /// common order.
    pub fn new(phi: Morphism, xi: Vec<Tensor>, eta: Vec<Tensor>, maps: Vec<Matrix>) -> Result<Self> {
        let order = xi.len().max(eta.len()).max(maps.len());
        let xi = TruncatedDeformation::new(phi.source().clone(), xi)?.pad(order);
        let eta = TruncatedDeformation::new(phi.target().clone(), eta)?.pad(order);
        let (r, c) = (phi.matrix().rows(), phi.matrix().cols());
        for (k, m) in maps.iter().enumerate() {
            if m.rows() != r || m.cols() != c {
                return Err(Error::Shape(alloc::format!("map of order {} is {}x{}, expected {r}x{c}", k + 1, m.rows(), m.cols())));
            }
        }
        let mut all = vec![phi.matrix().clone()];
        all.extend(maps);
        all.resize(order + 1, Matrix::zeros(r, c));
        Ok(MorphismDeformation { phi, xi, eta, maps: all })
    }

    pub fn trivial(phi: Morphism, order: usize) -> Self {
        Self::new(phi, Vec::new(), Vec::new(), vec![]).expect("shapes").pad(order)
    }

    pub fn morphism(&self) -> &Morphism {
        &self.phi
    }

    pub fn xi(&self) -> &TruncatedDeformation {
        &self.xi
    }

    pub fn eta(&self) -> &TruncatedDeformation {
        &self.eta
    }

    /// `phi_0 .. phi_N`.
    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn order(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        MorphismDeformation {
            phi: self.phi.clone(),
            xi: self.xi.truncate(order),
            eta: self.eta.truncate(order),
            maps: self.maps[..=order].to_vec(),
        }
    }

    pub fn pad(&self, order: usize) -> Self {
        let mut out = self.clone();
        out.xi = out.xi.pad(order);
        out.eta = out.eta.pad(order);
        let (r, c) = (self.phi.matrix().rows(), self.phi.matrix().cols());
        while out.maps.len() <= order {
            out.maps.push(Matrix::zeros(r, c));
        }
        out
    }

    /// Sets the order-`l` triple, padding with zeros below it.
    pub fn with_order(&self, l: usize, xi: Tensor, eta: Tensor, map: Matrix) -> Result<Self> {
        let mut out = self.pad(l);
        out.xi = out.xi.with_coeff(l, xi)?;
        out.eta = out.eta.with_coeff(l, eta)?;
        if map.rows() != out.maps[0].rows() || map.cols() != out.maps[0].cols() {
            return Err(Error::Shape("map has the wrong shape".into()));
        }
        out.maps[l] = map;
        Ok(out)
    }

    fn map(&self, i: usize) -> Option<&Matrix> {
        self.maps.get(i)
    }

    /// Whether all three residuals vanish at every order `0..=through`.
    pub fn valid_through(&self, through: usize) -> bool {
        (0..=through).all(|l| {
            let (a, b, c) = morphism_order_residual(self, l);
            a.is_zero() && b.is_zero() && c.is_zero()
        })
    }
}

/// Every `(j_1, .., j_k)` with entries in `0..=max` summing to `total`.
fn compositions(parts: usize, total: usize, max: usize) -> Vec<Vec<usize>> {
    fn go(parts: usize, total: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for j in 0..=total.min(max) {
            prefix.push(j);
            go(parts - 1, total - j, max, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(parts, total, max, &mut Vec::new(), &mut out);
    out
}

/// `eta_i(phi_{j_1} x_1, .., phi_{j_n} x_n)`, or `None` if a factor is above
/// the stored order.
fn eta_term(md: &MorphismDeformation, i: usize, js: &[usize]) -> Option<Tensor> {
    let mut t = md.eta.coeff(i)?.clone();
    for (slot, &j) in js.iter().enumerate() {
        t = t.precompose(slot, md.map(j)?);
    }
    Some(t)
}

fn map_dims(md: &MorphismDeformation) -> Vec<usize> {
    let mut dims = vec![md.phi.source().dim(); md.phi.source().arity()];
    dims.push(md.phi.target().dim());
    dims
}

/// Residuals of the three order-`l` equations.
pub fn morphism_order_residual(md: &MorphismDeformation, l: usize) -> (Tensor, Tensor, Tensor) {
    let n = md.phi.source().arity();
    let res_xi = algebra_order_residual(&md.xi, l);
    let res_eta = algebra_order_residual(&md.eta, l);
    let mut res_phi = Tensor::zeros(map_dims(md));
    for i in 0..=l {
        if let (Some(m), Some(x)) = (md.map(i), md.xi.coeff(l - i)) {
            res_phi.add_assign(&x.postcompose(m));
        }
    }
    for i in 0..=l {
        for js in compositions(n, l - i, l) {
            if let Some(t) = eta_term(md, i, &js) {
                res_phi = res_phi.sub(&t);
            }
        }
    }
    (res_xi, res_eta, res_phi)
}

/// How the restricted sum in the third obstruction component is enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RestrictedSum {
    /// Each tuple `(i, j_1, .., j_n)` with `i + sum j = l`, `i < l` and every
    /// `j_r < l` counted once.
    #[default]
    Set,
    /// Three partial sums: `0 < i < l` with some `j_r = 0` (once per such
    /// `r`), `i = 0` with every `j_r < l`, and `0 < i < l` with every
    /// `j_r > 0`. Counts a tuple once per zero entry, so it differs from
    /// [`RestrictedSum::Set`] as soon as two entries can vanish together.
    ThreeSums,
}

fn restricted_tuples(n: usize, l: usize, mode: RestrictedSum) -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    match mode {
        RestrictedSum::Set => {
            for i in 0..l {
                for js in compositions(n, l - i, l - 1) {
                    out.push((i, js));
                }
            }
        }
        RestrictedSum::ThreeSums => {
            for i in 1..l {
                for r in 0..n {
                    for js in compositions(n, l - i, l) {
                        if js[r] == 0 {
                            out.push((i, js));
                        }
                    }
                }
            }
            for js in compositions(n, l, l - 1) {
                out.push((0, js));
            }
            for i in 1..l {
                for js in compositions(n, l - i, l) {
                    if js.iter().all(|&j| j > 0) {
                        out.push((i, js));
                    }
                }
            }
        }
    }
    out
}

/// `F_l = (O_1, O_2, O_3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub order: usize,
    pub o1: Tensor,
    pub o2: Tensor,
    pub o3: Tensor,
}

impl Obstruction {
    pub fn is_zero(&self) -> bool {
        self.o1.is_zero() && self.o2.is_zero() && self.o3.is_zero()
    }

    /// `F_l` as a degree-3 morphism cochain.
    pub fn as_cochain(&self) -> MorphismCochain {
        MorphismCochain::new(3, self.o1.clone(), self.o2.clone(), Some(self.o3.clone()))
    }
}

/// The order-`l` obstruction of a deformation valid through order `l - 1`.
/// Coefficients of order `l` and above are ignored.
pub fn obstruction(md: &MorphismDeformation, l: usize, mode: RestrictedSum) -> Result<Obstruction> {
    if l == 0 {
        return Err(Error::InvalidDegree(0));
    }
    if !md.valid_through(l - 1) {
        return Err(Error::InvalidDeformation { order: l - 1 });
    }
    let md = md.truncate(l - 1);
    let n = md.phi.source().arity();
    let o1 = quadratic_part(&md.xi, l);
    let o2 = quadratic_part(&md.eta, l);
    let mut o3 = Tensor::zeros(map_dims(&md));
    for (i, js) in restricted_tuples(n, l, mode) {
        if let Some(t) = eta_term(&md, i, &js) {
            o3.add_assign(&t);
        }
    }
    for i in 1..l {
        if let (Some(m), Some(x)) = (md.map(i), md.xi.coeff(l - i)) {
            o3 = o3.sub(&x.postcompose(m));
        }
    }
    Ok(Obstruction { order: l, o1, o2, o3 })
}

/// Sign linking the obstruction to the constant part of the extension
/// system `d(xi_l, eta_l, phi_l) = sign * F_l`.
pub const OBSTRUCTION_SIGN: i64 = 1;

/// Result of [`solve_extension`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    /// The order-`l` deformation obtained by appending the triple.
    Extends { xi: Tensor, eta: Tensor, map: Matrix, deformation: MorphismDeformation },
    Obstructed,
}

/// Solves the order-`l` equations for `(xi_l, eta_l, phi_l)` given a
/// deformation valid through `l - 1`. The unknowns range over all
/// multilinear maps; any solution is checked against the residuals.
pub fn solve_extension(md: &MorphismDeformation, l: usize, conv: &SignConvention) -> Result<Extension> {
    let f = obstruction(md, l, RestrictedSum::Set)?;
    let md = md.truncate(l - 1);
    let phi = &md.phi;
    let reps = MorphismReps::new(phi)?;
    let n = phi.source().arity();
    let (dl, dm) = (phi.source().dim(), phi.target().dim());
    let xi_dims = vec![dl; n + 1];
    let eta_dims = vec![dm; n + 1];
    let map_dims = vec![dl, dm];
    let (a, b, c) = (xi_dims.iter().product::<usize>(), eta_dims.iter().product::<usize>(), dl * dm);

    let unit = |dims: &Vec<usize>, k: Option<usize>| {
        let mut t = Tensor::zeros(dims.clone());
        if let Some(k) = k {
            let idx = t.multi_index(k);
            t.set(&idx, Scalar::one());
        }
        t
    };
    let mut columns = Vec::with_capacity(a + b + c);
    for k in 0..a + b + c {
        let u = unit(&xi_dims, (k < a).then_some(k));
        let v = unit(&eta_dims, (a <= k && k < a + b).then(|| k - a));
        let w = unit(&map_dims, (k >= a + b).then(|| k - a - b));
        let (x, y, z) = differential_tensors(phi, &reps, conv, 2, &u, &v, Some(&w));
        let mut col = x.into_data();
        col.extend(y.into_data());
        col.extend(z.into_data());
        columns.push(col);
    }
    let rows = columns.first().map_or(0, Vec::len);
    let system = Matrix::from_columns(rows, &columns)?;
    let sign = Scalar::from_integer(OBSTRUCTION_SIGN.into());
    let mut rhs: Vec<Scalar> = f.o1.data().to_vec();
    rhs.extend(f.o2.data().iter().cloned());
    rhs.extend(f.o3.data().iter().cloned());
    let rhs: Vec<Scalar> = rhs.into_iter().map(|x| x * &sign).collect();
    let Some(sol) = solve(&system, &rhs)? else {
        return Ok(Extension::Obstructed);
    };
    let xi = Tensor::from_data(xi_dims, sol[..a].to_vec());
    let eta = Tensor::from_data(eta_dims, sol[a..a + b].to_vec());
    let map = Tensor::from_data(map_dims, sol[a + b..].to_vec()).to_matrix();
    let deformation = md.with_order(l, xi.clone(), eta.clone(), map.clone())?;
    let (r1, r2, r3) = morphism_order_residual(&deformation, l);
    if !(r1.is_zero() && r2.is_zero() && r3.is_zero()) {
        return Err(Error::Internal("extension does not satisfy the order equations".into()));
    }
    Ok(Extension::Extends { xi, eta, map, deformation })
}

/// `(xi_1, eta_1, phi_1)` as a degree-2 morphism cochain, after checking that
/// each component is compatible with the twists.
pub fn infinitesimal(md: &MorphismDeformation) -> Result<MorphismCochain> {
    if md.order() == 0 {
        return Err(Error::InvalidDeformation { order: 0 });
    }
    let reps = MorphismReps::new(&md.phi)?;
    let xi = md.xi.coeff(1).expect("order >= 1").clone();
    let eta = md.eta.coeff(1).expect("order >= 1").clone();
    let map = Tensor::from_matrix(&md.maps[1]);
    if !satisfies_constraint(&reps.source, &xi) {
        return Err(Error::IncompatibleCoefficient { which: "xi", order: 1 });
    }
    if !satisfies_constraint(&reps.target, &eta) {
        return Err(Error::IncompatibleCoefficient { which: "eta", order: 1 });
    }
    if !satisfies_constraint(&reps.mixed, &map) {
        return Err(Error::IncompatibleCoefficient { which: "phi", order: 1 });
    }
    Ok(MorphismCochain::new(2, xi, eta, Some(map)))
}
