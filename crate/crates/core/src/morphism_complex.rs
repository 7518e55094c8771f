//! The cochain complex of a morphism `phi: L -> M`:
//! `C^p(phi) = C^p(L, L) + C^p(M, M) + C^{p-1}(L; M)` with
//! `d(u, v, w) = (delta u, delta v, phi u - v phi - delta w)`, where `M` is a
//! representation of `L` through `phi` and `C^0(L; M) = 0`.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra::{Morphism, Representation};
use crate::cochain::{coboundary_tensor, cochain_dims, satisfies_constraint, CochainComplex, CochainSpace, SignConvention};
use crate::error::{Error, Result};
use crate::linalg::{rank, solve, Matrix};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// `phi u`: the output of `u` composed with `phi`.
pub fn push(phi: &Morphism, u: &Tensor) -> Tensor {
    u.postcompose(phi.matrix())
}

/// `v phi`: `phi` applied to every input of `v`.
pub fn pull(phi: &Morphism, v: &Tensor) -> Tensor {
    v.precompose_all(0..v.arity(), phi.matrix())
}

/// An element of `C^p(phi)`. A component is `None` when it lives in a zero
/// space (`C^0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismCochain {
    degree: usize,
    u: Option<Tensor>,
    v: Option<Tensor>,
    w: Option<Tensor>,
}

impl MorphismCochain {
    pub fn new(degree: usize, u: Tensor, v: Tensor, w: Option<Tensor>) -> Self {
        MorphismCochain { degree, u: Some(u), v: Some(v), w }
    }

    /// The only element of `C^0(phi) = 0`.
    pub fn degree_zero() -> Self {
        MorphismCochain { degree: 0, u: None, v: None, w: None }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn u(&self) -> Option<&Tensor> {
        self.u.as_ref()
    }

    pub fn v(&self) -> Option<&Tensor> {
        self.v.as_ref()
    }

    pub fn w(&self) -> Option<&Tensor> {
        self.w.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        [&self.u, &self.v, &self.w].iter().all(|c| c.as_ref().is_none_or(Tensor::is_zero))
    }
}

/// The three representations involved: `L` and `M` adjoint, `M` through `phi`.
#[derive(Clone, Debug)]
pub struct MorphismReps {
    pub source: Representation,
    pub target: Representation,
    pub mixed: Representation,
}

impl MorphismReps {
    pub fn new(phi: &Morphism) -> Result<Self> {
        Ok(MorphismReps {
            source: phi.source().adjoint_representation(),
            target: phi.target().adjoint_representation(),
            mixed: phi.pullback_representation()?,
        })
    }
}

/// The differential on raw tensors, without membership checks. `w` is
/// ignored (and may be `None`) when `p = 1`.
pub fn differential_tensors(
    phi: &Morphism,
    reps: &MorphismReps,
    conv: &SignConvention,
    p: usize,
    u: &Tensor,
    v: &Tensor,
    w: Option<&Tensor>,
) -> (Tensor, Tensor, Tensor) {
    let du = coboundary_tensor(&reps.source, u, p, conv);
    let dv = coboundary_tensor(&reps.target, v, p, conv);
    let mut third = push(phi, u).sub(&pull(phi, v));
    if p >= 2 {
        if let Some(w) = w {
            third = third.sub(&coboundary_tensor(&reps.mixed, w, p - 1, conv));
        }
    }
    (du, dv, third)
}

/// Spaces and differentials of `C^*(phi)` through a fixed degree.
#[derive(Clone, Debug)]
pub struct MorphismComplex {
    phi: Morphism,
    reps: MorphismReps,
    source: CochainComplex,
    target: CochainComplex,
    mixed: CochainComplex,
    /// `d^1 .. d^{max-1}` in block coordinates.
    differentials: Vec<Matrix>,
}

impl MorphismComplex {
    /// Builds `C^1(phi) .. C^max(phi)`; cohomology is available below `max`.
    pub fn new(phi: &Morphism, conv: SignConvention, max_degree: usize) -> Result<Self> {
        if max_degree == 0 {
            return Err(Error::InvalidDegree(0));
        }
        let reps = MorphismReps::new(phi)?;
        let source = CochainComplex::new(&reps.source, conv, max_degree)?;
        let target = CochainComplex::new(&reps.target, conv, max_degree)?;
        let mixed = CochainComplex::new(&reps.mixed, conv, max_degree.saturating_sub(1).max(1))?;
        let mut mc = MorphismComplex { phi: phi.clone(), reps, source, target, mixed, differentials: Vec::new() };
        for p in 1..max_degree {
            let d = mc.assemble(p)?;
            mc.differentials.push(d);
        }
        Ok(mc)
    }

    pub fn morphism(&self) -> &Morphism {
        &self.phi
    }

    pub fn reps(&self) -> &MorphismReps {
        &self.reps
    }

    pub fn convention(&self) -> &SignConvention {
        self.source.convention()
    }

    pub fn source_complex(&self) -> &CochainComplex {
        &self.source
    }

    pub fn target_complex(&self) -> &CochainComplex {
        &self.target
    }

    pub fn mixed_complex(&self) -> &CochainComplex {
        &self.mixed
    }

    pub fn max_degree(&self) -> usize {
        self.source.max_degree()
    }

    fn mixed_dim(&self, p: usize) -> usize {
        if p == 0 {
            0
        } else {
            self.mixed.space(p).dim()
        }
    }

    /// `(dim C^p(L, L), dim C^p(M, M), dim C^{p-1}(L; M))`.
    pub fn block_dims(&self, p: usize) -> (usize, usize, usize) {
        (self.source.space(p).dim(), self.target.space(p).dim(), self.mixed_dim(p - 1))
    }

    pub fn dim(&self, p: usize) -> usize {
        let (a, b, c) = self.block_dims(p);
        a + b + c
    }

    /// Matrix of `C^p(L, L) -> C^p(L; M)`, `u -> phi u`.
    pub fn push_matrix(&self, p: usize) -> Result<Matrix> {
        let from = self.source.space(p);
        let to = self.mixed.space(p);
        let cols = (0..from.dim())
            .map(|i| to.coordinates(&push(&self.phi, from.basis_cochain(i).tensor())).ok_or(Error::ConstraintViolation { degree: p }))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(to.dim(), &cols)
    }

    /// Matrix of `C^p(M, M) -> C^p(L; M)`, `v -> v phi`.
    pub fn pull_matrix(&self, p: usize) -> Result<Matrix> {
        let from = self.target.space(p);
        let to = self.mixed.space(p);
        let cols = (0..from.dim())
            .map(|i| to.coordinates(&pull(&self.phi, from.basis_cochain(i).tensor())).ok_or(Error::ConstraintViolation { degree: p }))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(to.dim(), &cols)
    }

    fn assemble(&self, p: usize) -> Result<Matrix> {
        let (a, b, c) = self.block_dims(p);
        let (a1, b1, c1) = self.block_dims(p + 1);
        let du = self.source.differential(p);
        let dv = self.target.differential(p);
        let push = self.push_matrix(p)?;
        let pull = self.pull_matrix(p)?.scale(&-crate::scalar::one());
        let dw = if p >= 2 { self.mixed.differential(p - 1).scale(&-crate::scalar::one()) } else { Matrix::zeros(c1, 0) };
        let z = |r: usize, c: usize| Matrix::zeros(r, c);
        let (z_ab, z_ac, z_ba, z_bc) = (z(a1, b), z(a1, c), z(b1, a), z(b1, c));
        Matrix::block(&[vec_of(&[du, &z_ab, &z_ac]), vec_of(&[&z_ba, dv, &z_bc]), vec_of(&[&push, &pull, &dw])])
    }

    /// Matrix of `d^p` for `1 <= p < max_degree` in block coordinates.
    pub fn differential(&self, p: usize) -> &Matrix {
        &self.differentials[p - 1]
    }

    /// `dim H^p(phi)` for `1 <= p < max_degree`, with `C^0(phi) = 0`.
    pub fn cohomology_dim(&self, p: usize) -> Result<usize> {
        if p == 0 {
            return Err(Error::InvalidDegree(0));
        }
        if p >= self.max_degree() {
            return Err(Error::Shape(format!("degree {p} needs a complex built through degree {}", p + 1)));
        }
        let dp = self.differential(p);
        if p >= 2 {
            let prev = self.differential(p - 1);
            if !dp.mul(prev)?.is_zero() {
                return Err(Error::NotAComplex { degree: p });
            }
            Ok(self.dim(p) - rank(dp) - rank(prev))
        } else {
            Ok(self.dim(p) - rank(dp))
        }
    }

    /// Block coordinates of a cochain, or `None` if a component is not
    /// compatible.
    pub fn coordinates(&self, c: &MorphismCochain) -> Option<Vec<Scalar>> {
        let p = c.degree;
        let mut out = self.source.space(p).coordinates(c.u.as_ref()?)?;
        out.extend(self.target.space(p).coordinates(c.v.as_ref()?)?);
        if p >= 2 {
            let w = match &c.w {
                Some(w) => self.mixed.space(p - 1).coordinates(w)?,
                None => alloc::vec![Scalar::zero(); self.mixed_dim(p - 1)],
            };
            out.extend(w);
        }
        Some(out)
    }

    /// The cochain with the given block coordinates.
    pub fn element(&self, p: usize, coords: &[Scalar]) -> MorphismCochain {
        let (a, b, _) = self.block_dims(p);
        let u = self.source.space(p).element(&coords[..a]).into_tensor();
        let v = self.target.space(p).element(&coords[a..a + b]).into_tensor();
        let w = (p >= 2).then(|| self.mixed.space(p - 1).element(&coords[a + b..]).into_tensor());
        MorphismCochain::new(p, u, v, w)
    }

    /// `d^p c`, checking that `c` and its image are compatible.
    pub fn apply(&self, c: &MorphismCochain) -> Result<MorphismCochain> {
        let p = c.degree;
        if p == 0 {
            return Err(Error::InvalidDegree(0));
        }
        let (Some(u), Some(v)) = (&c.u, &c.v) else {
            return Err(Error::Shape("cochain of positive degree needs both algebra components".into()));
        };
        check_component(&self.reps.source, u, p)?;
        check_component(&self.reps.target, v, p)?;
        if p >= 2 {
            if let Some(w) = &c.w {
                check_component(&self.reps.mixed, w, p - 1)?;
            }
        }
        let (du, dv, dw) = differential_tensors(&self.phi, &self.reps, self.convention(), p, u, v, c.w.as_ref());
        for (rep, t) in [(&self.reps.source, &du), (&self.reps.target, &dv), (&self.reps.mixed, &dw)] {
            if !satisfies_constraint(rep, t) {
                return Err(Error::ConstraintViolation { degree: p + 1 });
            }
        }
        Ok(MorphismCochain::new(p + 1, du, dv, Some(dw)))
    }

    /// For a cocycle `c` of degree `p`, a preimage `b` with `d^{p-1} b = c`,
    /// built from the vanishing of `H^p(L, L)`, `H^p(M, M)` and `H^{p-1}(L; M)`.
    /// Needs `p < max_degree`.
    pub fn vanishing_transfer_witness(&self, c: &MorphismCochain) -> Result<MorphismCochain> {
        let p = c.degree;
        if p == 0 {
            return Err(Error::InvalidDegree(0));
        }
        let coords = self.coordinates(c).ok_or(Error::NotACochain { degree: p })?;
        if !self.differential(p).mul_vec(&coords)?.iter().all(Zero::is_zero) {
            return Err(Error::NotACocycle { degree: p });
        }
        for (name, h) in [("H^p(L, L)", self.source.cohomology_dim(p)?), ("H^p(M, M)", self.target.cohomology_dim(p)?)] {
            if h != 0 {
                return Err(Error::HypothesisViolated(format!("{name} has dimension {h} in degree {p}")));
            }
        }
        if p >= 2 {
            let h = self.mixed.cohomology_dim(p - 1)?;
            if h != 0 {
                return Err(Error::HypothesisViolated(format!("H^(p-1)(L; M) has dimension {h} in degree {}", p - 1)));
            }
        }
        if p == 1 {
            // H^1 = ker delta^1, so u = v = 0 and c = 0 = d(0)
            if !c.is_zero() {
                return Err(Error::Internal("nonzero cocycle with vanishing first cohomology".into()));
            }
            return Ok(MorphismCochain::degree_zero());
        }
        let (a, b, _) = self.block_dims(p);
        let preimage = |m: &Matrix, rhs: &[Scalar]| -> Result<Vec<Scalar>> {
            solve(m, rhs)?.ok_or_else(|| Error::Internal("cocycle component is not a coboundary".into()))
        };
        let x = preimage(self.source.differential(p - 1), &coords[..a])?;
        let y = preimage(self.target.differential(p - 1), &coords[a..a + b])?;
        let u1 = self.source.space(p - 1).element(&x).into_tensor();
        let v1 = self.target.space(p - 1).element(&y).into_tensor();
        let w = c.w.clone().unwrap_or_else(|| Tensor::zeros(cochain_dims(&self.reps.mixed, p - 1)));
        let r = push(&self.phi, &u1).sub(&pull(&self.phi, &v1)).sub(&w);
        let w1 = if p == 2 {
            if !r.is_zero() {
                return Err(Error::Internal("mixed component is not a coboundary".into()));
            }
            None
        } else {
            let rc = self.mixed.space(p - 1).coordinates(&r).ok_or(Error::ConstraintViolation { degree: p - 1 })?;
            let z = preimage(self.mixed.differential(p - 2), &rc)?;
            Some(self.mixed.space(p - 2).element(&z).into_tensor())
        };
        let witness = MorphismCochain::new(p - 1, u1, v1, w1);
        let back = self.apply(&witness)?;
        if self.coordinates(&back) != Some(coords) {
            return Err(Error::Internal("witness does not map to the cocycle".into()));
        }
        Ok(witness)
    }
}

fn vec_of<'a>(ms: &[&'a Matrix]) -> Vec<&'a Matrix> {
    ms.to_vec()
}

fn check_component(rep: &Representation, t: &Tensor, p: usize) -> Result<()> {
    if t.dims() != cochain_dims(rep, p).as_slice() {
        return Err(Error::Shape(format!("component dims {:?} do not match degree {p}", t.dims())));
    }
    if !satisfies_constraint(rep, t) {
        return Err(Error::NotACochain { degree: p });
    }
    Ok(())
}

/// `dim H^p(phi)` under `conv`.
pub fn morphism_cohomology_dim(phi: &Morphism, p: usize, conv: &SignConvention) -> Result<usize> {
    if p == 0 {
        return Err(Error::InvalidDegree(0));
    }
    MorphismComplex::new(phi, *conv, p + 1)?.cohomology_dim(p)
}

/// A space of the mixed complex, re-exported for callers that assemble
/// coordinates by hand.
pub fn mixed_space(mc: &MorphismComplex, p: usize) -> &CochainSpace {
    mc.mixed.space(p)
}
