//! Search over the finite space of coboundary conventions.
//!
//! A convention passes when `delta^2 = 0` holds on `C^1` and `C^2` of every
//! algebra in the battery and `d^2 = 0` holds on `C^1(phi)` and `C^2(phi)` of
//! every morphism, with all intermediate images compatible.

use alloc::vec::Vec;

use crate::algebra::{HomNaryAlgebra, Morphism};
use crate::cochain::{satisfies_constraint, squares_to_zero, CochainSpace, SignConvention};
use crate::error::{Error, Result};
use crate::morphism_complex::{differential_tensors, MorphismReps};
use crate::tensor::Tensor;

/// Outcome of [`calibrate_convention`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Calibration {
    pub passing: Vec<SignConvention>,
    /// [`SignConvention::PINNED`] when it passes, else the first passing one.
    pub canonical: SignConvention,
}

impl Calibration {
    pub fn pinned_passes(&self) -> bool {
        self.passing.contains(&SignConvention::PINNED)
    }
}

struct MorphismSpaces {
    phi: Morphism,
    reps: MorphismReps,
    /// For `p` in 1 and 2: spanning triples of `C^p(phi)`.
    spanning: [Vec<(Tensor, Tensor, Option<Tensor>)>; 2],
}

impl MorphismSpaces {
    fn new(phi: &Morphism) -> Result<Self> {
        let reps = MorphismReps::new(phi)?;
        let mut spanning = [Vec::new(), Vec::new()];
        for p in 1..=2 {
            let src = CochainSpace::new(&reps.source, p)?;
            let tgt = CochainSpace::new(&reps.target, p)?;
            let zu = Tensor::zeros(src.dims().to_vec());
            let zv = Tensor::zeros(tgt.dims().to_vec());
            let out = &mut spanning[p - 1];
            for i in 0..src.dim() {
                out.push((src.basis_cochain(i).into_tensor(), zv.clone(), None));
            }
            for i in 0..tgt.dim() {
                out.push((zu.clone(), tgt.basis_cochain(i).into_tensor(), None));
            }
            if p == 2 {
                let mixed = CochainSpace::new(&reps.mixed, 1)?;
                for i in 0..mixed.dim() {
                    out.push((zu.clone(), zv.clone(), Some(mixed.basis_cochain(i).into_tensor())));
                }
            }
        }
        Ok(MorphismSpaces { phi: phi.clone(), reps, spanning })
    }

    fn squares_to_zero(&self, conv: &SignConvention) -> bool {
        let r = &self.reps;
        (1..=2).all(|p| {
            self.spanning[p - 1].iter().all(|(u, v, w)| {
                let (a, b, c) = differential_tensors(&self.phi, r, conv, p, u, v, w.as_ref());
                let compatible = satisfies_constraint(&r.source, &a) && satisfies_constraint(&r.target, &b) && satisfies_constraint(&r.mixed, &c);
                if !compatible {
                    return false;
                }
                let (a2, b2, c2) = differential_tensors(&self.phi, r, conv, p + 1, &a, &b, Some(&c));
                a2.is_zero() && b2.is_zero() && c2.is_zero()
            })
        })
    }
}

/// Tries every convention of [`SignConvention::all`] on the given algebras
/// and morphisms. Fails with [`Error::NoConvention`] when none passes.
pub fn calibrate_convention(algebras: &[HomNaryAlgebra], morphisms: &[Morphism]) -> Result<Calibration> {
    let spaces: Vec<CochainSpace> = algebras
        .iter()
        .flat_map(|a| {
            let rep = a.adjoint_representation();
            [1, 2].map(|p| CochainSpace::new(&rep, p))
        })
        .collect::<Result<_>>()?;
    let morphism_spaces: Vec<MorphismSpaces> = morphisms.iter().map(MorphismSpaces::new).collect::<Result<_>>()?;
    let passing: Vec<SignConvention> = SignConvention::all()
        .into_iter()
        .filter(|conv| spaces.iter().all(|s| squares_to_zero(s, conv)) && morphism_spaces.iter().all(|m| m.squares_to_zero(conv)))
        .collect();
    let canonical = if passing.contains(&SignConvention::PINNED) {
        SignConvention::PINNED
    } else {
        *passing.first().ok_or(Error::NoConvention)?
    };
    Ok(Calibration { passing, canonical })
}
