//! Small algebras and morphisms with known properties, shared by tests, the
//! calibration battery and the command line examples.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{HomNaryAlgebra, Morphism};
use crate::linalg::Matrix;
use crate::scalar::{int, ratio, Scalar};
use crate::tensor::Tensor;

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Bracket tensor from `(inputs, output, coefficient)` entries.
pub fn bracket(arity: usize, dim: usize, entries: &[(&[usize], usize, Scalar)]) -> Tensor {
    let mut t = Tensor::zeros(vec![dim; arity + 1]);
    for (inputs, out, c) in entries {
        let mut index = inputs.to_vec();
        index.push(*out);
        t.set(&index, c.clone());
    }
    t
}

/// Diagonal matrix with integer entries.
pub fn diag(entries: &[i64]) -> Matrix {
    let n = entries.len();
    Matrix::from_fn(n, n, |i, j| if i == j { int(entries[i]) } else { int(0) })
}

/// Zero bracket, identity twist.
pub fn abelian(arity: usize, dim: usize) -> HomNaryAlgebra {
    HomNaryAlgebra::unlabeled(arity, Tensor::zeros(vec![dim; arity + 1]), Matrix::identity(dim)).expect("shapes")
}

/// Basis `e, f` with `[f, f] = e`, identity twist.
pub fn ff_e() -> HomNaryAlgebra {
    let b = bracket(2, 2, &[(&[1, 1], 0, int(1))]);
    HomNaryAlgebra::new(2, labels(&["e", "f"]), b, Matrix::identity(2)).expect("shapes")
}

/// Basis `e, f` with `[e, e] = f` and `[f, f] = e`: not Leibniz.
pub fn ee_f_ff_e() -> HomNaryAlgebra {
    let b = bracket(2, 2, &[(&[0, 0], 1, int(1)), (&[1, 1], 0, int(1))]);
    HomNaryAlgebra::new(2, labels(&["e", "f"]), b, Matrix::identity(2)).expect("shapes")
}

/// [`ff_e`] twisted by `diag(4, 2)`: `[f, f] = 4e`.
pub fn ff_e_twisted() -> HomNaryAlgebra {
    ff_e().yau_twist(&diag(&[4, 2])).expect("endomorphism")
}

/// Ternary: basis `e, f` with `[f, f, f] = e`, identity twist.
pub fn ff_f_e3() -> HomNaryAlgebra {
    let b = bracket(3, 2, &[(&[1, 1, 1], 0, int(1))]);
    HomNaryAlgebra::new(3, labels(&["e", "f"]), b, Matrix::identity(2)).expect("shapes")
}

/// [`ff_f_e3`] twisted by `diag(8, 2)`: `[f, f, f] = 8e`.
pub fn ff_f_e3_twisted() -> HomNaryAlgebra {
    ff_f_e3().yau_twist(&diag(&[8, 2])).expect("endomorphism")
}

/// The three-dimensional 3-Lie algebra with `[e1, e2, e3] = e1`, skew in all
/// inputs.
pub fn lie3() -> HomNaryAlgebra {
    let mut entries: Vec<(&[usize], usize, Scalar)> = Vec::new();
    const PERMS: [([usize; 3], i64); 6] =
        [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([1, 0, 2], -1), ([0, 2, 1], -1), ([2, 1, 0], -1)];
    for (p, s) in PERMS.iter() {
        entries.push((p, 0, int(*s)));
    }
    HomNaryAlgebra::new(3, labels(&["e1", "e2", "e3"]), bracket(3, 3, &entries), Matrix::identity(3)).expect("shapes")
}

/// `sl2` with basis `e, h, f`.
pub fn sl2() -> HomNaryAlgebra {
    let b = bracket(
        2,
        3,
        &[
            (&[1, 0], 0, int(2)),
            (&[0, 1], 0, int(-2)),
            (&[1, 2], 2, int(-2)),
            (&[2, 1], 2, int(2)),
            (&[0, 2], 1, int(1)),
            (&[2, 0], 1, int(-1)),
        ],
    );
    HomNaryAlgebra::new(2, labels(&["e", "h", "f"]), b, Matrix::identity(3)).expect("shapes")
}

/// The automorphism `e -> 4e, h -> h, f -> f/4` of [`sl2`].
pub fn sl2_automorphism() -> Matrix {
    let mut m = Matrix::identity(3);
    m.set(0, 0, int(4));
    m.set(2, 2, ratio(1, 4));
    m
}

/// [`sl2`] twisted by [`sl2_automorphism`].
pub fn sl2_twisted() -> HomNaryAlgebra {
    sl2().yau_twist(&sl2_automorphism()).expect("automorphism")
}

/// [`lie3`] twisted by its automorphism `diag(1, 2, 1/2)`.
pub fn lie3_twisted() -> HomNaryAlgebra {
    let mut t = Matrix::identity(3);
    t.set(1, 1, int(2));
    t.set(2, 2, ratio(1, 2));
    lie3().yau_twist(&t).expect("automorphism")
}

/// The bracket of `a` with the zero twist. Every bracket satisfies both
/// axioms once the twist vanishes.
pub fn with_zero_twist(a: &HomNaryAlgebra) -> HomNaryAlgebra {
    HomNaryAlgebra::new(a.arity(), a.labels().to_vec(), a.bracket().clone(), Matrix::zeros(a.dim(), a.dim())).expect("shapes")
}

/// Valid algebras used to calibrate and test the coboundary.
pub fn battery() -> Vec<HomNaryAlgebra> {
    vec![
        abelian(2, 2),
        abelian(3, 2),
        ff_e(),
        ff_e_twisted(),
        with_zero_twist(&ee_f_ff_e()),
        ff_f_e3(),
        ff_f_e3_twisted(),
        with_zero_twist(&ff_f_e3()),
        sl2(),
        sl2_twisted(),
    ]
}

/// Valid morphisms, including non-invertible and non-identity ones.
pub fn morphisms() -> Vec<Morphism> {
    let tw = ff_e_twisted();
    let tw3 = ff_f_e3_twisted();
    let mut proj = Matrix::zeros(2, 2);
    proj.set(1, 1, int(1));
    vec![
        Morphism::identity(&ff_e()),
        Morphism::zero(&ff_e(), &ff_e()).expect("shapes"),
        Morphism::identity(&tw),
        Morphism::new(tw.clone(), tw.clone(), diag(&[9, 3])).expect("shapes"),
        Morphism::zero(&tw, &tw).expect("shapes"),
        Morphism::new(ff_e(), abelian(2, 2), proj).expect("shapes"),
        Morphism::identity(&tw3),
        Morphism::new(tw3.clone(), tw3, diag(&[27, 3])).expect("shapes"),
        Morphism::identity(&with_zero_twist(&ee_f_ff_e())),
        Morphism::identity(&sl2()),
        Morphism::new(sl2(), sl2(), sl2_automorphism()).expect("shapes"),
        Morphism::identity(&sl2_twisted()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        for a in battery().into_iter().chain([lie3(), lie3_twisted(), with_zero_twist(&sl2())]) {
            assert!(a.is_valid(), "{:?}", a.labels());
        }
        assert!(!ee_f_ff_e().is_valid());
        for phi in morphisms() {
            assert!(phi.check().is_empty());
        }
    }

    #[test]
    fn twisted_brackets() {
        let a = ff_e_twisted();
        assert_eq!(a.bracket().value(&[1, 1]), &[int(4), int(0)]);
        let b = ff_f_e3_twisted();
        assert_eq!(b.bracket().value(&[1, 1, 1]), &[int(8), int(0)]);
    }
}
