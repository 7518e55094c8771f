//! Cochain spaces `C^p(L, M)`, the coboundary, cohomology dimensions and the
//! sign-convention calibration harness.
//!
//! A `p`-cochain is a multilinear map `L x (L^{n-1})^{p-1} -> M`, stored as a
//! tensor with input slots `z, X_1^1..X_1^{n-1}, .., X_{p-1}^{n-1}` followed by
//! the output. It must satisfy `a_M f = f (a x a-bar^{p-1})`, where `a-bar` is
//! the twist applied to every component of a fundamental object.
//!
//! The coboundary `delta f (z, X_1..X_p)` is the sum of four term groups:
//!
//! ```text
//! A: sum_{i<j} (-1)^j      f(a z, a X_1, .., [X_i, X_j], .., ^X_j, .., a X_p)
//! B: sum_i     (-1)^i      f([z, X_i], a X_1, .., ^X_i, .., a X_p)
//! C: sum_i     (-1)^{i+1}  [f(z, X_1, .., ^X_i, .., X_p), a^{p-1} X_i]_0
//! D: sum_{k=1}^{n-1}       [a^{p-1} z, a^{p-1} x_1^1, .., f(x_1^k, X_2..X_p), .., a^{p-1} x_1^{n-1}]_k
//! ```
//!
//! with `[X, Y] = sum_k (a x^1, .., [x^k, y^1..y^{n-1}], .., a x^{n-1})`. The
//! sign of each group, the slot order of `[X, Y]`, the twist on the slots of
//! term A after the removed index, and the range of term C are all parameters
//! of a [`SignConvention`]. [`crate::calibration::calibrate`] searches that finite space for the
//! conventions with `delta^2 = 0` on a battery; [`SignConvention::PINNED`] is
//! the frozen default and must be among them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Zero};

use crate::algebra::{HomNaryAlgebra, Representation};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, quotient_dim, rank, Matrix, SubspaceBasis};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// Slot order of the bracket of two fundamental objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FundamentalOrder {
    /// `[X, Y] = sum_k (a x^1, .., [x^k, Y], .., a x^{n-1})`
    Standard,
    /// `[X, Y]` computed as the standard bracket of `(Y, X)`.
    Swapped,
}

/// Which slots of term A receive the twist besides `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermATwist {
    /// Every fundamental object other than the bracketed one.
    All,
    /// Only those before the removed index `j`.
    BeforeRemoved,
}

/// Summation range of term C.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermCRange {
    All,
    SkipFirst,
}

/// One point of the finite convention search space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignConvention {
    /// Signs of term groups A, B, C, D; `true` means `+1`.
    pub signs: [bool; 4],
    pub order: FundamentalOrder,
    pub term_a_twist: TermATwist,
    pub term_c_range: TermCRange,
}

impl SignConvention {
    /// The frozen default: every group with its written sign, standard slot
    /// order, full twist in term A, full range in term C.
    pub const PINNED: SignConvention = SignConvention {
        signs: [true; 4],
        order: FundamentalOrder::Standard,
        term_a_twist: TermATwist::All,
        term_c_range: TermCRange::All,
    };

    /// All 128 conventions, in a fixed order starting with [`Self::PINNED`].
    pub fn all() -> Vec<SignConvention> {
        let mut out = Vec::with_capacity(128);
        for order in [FundamentalOrder::Standard, FundamentalOrder::Swapped] {
            for term_a_twist in [TermATwist::All, TermATwist::BeforeRemoved] {
                for term_c_range in [TermCRange::All, TermCRange::SkipFirst] {
                    for mask in 0..16u8 {
                        let signs = [mask & 8 == 0, mask & 4 == 0, mask & 2 == 0, mask & 1 == 0];
                        out.push(SignConvention { signs, order, term_a_twist, term_c_range });
                    }
                }
            }
        }
        out
    }

    fn sign(&self, group: usize) -> Scalar {
        if self.signs[group] {
            Scalar::one()
        } else {
            -Scalar::one()
        }
    }

    /// Identifier such as `A+B+C+D+/std/full/all`, accepted by `from_str`.
    pub fn id(&self) -> String {
        format!("{self}")
    }
}

impl Default for SignConvention {
    fn default() -> Self {
        Self::PINNED
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, s) in ["A", "B", "C", "D"].iter().zip(self.signs) {
            write!(f, "{name}{}", if s { '+' } else { '-' })?;
        }
        let order = match self.order {
            FundamentalOrder::Standard => "std",
            FundamentalOrder::Swapped => "swap",
        };
        let twist = match self.term_a_twist {
            TermATwist::All => "full",
            TermATwist::BeforeRemoved => "before",
        };
        let range = match self.term_c_range {
            TermCRange::All => "all",
            TermCRange::SkipFirst => "skip1",
        };
        write!(f, "/{order}/{twist}/{range}")
    }
}

impl FromStr for SignConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Shape(format!("unrecognised convention identifier {s:?}"));
        let parts: Vec<&str> = s.trim().split('/').collect();
        let [signs, order, twist, range] = parts.as_slice() else {
            return Err(bad());
        };
        let b = signs.as_bytes();
        if b.len() != 8 || b[0] != b'A' || b[2] != b'B' || b[4] != b'C' || b[6] != b'D' {
            return Err(bad());
        }
        let mut parsed = [true; 4];
        for (k, slot) in parsed.iter_mut().enumerate() {
            *slot = match b[2 * k + 1] {
                b'+' => true,
                b'-' => false,
                _ => return Err(bad()),
            };
        }
        let order = match *order {
            "std" => FundamentalOrder::Standard,
            "swap" => FundamentalOrder::Swapped,
            _ => return Err(bad()),
        };
        let term_a_twist = match *twist {
            "full" => TermATwist::All,
            "before" => TermATwist::BeforeRemoved,
            _ => return Err(bad()),
        };
        let term_c_range = match *range {
            "all" => TermCRange::All,
            "skip1" => TermCRange::SkipFirst,
            _ => return Err(bad()),
        };
        Ok(SignConvention { signs: parsed, order, term_a_twist, term_c_range })
    }
}

/// A formal linear combination of basis tuples.
pub type FormalSum = BTreeMap<Vec<usize>, Scalar>;

fn expand_product(components: &[Vec<Scalar>], coeff: &Scalar, into: &mut FormalSum) {
    fn go(components: &[Vec<Scalar>], prefix: &mut Vec<usize>, coeff: Scalar, into: &mut FormalSum) {
        let Some((first, rest)) = components.split_first() else {
            let entry = into.entry(prefix.clone()).or_insert_with(Scalar::zero);
            *entry += coeff;
            return;
        };
        for (i, c) in first.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            prefix.push(i);
            go(rest, prefix, &coeff * c, into);
            prefix.pop();
        }
    }
    go(components, &mut Vec::new(), coeff.clone(), into);
}

/// `[X, Y] = sum_k (a x^1, .., [x^k, y^1..y^{n-1}], .., a x^{n-1})` as a formal
/// sum of basis tuples (zero coefficients removed).
pub fn fundamental_bracket(a: &HomNaryAlgebra, x: &[Vec<Scalar>], y: &[Vec<Scalar>]) -> FormalSum {
    let w = a.arity() - 1;
    assert!(x.len() == w && y.len() == w, "fundamental objects have {w} components");
    let twisted: Vec<Vec<Scalar>> = x.iter().map(|c| a.alpha().mul_vec(c).expect("shape")).collect();
    let mut out = FormalSum::new();
    for k in 0..w {
        let mut args: Vec<&[Scalar]> = vec![&x[k]];
        args.extend(y.iter().map(Vec::as_slice));
        let bracketed = a.bracket_of(&args);
        let mut comps = twisted.clone();
        comps[k] = bracketed;
        expand_product(&comps, &Scalar::one(), &mut out);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `[z, X] = [z, x^1, .., x^{n-1}]`.
pub fn element_bracket(a: &HomNaryAlgebra, z: &[Scalar], x: &[Vec<Scalar>]) -> Vec<Scalar> {
    let mut args: Vec<&[Scalar]> = vec![z];
    args.extend(x.iter().map(Vec::as_slice));
    a.bracket_of(&args)
}

/// Tensor dims of `p`-cochains with values in `rep`.
pub fn cochain_dims(rep: &Representation, p: usize) -> Vec<usize> {
    let a = rep.algebra();
    let inputs = 1 + (a.arity() - 1) * (p - 1);
    let mut dims = vec![a.dim(); inputs];
    dims.push(rep.module_dim());
    dims
}

/// `a_M f = f (a x a-bar^{p-1})`, as a tensor identity.
pub fn satisfies_constraint(rep: &Representation, f: &Tensor) -> bool {
    let a = rep.algebra().alpha();
    f.postcompose(rep.alpha_m()) == f.precompose_all(0..f.arity(), a)
}

/// A `p`-cochain; its tensor lives in the ambient space of all multilinear maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    tensor: Tensor,
}

impl Cochain {
    pub fn new(degree: usize, tensor: Tensor) -> Self {
        Cochain { degree, tensor }
    }

    pub fn zero(rep: &Representation, degree: usize) -> Self {
        Cochain { degree, tensor: Tensor::zeros(cochain_dims(rep, degree)) }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn tensor(&self) -> &Tensor {
        &self.tensor
    }

    pub fn into_tensor(self) -> Tensor {
        self.tensor
    }
}

/// The compatible subspace `C^p(L, M)` with a basis in reduced form.
#[derive(Clone, Debug)]
pub struct CochainSpace {
    rep: Representation,
    degree: usize,
    dims: Vec<usize>,
    basis: SubspaceBasis,
}

impl CochainSpace {
    /// Solves the compatibility constraint over the ambient coefficient space.
    pub fn new(rep: &Representation, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidDegree(0));
        }
        let dims = cochain_dims(rep, degree);
        let ambient: usize = dims.iter().product();
        let alpha = rep.algebra().alpha();
        let alpha_m = rep.alpha_m();
        let vacuous = (alpha.is_identity() && alpha_m.is_identity()) || (alpha.is_zero() && alpha_m.is_zero());
        let basis = if vacuous { SubspaceBasis::standard(ambient) } else { kernel_basis(&constraint_matrix(&dims, alpha, alpha_m)) };
        Ok(CochainSpace { rep: rep.clone(), degree, dims, basis })
    }

    pub fn representation(&self) -> &Representation {
        &self.rep
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.ambient_dim()
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &SubspaceBasis {
        &self.basis
    }

    /// The `i`-th basis cochain.
    pub fn basis_cochain(&self, i: usize) -> Cochain {
        Cochain::new(self.degree, Tensor::from_data(self.dims.clone(), self.basis.vectors()[i].clone()))
    }

    /// The cochain with the given basis coordinates.
    pub fn element(&self, coords: &[Scalar]) -> Cochain {
        Cochain::new(self.degree, Tensor::from_data(self.dims.clone(), self.basis.combine(coords)))
    }

    pub fn coordinates(&self, f: &Tensor) -> Option<Vec<Scalar>> {
        if f.dims() != self.dims.as_slice() {
            return None;
        }
        self.basis.coordinates(f.data())
    }

    pub fn contains(&self, f: &Tensor) -> bool {
        self.coordinates(f).is_some()
    }
}

/// Matrix of `f -> a_M f - f (a on every input)` on the ambient space.
fn constraint_matrix(dims: &[usize], alpha: &Matrix, alpha_m: &Matrix) -> Matrix {
    let inputs = &dims[..dims.len() - 1];
    let m = dims[dims.len() - 1];
    let ambient: usize = dims.iter().product();
    let mut t = Matrix::zeros(ambient, ambient);
    let n_in: usize = inputs.iter().product();
    // row supports of alpha: alpha[j][i] != 0
    let support: Vec<Vec<(usize, &Scalar)>> =
        (0..alpha.rows()).map(|j| (0..alpha.cols()).filter(|&i| !alpha.get(j, i).is_zero()).map(|i| (i, alpha.get(j, i))).collect()).collect();
    let mut j_index = vec![0usize; inputs.len()];
    for j in 0..n_in {
        let mut rem = j;
        for s in (0..inputs.len()).rev() {
            j_index[s] = rem % inputs[s];
            rem /= inputs[s];
        }
        for q in 0..m {
            let col = j * m + q;
            for o in 0..m {
                let c = alpha_m.get(o, q);
                if !c.is_zero() {
                    let row = j * m + o;
                    let v = t.get(row, col) + c;
                    t.set(row, col, v);
                }
            }
            // f(a x..) picks up prod_s alpha[j_s][i_s] at input i
            let mut stack: Vec<(usize, usize, Scalar)> = vec![(0, 0, Scalar::one())];
            while let Some((s, acc, coeff)) = stack.pop() {
                if s == inputs.len() {
                    let row = acc * m + q;
                    let v = t.get(row, col) - &coeff;
                    t.set(row, col, v);
                    continue;
                }
                for &(i, c) in &support[j_index[s]] {
                    stack.push((s + 1, acc * inputs[s] + i, &coeff * c));
                }
            }
        }
    }
    t
}

/// The coboundary formula applied to an arbitrary tensor of degree `p`
/// (no membership checks).
pub fn coboundary_tensor(rep: &Representation, f: &Tensor, p: usize, conv: &SignConvention) -> Tensor {
    let alg = rep.algebra();
    let n = alg.arity();
    let w = n - 1;
    let alpha = alg.alpha();
    let bracket = alg.bracket();
    let out_slot = 1 + w * p;
    let canon = |k: usize, c: usize| 1 + (k - 1) * w + c;
    let f_y = |m: usize, c: usize| 1 + (m - 1) * w + c;
    let f_out = 1 + w * (p - 1);
    assert_eq!(f.dims(), cochain_dims(rep, p).as_slice(), "tensor is not a {p}-cochain");

    let mut result = Tensor::zeros(cochain_dims(rep, p + 1));
    let parity = |k: usize| if k % 2 == 0 { Scalar::one() } else { -Scalar::one() };

    // A
    for j in 2..=p {
        let xmap = |m: usize| if m < j { m } else { m + 1 };
        for i in 1..j {
            let (host, guest) = match conv.order {
                FundamentalOrder::Standard => (i, j),
                FundamentalOrder::Swapped => (j, i),
            };
            for k in 0..w {
                let mut g = f.precompose(0, alpha);
                for m in 1..p {
                    for c in 0..w {
                        if m == i && c == k {
                            continue;
                        }
                        let twisted = m == i
                            || match conv.term_a_twist {
                                TermATwist::All => true,
                                TermATwist::BeforeRemoved => xmap(m) < j,
                            };
                        if twisted {
                            g = g.precompose(f_y(m, c), alpha);
                        }
                    }
                }
                let g = g.substitute(f_y(i, k), bracket);
                let mut dest = Vec::with_capacity(out_slot + 1);
                for s in 0..=f_out {
                    if s == 0 {
                        dest.push(0);
                    } else if s == f_out {
                        dest.push(out_slot);
                    } else if s == f_y(i, k) {
                        dest.push(canon(host, k));
                        dest.extend((0..w).map(|c| canon(guest, c)));
                    } else {
                        let (m, c) = ((s - 1) / w + 1, (s - 1) % w);
                        dest.push(if m == i { canon(host, c) } else { canon(xmap(m), c) });
                    }
                }
                result.add_scaled(&(parity(j) * conv.sign(0)), &g.arrange(&dest));
            }
        }
    }

    // B
    for i in 1..=p {
        let xmap = |m: usize| if m < i { m } else { m + 1 };
        let g = f.precompose_all(1..f_out, alpha).substitute(0, bracket);
        let mut dest = vec![0];
        dest.extend((0..w).map(|c| canon(i, c)));
        for m in 1..p {
            dest.extend((0..w).map(|c| canon(xmap(m), c)));
        }
        dest.push(out_slot);
        result.add_scaled(&(parity(i) * conv.sign(1)), &g.arrange(&dest));
    }

    let alpha_pow = alpha.pow(p - 1);

    // C
    let first = match conv.term_c_range {
        TermCRange::All => 1,
        TermCRange::SkipFirst => 2,
    };
    let action0 = rep.action(0).precompose_all(1..n, &alpha_pow);
    for i in first..=p {
        let xmap = |m: usize| if m < i { m } else { m + 1 };
        let g = f.feed_into(&action0, 0);
        let mut dest = vec![0];
        for m in 1..p {
            dest.extend((0..w).map(|c| canon(xmap(m), c)));
        }
        dest.extend((0..w).map(|c| canon(i, c)));
        dest.push(out_slot);
        result.add_scaled(&(parity(i + 1) * conv.sign(2)), &g.arrange(&dest));
    }

    // D
    for i in 1..=w {
        let action = rep.action(i).precompose_all((0..n).filter(|&s| s != i), &alpha_pow);
        let g = f.feed_into(&action, i);
        let mut dest = vec![canon(1, i - 1)];
        for m in 1..p {
            dest.extend((0..w).map(|c| canon(m + 1, c)));
        }
        dest.push(0);
        dest.extend((1..n).filter(|&s| s != i).map(|s| canon(1, s - 1)));
        dest.push(out_slot);
        result.add_scaled(&conv.sign(3), &g.arrange(&dest));
    }

    result
}

/// `delta^p f`. Fails when `f` is not compatible, or when the image is not
/// (which signals an invalid convention or an invalid algebra).
pub fn coboundary(rep: &Representation, f: &Cochain, conv: &SignConvention) -> Result<Cochain> {
    if f.degree == 0 {
        return Err(Error::InvalidDegree(0));
    }
    if f.tensor.dims() != cochain_dims(rep, f.degree).as_slice() {
        return Err(Error::Shape(format!("tensor dims {:?} do not match degree {}", f.tensor.dims(), f.degree)));
    }
    if !satisfies_constraint(rep, &f.tensor) {
        return Err(Error::NotACochain { degree: f.degree });
    }
    let image = coboundary_tensor(rep, &f.tensor, f.degree, conv);
    if !satisfies_constraint(rep, &image) {
        return Err(Error::ConstraintViolation { degree: f.degree + 1 });
    }
    Ok(Cochain::new(f.degree + 1, image))
}

/// Matrix of `delta^p` from the basis of `source` to the basis of `target`.
pub fn coboundary_matrix(source: &CochainSpace, target: &CochainSpace, conv: &SignConvention) -> Result<Matrix> {
    if target.degree != source.degree + 1 {
        return Err(Error::Shape(format!("target degree {} does not follow {}", target.degree, source.degree)));
    }
    let mut columns = Vec::with_capacity(source.dim());
    for i in 0..source.dim() {
        let b = source.basis_cochain(i);
        let image = coboundary_tensor(&source.rep, b.tensor(), source.degree, conv);
        let coords = target.coordinates(&image).ok_or(Error::ConstraintViolation { degree: target.degree })?;
        columns.push(coords);
    }
    Matrix::from_columns(target.dim(), &columns)
}

/// Spaces `C^1..C^max` and coboundary matrices `delta^1..delta^{max-1}`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    convention: SignConvention,
    spaces: Vec<CochainSpace>,
    differentials: Vec<Matrix>,
}

impl CochainComplex {
    pub fn new(rep: &Representation, conv: SignConvention, max_degree: usize) -> Result<Self> {
        if max_degree == 0 {
            return Err(Error::InvalidDegree(0));
        }
        let spaces: Vec<CochainSpace> = (1..=max_degree).map(|p| CochainSpace::new(rep, p)).collect::<Result<_>>()?;
        let differentials = spaces.windows(2).map(|s| coboundary_matrix(&s[0], &s[1], &conv)).collect::<Result<_>>()?;
        Ok(CochainComplex { convention: conv, spaces, differentials })
    }

    pub fn convention(&self) -> &SignConvention {
        &self.convention
    }

    pub fn representation(&self) -> &Representation {
        self.spaces[0].representation()
    }

    pub fn max_degree(&self) -> usize {
        self.spaces.len()
    }

    /// `C^p` for `1 <= p <= max_degree`.
    pub fn space(&self, p: usize) -> &CochainSpace {
        &self.spaces[p - 1]
    }

    /// Matrix of `delta^p` for `1 <= p < max_degree`.
    pub fn differential(&self, p: usize) -> &Matrix {
        &self.differentials[p - 1]
    }

    /// `delta^p` with `delta^0 = 0` and the convention `C^0 = 0`.
    pub fn differential_or_zero(&self, p: usize) -> Matrix {
        if p == 0 {
            Matrix::zeros(self.space(1).dim(), 0)
        } else {
            self.differential(p).clone()
        }
    }

    /// `dim ker delta^p - rank delta^{p-1}`; needs `p < max_degree`.
    pub fn cohomology_dim(&self, p: usize) -> Result<usize> {
        if p == 0 {
            return Err(Error::InvalidDegree(0));
        }
        if p >= self.max_degree() {
            return Err(Error::Shape(format!("degree {p} needs a complex built through degree {}", p + 1)));
        }
        let cycles = kernel_basis(self.differential(p));
        let prev = self.differential_or_zero(p - 1);
        let columns: Vec<Vec<Scalar>> = (0..prev.cols()).map(|j| prev.column(j)).collect();
        let boundaries = SubspaceBasis::span_of(prev.rows(), &columns)?;
        quotient_dim(&cycles, &boundaries).map_err(|_| Error::NotAComplex { degree: p })
    }

    /// `rank delta^p`.
    pub fn rank(&self, p: usize) -> usize {
        if p == 0 {
            0
        } else {
            rank(self.differential(p))
        }
    }
}

/// `dim H^p(L, M)` under `conv`.
pub fn cohomology_dim(rep: &Representation, p: usize, conv: &SignConvention) -> Result<usize> {
    if p == 0 {
        return Err(Error::InvalidDegree(0));
    }
    CochainComplex::new(rep, *conv, p + 1)?.cohomology_dim(p)
}

/// Whether `delta^{p+1} delta^p = 0` on a spanning set of `C^p`, with images
/// compatible at both steps.
pub fn squares_to_zero(space: &CochainSpace, conv: &SignConvention) -> bool {
    let rep = space.representation();
    let p = space.degree();
    (0..space.dim()).all(|i| {
        let b = space.basis_cochain(i);
        let once = coboundary_tensor(rep, b.tensor(), p, conv);
        if !satisfies_constraint(rep, &once) {
            return false;
        }
        coboundary_tensor(rep, &once, p + 1, conv).is_zero()
    })
}
