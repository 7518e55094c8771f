//! Random generators and independent pointwise oracles shared by the
//! integration tests. Nothing here uses the tensor calculus of the library:
//! maps are evaluated entry by entry on explicit vectors.

#![allow(dead_code)]

use homleib_core::deformation::{morphism_order_residual, MorphismDeformation};
use homleib_core::linalg::{kernel_basis, rank, Matrix};
use homleib_core::morphism_complex::{MorphismCochain, MorphismComplex};
use homleib_core::scalar::{int, ratio};
use homleib_core::{HomNaryAlgebra, Morphism, Scalar, Tensor};
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Small integers with the occasional half.
pub fn small(rng: &mut StdRng) -> Scalar {
    match rng.gen_range(0..10) {
        0..=3 => Scalar::zero(),
        4 => ratio(rng.gen_range(-3..=3), 2),
        _ => int(rng.gen_range(-3..=3)),
    }
}

pub fn random_tensor(rng: &mut StdRng, dims: Vec<usize>) -> Tensor {
    let len = dims.iter().product();
    let data = (0..len).map(|_| small(rng)).collect();
    Tensor::from_data(dims, data)
}

pub fn random_vec(rng: &mut StdRng, len: usize) -> Vec<Scalar> {
    (0..len).map(|_| small(rng)).collect()
}

pub fn unit(d: usize, i: usize) -> Vec<Scalar> {
    (0..d).map(|k| int((k == i) as i64)).collect()
}

/// All tuples in `0..d` of length `k`, in lexicographic order.
pub fn tuples(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out.into_iter().flat_map(|t| (0..d).map(move |i| [t.clone(), vec![i]].concat())).collect();
    }
    out
}

/// `t(v_1, .., v_k)` by summing over every input index tuple.
pub fn apply(t: &Tensor, args: &[Vec<Scalar>]) -> Vec<Scalar> {
    let dims = t.dims();
    let k = dims.len() - 1;
    assert_eq!(args.len(), k);
    let m = dims[k];
    let mut out = vec![Scalar::zero(); m];
    let mut idx = vec![0usize; k];
    'outer: loop {
        let mut c = Scalar::from_integer(1.into());
        for s in 0..k {
            c *= &args[s][idx[s]];
            if c.is_zero() {
                break;
            }
        }
        if !c.is_zero() {
            let mut full = idx.clone();
            for o in 0..m {
                full.push(o);
                out[o] += &c * t.get(&full);
                full.pop();
            }
        }
        for s in (0..k).rev() {
            idx[s] += 1;
            if idx[s] < dims[s] {
                continue 'outer;
            }
            idx[s] = 0;
        }
        break;
    }
    out
}

pub fn mat_apply(m: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j) * &v[j]).fold(Scalar::zero(), |a, b| a + b)).collect()
}

pub fn add(a: &mut [Scalar], b: &[Scalar]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

pub fn sub(a: &mut [Scalar], b: &[Scalar]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x -= y;
    }
}

/// Classical coboundary of a right Leibniz algebra with coefficients in
/// itself, evaluated on basis tuples:
///
/// `df(x_1..x_{p+1}) = [x_1, f(x_2..)] + sum_{i>=2} (-1)^i [f(..^x_i..), x_i]
///                    + sum_{i<j} (-1)^{j+1} f(.., [x_i, x_j] at i, .., ^x_j, ..)`
pub fn classical_coboundary(a: &HomNaryAlgebra, f: &Tensor, p: usize) -> Tensor {
    assert_eq!(a.arity(), 2);
    let d = a.dim();
    let br = |u: &[Scalar], v: &[Scalar]| apply(a.bracket(), &[u.to_vec(), v.to_vec()]);
    let mut dims = vec![d; p + 1];
    dims.push(d);
    let mut out = Tensor::zeros(dims);
    for tuple in tuples(d, p + 1) {
        let xs: Vec<Vec<Scalar>> = tuple.iter().map(|&i| unit(d, i)).collect();
        let mut total = br(&xs[0], &apply(f, &xs[1..]));
        for i in 1..=p {
            let rest: Vec<Vec<Scalar>> = xs.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, x)| x.clone()).collect();
            let term = br(&apply(f, &rest), &xs[i]);
            if (i + 1) % 2 == 0 {
                add(&mut total, &term);
            } else {
                sub(&mut total, &term);
            }
        }
        for i in 0..=p {
            for j in i + 1..=p {
                let mut args = Vec::new();
                for (k, x) in xs.iter().enumerate() {
                    if k == i {
                        args.push(br(&xs[i], &xs[j]));
                    } else if k != j {
                        args.push(x.clone());
                    }
                }
                let term = apply(f, &args);
                if (j + 1 + 1) % 2 == 0 {
                    add(&mut total, &term);
                } else {
                    sub(&mut total, &term);
                }
            }
        }
        for (o, v) in total.into_iter().enumerate() {
            let mut full = tuple.clone();
            full.push(o);
            out.set(&full, v);
        }
    }
    out
}

/// Pointwise residuals of the three order-`l` morphism equations, flattened
/// into one vector: `sum_{i+j=l} xi_i(xi_j(X), aY) - sum_k sum_{i+j=l} xi_i(.., xi_j(x_k, Y), ..)`
/// on every basis tuple of `L`, the same for `eta` on `M`, and
/// `sum_{i+j=l} phi_i xi_j(X) - sum_{i+j_1+..+j_n=l} eta_i(phi_{j_1} x_1, ..)`.
pub fn order_equations(
    n: usize,
    xi: &[Tensor],
    eta: &[Tensor],
    maps: &[Matrix],
    alpha: &Matrix,
    beta: &Matrix,
    l: usize,
) -> Vec<Scalar> {
    let mut out = leibniz_equations(n, xi, alpha, l);
    out.extend(leibniz_equations(n, eta, beta, l));
    let dl = alpha.rows();
    let get = |v: &[Tensor], i: usize| v.get(i).cloned();
    for tuple in tuples(dl, n) {
        let xs: Vec<Vec<Scalar>> = tuple.iter().map(|&i| unit(dl, i)).collect();
        let mut total = vec![Scalar::zero(); beta.rows()];
        for i in 0..=l {
            if let (Some(m), Some(x)) = (maps.get(i), get(xi, l - i)) {
                add(&mut total, &mat_apply(m, &apply(&x, &xs)));
            }
        }
        for i in 0..=l {
            let Some(e) = get(eta, i) else { continue };
            for js in tuples(l - i + 1, n) {
                if js.iter().sum::<usize>() != l - i {
                    continue;
                }
                let Some(args) = js.iter().zip(&xs).map(|(&j, x)| maps.get(j).map(|m| mat_apply(m, x))).collect::<Option<Vec<_>>>() else {
                    continue;
                };
                sub(&mut total, &apply(&e, &args));
            }
        }
        out.extend(total);
    }
    out
}

fn leibniz_equations(n: usize, c: &[Tensor], alpha: &Matrix, l: usize) -> Vec<Scalar> {
    let d = alpha.rows();
    let mut out = Vec::new();
    for tuple in tuples(d, 2 * n - 1) {
        let vs: Vec<Vec<Scalar>> = tuple.iter().map(|&i| unit(d, i)).collect();
        let (xs, ys) = vs.split_at(n);
        let ays: Vec<Vec<Scalar>> = ys.iter().map(|y| mat_apply(alpha, y)).collect();
        let axs: Vec<Vec<Scalar>> = xs.iter().map(|x| mat_apply(alpha, x)).collect();
        let mut total = vec![Scalar::zero(); d];
        for i in 0..=l {
            let (Some(outer), Some(inner)) = (c.get(i), c.get(l - i)) else { continue };
            let mut args = vec![apply(inner, xs)];
            args.extend(ays.iter().cloned());
            add(&mut total, &apply(outer, &args));
            for k in 0..n {
                let mut inner_args = vec![xs[k].clone()];
                inner_args.extend(ys.iter().cloned());
                let mut args = axs.clone();
                args[k] = apply(inner, &inner_args);
                sub(&mut total, &apply(outer, &args));
            }
        }
        out.extend(total);
    }
    out
}

fn unknown_shapes(phi: &Morphism) -> (Vec<usize>, Vec<usize>, (usize, usize)) {
    let n = phi.source().arity();
    let (dl, dm) = (phi.source().dim(), phi.target().dim());
    (vec![dl; n + 1], vec![dm; n + 1], (dm, dl))
}

fn split_unknowns(phi: &Morphism, x: &[Scalar]) -> (Tensor, Tensor, Matrix) {
    let (xd, ed, (r, c)) = unknown_shapes(phi);
    let a: usize = xd.iter().product();
    let b: usize = ed.iter().product();
    let xi = Tensor::from_data(xd, x[..a].to_vec());
    let eta = Tensor::from_data(ed, x[a..a + b].to_vec());
    let m = Matrix::from_fn(r, c, |i, j| x[a + b + i * c + j].clone());
    (xi, eta, m)
}

/// Whether the order-`l` equations of `md` (valid through `l - 1`) admit a
/// solution in the order-`l` unknowns, by assembling the affine system from
/// [`order_equations`] and comparing ranks.
pub fn extendable_oracle(md: &MorphismDeformation, l: usize) -> bool {
    let phi = md.morphism();
    let n = phi.source().arity();
    let (xd, ed, (r, c)) = unknown_shapes(phi);
    let size = xd.iter().product::<usize>() + ed.iter().product::<usize>() + r * c;
    let base = md.truncate(l - 1);
    let xi: Vec<Tensor> = base.xi().coeffs().to_vec();
    let eta: Vec<Tensor> = base.eta().coeffs().to_vec();
    let maps: Vec<Matrix> = base.maps().to_vec();
    let (alpha, beta) = (phi.source().alpha(), phi.target().alpha());
    let eval = |x: &[Scalar]| {
        let (a, b, m) = split_unknowns(phi, x);
        let (mut xi, mut eta, mut maps) = (xi.clone(), eta.clone(), maps.clone());
        xi.push(a);
        eta.push(b);
        maps.push(m);
        order_equations(n, &xi, &eta, &maps, alpha, beta, l)
    };
    let zero = vec![Scalar::zero(); size];
    let b0 = eval(&zero);
    let mut columns = Vec::with_capacity(size + 1);
    for k in 0..size {
        let mut e = zero.clone();
        e[k] = int(1);
        let mut col = eval(&e);
        sub(&mut col, &b0);
        columns.push(col);
    }
    let a = Matrix::from_columns(b0.len(), &columns).unwrap();
    columns.push(b0.clone());
    let aug = Matrix::from_columns(b0.len(), &columns).unwrap();
    rank(&a) == rank(&aug)
}

/// A random solution of the order-1 equations over all multilinear maps
/// (not necessarily compatible with the twists).
pub fn random_order1(phi: &Morphism, rng: &mut StdRng) -> MorphismDeformation {
    let (xd, ed, (r, c)) = unknown_shapes(phi);
    let size = xd.iter().product::<usize>() + ed.iter().product::<usize>() + r * c;
    let trivial = MorphismDeformation::trivial(phi.clone(), 0);
    let columns: Vec<Vec<Scalar>> = (0..size)
        .map(|k| {
            let mut e = vec![Scalar::zero(); size];
            e[k] = int(1);
            let (a, b, m) = split_unknowns(phi, &e);
            let md = trivial.with_order(1, a, b, m).unwrap();
            let (x, y, z) = morphism_order_residual(&md, 1);
            [x.into_data(), y.into_data(), z.into_data()].concat()
        })
        .collect();
    let system = Matrix::from_columns(columns[0].len(), &columns).unwrap();
    let kernel = kernel_basis(&system);
    let coords = random_vec(rng, kernel.dim());
    let x = kernel.combine(&coords);
    let (a, b, m) = split_unknowns(phi, &x);
    let md = trivial.with_order(1, a, b, m).unwrap();
    assert!(md.valid_through(1));
    md
}

/// A random 2-cocycle of the morphism complex, as an order-1 deformation.
pub fn random_compatible_order1(mc: &MorphismComplex, rng: &mut StdRng) -> MorphismDeformation {
    let kernel = kernel_basis(mc.differential(2));
    let coords = random_vec(rng, kernel.dim());
    let c: MorphismCochain = mc.element(2, &kernel.combine(&coords));
    let map = c.w().unwrap().to_matrix();
    let trivial = MorphismDeformation::trivial(mc.morphism().clone(), 0);
    trivial.with_order(1, c.u().unwrap().clone(), c.v().unwrap().clone(), map).unwrap()
}
