//! Dense multilinear maps.
//!
//! A [`Tensor`] with dims `[d_0, .., d_{k-1}, d_out]` stores a multilinear map
//! `V_0 x .. x V_{k-1} -> W` by its values on basis tuples, row-major with the
//! output slot fastest. Composition with linear maps, substitution of one
//! multilinear map into a slot of another, and slot permutation are the only
//! primitives the cohomology code needs.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    dims: Vec<usize>,
    data: Vec<Scalar>,
}

fn product(dims: &[usize]) -> usize {
    dims.iter().product()
}

impl Tensor {
    pub fn zeros(dims: Vec<usize>) -> Self {
        let len = product(&dims);
        Tensor { dims, data: vec![Scalar::zero(); len] }
    }

    /// Panics when `data.len()` does not match `dims`.
    pub fn from_data(dims: Vec<usize>, data: Vec<Scalar>) -> Self {
        assert_eq!(product(&dims), data.len(), "tensor data length does not match its dims");
        Tensor { dims, data }
    }

    /// A linear map `Q^cols -> Q^rows` as a one-input tensor.
    pub fn from_matrix(m: &Matrix) -> Self {
        Tensor::from_data(vec![m.cols(), m.rows()], m.transpose().entries().to_vec())
    }

    /// The single-input tensor back as a matrix (output index = row).
    pub fn to_matrix(&self) -> Matrix {
        assert_eq!(self.dims.len(), 2, "not a linear map");
        Matrix::from_fn(self.dims[1], self.dims[0], |i, j| self.data[j * self.dims[1] + i].clone())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of input slots.
    pub fn arity(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn output_dim(&self) -> usize {
        *self.dims.last().expect("tensor has an output slot")
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Scalar> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn offset(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.dims.len());
        index.iter().zip(&self.dims).fold(0, |acc, (&i, &d)| acc * d + i)
    }

    /// Inverse of [`Tensor::offset`].
    pub fn multi_index(&self, mut offset: usize) -> Vec<usize> {
        let mut index = vec![0; self.dims.len()];
        for (slot, &d) in self.dims.iter().enumerate().rev() {
            index[slot] = offset % d;
            offset /= d;
        }
        index
    }

    pub fn get(&self, index: &[usize]) -> &Scalar {
        &self.data[self.offset(index)]
    }

    pub fn set(&mut self, index: &[usize], value: Scalar) {
        let o = self.offset(index);
        self.data[o] = value;
    }

    /// The output vector for a tuple of input basis indices.
    pub fn value(&self, inputs: &[usize]) -> &[Scalar] {
        let out = self.output_dim();
        let base = inputs.iter().zip(&self.dims).fold(0, |acc, (&i, &d)| acc * d + i) * out;
        &self.data[base..base + out]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn add_assign(&mut self, other: &Tensor) {
        assert_eq!(self.dims, other.dims, "adding tensors of different shapes");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &Tensor) {
        assert_eq!(self.dims, other.dims, "adding tensors of different shapes");
        if c.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += c * b;
            }
        }
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        let mut out = self.clone();
        out.add_scaled(&-Scalar::one(), other);
        out
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        Tensor { dims: self.dims.clone(), data: self.data.iter().map(|x| x * c).collect() }
    }

    /// Replaces slot `slot` by `k * (slot)`, where `k` is `new_dim x old_dim`:
    /// `out[.., i, ..] = sum_j k[i][j] * self[.., j, ..]`.
    pub fn transform_slot(&self, slot: usize, k: &Matrix) -> Tensor {
        assert_eq!(k.cols(), self.dims[slot], "transform does not match slot {slot}");
        let pre = product(&self.dims[..slot]);
        let old = self.dims[slot];
        let suf = product(&self.dims[slot + 1..]);
        let mut dims = self.dims.clone();
        dims[slot] = k.rows();
        let new = k.rows();
        let mut out = Tensor::zeros(dims);
        let column_support: Vec<Vec<(usize, &Scalar)>> =
            (0..old).map(|j| (0..new).filter_map(|i| Some((i, k.get(i, j))).filter(|(_, c)| !c.is_zero())).collect()).collect();
        for p in 0..pre {
            for (j, support) in column_support.iter().enumerate() {
                if support.is_empty() {
                    continue;
                }
                let src = (p * old + j) * suf;
                for s in 0..suf {
                    let x = &self.data[src + s];
                    if x.is_zero() {
                        continue;
                    }
                    for &(i, c) in support {
                        out.data[(p * new + i) * suf + s] += c * x;
                    }
                }
            }
        }
        out
    }

    /// Precomposes input slot `slot` with the linear map `a` (`a` sends the new
    /// slot space into the old one, i.e. `a` is `old_dim x new_dim`).
    pub fn precompose(&self, slot: usize, a: &Matrix) -> Tensor {
        assert!(slot < self.arity(), "slot {slot} is not an input");
        self.transform_slot(slot, &a.transpose())
    }

    /// Precomposes every listed input slot with `a`.
    pub fn precompose_all(&self, slots: impl IntoIterator<Item = usize>, a: &Matrix) -> Tensor {
        let at = a.transpose();
        slots.into_iter().fold(self.clone(), |t, s| t.transform_slot(s, &at))
    }

    /// Postcomposes the output with the linear map `b` (`new_out x old_out`).
    pub fn postcompose(&self, b: &Matrix) -> Tensor {
        self.transform_slot(self.arity(), b)
    }

    /// Substitutes the multilinear map `inner` into input slot `slot`; the slot
    /// is replaced by the input slots of `inner`.
    pub fn substitute(&self, slot: usize, inner: &Tensor) -> Tensor {
        assert!(slot < self.arity(), "slot {slot} is not an input");
        assert_eq!(inner.output_dim(), self.dims[slot], "inner output does not fit slot {slot}");
        let pre = product(&self.dims[..slot]);
        let old = self.dims[slot];
        let suf = product(&self.dims[slot + 1..]);
        let inner_in = product(&inner.dims[..inner.arity()]);
        let mut dims = Vec::with_capacity(self.dims.len() + inner.arity());
        dims.extend_from_slice(&self.dims[..slot]);
        dims.extend_from_slice(&inner.dims[..inner.arity()]);
        dims.extend_from_slice(&self.dims[slot + 1..]);
        let mut out = Tensor::zeros(dims);
        for a in 0..inner_in {
            for b in 0..old {
                let c = &inner.data[a * old + b];
                if c.is_zero() {
                    continue;
                }
                for p in 0..pre {
                    let src = (p * old + b) * suf;
                    let dst = (p * inner_in + a) * suf;
                    for s in 0..suf {
                        let x = &self.data[src + s];
                        if !x.is_zero() {
                            out.data[dst + s] += c * x;
                        }
                    }
                }
            }
        }
        out
    }

    /// Feeds the output of `self` into input slot `slot` of `outer`. The result
    /// has the inputs of `self`, then the remaining inputs of `outer` in order,
    /// then the output of `outer`.
    pub fn feed_into(&self, outer: &Tensor, slot: usize) -> Tensor {
        assert!(slot < outer.arity(), "slot {slot} is not an input");
        assert_eq!(self.output_dim(), outer.dims[slot], "output does not fit slot {slot}");
        let mut order: Vec<usize> = vec![slot];
        order.extend((0..outer.dims.len()).filter(|&s| s != slot));
        let moved = outer.permute(&order);
        let q = self.output_dim();
        let rest = moved.len() / q;
        let inputs = self.len() / q;
        let mut dims: Vec<usize> = self.dims[..self.arity()].to_vec();
        dims.extend_from_slice(&moved.dims[1..]);
        let mut out = Tensor::zeros(dims);
        for i in 0..inputs {
            for j in 0..q {
                let x = &self.data[i * q + j];
                if x.is_zero() {
                    continue;
                }
                let src = j * rest;
                let dst = i * rest;
                for r in 0..rest {
                    let y = &moved.data[src + r];
                    if !y.is_zero() {
                        out.data[dst + r] += x * y;
                    }
                }
            }
        }
        out
    }

    /// Reorders slots: slot `k` of the result is slot `order[k]` of `self`.
    pub fn permute(&self, order: &[usize]) -> Tensor {
        assert_eq!(order.len(), self.dims.len(), "permutation length");
        if order.iter().enumerate().all(|(k, &o)| k == o) {
            return self.clone();
        }
        let dims: Vec<usize> = order.iter().map(|&o| self.dims[o]).collect();
        let mut old_strides = vec![1usize; self.dims.len()];
        for s in (0..self.dims.len().saturating_sub(1)).rev() {
            old_strides[s] = old_strides[s + 1] * self.dims[s + 1];
        }
        let strides: Vec<usize> = order.iter().map(|&o| old_strides[o]).collect();
        let mut data = Vec::with_capacity(self.data.len());
        let mut index = vec![0usize; dims.len()];
        let mut src = 0usize;
        for _ in 0..self.data.len() {
            data.push(self.data[src].clone());
            for s in (0..dims.len()).rev() {
                index[s] += 1;
                src += strides[s];
                if index[s] < dims[s] {
                    break;
                }
                src -= strides[s] * dims[s];
                index[s] = 0;
            }
        }
        Tensor { dims, data }
    }

    /// Reorders slots by destination: slot `s` of `self` becomes slot
    /// `dest[s]` of the result.
    pub fn arrange(&self, dest: &[usize]) -> Tensor {
        let mut order = vec![usize::MAX; dest.len()];
        for (s, &d) in dest.iter().enumerate() {
            order[d] = s;
        }
        debug_assert!(order.iter().all(|&o| o != usize::MAX), "destination is not a permutation");
        self.permute(&order)
    }

    /// Evaluates the map on arbitrary input vectors.
    pub fn eval(&self, inputs: &[&[Scalar]]) -> Vec<Scalar> {
        assert_eq!(inputs.len(), self.arity(), "wrong number of inputs");
        let out = self.output_dim();
        let mut result = vec![Scalar::zero(); out];
        let supports: Vec<Vec<usize>> =
            inputs.iter().map(|v| (0..v.len()).filter(|&i| !v[i].is_zero()).collect()).collect();
        if supports.iter().any(Vec::is_empty) && !inputs.is_empty() {
            return result;
        }
        let mut pos = vec![0usize; inputs.len()];
        loop {
            let mut coeff = Scalar::one();
            let mut base = 0;
            for (slot, &p) in pos.iter().enumerate() {
                let i = supports[slot][p];
                coeff *= &inputs[slot][i];
                base = base * self.dims[slot] + i;
            }
            for (o, r) in result.iter_mut().enumerate() {
                let x = &self.data[base * out + o];
                if !x.is_zero() {
                    *r += &coeff * x;
                }
            }
            let mut slot = inputs.len();
            loop {
                if slot == 0 {
                    return result;
                }
                slot -= 1;
                pos[slot] += 1;
                if pos[slot] < supports[slot].len() {
                    break;
                }
                pos[slot] = 0;
            }
        }
    }
}
