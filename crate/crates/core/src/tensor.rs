//! Dense row-major tensors and contraction of single modes with vectors.
//!
//! Mode indices are zero-based throughout: an order-`p` tensor has modes
//! `0..p`. The last index varies fastest in the flat storage.

use crate::error::{Error, Result};

/// Order-`p` dense tensor with row-major storage.
///
/// Immutable after construction. An order-0 tensor (`dims == []`) holds a
/// single scalar and only arises as the result of contracting an order-1
/// tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor {
    dims: Vec<usize>,
    data: Vec<f64>,
}

impl DenseTensor {
    /// Builds a tensor of order ≥ 1. Every extent must be ≥ 1, the data
    /// length must equal the product of extents, and all entries must be
    /// finite.
    pub fn new(dims: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::shape("tensor order must be at least 1"));
        }
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(Error::shape(format!("extent of mode {pos} is zero")));
        }
        let expected = checked_product(&dims)
            .ok_or_else(|| Error::shape(format!("extents {dims:?} overflow usize")))?;
        if data.len() != expected {
            return Err(Error::shape(format!(
                "data length {} does not match extents {:?} (expected {})",
                data.len(),
                dims,
                expected
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!("non-finite entry at flat index {pos}")));
        }
        Ok(Self { dims, data })
    }

    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        let len = checked_product(&dims).unwrap_or(0);
        Self::new(dims, vec![0.0; len])
    }

    /// Order-0 tensor holding `value`.
    pub fn scalar(value: f64) -> Self {
        Self {
            dims: Vec::new(),
            data: vec![value],
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// The held value for an order-0 tensor, `None` otherwise.
    pub fn as_scalar(&self) -> Option<f64> {
        self.dims.is_empty().then(|| self.data[0])
    }

    /// Row-major strides, one per mode.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }

    /// Entry at a multi-index. Panics if the index is out of bounds.
    pub fn get(&self, index: &[usize]) -> f64 {
        assert_eq!(index.len(), self.dims.len(), "multi-index has wrong order");
        let offset = index
            .iter()
            .zip(self.dims.iter())
            .zip(self.strides())
            .map(|((&i, &d), s)| {
                assert!(i < d, "index {i} out of bounds for extent {d}");
                i * s
            })
            .sum::<usize>();
        self.data[offset]
    }
}

fn checked_product(dims: &[usize]) -> Option<usize> {
    dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d))
}

/// Contracts mode `k` of `t` with `v`, removing that mode.
///
/// Contracting an order-1 tensor yields an order-0 scalar tensor.
pub fn mode_k_contract(t: &DenseTensor, v: &[f64], k: usize) -> Result<DenseTensor> {
    let p = t.order();
    if k >= p {
        return Err(Error::Index { index: k, len: p });
    }
    let dk = t.dims[k];
    if v.len() != dk {
        return Err(Error::shape(format!(
            "vector length {} does not match extent {} of mode {}",
            v.len(),
            dk,
            k
        )));
    }
    let outer: usize = t.dims[..k].iter().product();
    let inner: usize = t.dims[k + 1..].iter().product();
    let data = contract_kernel(&t.data, outer, dk, inner, v);
    let mut dims = t.dims.clone();
    dims.remove(k);
    Ok(DenseTensor { dims, data })
}

// Views `src` as [outer, mid, inner] and sums the middle axis against `v`.
fn contract_kernel(src: &[f64], outer: usize, mid: usize, inner: usize, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; outer * inner];
    if inner == 1 {
        for (o, slot) in out.iter_mut().enumerate() {
            let row = &src[o * mid..(o + 1) * mid];
            *slot = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        return out;
    }
    for o in 0..outer {
        let acc = &mut out[o * inner..(o + 1) * inner];
        let slab = &src[o * mid * inner..(o + 1) * mid * inner];
        for (j, &vj) in v.iter().enumerate() {
            // Sparse blocks are common; zero weights contribute nothing.
            if vj == 0.0 {
                continue;
            }
            let fiber = &slab[j * inner..(j + 1) * inner];
            for (a, &x) in acc.iter_mut().zip(fiber) {
                *a += x * vj;
            }
        }
    }
    out
}

fn check_blocks<B: AsRef<[f64]>>(t: &DenseTensor, blocks: &[B], skip: Option<usize>) -> Result<()> {
    if blocks.len() != t.order() {
        return Err(Error::shape(format!(
            "{} block vectors given for an order-{} tensor",
            blocks.len(),
            t.order()
        )));
    }
    for (i, (b, &d)) in blocks.iter().zip(&t.dims).enumerate() {
        if Some(i) != skip && b.as_ref().len() != d {
            return Err(Error::shape(format!(
                "block {} has length {} but mode extent is {}",
                i,
                b.as_ref().len(),
                d
            )));
        }
    }
    Ok(())
}

/// Contracts every mode except `skip` with its block vector, leaving a
/// vector of length `dims[skip]`.
///
/// This is the gradient of the multilinear form with respect to block `skip`.
/// `blocks[skip]` is ignored.
pub fn contract_all_but<B: AsRef<[f64]>>(
    t: &DenseTensor,
    blocks: &[B],
    skip: usize,
) -> Result<Vec<f64>> {
    let p = t.order();
    if skip >= p {
        return Err(Error::Index { index: skip, len: p });
    }
    check_blocks(t, blocks, Some(skip))?;

    // Contract trailing modes first (highest index down) so that the
    // positions of the remaining lower modes never shift.
    let mut cur: Option<Vec<f64>> = None;
    let mut dims = t.dims.clone();
    for k in (0..p).rev().filter(|&k| k != skip) {
        let src = cur.as_deref().unwrap_or(&t.data);
        let outer: usize = dims[..k].iter().product();
        let inner: usize = dims[k + 1..].iter().product();
        let next = contract_kernel(src, outer, dims[k], inner, blocks[k].as_ref());
        dims.remove(k);
        cur = Some(next);
    }
    Ok(cur.unwrap_or_else(|| t.data.clone()))
}

/// Full multilinear form `t ×₀ blocks[0] … ×ₚ₋₁ blocks[p-1]`.
pub fn contract_full<B: AsRef<[f64]>>(t: &DenseTensor, blocks: &[B]) -> Result<f64> {
    check_blocks(t, blocks, None)?;
    let g = contract_all_but(t, blocks, 0)?;
    Ok(dot(&g, blocks[0].as_ref()))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}
