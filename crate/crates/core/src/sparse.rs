//! Coordinate-blocked Caratheodory sets.
//!
//! The coordinates are split into `k2` contiguous blocks. Each block is
//! summarized on its own with [`fast_caratheodory_source`], and the selected
//! points are padded back to full dimension with zeros outside their block.
//! Every block's summary has weights summing to one, so the union has total
//! weight `k2` and the same weighted sum as the input.

use std::ops::Range;

use crate::caratheodory::fast_caratheodory_source;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::real::Real;
use crate::weighted::{PartitionSpec, PointSource, WeightedSet};

/// `k2` contiguous coordinate blocks covering `0..d`, sizes differing by at
/// most one with the larger ones first.
pub fn block_partition(d: usize, k2: usize) -> Result<Vec<Range<usize>>> {
    if d == 0 {
        return Err(Error::EmptyInput);
    }
    if k2 == 0 || k2 > d {
        return Err(Error::InvalidK2 { k2, max: d });
    }
    Ok(PartitionSpec::contiguous(d, k2)?.clusters().collect())
}

/// One selected point: input position `index`, kept only on block `block`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SparseEntry {
    pub index: usize,
    pub block: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseCaratheodorySet<T: Real> {
    pub entries: Vec<SparseEntry>,
    pub weights: Vec<T>,
    pub blocks: Vec<Range<usize>>,
    /// `⌈d / k2⌉`.
    pub block_width: usize,
    pub source_dim: usize,
    pub source_size: usize,
}

impl<T: Real> SparseCaratheodorySet<T> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weight_sum(&self) -> T {
        self.weights.iter().fold(T::zero(), |a, &w| a + w)
    }

    /// `Σ w_c c`, accumulating each entry only on its block.
    pub fn weighted_sum<S: PointSource<T> + ?Sized>(&self, source: &S) -> Vec<T> {
        let mut out = vec![T::zero(); self.source_dim];
        for (e, &w) in self.entries.iter().zip(&self.weights) {
            let r = self.blocks[e.block].clone();
            source.accumulate_block(e.index, w, r.start, &mut out[r]);
        }
        out
    }

    /// Materializes the padded vectors, one row per entry.
    pub fn to_dense<S: PointSource<T> + ?Sized>(&self, source: &S) -> Result<DenseMatrix<T>> {
        let d = self.source_dim;
        let mut data = vec![T::zero(); self.entries.len() * d];
        for (row, e) in data.chunks_exact_mut(d).zip(&self.entries) {
            let r = self.blocks[e.block].clone();
            source.accumulate_block(e.index, T::one(), r.start, &mut row[r]);
        }
        DenseMatrix::from_row_major(self.entries.len(), d, data)
    }
}

/// Restriction of a point source to a range of coordinates.
struct BlockView<'a, S: ?Sized> {
    source: &'a S,
    range: Range<usize>,
}

impl<T: Real, S: PointSource<T> + ?Sized> PointSource<T> for BlockView<'_, S> {
    fn len(&self) -> usize {
        self.source.len()
    }

    fn dim(&self) -> usize {
        self.range.len()
    }

    fn coord(&self, i: usize, j: usize) -> T {
        self.source.coord(i, self.range.start + j)
    }

    fn accumulate_block(&self, i: usize, scale: T, start: usize, out: &mut [T]) {
        self.source
            .accumulate_block(i, scale, self.range.start + start, out);
    }
}

/// Validated `(k1, k2)` pair; returns the blocks and `d' = ⌈d/k2⌉`.
pub(crate) fn check_sparse_params(
    n: usize,
    d: usize,
    k1: usize,
    k2: usize,
) -> Result<(Vec<Range<usize>>, usize)> {
    let blocks = block_partition(d, k2)?;
    let width = d.div_ceil(k2);
    let min = width + 2;
    // An input too small for any valid k1 is returned as is, so only the
    // lower bound applies there.
    let max = n.max(min);
    if k1 < min || k1 > max {
        return Err(Error::InvalidK1 { k1, min, max });
    }
    Ok((blocks, width))
}

/// Sparse Caratheodory set of an explicit weighted set.
pub fn sparse_caratheodory<T: Real>(
    input: &WeightedSet<T>,
    k1: usize,
    k2: usize,
) -> Result<SparseCaratheodorySet<T>> {
    sparse_caratheodory_source(input.points(), input.weights(), k1, k2)
}

/// Sparse Caratheodory set of any [`PointSource`] with weights summing to one.
pub fn sparse_caratheodory_source<T: Real, S: PointSource<T> + ?Sized>(
    source: &S,
    weights: &[T],
    k1: usize,
    k2: usize,
) -> Result<SparseCaratheodorySet<T>> {
    let n = source.len();
    let d = source.dim();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let (blocks, block_width) = check_sparse_params(n, d, k1, k2)?;

    let mut entries = Vec::new();
    let mut out_weights = Vec::new();
    for (b, range) in blocks.iter().enumerate() {
        let view = BlockView {
            source,
            range: range.clone(),
        };
        let set = fast_caratheodory_source(&view, weights, k1)?;
        entries.extend(set.indices.iter().map(|&index| SparseEntry { index, block: b }));
        out_weights.extend(set.weights);
    }
    Ok(SparseCaratheodorySet {
        entries,
        weights: out_weights,
        blocks,
        block_width,
        source_dim: d,
        source_size: n,
    })
}
