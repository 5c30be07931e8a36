//! Sparse strip transfer operator over the link-pattern basis.
//!
//! One row of the diagonal lattice is two interleaved sweeps of diamonds
//! plus one boundary triangle per side. The operator is compiled once into
//! per-tile gather tables over the reachable pattern basis, so applying it
//! is a chain of deterministic sparse passes (parallel over rows).

use super::local::{
    apply_blob_triangle, apply_diamond, apply_open_triangle, BoundaryOp, ClosureWeights,
    DiamondWeights, OpenBoundaryOp,
};
use super::TransferError;
use crate::loop_algebra::LinkPattern;
use crate::scalar::LoopScalar;
use rayon::prelude::*;
use std::collections::HashMap;

/// Boundary operator attached to one side of the strip.
#[derive(Clone, Debug)]
pub enum SideOp<T> {
    Blob(BoundaryOp<T>),
    Open(OpenBoundaryOp<T>),
}

/// Everything one row of the transfer matrix needs.
#[derive(Clone, Debug)]
pub struct RowParams<T> {
    pub diamond: DiamondWeights<T>,
    pub closures: ClosureWeights<T>,
    pub left: SideOp<T>,
    pub right: SideOp<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tile {
    /// Diamond on edges (i, i+1).
    Diamond(usize),
    LeftTriangle,
    RightTriangle,
}

/// Tiles of one row in application order: the sweep of even diamonds, then
/// the odd sweep, with each boundary triangle filling the sweep that
/// leaves its edge free.
pub fn row_tiles(width: usize) -> Vec<Tile> {
    let mut tiles = Vec::new();
    let mut i = 0;
    while i + 1 < width {
        tiles.push(Tile::Diamond(i));
        i += 2;
    }
    if width % 2 == 1 {
        tiles.push(Tile::RightTriangle);
    }
    tiles.push(Tile::LeftTriangle);
    let mut i = 1;
    while i + 1 < width {
        tiles.push(Tile::Diamond(i));
        i += 2;
    }
    if width % 2 == 0 {
        tiles.push(Tile::RightTriangle);
    }
    tiles
}

fn apply_tile<T: LoopScalar>(
    tile: Tile,
    p: &LinkPattern,
    params: &RowParams<T>,
    out: &mut Vec<(LinkPattern, T)>,
) {
    match tile {
        Tile::Diamond(i) => apply_diamond(p, i, &params.diamond, &params.closures, out),
        Tile::LeftTriangle => match &params.left {
            SideOp::Blob(op) => apply_blob_triangle(p, true, op, out),
            SideOp::Open(op) => apply_open_triangle(p, true, op, &params.closures, out),
        },
        Tile::RightTriangle => match &params.right {
            SideOp::Blob(op) => apply_blob_triangle(p, false, op, out),
            SideOp::Open(op) => apply_open_triangle(p, false, op, &params.closures, out),
        },
    }
}

struct Layer<T> {
    row_ptr: Vec<u32>,
    cols: Vec<u32>,
    wid: Vec<u16>,
    weights: Vec<T>,
}

impl<T: LoopScalar> Layer<T> {
    fn apply(&self, v: &[T], out: &mut [T]) {
        const CHUNK: usize = 2048;
        out.par_chunks_mut(CHUNK).enumerate().for_each(|(c, rows)| {
            let base = c * CHUNK;
            for (k, slot) in rows.iter_mut().enumerate() {
                let r = base + k;
                let mut acc = T::zero();
                for e in self.row_ptr[r] as usize..self.row_ptr[r + 1] as usize {
                    acc += self.weights[self.wid[e] as usize].clone()
                        * v[self.cols[e] as usize].clone();
                }
                *slot = acc;
            }
        });
    }
}

/// Compiled transfer operator for one sector.
pub struct TransferOperator<T> {
    width: usize,
    basis: Vec<u128>,
    index: HashMap<u128, u32>,
    layers: Vec<Layer<T>>,
}

impl<T: LoopScalar> TransferOperator<T> {
    /// Build by closing the seed states under all tile moves.
    pub fn build(
        width: usize,
        params: &RowParams<T>,
        seeds: &[LinkPattern],
    ) -> Result<Self, TransferError> {
        if width < 2 {
            return Err(TransferError::BadWidth(width));
        }
        let tiles = row_tiles(width);
        let mut ids: HashMap<u128, u32> = HashMap::new();
        let mut patterns: Vec<LinkPattern> = Vec::new();
        let mut queue: Vec<u32> = Vec::new();
        for s in seeds {
            debug_assert_eq!(s.len(), width);
            let code = s.encode();
            if !ids.contains_key(&code) {
                let id = patterns.len() as u32;
                ids.insert(code, id);
                patterns.push(s.clone());
                queue.push(id);
            }
        }
        // scatter triples per tile, in temporary ids
        let mut scatter: Vec<Vec<(u32, u32, u16)>> = vec![Vec::new(); tiles.len()];
        let mut tables: Vec<Vec<T>> = vec![Vec::new(); tiles.len()];
        let mut buf: Vec<(LinkPattern, T)> = Vec::new();
        let mut head = 0usize;
        while head < queue.len() {
            let from = queue[head];
            head += 1;
            let p = patterns[from as usize].clone();
            for (t, tile) in tiles.iter().enumerate() {
                buf.clear();
                apply_tile(*tile, &p, params, &mut buf);
                for (q, w) in buf.drain(..) {
                    let code = q.encode();
                    let to = *ids.entry(code).or_insert_with(|| {
                        let id = patterns.len() as u32;
                        patterns.push(q);
                        queue.push(id);
                        id
                    });
                    let wid = match tables[t].iter().position(|x| *x == w) {
                        Some(k) => k as u16,
                        None => {
                            tables[t].push(w);
                            (tables[t].len() - 1) as u16
                        }
                    };
                    scatter[t].push((from, to, wid));
                }
            }
        }
        // canonical order: ascending code
        let mut order: Vec<u32> = (0..patterns.len() as u32).collect();
        order.sort_by_key(|&i| patterns[i as usize].encode());
        let mut perm = vec![0u32; patterns.len()];
        for (newid, &old) in order.iter().enumerate() {
            perm[old as usize] = newid as u32;
        }
        let basis: Vec<u128> = order
            .iter()
            .map(|&i| patterns[i as usize].encode())
            .collect();
        let index: HashMap<u128, u32> = basis
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i as u32))
            .collect();
        let nstates = basis.len();
        let mut layers = Vec::with_capacity(tiles.len());
        for (t, mut triples) in scatter.into_iter().enumerate() {
            for e in triples.iter_mut() {
                e.0 = perm[e.0 as usize];
                e.1 = perm[e.1 as usize];
            }
            // gather form: sort by output state
            triples.sort_unstable_by_key(|e| (e.1, e.0, e.2));
            let mut row_ptr = vec![0u32; nstates + 1];
            for e in &triples {
                row_ptr[e.1 as usize + 1] += 1;
            }
            for r in 0..nstates {
                row_ptr[r + 1] += row_ptr[r];
            }
            let cols: Vec<u32> = triples.iter().map(|e| e.0).collect();
            let wid: Vec<u16> = triples.iter().map(|e| e.2).collect();
            layers.push(Layer {
                row_ptr,
                cols,
                wid,
                weights: tables[t].clone(),
            });
        }
        Ok(TransferOperator {
            width,
            basis,
            index,
            layers,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_codes(&self) -> &[u128] {
        &self.basis
    }

    pub fn pattern(&self, i: usize) -> LinkPattern {
        LinkPattern::decode(self.basis[i], self.width)
    }

    pub fn index_of(&self, p: &LinkPattern) -> Option<usize> {
        self.index.get(&p.encode()).map(|&i| i as usize)
    }

    /// One full row applied to a coefficient vector.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        debug_assert_eq!(v.len(), self.dim());
        let mut cur = v.to_vec();
        let mut next = vec![T::zero(); self.dim()];
        for layer in &self.layers {
            layer.apply(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        cur
    }

    /// Partition sum of the finite patch: `rows` rows applied to the
    /// all-empty state, projected back on the all-empty state.
    pub fn partition_bracket(&self, rows: usize) -> Result<T, TransferError> {
        let empty = LinkPattern::empty(self.width);
        let e = self
            .index_of(&empty)
            .ok_or(TransferError::MissingState("all-empty"))?;
        let mut v = vec![T::zero(); self.dim()];
        v[e] = T::one();
        for _ in 0..rows {
            v = self.apply(&v);
        }
        Ok(v[e].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loop_algebra::{enumerate_basis, BasisSpec, BoundaryMode, Site};

    fn iso_params(x: f64, n: f64, y2: f64) -> RowParams<f64> {
        RowParams {
            diamond: DiamondWeights::honeycomb(x),
            closures: ClosureWeights::bulk(n),
            left: SideOp::Blob(BoundaryOp::isotropic(y2)),
            right: SideOp::Blob(BoundaryOp::isotropic(y2)),
        }
    }

    #[test]
    fn row_tiles_cover_every_edge_once_per_sweep() {
        for width in 2..=9 {
            let tiles = row_tiles(width);
            let mut cover = vec![0usize; width];
            for t in tiles {
                match t {
                    Tile::Diamond(i) => {
                        cover[i] += 1;
                        cover[i + 1] += 1;
                    }
                    Tile::LeftTriangle => cover[0] += 1,
                    Tile::RightTriangle => cover[width - 1] += 1,
                }
            }
            assert!(cover.iter().all(|&c| c == 2), "width {width}: {cover:?}");
        }
    }

    #[test]
    fn isotropic_basis_is_motzkin() {
        // dilute no-string patterns without marks: Motzkin numbers
        let motzkin = [1usize, 1, 2, 4, 9, 21, 51, 127, 323];
        for width in 2..=8 {
            let params = iso_params(0.5, 1.3, 0.25);
            let seeds = vec![LinkPattern::empty(width)];
            let t = TransferOperator::<f64>::build(width, &params, &seeds).unwrap();
            assert_eq!(t.dim(), motzkin[width], "width {width}");
        }
    }

    #[test]
    fn string_count_is_conserved() {
        let params = iso_params(0.6, 1.0, 0.3);
        let seeds = enumerate_basis(
            5,
            &BasisSpec {
                strings: 1,
                mode: BoundaryMode::Blobless,
                dilute: true,
            },
        )
        .unwrap();
        let t = TransferOperator::<f64>::build(5, &params, &seeds).unwrap();
        for i in 0..t.dim() {
            let p = t.pattern(i);
            assert_eq!(
                (0..p.len()).filter(|&k| p.site(k) == Site::String).count(),
                1
            );
        }
    }
}
