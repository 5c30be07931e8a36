//! Local plaquette moves on link patterns.
//!
//! A diamond (square-lattice face rotated 45°) acts on two adjacent edges;
//! a boundary triangle acts on the outermost edge. Everything is generic
//! over the scalar so the same moves drive fast `f64` sweeps and exact
//! rational oracle sums.

use crate::loop_algebra::{LinkPattern, Mark, Site};
use crate::scalar::LoopScalar;

/// The six independent diamond weights (reflection-symmetric classes).
#[derive(Clone, Debug)]
pub struct DiamondWeights<T> {
    /// Empty face.
    pub empty: T,
    /// One line passing straight up on either edge.
    pub pass: T,
    /// Single cap (annihilation) or cup (creation) arc.
    pub end_arc: T,
    /// One line crossing between the two edge columns.
    pub cross: T,
    /// Two parallel lines passing up.
    pub double_pass: T,
    /// Cap and cup together (Temperley-Lieb generator move).
    pub annihilate_create: T,
}

impl<T: LoopScalar> DiamondWeights<T> {
    /// Honeycomb-limit weights: fugacity `x` per covered honeycomb edge.
    /// A straight pass covers one edge, every other occupied face covers
    /// two, and the cap+cup face is forbidden.
    pub fn honeycomb(x: T) -> Self {
        let x2 = x.clone() * x.clone();
        DiamondWeights {
            empty: T::one(),
            pass: x,
            end_arc: x2.clone(),
            cross: x2.clone(),
            double_pass: x2,
            annihilate_create: T::zero(),
        }
    }
}

/// Loop fugacities used when a component closes or terminates.
#[derive(Clone, Debug)]
pub struct ClosureWeights<T> {
    pub n: T,
    pub n1: T,
    pub n2: T,
    pub n12: T,
    /// Half-loop weights for open boundaries (left-left, right-right,
    /// left-right anchored paths).
    pub nu1: T,
    pub nu2: T,
    pub nu12: T,
}

impl<T: LoopScalar> ClosureWeights<T> {
    pub fn bulk(n: T) -> Self {
        ClosureWeights {
            n,
            n1: T::zero(),
            n2: T::zero(),
            n12: T::zero(),
            nu1: T::zero(),
            nu2: T::zero(),
            nu12: T::zero(),
        }
    }

    pub fn loop_weight(&self, lm: Mark, rm: Mark) -> T {
        debug_assert!(lm != Mark::Unblob && rm != Mark::Unblob, "loop closed on a projector");
        match (lm == Mark::Blob, rm == Mark::Blob) {
            (false, false) => self.n.clone(),
            (true, false) => self.n1.clone(),
            (false, true) => self.n2.clone(),
            (true, true) => self.n12.clone(),
        }
    }
}

/// Boundary triangle for blob-type boundaries.
///
/// Acting on the outermost occupied edge the triangle multiplies by
/// `bounce_plain + bounce_blob * (blob projector)`; on an empty edge by
/// `empty`.
#[derive(Clone, Debug)]
pub struct BoundaryOp<T> {
    pub empty: T,
    pub bounce_plain: T,
    pub bounce_blob: T,
}

impl<T: LoopScalar> BoundaryOp<T> {
    /// Isotropic boundary: every touch weighs `bounce` with no marking.
    pub fn isotropic(bounce: T) -> Self {
        BoundaryOp {
            empty: T::one(),
            bounce_plain: bounce,
            bounce_blob: T::zero(),
        }
    }

    /// Anisotropic boundary in the projector basis: blobbed touches weigh
    /// `w_blob_eff`, unblobbed ones `w_unblob_eff`.
    pub fn anisotropic(w_blob_eff: T, w_unblob_eff: T) -> Self {
        BoundaryOp {
            empty: T::one(),
            bounce_plain: w_unblob_eff.clone(),
            bounce_blob: w_blob_eff - w_unblob_eff,
        }
    }
}

/// Open-boundary triangle: lines may bounce past the boundary site or
/// terminate on it.
#[derive(Clone, Debug)]
pub struct OpenBoundaryOp<T> {
    pub empty: T,
    pub bounce: T,
    /// Weight of one terminating (or emitted) end.
    pub end: T,
}

fn push<T: LoopScalar>(out: &mut Vec<(LinkPattern, T)>, p: LinkPattern, w: T) {
    if !w.is_zero() {
        debug_assert!(p.validate().is_ok(), "invalid pattern {p}");
        out.push((p, w));
    }
}

/// Move a component end from `from` to the empty slot `to`.
fn relocate_end(p: &LinkPattern, from: usize, to: usize) -> LinkPattern {
    let mut q = p.clone();
    debug_assert_eq!(q.site(to), Site::Empty);
    match q.site(from) {
        Site::Arc => {
            let j = q.partner(from).unwrap();
            let old_key = from.min(j);
            let (lm, rm) = q.marks(from);
            q.clear_marks(old_key);
            q.set_site(from, Site::Empty);
            q.set_arc(to, j);
            q.set_marks(to.min(j), lm, rm);
        }
        Site::String | Site::AnchorLeft | Site::AnchorRight => {
            let kind = q.site(from);
            let (lm, rm) = q.marks(from);
            q.clear_marks(from);
            q.set_site(from, Site::Empty);
            q.set_site(to, kind);
            q.set_marks(to, lm, rm);
        }
        Site::Empty => unreachable!(),
    }
    q
}

/// Join the components at adjacent occupied edges `i`, `j`, emptying both
/// slots. Returns the new pattern and the accumulated scalar factor, or
/// `None` when the result vanishes (string-string contraction, projector
/// kill).
fn cap_join<T: LoopScalar>(
    p: &LinkPattern,
    i: usize,
    j: usize,
    closures: &ClosureWeights<T>,
) -> Option<(LinkPattern, T)> {
    let mut q = p.clone();
    let (si, sj) = (q.site(i), q.site(j));
    debug_assert!(si != Site::Empty && sj != Site::Empty);

    // same arc: a closed loop
    if si == Site::Arc && q.partner(i) == Some(j) {
        let (lm, rm) = q.marks(i);
        q.clear_marks(i.min(j));
        q.set_site(i, Site::Empty);
        q.set_site(j, Site::Empty);
        return Some((q, closures.loop_weight(lm, rm)));
    }

    let (lmi, rmi) = q.marks(i);
    let (lmj, rmj) = q.marks(j);
    let lm = lmi.merge(lmj)?;
    let rm = rmi.merge(rmj)?;

    match (si, sj) {
        (Site::Arc, Site::Arc) => {
            let pi = q.partner(i).unwrap();
            let pj = q.partner(j).unwrap();
            q.clear_marks(i.min(pi));
            q.clear_marks(j.min(pj));
            q.set_site(i, Site::Empty);
            q.set_site(j, Site::Empty);
            q.set_arc(pi, pj);
            q.set_marks(pi.min(pj), lm, rm);
            Some((q, T::one()))
        }
        (Site::Arc, _) => {
            // the defect at j walks through the arc to the far end
            let pi = q.partner(i).unwrap();
            let kind = sj;
            q.clear_marks(i.min(pi));
            q.clear_marks(j);
            q.set_site(i, Site::Empty);
            q.set_site(j, Site::Empty);
            q.set_site(pi, kind);
            q.set_marks(pi, lm, rm);
            Some((q, T::one()))
        }
        (_, Site::Arc) => {
            let pj = q.partner(j).unwrap();
            let kind = si;
            q.clear_marks(j.min(pj));
            q.clear_marks(i);
            q.set_site(i, Site::Empty);
            q.set_site(j, Site::Empty);
            q.set_site(pj, kind);
            q.set_marks(pj, lm, rm);
            Some((q, T::one()))
        }
        (Site::String, Site::String) => None,
        (Site::AnchorLeft, Site::AnchorLeft) => {
            q.set_site(i, Site::Empty);
            q.set_site(j, Site::Empty);
            Some((q, closures.nu1.clone()))
        }
        (Site::AnchorRight, Site::AnchorRight) => {
            q.set_site(i, Site::Empty);
            q.set_site(j, Site::Empty);
            Some((q, closures.nu2.clone()))
        }
        (Site::AnchorLeft, Site::AnchorRight) => {
            q.set_site(i, Site::Empty);
            q.set_site(j, Site::Empty);
            Some((q, closures.nu12.clone()))
        }
        // a string meeting an anchored end (or anchors out of order)
        _ => None,
    }
}

/// All transitions of the diamond acting on edges `(i, i+1)`.
pub fn apply_diamond<T: LoopScalar>(
    p: &LinkPattern,
    i: usize,
    w: &DiamondWeights<T>,
    closures: &ClosureWeights<T>,
    out: &mut Vec<(LinkPattern, T)>,
) {
    let j = i + 1;
    match (p.site(i) == Site::Empty, p.site(j) == Site::Empty) {
        (true, true) => {
            push(out, p.clone(), w.empty.clone());
            if !w.end_arc.is_zero() {
                let mut q = p.clone();
                q.set_arc(i, j);
                push(out, q, w.end_arc.clone());
            }
        }
        (false, true) => {
            push(out, p.clone(), w.pass.clone());
            if !w.cross.is_zero() {
                push(out, relocate_end(p, i, j), w.cross.clone());
            }
        }
        (true, false) => {
            push(out, p.clone(), w.pass.clone());
            if !w.cross.is_zero() {
                push(out, relocate_end(p, j, i), w.cross.clone());
            }
        }
        (false, false) => {
            push(out, p.clone(), w.double_pass.clone());
            if !w.end_arc.is_zero() {
                if let Some((q, f)) = cap_join(p, i, j, closures) {
                    push(out, q, w.end_arc.clone() * f);
                }
            }
            if !w.annihilate_create.is_zero() {
                if let Some((mut q, f)) = cap_join(p, i, j, closures) {
                    q.set_arc(i, j);
                    push(out, q, w.annihilate_create.clone() * f);
                }
            }
        }
    }
}

/// Blob-boundary triangle on the outermost edge (`left = true` for edge 0,
/// otherwise edge `n-1`).
pub fn apply_blob_triangle<T: LoopScalar>(
    p: &LinkPattern,
    left: bool,
    op: &BoundaryOp<T>,
    out: &mut Vec<(LinkPattern, T)>,
) {
    let e = if left { 0 } else { p.len() - 1 };
    if p.site(e) == Site::Empty {
        push(out, p.clone(), op.empty.clone());
        return;
    }
    let key = p.key_site(e);
    let (lm, rm) = p.marks(e);
    let mark = if left { lm } else { rm };
    match mark {
        Mark::Blob => {
            push(
                out,
                p.clone(),
                op.bounce_plain.clone() + op.bounce_blob.clone(),
            );
        }
        Mark::Unblob => {
            // b annihilates the unblob projector: only the plain part acts
            push(out, p.clone(), op.bounce_plain.clone());
        }
        Mark::None => {
            push(out, p.clone(), op.bounce_plain.clone());
            if !op.bounce_blob.is_zero() {
                let mut q = p.clone();
                if left {
                    q.set_marks(key, Mark::Blob, rm);
                } else {
                    q.set_marks(key, lm, Mark::Blob);
                }
                push(out, q, op.bounce_blob.clone());
            }
        }
    }
}

/// Open-boundary triangle: bounce, terminate an incoming end, or emit a
/// new anchored end.
pub fn apply_open_triangle<T: LoopScalar>(
    p: &LinkPattern,
    left: bool,
    op: &OpenBoundaryOp<T>,
    closures: &ClosureWeights<T>,
    out: &mut Vec<(LinkPattern, T)>,
) {
    let e = if left { 0 } else { p.len() - 1 };
    let anchor = if left {
        Site::AnchorLeft
    } else {
        Site::AnchorRight
    };
    if p.site(e) == Site::Empty {
        push(out, p.clone(), op.empty.clone());
        if !op.end.is_zero() {
            let mut q = p.clone();
            q.set_site(e, anchor);
            push(out, q, op.end.clone());
        }
        return;
    }
    push(out, p.clone(), op.bounce.clone());
    if op.end.is_zero() {
        return;
    }
    // terminate the incoming end on the boundary site
    match p.site(e) {
        Site::Arc => {
            let far = p.partner(e).unwrap();
            let mut q = p.clone();
            let (lm, rm) = q.marks(e);
            if lm != Mark::None || rm != Mark::None {
                return; // blobbed components cannot terminate here
            }
            q.clear_marks(e.min(far));
            q.set_site(e, Site::Empty);
            q.set_site(far, anchor);
            push(out, q, op.end.clone());
        }
        Site::AnchorLeft | Site::AnchorRight => {
            let mut q = p.clone();
            let w = match (q.site(e), left) {
                (Site::AnchorLeft, true) => closures.nu1.clone(),
                (Site::AnchorRight, false) => closures.nu2.clone(),
                _ => closures.nu12.clone(),
            };
            q.set_site(e, Site::Empty);
            push(out, q, op.end.clone() * w);
        }
        Site::String => {} // strings cannot stop at a boundary point
        Site::Empty => unreachable!(),
    }
}
