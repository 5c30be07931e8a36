//! Integrable weights of the dilute loop model and their equation-level
//! verification: bulk R-matrix, boundary K-matrices, Yang-Baxter /
//! reflection / boundary-crossing residuals by exhaustive contraction on
//! small connectivity spaces, and the honeycomb specializations.

use crate::loop_algebra::{enumerate_basis, BasisSpec, BoundaryMode, LinkPattern, Mark};
use crate::transfer::local::{
    apply_blob_triangle, apply_diamond, BoundaryOp, ClosureWeights, DiamondWeights,
};
use nalgebra::DMatrix;
use std::collections::HashMap;

#[derive(thiserror::Error, Debug)]
pub enum IntegrableError {
    #[error("loop weight n = {0} outside (-2, 2]")]
    BadLoopWeight(f64),
    #[error("boundary weight n1 = {0} outside the admissible range")]
    BadBoundaryWeight(f64),
    #[error("singular parameter: {0}")]
    Singular(&'static str),
    #[error("parameterization mismatch: {0}")]
    Inconsistent(String),
}

/// Spectral data of the integrable dilute model.
///
/// `phi` is the crossing parameter on the dilute branch `n = -2 cos 4Φ`,
/// `Φ ∈ (0, π/4]`; `kappa` enters the blob K-matrices.
#[derive(Clone, Copy, Debug)]
pub struct SpectralParams {
    pub phi: f64,
    pub kappa: f64,
}

impl SpectralParams {
    pub fn from_n(n: f64, kappa: f64) -> Result<Self, IntegrableError> {
        Ok(SpectralParams {
            phi: phi_dilute(n)?,
            kappa,
        })
    }

    pub fn n(&self) -> f64 {
        -2.0 * (4.0 * self.phi).cos()
    }

    /// Fugacity of blobbed loops for the blob K-matrices.
    pub fn n1(&self) -> f64 {
        -(4.0 * (self.kappa - 1.0) * self.phi).sin() / (4.0 * self.kappa * self.phi).sin()
    }
}

/// Dilute-branch crossing parameter: `4Φ = arccos(-n/2)`.
pub fn phi_dilute(n: f64) -> Result<f64, IntegrableError> {
    if !(-2.0 < n && n <= 2.0) {
        return Err(IntegrableError::BadLoopWeight(n));
    }
    Ok((-n / 2.0).acos() / 4.0)
}

/// The six bulk vertex weights at spectral parameter `u`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaquetteWeights {
    pub omega: [f64; 6],
}

pub fn bulk_weights(phi: f64, u: f64) -> PlaquetteWeights {
    let s = f64::sin;
    PlaquetteWeights {
        omega: [
            s(2.0 * phi) * s(3.0 * phi) + s(u) * s(3.0 * phi - u),
            s(2.0 * phi) * s(3.0 * phi - u),
            s(2.0 * phi) * s(u),
            s(u) * s(3.0 * phi - u),
            s(2.0 * phi - u) * s(3.0 * phi - u),
            -s(u) * s(phi - u),
        ],
    }
}

impl PlaquetteWeights {
    /// Diamond move table: ω1 empty, ω2 single pass, ω3 cap/cup,
    /// ω4 crossing line, ω5 double pass, ω6 cap+cup.
    pub fn diamond(&self) -> DiamondWeights<f64> {
        DiamondWeights {
            empty: self.omega[0],
            pass: self.omega[1],
            end_arc: self.omega[2],
            cross: self.omega[3],
            double_pass: self.omega[4],
            annihilate_create: self.omega[5],
        }
    }
}

/// Boundary K-matrix variants.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KVariant {
    /// Batchelor-Yung ordinary-point solution (β3 = 0).
    BY1,
    /// Batchelor-Yung special-point solution (β3 = 0).
    BY2,
    /// Blob solution with β3 = sin 2u sin 4κΦ.
    Blob1,
    /// Blob solution with β3 = -sin 2u sin 4κΦ.
    Blob2,
}

impl KVariant {
    pub fn has_blob(self) -> bool {
        matches!(self, KVariant::Blob1 | KVariant::Blob2)
    }
}

impl std::str::FromStr for KVariant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "BY1" => Ok(KVariant::BY1),
            "BY2" => Ok(KVariant::BY2),
            "BLOB1" => Ok(KVariant::Blob1),
            "BLOB2" => Ok(KVariant::Blob2),
            _ => Err(format!("unknown K-matrix variant {s:?}")),
        }
    }
}

/// Boundary triple (β1, β2, β3) for the requested variant.
#[derive(Clone, Copy, Debug)]
pub struct KMatrixWeights {
    pub beta: [f64; 3],
    pub variant: KVariant,
}

pub fn k_weights(variant: KVariant, p: &SpectralParams, u: f64) -> KMatrixWeights {
    let phi = p.phi;
    let kappa = p.kappa;
    let s = f64::sin;
    let c = f64::cos;
    let beta = match variant {
        KVariant::BY1 => [s(1.5 * phi + u), s(1.5 * phi - u), 0.0],
        KVariant::BY2 => [c(1.5 * phi + u), c(1.5 * phi - u), 0.0],
        KVariant::Blob1 => [
            s((2.0 * kappa + 0.5) * phi - u) * s((2.0 * kappa - 0.5) * phi + u),
            s((2.0 * kappa + 0.5) * phi - u) * s((2.0 * kappa - 0.5) * phi - u),
            s(2.0 * u) * s(4.0 * kappa * phi),
        ],
        KVariant::Blob2 => [
            c((2.0 * kappa + 0.5) * phi - u) * c((2.0 * kappa - 0.5) * phi + u),
            c((2.0 * kappa + 0.5) * phi - u) * c((2.0 * kappa - 0.5) * phi - u),
            -s(2.0 * u) * s(4.0 * kappa * phi),
        ],
    };
    KMatrixWeights { beta, variant }
}

impl KMatrixWeights {
    fn boundary_op(&self) -> BoundaryOp<f64> {
        BoundaryOp {
            empty: self.beta[0],
            bounce_plain: self.beta[1],
            bounce_blob: self.beta[2],
        }
    }
}

/// All dilute connectivity states on `k` edges (any number of strings),
/// with blob marks when `marked`.
fn contraction_basis(k: usize, marked: bool) -> Vec<LinkPattern> {
    let mode = if marked {
        BoundaryMode::OneBoundary
    } else {
        BoundaryMode::Blobless
    };
    let mut out = Vec::new();
    for l in 0..=k {
        out.extend(
            enumerate_basis(
                k,
                &BasisSpec {
                    strings: l,
                    mode,
                    dilute: true,
                },
            )
            .expect("basis"),
        );
    }
    // the reflection equation must also hold on blob-marked string states
    if marked {
        let extra: Vec<LinkPattern> = out
            .iter()
            .filter_map(|p| {
                p.leftmost_string().map(|s| {
                    let mut q = p.clone();
                    q.set_marks(s, Mark::Blob, Mark::None);
                    q
                })
            })
            .collect();
        out.extend(extra);
    }
    out.sort_by_key(|p| p.encode());
    out.dedup();
    out
}

struct OpSpace {
    basis: Vec<LinkPattern>,
    index: HashMap<u128, usize>,
}

impl OpSpace {
    fn new(k: usize, marked: bool) -> Self {
        let basis = contraction_basis(k, marked);
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, p)| (p.encode(), i))
            .collect();
        OpSpace { basis, index }
    }

    fn matrix_of(
        &self,
        apply: impl Fn(&LinkPattern, &mut Vec<(LinkPattern, f64)>),
    ) -> DMatrix<f64> {
        let d = self.basis.len();
        let mut m = DMatrix::zeros(d, d);
        let mut buf = Vec::new();
        for (col, p) in self.basis.iter().enumerate() {
            buf.clear();
            apply(p, &mut buf);
            for (q, w) in buf.drain(..) {
                let row = self.index[&q.encode()];
                m[(row, col)] += w;
            }
        }
        m
    }
}

fn r_gate<'a>(
    phi: f64,
    u: f64,
    at: usize,
    closures: &'a ClosureWeights<f64>,
) -> impl Fn(&LinkPattern, &mut Vec<(LinkPattern, f64)>) + 'a {
    let w = bulk_weights(phi, u).diamond();
    move |p, out| apply_diamond(p, at, &w, closures, out)
}

/// `R(u)` as an explicit matrix on the two-edge dilute connectivity space.
pub fn r_operator(phi: f64, u: f64) -> (Vec<LinkPattern>, DMatrix<f64>) {
    let n = -2.0 * (4.0 * phi).cos();
    let closures = ClosureWeights::bulk(n);
    let space = OpSpace::new(2, false);
    let m = space.matrix_of(r_gate(phi, u, 0, &closures));
    (space.basis, m)
}

/// Max-abs residual of the Yang-Baxter equation
/// `R_1(u) R_2(u+v) R_1(v) = R_2(v) R_1(u+v) R_2(u)`
/// contracted exhaustively on three dilute strands.
pub fn ybe_residual(phi: f64, u: f64, v: f64) -> f64 {
    let n = -2.0 * (4.0 * phi).cos();
    let closures = ClosureWeights::bulk(n);
    let space = OpSpace::new(3, false);
    let r1 = |x: f64| space.matrix_of(r_gate(phi, x, 0, &closures));
    let r2 = |x: f64| space.matrix_of(r_gate(phi, x, 1, &closures));
    let lhs = r1(u) * r2(u + v) * r1(v);
    let rhs = r2(v) * r1(u + v) * r2(u);
    (lhs - rhs).abs().max()
}

fn k_gate<'a>(k: &KMatrixWeights) -> impl Fn(&LinkPattern, &mut Vec<(LinkPattern, f64)>) + 'a {
    let op = k.boundary_op();
    move |p, out| apply_blob_triangle(p, true, &op, out)
}

/// Max-abs residual of Sklyanin's reflection equation
/// `R(u-v) K(u) R(u+v) K(v) = K(v) R(u+v) K(u) R(u-v)`
/// on two strands with the boundary on the left.
pub fn reflection_residual(
    variant: KVariant,
    p: &SpectralParams,
    u: f64,
    v: f64,
) -> Result<f64, IntegrableError> {
    let n = p.n();
    let mut closures = ClosureWeights::bulk(n);
    if variant.has_blob() {
        if (4.0 * p.kappa * p.phi).sin().abs() < 1e-12 {
            return Err(IntegrableError::Singular("sin 4κΦ"));
        }
        closures.n1 = p.n1();
    }
    let space = OpSpace::new(2, variant.has_blob());
    let r = |x: f64| space.matrix_of(r_gate(p.phi, x, 0, &closures));
    let k = |x: f64| {
        let kw = k_weights(variant, p, x);
        space.matrix_of(k_gate(&kw))
    };
    let lhs = r(u - v) * k(u) * r(u + v) * k(v);
    let rhs = k(v) * r(u + v) * k(u) * r(u - v);
    Ok((lhs - rhs).abs().max())
}

/// Residual of the boundary crossing relation: the contraction of
/// `R(2u)` with `K(3Φ-u)` must be proportional to `K(u)`.
///
/// Only proportionality is checked (the overall scalar is not printed in
/// closed form); the degenerate direction `K(u) = 0` is reported.
pub fn boundary_crossing_residual(
    variant: KVariant,
    p: &SpectralParams,
    u: f64,
) -> Result<f64, IntegrableError> {
    let n = p.n();
    let n1 = if variant.has_blob() { p.n1() } else { 0.0 };
    let w = bulk_weights(p.phi, 2.0 * u).omega;
    let kc = k_weights(variant, p, 3.0 * p.phi - u).beta;
    // fold the two left edges of R(2u) into the K(3Φ-u) triangle; the
    // surviving one-edge operator has an empty amplitude, a plain bounce
    // and a blob bounce
    let a_empty = w[0] * kc[0] + w[1] * (kc[1] * n + kc[2] * n1);
    let a_plain = w[1] * kc[0] + w[4] * (kc[1] * n + kc[2] * n1) + w[5] * kc[1];
    let a_blob = w[5] * kc[2];
    let target = k_weights(variant, p, u).beta;
    let na = (a_empty * a_empty + a_plain * a_plain + a_blob * a_blob).sqrt();
    let nb = (target[0] * target[0] + target[1] * target[1] + target[2] * target[2]).sqrt();
    if nb < 1e-14 {
        return Err(IntegrableError::Singular("K(u) = 0"));
    }
    let a = [a_empty, a_plain, a_blob];
    let mut res: f64 = 0.0;
    for i in 0..3 {
        for j in i + 1..3 {
            res = res.max((a[i] * target[j] - a[j] * target[i]).abs());
        }
    }
    Ok(res / (na * nb).max(1e-300))
}

/// Nienhuis points and the special point of the honeycomb model.
#[derive(Clone, Copy, Debug)]
pub struct HoneycombPoints {
    pub x_c: f64,
    pub x_0: f64,
    /// Special-point surface fugacity; infinite at n = 2.
    pub y_s: f64,
}

pub fn honeycomb_points(n: f64) -> Result<HoneycombPoints, IntegrableError> {
    if !(-2.0 < n && n <= 2.0) {
        return Err(IntegrableError::BadLoopWeight(n));
    }
    let s = (2.0 - n).sqrt();
    Ok(HoneycombPoints {
        x_c: 1.0 / (2.0 + s).sqrt(),
        x_0: 1.0 / (2.0 - s).sqrt(),
        y_s: if n == 2.0 {
            f64::INFINITY
        } else {
            (2.0 - n).powf(-0.25)
        },
    })
}

/// Which anisotropic special branch.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AsBranch {
    Blob,
    Unblob,
}

/// Boundary-monomer fugacities at the anisotropic special point.
#[derive(Clone, Copy, Debug)]
pub struct AsPointWeights {
    pub w_blob: f64,
    pub w_unblob: f64,
}

/// Closed algebraic form of the AS-point fugacities.
pub fn as_point_weights_algebraic(
    n: f64,
    n1: f64,
    branch: AsBranch,
) -> Result<AsPointWeights, IntegrableError> {
    if n >= 2.0 {
        return Err(IntegrableError::BadLoopWeight(n));
    }
    let s = (2.0 - n).sqrt();
    let root = (n1 * (n1 - n) + 1.0).sqrt();
    let sign = match branch {
        AsBranch::Blob => 1.0,
        AsBranch::Unblob => -1.0,
    };
    let shift = (n1 - 0.5 * n + sign * root) / s;
    Ok(AsPointWeights {
        w_blob: 1.0 + 0.5 * s + shift,
        w_unblob: 1.0 + 0.5 * s - shift,
    })
}

/// Solve `n1 = sin (r1+1)γ / sin r1 γ` for `r1` on the branch
/// `r1 ∈ (0, π/γ - 1]`, where the map is monotone decreasing and reaches
/// the isotropic limit `n1 = n` at `r1 = 1`.
pub fn r1_from_n1(n: f64, n1: f64) -> Result<f64, IntegrableError> {
    let gamma = (n / 2.0).acos();
    if gamma <= 0.0 {
        return Err(IntegrableError::Singular("γ = 0"));
    }
    if n1 <= 0.0 {
        return Err(IntegrableError::BadBoundaryWeight(n1));
    }
    let f = |r1: f64| ((r1 + 1.0) * gamma).sin() / (r1 * gamma).sin();
    let (mut lo, mut hi) = (1e-12, std::f64::consts::PI / gamma - 1.0);
    if n1 > f(lo) {
        return Err(IntegrableError::BadBoundaryWeight(n1));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > n1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Both printed parameterizations of the AS-point fugacities, checked
/// against each other: the algebraic form in `(n, n1)` and the
/// trigonometric form in `(Φ, κ)` with `κ` recovered by root finding.
pub fn as_point_weights(
    n: f64,
    n1: f64,
    branch: AsBranch,
) -> Result<AsPointWeights, IntegrableError> {
    let alg = as_point_weights_algebraic(n, n1, branch)?;
    let phi = phi_dilute(n)?;
    let gamma = (n / 2.0).acos();
    let r1 = r1_from_n1(n, n1)?;
    let kappa = r1 * gamma / (4.0 * phi);
    // the root must satisfy the stated transcendental relation
    let n1_back = -(4.0 * (kappa - 1.0) * phi).sin() / (4.0 * kappa * phi).sin();
    if (n1_back - n1).abs() > 1e-9 {
        return Err(IntegrableError::Inconsistent(format!(
            "κ root does not reproduce n1: {n1_back} vs {n1}"
        )));
    }
    let c = 2.0 * phi.cos();
    let sin_form = AsPointWeights {
        w_blob: c * ((2.0 * kappa + 1.0) * phi).sin() / (2.0 * kappa * phi).sin(),
        w_unblob: c * ((2.0 * kappa - 1.0) * phi).sin() / (2.0 * kappa * phi).sin(),
    };
    let cos_form = AsPointWeights {
        w_blob: c * ((2.0 * kappa + 1.0) * phi).cos() / (2.0 * kappa * phi).cos(),
        w_unblob: c * ((2.0 * kappa - 1.0) * phi).cos() / (2.0 * kappa * phi).cos(),
    };
    let dist = |a: &AsPointWeights, b: &AsPointWeights| {
        (a.w_blob - b.w_blob)
            .abs()
            .max((a.w_unblob - b.w_unblob).abs())
    };
    let trig = if dist(&sin_form, &alg) <= dist(&cos_form, &alg) {
        sin_form
    } else {
        cos_form
    };
    if dist(&trig, &alg) > 1e-9 {
        return Err(IntegrableError::Inconsistent(format!(
            "trigonometric ({}, {}) vs algebraic ({}, {}) at n={n}, n1={n1}",
            trig.w_blob, trig.w_unblob, alg.w_blob, alg.w_unblob
        )));
    }
    Ok(alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn weights_at_u0_are_identity_proportional() {
        let phi = 0.4;
        let w = bulk_weights(phi, 0.0).omega;
        let f = (2.0 * phi).sin() * (3.0 * phi).sin();
        assert!((w[0] - f).abs() < 1e-15);
        assert!((w[1] - f).abs() < 1e-15);
        assert!((w[4] - f).abs() < 1e-15);
        assert!(w[2].abs() < 1e-15 && w[3].abs() < 1e-15 && w[5].abs() < 1e-15);
    }

    #[test]
    fn honeycomb_reducibility_at_u_phi() {
        let w = bulk_weights(0.37, 0.37).omega;
        assert!(w[5].abs() < 1e-15);
    }

    #[test]
    fn rotation_identities() {
        // u -> 3Φ - u exchanges ω2/ω3 and ω5/ω6, fixes ω1/ω4
        let phi = 0.29;
        let u = 0.41;
        let a = bulk_weights(phi, u).omega;
        let b = bulk_weights(phi, 3.0 * phi - u).omega;
        assert!((a[0] - b[0]).abs() < 1e-14);
        assert!((a[3] - b[3]).abs() < 1e-14);
        assert!((a[1] - b[2]).abs() < 1e-14);
        assert!((a[2] - b[1]).abs() < 1e-14);
        assert!((a[4] - b[5]).abs() < 1e-14);
        assert!((a[5] - b[4]).abs() < 1e-14);
    }

    #[test]
    fn r_of_zero_is_identity() {
        let phi = phi_dilute(1.0).unwrap();
        assert!((phi - std::f64::consts::PI / 6.0).abs() < 1e-14);
        let (basis, m) = r_operator(phi, 0.0);
        let f = (2.0 * phi).sin() * (3.0 * phi).sin();
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                let expect = if i == j { f } else { 0.0 };
                assert!((m[(i, j)] - expect).abs() < 1e-13, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn empty_amplitude_is_omega1() {
        let phi = 0.33;
        let u = 0.21;
        let (basis, m) = r_operator(phi, u);
        let empty = basis.iter().position(|p| p.is_empty()).unwrap();
        assert!((m[(empty, empty)] - bulk_weights(phi, u).omega[0]).abs() < 1e-14);
    }

    #[test]
    fn ybe_holds_and_detector_works() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let phi: f64 = rng.gen_range(0.05..0.75);
            let u: f64 = rng.gen_range(-1.0..1.0);
            let v: f64 = rng.gen_range(-1.0..1.0);
            let r = ybe_residual(phi, u, v);
            assert!(r < 1e-12, "phi={phi} u={u} v={v}: residual {r}");
        }
        // equal arguments are trivially symmetric
        assert!(ybe_residual(0.3, 0.4, 0.4) < 1e-13);
        // deliberate fault: perturbing ω6 must be detected
        let phi = 0.3;
        let (u, v) = (0.35, 0.15);
        let n = -2.0 * (4.0f64 * phi).cos();
        let closures = ClosureWeights::bulk(n);
        let space = OpSpace::new(3, false);
        let gate = |x: f64, at: usize| {
            let mut w = bulk_weights(phi, x).diamond();
            w.annihilate_create += 1e-3;
            space.matrix_of(|p, out| apply_diamond(p, at, &w, &closures, out))
        };
        let lhs = gate(u, 0) * gate(u + v, 1) * gate(v, 0);
        let rhs = gate(v, 1) * gate(u + v, 0) * gate(u, 1);
        assert!((lhs - rhs).abs().max() > 1e-6);
    }

    #[test]
    fn reflection_equation_all_variants() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for variant in [KVariant::BY1, KVariant::BY2, KVariant::Blob1, KVariant::Blob2] {
            let mut done = 0;
            while done < 25 {
                let phi: f64 = rng.gen_range(0.05..0.75);
                let kappa: f64 = rng.gen_range(0.2..1.8);
                let p = SpectralParams { phi, kappa };
                if variant.has_blob() && (4.0 * kappa * phi).sin().abs() < 1e-2 {
                    continue;
                }
                let u: f64 = rng.gen_range(-0.8..0.8);
                let v: f64 = rng.gen_range(-0.8..0.8);
                let r = reflection_residual(variant, &p, u, v).unwrap();
                assert!(
                    r < 1e-12,
                    "{variant:?} phi={phi} kappa={kappa} u={u} v={v}: {r}"
                );
                done += 1;
            }
        }
    }

    #[test]
    fn reflection_detector() {
        // a wrong K-matrix must produce a visible residual
        let p = SpectralParams { phi: 0.3, kappa: 0.9 };
        let space = OpSpace::new(2, true);
        let closures = {
            let mut c = ClosureWeights::bulk(p.n());
            c.n1 = p.n1();
            c
        };
        let r = |x: f64| space.matrix_of(r_gate(p.phi, x, 0, &closures));
        let k = |x: f64| {
            let mut kw = k_weights(KVariant::Blob1, &p, x);
            kw.beta[2] *= 1.001;
            space.matrix_of(k_gate(&kw))
        };
        let (u, v) = (0.4, 0.13);
        let lhs = r(u - v) * k(u) * r(u + v) * k(v);
        let rhs = k(v) * r(u + v) * k(u) * r(u - v);
        assert!((lhs - rhs).abs().max() > 1e-7);
    }

    #[test]
    fn boundary_crossing_all_variants() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for variant in [KVariant::BY1, KVariant::BY2, KVariant::Blob1, KVariant::Blob2] {
            for _ in 0..25 {
                let phi: f64 = rng.gen_range(0.05..0.75);
                let kappa: f64 = rng.gen_range(0.2..1.8);
                let p = SpectralParams { phi, kappa };
                let u: f64 = rng.gen_range(-0.8..0.8);
                match boundary_crossing_residual(variant, &p, u) {
                    Ok(r) => assert!(r < 1e-12, "{variant:?} phi={phi} κ={kappa} u={u}: {r}"),
                    Err(IntegrableError::Singular(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn nienhuis_points() {
        let h = honeycomb_points(1.0).unwrap();
        assert!((h.x_c - 1.0 / 3.0f64.sqrt()).abs() < 1e-14);
        let h2 = honeycomb_points(2.0f64.sqrt()).unwrap();
        assert!((h2.x_c - 0.60).abs() < 5e-3);
        assert!((h2.x_0 - 0.90).abs() < 5e-3);
        assert!(honeycomb_points(2.0).unwrap().y_s.is_infinite());
        assert!(honeycomb_points(2.5).is_err());
    }

    #[test]
    fn by_boundary_fugacities() {
        // y²/x_c = β2(Φ/2)/β1(Φ/2): y = x_c for BY1, y = y_S for BY2
        for n in [0.5f64, 1.0, 1.3, 2.0f64.sqrt()] {
            let p = SpectralParams::from_n(n, 1.0).unwrap();
            let h = honeycomb_points(n).unwrap();
            let by1 = k_weights(KVariant::BY1, &p, p.phi / 2.0).beta;
            let by2 = k_weights(KVariant::BY2, &p, p.phi / 2.0).beta;
            let y1 = (h.x_c * by1[1] / by1[0]).sqrt();
            let y2 = (h.x_c * by2[1] / by2[0]).sqrt();
            assert!((y1 - h.x_c).abs() < 1e-12, "n={n}");
            assert!((y2 - h.y_s).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn as_point_values() {
        // n1 = 1: w_blob = 1/x_c², w_unblob = 0
        for n in [0.6f64, 1.0, 2.0f64.sqrt(), 1.7] {
            let w = as_point_weights(n, 1.0, AsBranch::Blob).unwrap();
            let h = honeycomb_points(n).unwrap();
            assert!((w.w_blob - 1.0 / (h.x_c * h.x_c)).abs() < 1e-10, "n={n}");
            assert!(w.w_unblob.abs() < 1e-10, "n={n}");
        }
        // isotropic limit n1 -> n: w_blob -> y_S²/x_c²
        let n = 2.0f64.sqrt();
        let h = honeycomb_points(n).unwrap();
        let w = as_point_weights(n, n - 1e-9, AsBranch::Blob).unwrap();
        assert!((w.w_blob - h.y_s * h.y_s / (h.x_c * h.x_c)).abs() < 1e-6);
        // branches swap under n1 -> n - n1
        let n1 = 0.4;
        let a = as_point_weights(n, n1, AsBranch::Blob).unwrap();
        let b = as_point_weights(n, n - n1, AsBranch::Unblob).unwrap();
        assert!((a.w_blob - b.w_unblob).abs() < 1e-10);
        assert!((a.w_unblob - b.w_blob).abs() < 1e-10);
    }

    #[test]
    fn as_point_parameterizations_agree_on_grid() {
        for i in 1..20 {
            let n = 0.1 + 1.8 * (i as f64) / 20.0;
            for j in 1..20 {
                let n1 = n * (j as f64) / 20.0;
                let r = as_point_weights(n, n1, AsBranch::Blob);
                assert!(r.is_ok(), "n={n} n1={n1}: {:?}", r.err());
            }
        }
    }
}
