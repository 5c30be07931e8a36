//! Boundary-CFT prediction engine: Coulomb-gas parameters, Kac weights,
//! characters, annulus partition functions, g-factors, crossing formulas
//! and fractal dimensions.

mod characters;
mod crossing;
mod eta;
mod gfactor;
mod qseries;

pub use characters::{
    annulus_partition, character, rocha_caridi, AnnulusPair, Character, StringStatus,
};
pub use crossing::{crossing_probability, mean_crossings_per_length, CrossingModel};
pub use eta::dedekind_eta;
pub use gfactor::{gfactor_consistency, modular_gfactor, ztilde_closed_form, GFactorBc};
pub use qseries::{euler_product, inverse_euler_product, partition_numbers, QSeries};

use std::f64::consts::PI;

#[derive(thiserror::Error, Debug)]
pub enum CftError {
    #[error("loop weight n = {0} outside (-2, 2)")]
    BadLoopWeight(f64),
    #[error("missing parameter {0}")]
    Missing(&'static str),
    #[error("singular parameter: {0}")]
    Singular(String),
    #[error("series truncation insufficient: {0}")]
    Truncation(String),
    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
}

/// Coulomb-gas parameter bundle for the dilute phase.
///
/// `n = 2 cos γ` with `γ ∈ [0, π)`, coupling `g = 1 + γ/π` and central
/// charge `c = 1 - 6 (g-1)²/g`. The boundary labels `r1`, `r2`, `r12`
/// parameterize blob fugacities through `n_i = sin (r_i+1)γ / sin r_i γ`.
#[derive(Clone, Copy, Debug)]
pub struct CoulombParams {
    pub n: f64,
    pub gamma: f64,
    pub g: f64,
    pub c: f64,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub r12: Option<f64>,
}

impl CoulombParams {
    pub fn from_n(n: f64) -> Result<Self, CftError> {
        if !(-2.0 < n && n < 2.0) {
            return Err(CftError::BadLoopWeight(n));
        }
        let gamma = (n / 2.0).acos();
        let g = 1.0 + gamma / PI;
        Ok(CoulombParams {
            n,
            gamma,
            g,
            c: central_charge(g),
            r1: None,
            r2: None,
            r12: None,
        })
    }

    /// Dense-phase bookkeeping: same `n`, coupling `g' = 1 - γ/π`.
    pub fn dense_from_n(n: f64) -> Result<Self, CftError> {
        if !(-2.0 < n && n < 2.0) {
            return Err(CftError::BadLoopWeight(n));
        }
        let gamma = (n / 2.0).acos();
        let g = 1.0 - gamma / PI;
        Ok(CoulombParams {
            n,
            gamma,
            g,
            c: central_charge(g),
            r1: None,
            r2: None,
            r12: None,
        })
    }

    pub fn with_r1(mut self, r1: f64) -> Self {
        self.r1 = Some(r1);
        self
    }

    pub fn with_r2(mut self, r2: f64) -> Self {
        self.r2 = Some(r2);
        self
    }

    pub fn with_r12(mut self, r12: f64) -> Self {
        self.r12 = Some(r12);
        self
    }

    pub fn kac(&self, r: f64, s: f64) -> f64 {
        kac_weight(r, s, self.g)
    }

    fn n_of(&self, r: f64) -> f64 {
        ((r + 1.0) * self.gamma).sin() / (r * self.gamma).sin()
    }

    pub fn n1(&self) -> Result<f64, CftError> {
        Ok(self.n_of(self.r1.ok_or(CftError::Missing("r1"))?))
    }

    pub fn n2(&self) -> Result<f64, CftError> {
        Ok(self.n_of(self.r2.ok_or(CftError::Missing("r2"))?))
    }

    /// Weight of loops carrying both boundaries' blobs.
    pub fn n12(&self) -> Result<f64, CftError> {
        let r1 = self.r1.ok_or(CftError::Missing("r1"))?;
        let r2 = self.r2.ok_or(CftError::Missing("r2"))?;
        let r12 = self.r12.ok_or(CftError::Missing("r12"))?;
        let gamma = self.gamma;
        let d = (r1 * gamma).sin() * (r2 * gamma).sin();
        if d.abs() < 1e-14 {
            return Err(CftError::Singular("sin r1γ sin r2γ".into()));
        }
        Ok(
            (0.5 * (r1 + r2 + 1.0 + r12) * gamma).sin()
                * (0.5 * (r1 + r2 + 1.0 - r12) * gamma).sin()
                / d,
        )
    }

    /// The open-boundary label: `n1 = 1` fixes `r1 = (π/γ - 1)/2`.
    pub fn open_r1(&self) -> f64 {
        (PI / self.gamma - 1.0) / 2.0
    }
}

/// `c = 1 - 6 (g-1)²/g`.
pub fn central_charge(g: f64) -> f64 {
    1.0 - 6.0 * (g - 1.0) * (g - 1.0) / g
}

/// Kac weight `h_{r,s} = ((g r - s)² - (g-1)²) / 4g` with real labels.
pub fn kac_weight(r: f64, s: f64, g: f64) -> f64 {
    ((g * r - s) * (g * r - s) - (g - 1.0) * (g - 1.0)) / (4.0 * g)
}

/// Fractal dimensions of loop contact sets and of bulk loops.
#[derive(Clone, Copy, Debug)]
pub struct FractalDimensions {
    /// Ordinary boundary: `1 - h_{3,1}` (non-positive: contact sets are
    /// almost surely empty).
    pub ordinary: f64,
    /// Special: `1 - h_{3,3} = 1 - 2(g-1)²/g`.
    pub special: f64,
    /// Blobbed loops at the anisotropic special point:
    /// `1 - h_{2r1+1, 2r1+1}`.
    pub as_blob: Option<f64>,
    /// Unblobbed loops there: `1 - h_{-2r1+1, -2r1-3}` (non-positive).
    pub as_unblob: Option<f64>,
    /// Bulk loops: `2 - 2 h_{1,0} = 1 + 1/(2g)`.
    pub bulk: f64,
}

pub fn fractal_dimensions(p: &CoulombParams) -> FractalDimensions {
    let g = p.g;
    FractalDimensions {
        ordinary: 1.0 - kac_weight(3.0, 1.0, g),
        special: 1.0 - kac_weight(3.0, 3.0, g),
        as_blob: p
            .r1
            .map(|r1| 1.0 - kac_weight(2.0 * r1 + 1.0, 2.0 * r1 + 1.0, g)),
        as_unblob: p
            .r1
            .map(|r1| 1.0 - kac_weight(-2.0 * r1 + 1.0, -2.0 * r1 - 3.0, g)),
        bulk: 1.0 + 1.0 / (2.0 * g),
    }
}

/// Boundary fixed points with identified perturbing operators.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoundaryPoint {
    Ordinary,
    Special,
    AnisotropicSpecial,
}

/// Perturbing operator at a boundary fixed point: Kac label and RG
/// eigenvalue `y = 1 - h`.
#[derive(Clone, Copy, Debug)]
pub struct Perturbation {
    pub label: (f64, f64),
    pub name: &'static str,
    pub rg_eigenvalue: f64,
}

/// Operators perturbing the boundary fixed points: anisotropic direction
/// at Ordinary/Special, the flow direction at the anisotropic special
/// point, plus the isotropic direction at Special.
pub fn perturbation_data(point: BoundaryPoint, p: &CoulombParams) -> Vec<Perturbation> {
    let g = p.g;
    let mk = |r: f64, s: f64, name: &'static str| Perturbation {
        label: (r, s),
        name,
        rg_eigenvalue: 1.0 - kac_weight(r, s, g),
    };
    match point {
        BoundaryPoint::Ordinary => vec![mk(3.0, 1.0, "anisotropic")],
        BoundaryPoint::Special => vec![mk(3.0, 3.0, "anisotropic"), mk(1.0, 3.0, "isotropic")],
        BoundaryPoint::AnisotropicSpecial => vec![mk(1.0, 3.0, "unstable direction")],
    }
}

/// The crossover exponent `φ = y_y / y_Δ = (1 - h_{1,3}) / (1 - h_{3,3})`.
pub fn crossover_phi(g: f64) -> f64 {
    (1.0 - kac_weight(1.0, 3.0, g)) / (1.0 - kac_weight(3.0, 3.0, g))
}

/// Open/open boundary map: `ν12/√(ν1 ν2) √(n+2) = 2 cos(r12 γ/2)`.
pub fn r12_from_open_weights(
    nu1: f64,
    nu2: f64,
    nu12: f64,
    p: &CoulombParams,
) -> Result<f64, CftError> {
    let lhs = nu12 / (nu1 * nu2).sqrt() * (p.n + 2.0).sqrt();
    if !(-2.0..=2.0).contains(&lhs) {
        return Err(CftError::Singular(format!(
            "open-weight combination {lhs} outside [-2, 2]"
        )));
    }
    Ok(2.0 * (lhs / 2.0).acos() / p.gamma)
}

/// Both Kac-slot candidates for the dense-phase one-arm exponent, as
/// `(h, c - 24h)` pairs: the direct slot (1,2) and the swapped slot (2,1)
/// at `g' = 1 - γ/π`. The dense-phase label convention is not fixed by
/// the dilute one; the swapped slot is the one matching `c_eff = -1`.
pub fn dense_one_arm_candidates(n: f64) -> Result<[(f64, f64); 2], CftError> {
    let p = CoulombParams::dense_from_n(n)?;
    let h12 = kac_weight(1.0, 2.0, p.g);
    let h21 = kac_weight(2.0, 1.0, p.g);
    Ok([(h12, p.c - 24.0 * h12), (h21, p.c - 24.0 * h21)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn central_charges() {
        assert_relative_eq!(central_charge(1.25), 0.7, epsilon = 1e-14);
        assert_relative_eq!(central_charge(1.0), 1.0, epsilon = 1e-14);
        assert_relative_eq!(central_charge(1.5), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn kac_values() {
        for g in [0.9, 1.2, 1.4] {
            assert!(kac_weight(1.0, 1.0, g).abs() < 1e-14);
        }
        assert_relative_eq!(kac_weight(1.0, 2.0, 1.25), 0.1, epsilon = 1e-14);
        assert_relative_eq!(kac_weight(2.0, 1.0, 1.25), 0.4375, epsilon = 1e-14);
        // h_{γ/π - r, γ/π - r} = h_{r, r+1}
        let p = CoulombParams::from_n(1.3).unwrap();
        let r = 1.7;
        let gp = p.g - 1.0;
        assert_relative_eq!(
            kac_weight(gp - r, gp - r, p.g),
            kac_weight(r, r + 1.0, p.g),
            epsilon = 1e-12
        );
    }

    #[test]
    fn parameter_roundtrips() {
        let mut p = CoulombParams::from_n(2.0f64.sqrt()).unwrap();
        for r1 in [0.3, 0.9, 1.5, 2.4, 3.3] {
            p.r1 = Some(r1);
            let n1 = p.n1().unwrap();
            let back = crate::integrable::r1_from_n1(p.n, n1).unwrap();
            assert_relative_eq!(back, r1, epsilon = 1e-9);
        }
        // n12 at r2 = 1, r12 = r1 reduces to n1
        p.r1 = Some(1.8);
        p.r2 = Some(1.0);
        p.r12 = Some(1.8);
        assert_relative_eq!(p.n12().unwrap(), p.n1().unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn fractal_dimension_values() {
        let p = CoulombParams::from_n(1.0).unwrap().with_r1(1.2);
        let d = fractal_dimensions(&p);
        let g = p.g;
        assert_relative_eq!(
            d.special,
            1.0 - 2.0 * (g - 1.0) * (g - 1.0) / g,
            epsilon = 1e-14
        );
        assert_relative_eq!(d.bulk, 1.0 + 3.0 / 8.0, epsilon = 1e-14);
        // ordinary contact sets are almost surely empty across 0 <= n <= 2
        for k in 0..=20 {
            let n = (2.0 * k as f64 / 20.0 - 1e-9).max(1e-6);
            let q = CoulombParams::from_n(n).unwrap();
            assert!(fractal_dimensions(&q).ordinary <= 1e-12, "n={n}");
            if let Some(u) = fractal_dimensions(&q.with_r1(1.3)).as_unblob {
                assert!(u <= 1e-9, "n={n}");
            }
        }
    }

    #[test]
    fn perturbation_values() {
        let p = CoulombParams::from_n(2.0f64.sqrt()).unwrap();
        let sp = perturbation_data(BoundaryPoint::Special, &p);
        assert_relative_eq!(sp[0].rg_eigenvalue, 0.9, epsilon = 1e-12); // y_Δ
        assert_relative_eq!(sp[1].rg_eigenvalue, 0.4, epsilon = 1e-12); // y_y
        assert_relative_eq!(crossover_phi(p.g), 4.0 / 9.0, epsilon = 1e-12);
        assert_relative_eq!(crossover_phi(1.5), 1.0, epsilon = 1e-12);
        assert_relative_eq!(crossover_phi(4.0 / 3.0), 0.6, epsilon = 1e-12);
        assert_relative_eq!(crossover_phi(1.2), 5.0 / 14.0, epsilon = 1e-12);
        // ordinary anisotropic perturbation is irrelevant on 0 < n <= 2
        for k in 1..=20 {
            let n = 2.0 * k as f64 / 20.0 - 1e-6;
            let q = CoulombParams::from_n(n).unwrap();
            let ord = perturbation_data(BoundaryPoint::Ordinary, &q);
            assert!(ord[0].rg_eigenvalue < 0.0, "n={n}");
        }
    }

    #[test]
    fn open_weight_map_is_consistent_with_n12() {
        let p = CoulombParams::from_n(1.0).unwrap();
        let (nu1, nu2, nu12) = (1.0, 1.3, 0.7);
        let r12 = r12_from_open_weights(nu1, nu2, nu12, &p).unwrap();
        let open_r = p.open_r1();
        let q = p.with_r1(open_r).with_r2(open_r).with_r12(r12);
        assert_relative_eq!(
            q.n12().unwrap(),
            nu12 * nu12 / (nu1 * nu2),
            epsilon = 1e-12
        );
    }

    #[test]
    fn dense_one_arm_flag() {
        let cands = dense_one_arm_candidates(2.0f64.sqrt()).unwrap();
        // the swapped slot reproduces c_eff = -1
        assert_relative_eq!(cands[1].1, -1.0, epsilon = 1e-12);
        assert!((cands[0].1 + 1.0).abs() > 0.1);
    }
}
