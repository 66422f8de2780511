//! Numerical tolerances, in one place.
//!
//! Every operation that needs a threshold takes a `&Tolerances`. Values are
//! stored as `f64` and converted to the working scalar at the point of use.
//! Relative tolerances are multiplied by the norm noted on each field.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Prefix of the environment variables read by [`Tolerances::from_env`].
pub const ENV_PREFIX: &str = "SUBSPACE_TOL_";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `‖H − Hᴴ‖_F ≤ hermitian · ‖H‖_F`.
    pub hermitian: f64,
    /// Reconstruction and orthonormality residuals of an eigensystem (relative).
    pub eig: f64,
    /// Minimum distance of an eigenvalue from an open interval endpoint, times `‖H‖`.
    pub boundary: f64,
    /// Eigenvalue classification slack, times the spectral diameter.
    pub class: f64,
    /// `min |λ − μ|` must exceed `kernel · max(‖T‖, |μ|)`.
    pub kernel: f64,
    /// Singular values below `rank · σ_max` count as zero.
    pub rank: f64,
    /// (Anti)commutator slack, times `‖V‖ + 1`.
    pub comm: f64,
    /// Acute iff `σ_min(I + J′J) > acute`.
    pub acute: f64,
    /// Hermitian part is positive definite iff `λ_min > pd · λ_max`.
    pub pd: f64,
    /// Containment slack for numerical-range hull tests, times `‖T‖`.
    pub hull: f64,
    /// `‖J − Jᴴ‖` and `‖J² − I‖` bound for accepted involutions.
    pub involution: f64,
    /// `‖WᴴW − I‖` bound for accepted unitaries.
    pub unitary: f64,
    /// Idempotence and symmetry slack for accepted projections.
    pub projection: f64,
    /// Distance of a unit vector from a prescribed subspace, and unit-norm slack.
    pub subspace: f64,
    /// Accretivity slack for the sector bound, times `‖S‖`.
    pub accretive: f64,
    /// Inset of the μ-grid from the ends of the admissible window, times its width.
    pub grid_inset: f64,
    /// Relative bracket width at which golden-section refinement stops.
    pub golden: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-12,
            eig: 1e-10,
            boundary: 1e-10,
            class: 1e-9,
            kernel: 1e-10,
            rank: 1e-10,
            comm: 1e-10,
            acute: 1e-10,
            pd: 1e-10,
            hull: 1e-8,
            involution: 1e-10,
            unitary: 1e-8,
            projection: 1e-8,
            subspace: 1e-8,
            accretive: 1e-10,
            grid_inset: 1e-6,
            golden: 1e-8,
        }
    }
}

impl Tolerances {
    /// Defaults loosened for `f32` arithmetic.
    pub fn single_precision() -> Self {
        Self {
            hermitian: 1e-5,
            eig: 1e-4,
            boundary: 1e-4,
            class: 1e-4,
            kernel: 1e-4,
            rank: 1e-4,
            comm: 1e-4,
            acute: 1e-4,
            pd: 1e-4,
            hull: 1e-3,
            involution: 1e-4,
            unitary: 1e-3,
            projection: 1e-3,
            subspace: 1e-3,
            accretive: 1e-4,
            grid_inset: 1e-3,
            golden: 1e-4,
        }
    }

    pub const NAMES: [&'static str; 17] = [
        "hermitian",
        "eig",
        "boundary",
        "class",
        "kernel",
        "rank",
        "comm",
        "acute",
        "pd",
        "hull",
        "involution",
        "unitary",
        "projection",
        "subspace",
        "accretive",
        "grid_inset",
        "golden",
    ];

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "hermitian" => &mut self.hermitian,
            "eig" => &mut self.eig,
            "boundary" => &mut self.boundary,
            "class" => &mut self.class,
            "kernel" => &mut self.kernel,
            "rank" => &mut self.rank,
            "comm" => &mut self.comm,
            "acute" => &mut self.acute,
            "pd" => &mut self.pd,
            "hull" => &mut self.hull,
            "involution" => &mut self.involution,
            "unitary" => &mut self.unitary,
            "projection" => &mut self.projection,
            "subspace" => &mut self.subspace,
            "accretive" => &mut self.accretive,
            "grid_inset" => &mut self.grid_inset,
            "golden" => &mut self.golden,
            _ => return None,
        })
    }

    /// Replaces one named tolerance. Overrides must lie in `(0, 1)`.
    pub fn with_override(mut self, name: &str, value: f64) -> Result<Self> {
        if !(value > 0.0 && value < 1.0) {
            return Err(Error::InvalidTolerance {
                name: name.to_string(),
                value,
            });
        }
        let slot = self.slot(name).ok_or_else(|| Error::InvalidTolerance {
            name: name.to_string(),
            value,
        })?;
        *slot = value;
        Ok(self)
    }

    /// Defaults, overridden by `SUBSPACE_TOL_<NAME>` variables (e.g. `SUBSPACE_TOL_ACUTE=1e-8`).
    pub fn from_env() -> Result<Self> {
        Self::from_vars(std::env::vars())
    }

    pub fn from_vars<I>(vars: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut tol = Self::default();
        let mut pairs: Vec<(String, String)> = vars
            .into_iter()
            .filter(|(k, _)| k.starts_with(ENV_PREFIX))
            .collect();
        pairs.sort();
        for (key, raw) in pairs {
            let name = key[ENV_PREFIX.len()..].to_ascii_lowercase();
            let value: f64 = raw.trim().parse().map_err(|_| Error::InvalidTolerance {
                name: name.clone(),
                value: f64::NAN,
            })?;
            tol = tol.with_override(&name, value)?;
        }
        Ok(tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_overrides_apply_by_name() {
        let vars = vec![
            ("SUBSPACE_TOL_ACUTE".to_string(), "1e-7".to_string()),
            ("PATH".to_string(), "/bin".to_string()),
        ];
        let tol = Tolerances::from_vars(vars).unwrap();
        assert_eq!(tol.acute, 1e-7);
        assert_eq!(tol.rank, Tolerances::default().rank);
    }

    #[test]
    fn override_outside_unit_interval_is_rejected() {
        assert!(Tolerances::default().with_override("acute", 1.5).is_err());
        assert!(Tolerances::default().with_override("acute", 0.0).is_err());
        assert!(Tolerances::default().with_override("nope", 0.1).is_err());
    }

    #[test]
    fn every_name_is_addressable() {
        for name in Tolerances::NAMES {
            assert!(Tolerances::default().with_override(name, 0.5).is_ok(), "{name}");
        }
    }
}
