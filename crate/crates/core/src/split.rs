//! Dispositions of a spectrum into the two parts `σ₋` and `σ₊`.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Disposition {
    /// `sup σ₋ < inf σ₊`.
    Subordinated,
    /// `σ₋` sits inside a finite gap `Δ = (α, β)` of `σ₊`.
    Annular,
}

impl Disposition {
    pub fn name(self) -> &'static str {
        match self {
            Disposition::Subordinated => "subordinated",
            Disposition::Annular => "annular",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Minus,
    Plus,
}

/// Split of the real line into the declared parts `σ₋`, `σ₊`, each a union
/// of closed intervals, with the derived geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSplit<T: Real> {
    disposition: Disposition,
    sigma_minus: Vec<[T; 2]>,
    sigma_plus: Vec<[T; 2]>,
    d: T,
    gap: Option<(T, T)>,
}

fn hull<T: Real>(parts: &[[T; 2]]) -> (T, T) {
    parts.iter().fold((T::infinity(), -T::infinity()), |(lo, hi), iv| {
        (lo.min(iv[0]), hi.max(iv[1]))
    })
}

fn interval_distance<T: Real>(x: &[T; 2], y: &[T; 2]) -> T {
    if x[1] < y[0] {
        y[0] - x[1]
    } else if y[1] < x[0] {
        x[0] - y[1]
    } else {
        T::zero()
    }
}

impl<T: Real> SpectralSplit<T> {
    pub fn new(
        disposition: Disposition,
        sigma_minus: Vec<[T; 2]>,
        sigma_plus: Vec<[T; 2]>,
    ) -> Result<Self> {
        for (name, parts) in [("sigma_minus", &sigma_minus), ("sigma_plus", &sigma_plus)] {
            if parts.is_empty() {
                return Err(Error::InvalidSplit(format!("{name} is empty")));
            }
            for iv in parts.iter() {
                if !iv[0].is_finite_value() || !iv[1].is_finite_value() || iv[0] > iv[1] {
                    return Err(Error::InvalidSplit(format!(
                        "{name} contains an invalid interval [{}, {}]",
                        iv[0], iv[1]
                    )));
                }
            }
        }
        let mut d = T::infinity();
        for x in &sigma_minus {
            for y in &sigma_plus {
                d = d.min(interval_distance(x, y));
            }
        }
        if !(d > T::zero()) {
            return Err(Error::InvalidSplit("dist(sigma_minus, sigma_plus) must be positive".into()));
        }
        let (inf_m, sup_m) = hull(&sigma_minus);
        let (inf_p, _) = hull(&sigma_plus);
        let gap = match disposition {
            Disposition::Subordinated => {
                if !(sup_m < inf_p) {
                    return Err(Error::InvalidSplit(
                        "subordinated split requires sup sigma_minus < inf sigma_plus".into(),
                    ));
                }
                None
            }
            Disposition::Annular => {
                if sigma_plus.iter().any(|iv| iv[1] >= inf_m && iv[0] <= sup_m) {
                    return Err(Error::InvalidSplit(
                        "sigma_plus intersects the convex hull of sigma_minus".into(),
                    ));
                }
                let alpha = sigma_plus
                    .iter()
                    .filter(|iv| iv[1] < inf_m)
                    .fold(-T::infinity(), |a, iv| a.max(iv[1]));
                let beta = sigma_plus
                    .iter()
                    .filter(|iv| iv[0] > sup_m)
                    .fold(T::infinity(), |a, iv| a.min(iv[0]));
                if !alpha.is_finite_value() || !beta.is_finite_value() {
                    return Err(Error::InvalidSplit(
                        "annular split requires sigma_plus on both sides of sigma_minus".into(),
                    ));
                }
                Some((alpha, beta))
            }
        };
        Ok(Self {
            disposition,
            sigma_minus,
            sigma_plus,
            d,
            gap,
        })
    }

    /// Each listed point becomes a degenerate interval `[x, x]`.
    pub fn from_points(disposition: Disposition, minus: &[T], plus: &[T]) -> Result<Self> {
        Self::new(
            disposition,
            minus.iter().map(|&x| [x, x]).collect(),
            plus.iter().map(|&x| [x, x]).collect(),
        )
    }

    pub fn disposition(&self) -> Disposition {
        self.disposition
    }

    pub fn sigma_minus(&self) -> &[[T; 2]] {
        &self.sigma_minus
    }

    pub fn sigma_plus(&self) -> &[[T; 2]] {
        &self.sigma_plus
    }

    /// `dist(σ₋, σ₊)`.
    pub fn d(&self) -> T {
        self.d
    }

    pub fn inf_minus(&self) -> T {
        hull(&self.sigma_minus).0
    }

    pub fn sup_minus(&self) -> T {
        hull(&self.sigma_minus).1
    }

    pub fn inf_plus(&self) -> T {
        hull(&self.sigma_plus).0
    }

    pub fn sup_plus(&self) -> T {
        hull(&self.sigma_plus).1
    }

    /// The finite gap `Δ = (α, β)` of `σ₊` containing `σ₋` (annular only).
    pub fn gap(&self) -> Option<(T, T)> {
        self.gap
    }

    /// `|Δ| = β − α`.
    pub fn gap_len(&self) -> Option<T> {
        self.gap.map(|(lo, hi)| hi - lo)
    }

    /// Midpoint of `Δ`; the annular formulas work in coordinates centered here.
    pub fn center(&self) -> Option<T> {
        self.gap.map(|(lo, hi)| (lo + hi) * T::lit(0.5))
    }

    /// `b = |Δ|/2` (centered coordinates).
    pub fn b(&self) -> Option<T> {
        self.gap_len().map(|g| g * T::lit(0.5))
    }

    /// `a = |Δ|/2 − d`, so that `σ₋ ⊂ [−a, a]` after centering.
    pub fn a(&self) -> Option<T> {
        self.b().map(|b| b - self.d)
    }

    /// Admissible μ-window: `(sup σ₋, inf σ₊)` for a subordinated split,
    /// `(a² + ‖V‖², b²)` (squared centered coordinates) for an annular one.
    pub fn mu_window(&self, norm_v: T) -> (T, T) {
        match self.disposition {
            Disposition::Subordinated => (self.sup_minus(), self.inf_plus()),
            Disposition::Annular => {
                let a = self.a().expect("annular split has a gap");
                let b = self.b().expect("annular split has a gap");
                (a * a + norm_v * norm_v, b * b)
            }
        }
    }

    /// Spread of all declared points.
    pub fn diameter(&self) -> T {
        let (lm, hm) = hull(&self.sigma_minus);
        let (lp, hp) = hull(&self.sigma_plus);
        hm.max(hp) - lm.min(lp)
    }

    /// Classification slack: `tol.class` times the spectral diameter.
    pub fn class_slack(&self, tol: &Tolerances) -> T {
        T::lit(tol.class) * self.diameter()
    }

    pub fn classify(&self, x: T, slack: T) -> Option<Side> {
        let near = |parts: &[[T; 2]]| parts.iter().any(|iv| x >= iv[0] - slack && x <= iv[1] + slack);
        match (near(&self.sigma_minus), near(&self.sigma_plus)) {
            (true, false) => Some(Side::Minus),
            (false, true) => Some(Side::Plus),
            _ => None,
        }
    }

    pub fn to_json(&self) -> SplitJson {
        let conv = |parts: &[[T; 2]]| parts.iter().map(|iv| [iv[0].as_f64(), iv[1].as_f64()]).collect();
        SplitJson {
            disposition: self.disposition,
            sigma_minus: conv(&self.sigma_minus),
            sigma_plus: conv(&self.sigma_plus),
        }
    }
}

/// Sidecar split descriptor: `{"disposition": "...", "sigma_minus": [[lo,hi],...], "sigma_plus": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitJson {
    pub disposition: Disposition,
    pub sigma_minus: Vec<[f64; 2]>,
    pub sigma_plus: Vec<[f64; 2]>,
}

impl SplitJson {
    pub fn to_split<T: Real>(&self) -> Result<SpectralSplit<T>> {
        let conv = |parts: &[[f64; 2]]| parts.iter().map(|iv| [T::lit(iv[0]), T::lit(iv[1])]).collect();
        SpectralSplit::new(self.disposition, conv(&self.sigma_minus), conv(&self.sigma_plus))
    }

    pub fn parse<T: Real>(text: &str) -> Result<SpectralSplit<T>> {
        let raw: SplitJson =
            serde_json::from_str(text).map_err(|e| Error::format("split", e.to_string()))?;
        raw.to_split()
    }
}
