use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants `ħ` and `m`, plus the cached factor `κ = ħ/√(2m)` that
/// multiplies every derivative term of the Riccati equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    hbar: f64,
    mass: f64,
    #[serde(skip)]
    kappa: f64,
}

impl Constants {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::param("hbar", format!("must be positive, got {hbar}")));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::param("mass", format!("must be positive, got {mass}")));
        }
        Ok(Self {
            hbar,
            mass,
            kappa: hbar / (2.0 * mass).sqrt(),
        })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `ħ/√(2m)`.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `κ² = ħ²/2m`, the prefactor of the kinetic term and of the barrier.
    pub fn kappa2(&self) -> f64 {
        self.kappa * self.kappa
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::new(1.0, 1.0).expect("unit constants are valid")
    }
}

#[derive(Deserialize)]
struct RawConstants {
    hbar: f64,
    mass: f64,
}

impl<'de> Deserialize<'de> for Constants {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawConstants::deserialize(d)?;
        Constants::new(raw.hbar, raw.mass).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn defaults_are_atomic_units() {
        let c = Constants::default();
        assert_eq!(c.hbar(), 1.0);
        assert_eq!(c.mass(), 1.0);
        assert!((c.kappa() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(Constants::new(0.0, 1.0).is_err());
        assert!(Constants::new(1.0, -2.0).is_err());
        assert!(Constants::new(f64::NAN, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn kappa_squared_times_two_m_is_hbar_squared(hbar in 1e-3f64..1e3, mass in 1e-3f64..1e3) {
            let c = Constants::new(hbar, mass).unwrap();
            let lhs = c.kappa2() * 2.0 * c.mass();
            prop_assert!((lhs - hbar * hbar).abs() <= 4.0 * f64::EPSILON * hbar * hbar);
        }
    }
}
