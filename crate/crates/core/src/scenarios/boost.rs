//! Inertial boosts along x with a free constant `η`:
//!
//! ```text
//! x' = (x − V t) / √(1 − V²/η)
//! t' = (t − V x / η) / √(1 − V²/η)
//! y' = y,  z' = z
//! ```
//!
//! `η = c²` gives the Lorentz boost and `η = ∞` the Galilean one.

use crate::error::{QfError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Eta {
    Finite(f64),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostEvent {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// Relative speed of the primed frame along x.
    pub speed: f64,
    pub eta: Eta,
}

fn validate(speed: f64, eta: Eta) -> Result<()> {
    if !speed.is_finite() {
        return Err(QfError::InvalidConfig(format!("speed {speed}")));
    }
    if let Eta::Finite(e) = eta {
        if !(e.is_finite() && e > 0.0) {
            return Err(QfError::InvalidConfig(format!(
                "eta must be positive, got {e}"
            )));
        }
        if speed * speed >= e {
            return Err(QfError::SpeedLimitExceeded { speed, eta: e });
        }
    }
    Ok(())
}

impl BoostEvent {
    pub fn new(t: f64, x: f64, y: f64, z: f64, speed: f64, eta: Eta) -> Result<Self> {
        validate(speed, eta)?;
        if ![t, x, y, z].iter().all(|v| v.is_finite()) {
            return Err(QfError::InvalidConfig("non-finite coordinate".into()));
        }
        Ok(Self {
            t,
            x,
            y,
            z,
            speed,
            eta,
        })
    }
}

/// Matrix acting on `(x, t)`: `γ [[1, −V], [−V/η, 1]]`, or `[[1, −V], [0, 1]]`
/// when `η` is infinite.
pub fn boost_matrix(speed: f64, eta: Eta) -> Result<[[f64; 2]; 2]> {
    validate(speed, eta)?;
    Ok(match eta {
        Eta::Infinite => [[1.0, -speed], [0.0, 1.0]],
        Eta::Finite(e) => {
            let gamma = 1.0 / (1.0 - speed * speed / e).sqrt();
            [[gamma, -gamma * speed], [-gamma * speed / e, gamma]]
        }
    })
}

/// Transformed coordinates; speed and `η` are carried over unchanged.
pub fn general_boost(event: &BoostEvent) -> Result<BoostEvent> {
    let m = boost_matrix(event.speed, event.eta)?;
    Ok(BoostEvent {
        x: m[0][0] * event.x + m[0][1] * event.t,
        t: m[1][0] * event.x + m[1][1] * event.t,
        ..*event
    })
}

pub(crate) fn matmul2(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Speed of the single boost equal to `first` followed by `second`, read off
/// the product matrix as `−M[x][t] / M[x][x]`.
pub fn composed_speed(first: f64, second: f64, eta: Eta) -> Result<f64> {
    let m = matmul2(&boost_matrix(second, eta)?, &boost_matrix(first, eta)?);
    Ok(-m[0][1] / m[0][0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_speed_is_identity() {
        for eta in [Eta::Finite(1.0), Eta::Finite(9e16), Eta::Infinite] {
            let e = BoostEvent::new(2.0, 3.0, 4.0, 5.0, 0.0, eta).unwrap();
            assert_eq!(general_boost(&e).unwrap(), e);
        }
    }

    #[test]
    fn galilean_limit() {
        let e = BoostEvent::new(1.0, 0.0, 0.0, 0.0, 3.0, Eta::Infinite).unwrap();
        let b = general_boost(&e).unwrap();
        assert_eq!((b.t, b.x), (1.0, -3.0));
        assert_eq!(composed_speed(3.0, 4.5, Eta::Infinite).unwrap(), 7.5);
    }

    #[test]
    fn invariant_speed() {
        for v in [-0.9, -0.3, 0.1, 0.5, 0.99] {
            for t in [0.5, 1.0, 7.0] {
                let e = BoostEvent::new(t, t, 0.0, 0.0, v, Eta::Finite(1.0)).unwrap();
                let b = general_boost(&e).unwrap();
                assert!((b.x - b.t).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lorentz_composition_matches_relativistic_addition() {
        // η = 1: (u + v)/(1 + uv)
        let w = composed_speed(0.5, 0.5, Eta::Finite(1.0)).unwrap();
        assert!((w - 0.8).abs() < 1e-15);
    }

    #[test]
    fn rejects_superluminal() {
        assert!(matches!(
            BoostEvent::new(0.0, 0.0, 0.0, 0.0, 1.0, Eta::Finite(1.0)),
            Err(QfError::SpeedLimitExceeded { .. })
        ));
        assert!(boost_matrix(2.0, Eta::Finite(4.0)).is_err());
        assert!(boost_matrix(0.1, Eta::Finite(-1.0)).is_err());
        assert!(boost_matrix(100.0, Eta::Infinite).is_ok());
    }
}
