use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::matrix::{ComplexMatrix, C64};

/// Unit vector on the qubit Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub const UNIT_TOL: f64 = 1e-10;

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm2 = x * x + y * y + z * z;
        if !norm2.is_finite() || (norm2 - 1.0).abs() > UNIT_TOL {
            return Err(Error::OutOfRange {
                name: "|n|^2",
                value: norm2,
                range: "1 ± 1e-10",
            });
        }
        Ok(Self { x, y, z })
    }

    /// Rescales any nonzero vector onto the sphere.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !(norm.is_finite() && norm > 1e-300) {
            return Err(Error::Numeric("cannot normalize zero vector".into()));
        }
        Ok(Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    /// Polar angle from +z, azimuth from +x.
    pub fn from_spherical(polar: f64, azimuth: f64) -> Self {
        Self {
            x: polar.sin() * azimuth.cos(),
            y: polar.sin() * azimuth.sin(),
            z: polar.cos(),
        }
    }

    pub const fn unchecked(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn x_axis() -> Self {
        Self::unchecked(1.0, 0.0, 0.0)
    }

    pub fn y_axis() -> Self {
        Self::unchecked(0.0, 1.0, 0.0)
    }

    pub fn z_axis() -> Self {
        Self::unchecked(0.0, 0.0, 1.0)
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn antipode(&self) -> Self {
        Self::unchecked(-self.x, -self.y, -self.z)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// `(|n>, |n⊥>)`: `|n>` has a real nonnegative first component and
    /// `|n⊥> = (b*, -a*)` for `|n> = (a, b)`.
    pub fn kets(&self) -> ([C64; 2], [C64; 2]) {
        let polar = self.z.clamp(-1.0, 1.0).acos();
        let azimuth = self.y.atan2(self.x);
        let a = C64::new((polar / 2.0).cos(), 0.0);
        let b = C64::from_polar((polar / 2.0).sin(), azimuth);
        ([a, b], [b.conj(), -a.conj()])
    }

    /// `(I + n·σ)/2`
    pub fn projector(&self) -> ComplexMatrix {
        let half = 0.5;
        ComplexMatrix::from_vec(
            2,
            2,
            vec![
                C64::new(half * (1.0 + self.z), 0.0),
                C64::new(half * self.x, -half * self.y),
                C64::new(half * self.x, half * self.y),
                C64::new(half * (1.0 - self.z), 0.0),
            ],
        )
        .expect("finite projector")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kets_are_orthonormal_eigenvectors() {
        for n in [
            BlochVector::z_axis(),
            BlochVector::z_axis().antipode(),
            BlochVector::y_axis().antipode(),
            BlochVector::normalized(0.3, -0.4, 0.5).unwrap(),
        ] {
            let (up, down) = n.kets();
            let p = n.projector();
            let overlap: C64 = up.iter().zip(&down).map(|(a, b)| a.conj() * b).sum();
            assert!(overlap.norm() < 1e-15);
            assert!((p.expectation_vec(&up).re - 1.0).abs() < 1e-12);
            assert!(p.expectation_vec(&down).re.abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_unit() {
        assert!(BlochVector::new(1.0, 1.0, 0.0).is_err());
    }
}
