//! Small fixed-size linear algebra used by the physics and sampling code.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::ops::{Add, Mul, Neg, Sub};

/// Planar vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// Scalar z-component of the 3D cross product.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    /// Unit vector, or zero when the norm is (near) zero.
    pub fn unit_or_zero(self) -> Vec2 {
        let n = self.norm();
        if n > 1e-12 {
            Vec2::new(self.x / n, self.y / n)
        } else {
            Vec2::ZERO
        }
    }

    /// Rotate by `angle` radians (counter-clockwise).
    pub fn rotated(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Normalize an angle to `[0, 2*pi)`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut r = a % TAU;
    if r < 0.0 {
        r += TAU;
    }
    // `-1e-17 % TAU` rounds to TAU after the correction above.
    if r >= TAU {
        r = 0.0;
    }
    r
}

/// Shortest signed angular distance from `b` to `a`, in `(-pi, pi]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let mut d = (a - b) % TAU;
    if d > std::f64::consts::PI {
        d -= TAU;
    } else if d <= -std::f64::consts::PI {
        d += TAU;
    }
    d
}

/// Row-major symmetric-friendly 3x3 matrix. Used for inertia tensors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub fn zeros() -> Self {
        Mat3([[0.0; 3]; 3])
    }

    pub fn identity() -> Self {
        Mat3::from_diag([1.0, 1.0, 1.0])
    }

    pub fn from_diag(d: [f64; 3]) -> Self {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            m[i][i] = d[i];
        }
        Mat3(m)
    }

    pub fn transpose(&self) -> Mat3 {
        let mut t = [[0.0; 3]; 3];
        for (i, row) in self.0.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                t[j][i] = v;
            }
        }
        Mat3(t)
    }

    pub fn matmul(&self, o: &Mat3) -> Mat3 {
        let mut r = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += self.0[i][k] * o.0[k][j];
                }
                r[i][j] = s;
            }
        }
        Mat3(r)
    }

    /// Rotation matrix about a coordinate axis (0 = x, 1 = y, 2 = z).
    pub fn rotation_about_axis(axis: usize, angle: f64) -> Mat3 {
        let (s, c) = angle.sin_cos();
        match axis {
            0 => Mat3([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]),
            1 => Mat3([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]]),
            2 => Mat3([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]),
            _ => panic!("axis must be 0, 1 or 2"),
        }
    }

    pub fn row_major(&self) -> [f64; 9] {
        let mut out = [0.0; 9];
        for i in 0..3 {
            for j in 0..3 {
                out[i * 3 + j] = self.0[i][j];
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    /// Symmetry check up to an absolute tolerance.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        for i in 0..3 {
            for j in (i + 1)..3 {
                if (self.0[i][j] - self.0[j][i]).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Positive definiteness of a symmetric matrix via leading principal minors.
    pub fn is_positive_definite(&self) -> bool {
        let m = &self.0;
        let d1 = m[0][0];
        let d2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let d3 = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        d1 > 0.0 && d2 > 0.0 && d3 > 0.0
    }

    /// Eigenvalues of a symmetric 3x3 matrix, ascending. Closed-form
    /// trigonometric solution of the characteristic cubic.
    pub fn symmetric_eigenvalues(&self) -> [f64; 3] {
        let a = &self.0;
        let p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
        if p1 == 0.0 {
            let mut d = [a[0][0], a[1][1], a[2][2]];
            d.sort_by(|x, y| x.partial_cmp(y).unwrap());
            return d;
        }
        let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
        let p = (p2 / 6.0).sqrt();
        // B = (A - q I) / p
        let mut b = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                b[i][j] = (a[i][j] - if i == j { q } else { 0.0 }) / p;
            }
        }
        let detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
            - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
            + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
        let r = (detb / 2.0).clamp(-1.0, 1.0);
        let phi = r.acos() / 3.0;
        let e1 = q + 2.0 * p * phi.cos();
        let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
        let e2 = 3.0 * q - e1 - e3;
        let mut out = [e1, e2, e3];
        out.sort_by(|x, y| x.partial_cmp(y).unwrap());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn wrap_angle_range() {
        for a in [-10.0, -TAU, -0.1, 0.0, 0.1, TAU, 10.0, 123.456] {
            let w = wrap_angle(a);
            assert!((0.0..TAU).contains(&w), "wrap({a}) = {w}");
            // Same direction.
            assert_abs_diff_eq!(w.sin(), a.sin(), epsilon = 1e-9);
            assert_abs_diff_eq!(w.cos(), a.cos(), epsilon = 1e-9);
        }
    }

    #[test]
    fn angle_diff_shortest() {
        assert_abs_diff_eq!(angle_diff(0.1, 0.0), 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(angle_diff(0.0, 0.1), -0.1, epsilon = 1e-12);
        // 359 degrees reads as -1 degree.
        let a = 359.0_f64.to_radians();
        assert_abs_diff_eq!(angle_diff(a, 0.0), -1.0_f64.to_radians(), epsilon = 1e-12);
        assert!(angle_diff(std::f64::consts::PI, 0.0) > 0.0);
    }

    #[test]
    fn mat3_rotation_preserves_symmetric_spectrum() {
        let d = Mat3::from_diag([1.0, 2.0, 3.0]);
        for axis in 0..3 {
            let r = Mat3::rotation_about_axis(axis, 0.7);
            let m = r.matmul(&d).matmul(&r.transpose());
            let e = m.symmetric_eigenvalues();
            for (got, want) in e.iter().zip([1.0, 2.0, 3.0]) {
                assert_abs_diff_eq!(*got, want, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn vec2_rotate_and_cross() {
        let v = Vec2::new(1.0, 0.0).rotated(std::f64::consts::FRAC_PI_2);
        assert_abs_diff_eq!(v.x, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.y, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(Vec2::new(1.0, 0.0).cross(Vec2::new(0.0, 1.0)), 1.0);
    }
}
