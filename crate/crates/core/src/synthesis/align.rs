//! Least-squares rigid alignment of ordered point sets (Kabsch).

use nalgebra::Matrix3;

use crate::curves::Vec3;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Alignment {
    pub rotation: Matrix3<f64>,
    pub translation: Vec3,
    /// Root-mean-square distance between `R a + t` and `b`.
    pub rmse: f64,
    /// Set when the cross-covariance is rank deficient (collinear data); the
    /// rotation is then the identity and only the centroids are matched.
    pub ambiguous: bool,
}

impl Alignment {
    pub fn apply(&self, p: &Vec3) -> Vec3 {
        self.rotation * p + self.translation
    }
}

fn centroid(pts: &[Vec3]) -> Vec3 {
    pts.iter().fold(Vec3::zeros(), |acc, p| acc + p) / pts.len() as f64
}

/// Proper rotation `R` and translation `t` minimizing `Σ |R a_i + t - b_i|²`.
pub fn rigid_align(a: &[Vec3], b: &[Vec3]) -> Result<Alignment> {
    if a.len() != b.len() || a.len() < 3 {
        return Err(Error::AlignmentInput { a: a.len(), b: b.len() });
    }
    let (ca, cb) = (centroid(a), centroid(b));
    let mut h = Matrix3::zeros();
    for (p, q) in a.iter().zip(b) {
        h += (p - ca) * (q - cb).transpose();
    }
    let svd = h.svd(true, true);
    let sv = svd.singular_values;
    // Rank at most one means the data are collinear and the rotation about
    // that line is undetermined.
    let ambiguous = sorted_second(&sv) <= 1e-12 * sv.max() || sv.max() == 0.0;
    let rotation = if ambiguous {
        Matrix3::identity()
    } else {
        let u = svd.u.expect("u requested");
        let vt = svd.v_t.expect("v_t requested");
        let d = (vt.transpose() * u.transpose()).determinant().signum();
        // Flip the direction of least covariance, wherever the decomposition
        // placed it.
        let mut diag = Vec3::new(1.0, 1.0, 1.0);
        diag[sv.imin()] = d;
        let fix = Matrix3::from_diagonal(&diag);
        vt.transpose() * fix * u.transpose()
    };
    let translation = cb - rotation * ca;
    let sq: f64 = a.iter().zip(b).map(|(p, q)| (rotation * p + translation - q).norm_squared()).sum();
    Ok(Alignment { rotation, translation, rmse: (sq / a.len() as f64).sqrt(), ambiguous })
}

fn sorted_second(sv: &Vec3) -> f64 {
    let mut v = [sv[0], sv[1], sv[2]];
    v.sort_by(|x, y| y.total_cmp(x));
    v[1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Rotation3;

    fn cloud() -> Vec<Vec3> {
        (0..20).map(|i| {
            let t = i as f64 * 0.4;
            Vec3::new(t.cos(), (1.3 * t).sin(), 0.1 * t * t)
        }).collect()
    }

    #[test]
    fn recovers_rigid_motion() {
        let a = cloud();
        let r = Rotation3::from_axis_angle(&Vec3::z_axis(), 30f64.to_radians()).into_inner();
        let t = Vec3::new(1.0, 2.0, 3.0);
        let b: Vec<Vec3> = a.iter().map(|p| r * p + t).collect();
        let al = rigid_align(&a, &b).unwrap();
        assert!(al.rmse < 1e-10);
        assert!((al.rotation - r).norm() < 1e-10);
        assert!((al.translation - t).norm() < 1e-10);
        assert!(!al.ambiguous);
    }

    #[test]
    fn identity_for_equal_sets_and_no_reflection() {
        let a = cloud();
        let al = rigid_align(&a, &a).unwrap();
        assert!(al.rmse < 1e-14);
        assert!((al.rotation - Matrix3::identity()).norm() < 1e-12);
        let mirrored: Vec<Vec3> = a.iter().map(|p| Vec3::new(p.x, p.y, -p.z)).collect();
        let al = rigid_align(&a, &mirrored).unwrap();
        assert!((al.rotation.determinant() - 1.0).abs() < 1e-12);
        assert!(al.rmse > 1e-3);
    }

    #[test]
    fn collinear_points_are_ambiguous() {
        let a: Vec<Vec3> = (0..10).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect();
        let b: Vec<Vec3> = a.iter().map(|p| p + Vec3::new(0.0, 1.0, 0.0)).collect();
        let al = rigid_align(&a, &b).unwrap();
        assert!(al.ambiguous);
        assert_eq!(al.rotation, Matrix3::identity());
        assert!(al.rmse < 1e-14);
        assert!(rigid_align(&a[..2], &b[..2]).is_err());
    }
}
