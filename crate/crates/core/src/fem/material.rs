//! Compressible neo-Hookean material,
//! `W = mu/2 (tr(F F^T) - 3 - 2 ln J) + Lambda/2 (ln J)^2`.
//!
//! Two-dimensional kinematics embed the in-plane deformation gradient into a
//! 3 x 3 one. Plane strain fixes `F33 = 1`; plane stress solves `P33 = 0` for
//! `F33` and condenses the tangent.

use nalgebra::{Matrix2, Matrix3, Matrix4};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kinematics {
    PlaneStrain,
    PlaneStress,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub kinematics: Kinematics,
}

impl MaterialParams {
    pub fn new(youngs_modulus: f64, poisson_ratio: f64) -> Result<Self> {
        if !(youngs_modulus > 0.0) || !(0.0..0.5).contains(&poisson_ratio) {
            return Err(Error::InvalidArgument(format!(
                "need E > 0 and 0 <= nu < 0.5, got E = {youngs_modulus}, nu = {poisson_ratio}"
            )));
        }
        Ok(MaterialParams { youngs_modulus, poisson_ratio, kinematics: Kinematics::PlaneStrain })
    }

    pub fn with_kinematics(mut self, k: Kinematics) -> Self {
        self.kinematics = k;
        self
    }

    pub fn mu(&self) -> f64 {
        self.youngs_modulus / (2.0 * (1.0 + self.poisson_ratio))
    }

    pub fn lambda(&self) -> f64 {
        2.0 * self.mu() * self.poisson_ratio / (1.0 - 2.0 * self.poisson_ratio)
    }
}

/// Index of `F_iJ` in the flattened 4-vector `[F11, F12, F21, F22]`.
#[inline]
pub fn fidx(i: usize, j: usize) -> usize {
    2 * i + j
}

/// Cauchy stress of the in-plane block under plane strain,
/// `sigma = mu/J (F F^T - I) + Lambda/J ln J I`.
pub fn cauchy_stress(f: &Matrix2<f64>, mat: &MaterialParams) -> Result<Matrix2<f64>> {
    let j = f.determinant();
    if !(j > 0.0) {
        return Err(Error::NonPositiveJacobian { cell: usize::MAX, det: j });
    }
    let (mu, lam) = (mat.mu(), mat.lambda());
    Ok((f * f.transpose() - Matrix2::identity()) * (mu / j) + Matrix2::identity() * (lam * j.ln() / j))
}

fn energy_3d(f: &Matrix3<f64>, mu: f64, lam: f64) -> f64 {
    let j = f.determinant();
    let lnj = j.ln();
    0.5 * mu * ((f * f.transpose()).trace() - 3.0 - 2.0 * lnj) + 0.5 * lam * lnj * lnj
}

/// Out-of-plane stretch making `P33` vanish for the given in-plane block.
fn plane_stress_stretch(j2: f64, mu: f64, lam: f64) -> f64 {
    // mu (s^2 - 1) + lam ln(j2 s) = 0, monotone in s
    let mut s = 1.0;
    for _ in 0..60 {
        let g = mu * (s * s - 1.0) + lam * (j2 * s).ln();
        let dg = 2.0 * mu * s + lam / s;
        let ds = g / dg;
        s -= ds;
        if s <= 0.0 {
            s = 1e-8;
        }
        if ds.abs() < 1e-15 * s {
            break;
        }
    }
    s
}

fn embed(f: &Matrix2<f64>, f33: f64) -> Matrix3<f64> {
    Matrix3::new(f[(0, 0)], f[(0, 1)], 0.0, f[(1, 0)], f[(1, 1)], 0.0, 0.0, 0.0, f33)
}

/// Strain energy density per reference volume.
pub fn strain_energy(f: &Matrix2<f64>, mat: &MaterialParams) -> Result<f64> {
    let j2 = f.determinant();
    if !(j2 > 0.0) {
        return Err(Error::NonPositiveJacobian { cell: usize::MAX, det: j2 });
    }
    let (mu, lam) = (mat.mu(), mat.lambda());
    let f33 = match mat.kinematics {
        Kinematics::PlaneStrain => 1.0,
        Kinematics::PlaneStress => plane_stress_stretch(j2, mu, lam),
    };
    Ok(energy_3d(&embed(f, f33), mu, lam))
}

/// First Piola-Kirchhoff stress of the in-plane block and the consistent
/// tangent `dP_iJ / dF_kL` in flattened form.
pub fn piola_and_tangent(f: &Matrix2<f64>, mat: &MaterialParams) -> Result<(Matrix2<f64>, Matrix4<f64>)> {
    let j2 = f.determinant();
    if !(j2 > 0.0) {
        return Err(Error::NonPositiveJacobian { cell: usize::MAX, det: j2 });
    }
    let (mu, lam) = (mat.mu(), mat.lambda());
    let f33 = match mat.kinematics {
        Kinematics::PlaneStrain => 1.0,
        Kinematics::PlaneStress => plane_stress_stretch(j2, mu, lam),
    };
    let j = j2 * f33;
    let lnj = j.ln();
    let finv = f.try_inverse().ok_or(Error::NonPositiveJacobian { cell: usize::MAX, det: j2 })?;
    let finv_t = finv.transpose();
    let p = (f - finv_t) * mu + finv_t * (lam * lnj);

    // A_iJkL = mu d_ik d_JL + (mu - lam ln J) Finv_Jk Finv_Li + lam Finv_Ji Finv_Lk
    let mut a = Matrix4::zeros();
    for i in 0..2 {
        for jj in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let mut v = (mu - lam * lnj) * finv[(jj, k)] * finv[(l, i)] + lam * finv[(jj, i)] * finv[(l, k)];
                    if i == k && jj == l {
                        v += mu;
                    }
                    a[(fidx(i, jj), fidx(k, l))] = v;
                }
            }
        }
    }
    if mat.kinematics == Kinematics::PlaneStress {
        // condense out F33: A_iJ33 = lam / F33 * Finv_Ji
        let inv33 = 1.0 / f33;
        let a3333 = mu + (mu - lam * lnj) * inv33 * inv33 + lam * inv33 * inv33;
        let mut c = nalgebra::Vector4::zeros();
        for i in 0..2 {
            for jj in 0..2 {
                c[fidx(i, jj)] = lam * inv33 * finv[(jj, i)];
            }
        }
        a -= c * c.transpose() / a3333;
    }
    Ok((p, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn steel_like() -> MaterialParams {
        MaterialParams::new(2100.0, 0.33).unwrap()
    }

    #[test]
    fn lame_constants() {
        let m = steel_like();
        // hand arithmetic: 2100 / 2.66 and 2 mu 0.33 / 0.34
        let mu = 2100.0 / 2.66;
        let lam = 2.0 * mu * 0.33 / 0.34;
        assert!((m.mu() - mu).abs() <= 1e-12 * mu);
        assert!((m.lambda() - lam).abs() <= 1e-12 * lam);
        assert!((m.mu() - 789.4737).abs() < 1e-4);
        assert!((m.lambda() - 1532.5077).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(MaterialParams::new(0.0, 0.3).is_err());
        assert!(MaterialParams::new(1.0, 0.5).is_err());
        assert!(MaterialParams::new(1.0, -0.1).is_err());
    }

    #[test]
    fn identity_is_stress_free() {
        let m = steel_like();
        assert_eq!(cauchy_stress(&Matrix2::identity(), &m).unwrap(), Matrix2::zeros());
        for k in [Kinematics::PlaneStrain, Kinematics::PlaneStress] {
            let (p, _) = piola_and_tangent(&Matrix2::identity(), &m.with_kinematics(k)).unwrap();
            assert!(p.norm() < 1e-12);
        }
    }

    #[test]
    fn small_simple_shear() {
        let m = steel_like();
        let g = 1e-4;
        let f = Matrix2::new(1.0, g, 0.0, 1.0);
        let s = cauchy_stress(&f, &m).unwrap();
        assert!((s[(0, 1)] - m.mu() * g).abs() <= 1e-6 * m.mu() * g);
        assert!((s[(0, 1)] - s[(1, 0)]).abs() < 1e-12);
    }

    #[test]
    fn inverted_deformation_is_rejected() {
        let f = Matrix2::new(-1.0, 0.0, 0.0, 1.0);
        assert!(matches!(cauchy_stress(&f, &steel_like()), Err(Error::NonPositiveJacobian { .. })));
    }

    #[test]
    fn piola_matches_cauchy_in_plane_strain() {
        let m = steel_like();
        let f = Matrix2::new(1.1, 0.2, -0.05, 0.9);
        let (p, _) = piola_and_tangent(&f, &m).unwrap();
        let sigma = p * f.transpose() / f.determinant();
        assert!((sigma - cauchy_stress(&f, &m).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn stress_and_tangent_are_energy_derivatives() {
        let f0 = Matrix2::new(1.15, 0.12, -0.08, 0.93);
        for k in [Kinematics::PlaneStrain, Kinematics::PlaneStress] {
            let m = steel_like().with_kinematics(k);
            let (p, a) = piola_and_tangent(&f0, &m).unwrap();
            let h = 1e-6;
            for i in 0..2 {
                for jj in 0..2 {
                    let mut fp = f0;
                    fp[(i, jj)] += h;
                    let mut fm = f0;
                    fm[(i, jj)] -= h;
                    let dw = (strain_energy(&fp, &m).unwrap() - strain_energy(&fm, &m).unwrap()) / (2.0 * h);
                    assert!((dw - p[(i, jj)]).abs() < 1e-5 * p.norm().max(1.0), "{k:?}");
                    let (pp, _) = piola_and_tangent(&fp, &m).unwrap();
                    let (pm, _) = piola_and_tangent(&fm, &m).unwrap();
                    let col = (pp - pm) / (2.0 * h);
                    for r in 0..2 {
                        for s in 0..2 {
                            let exact = a[(fidx(r, s), fidx(i, jj))];
                            assert!((col[(r, s)] - exact).abs() < 1e-5 * a.norm(), "{k:?}");
                        }
                    }
                }
            }
        }
    }
}
