//! Finite-difference Jacobians and pullback residuals of differential forms.

use crate::error::{Error, Result};
use crate::linalg::{max_abs_diff, pullback_1form, pullback_2form, wrap_angle_diff, Mat4, Vec4, ZERO4};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    /// `(f(x+h) − f(x−h)) / 2h`, error `O(h²)`.
    Central2,
    /// Five-point stencil, error `O(h⁴)`.
    Central4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdOptions {
    pub step: f64,
    pub stencil: Stencil,
    /// Output coordinates that are angles; their differences are reduced
    /// to `(−π, π]` before dividing by the step.
    pub periodic_out: [bool; 4],
}

impl FdOptions {
    pub fn central(step: f64) -> Self {
        FdOptions { step, stencil: Stencil::Central2, periodic_out: [false; 4] }
    }

    pub fn periodic(mut self, mask: [bool; 4]) -> Self {
        self.periodic_out = mask;
        self
    }

    pub fn fourth_order(mut self) -> Self {
        self.stencil = Stencil::Central4;
        self
    }
}

/// Angle mask for maps into bundle coordinates `(s, θ, A, φ)` or action-angle
/// coordinates `(A₁, φ₁, A₂, φ₂)`.
pub const BUNDLE_ANGLES: [bool; 4] = [false, true, false, true];

fn diff(a: &Vec4, b: &Vec4, periodic: &[bool; 4]) -> Vec4 {
    let mut d = [0.0; 4];
    for i in 0..4 {
        d[i] = a[i] - b[i];
        if periodic[i] {
            d[i] = wrap_angle_diff(d[i]);
        }
    }
    d
}

/// Jacobian `J[i][j] = ∂map_i/∂x_j` at `p`.
pub fn jacobian_fd<M>(map: &M, p: &Vec4, opts: &FdOptions) -> Result<Mat4>
where
    M: Fn(&Vec4) -> Result<Vec4>,
{
    let h = opts.step;
    if !(h > 0.0) {
        return Err(Error::Config(format!("finite-difference step must be positive, got {h}")));
    }
    let at = |j: usize, t: f64| {
        let mut x = *p;
        x[j] += t;
        map(&x)
    };
    let mut jac = ZERO4;
    for j in 0..4 {
        let col = match opts.stencil {
            Stencil::Central2 => {
                let d = diff(&at(j, h)?, &at(j, -h)?, &opts.periodic_out);
                d.map(|x| x / (2.0 * h))
            }
            Stencil::Central4 => {
                let base = at(j, -2.0 * h)?;
                let d1 = diff(&at(j, h)?, &base, &opts.periodic_out);
                let dm1 = diff(&at(j, -h)?, &base, &opts.periodic_out);
                let d2 = diff(&at(j, 2.0 * h)?, &base, &opts.periodic_out);
                let mut c = [0.0; 4];
                for i in 0..4 {
                    // -f(2h) + 8f(h) - 8f(-h) + f(-2h), measured from f(-2h)
                    c[i] = (-d2[i] + 8.0 * d1[i] - 8.0 * dm1[i]) / (12.0 * h);
                }
                c
            }
        };
        for (row, x) in jac.iter_mut().zip(col) {
            row[j] = x;
        }
    }
    Ok(jac)
}

/// `max_ij |(map* target)(e_i, e_j) − reference(e_i, e_j)|` at `p`, where
/// `target` is the form matrix on the image side evaluated at `map(p)`.
pub fn pullback_residual<M, F>(
    map: &M,
    p: &Vec4,
    target: F,
    reference: &Mat4,
    opts: &FdOptions,
) -> Result<f64>
where
    M: Fn(&Vec4) -> Result<Vec4>,
    F: Fn(&Vec4) -> Mat4,
{
    let jac = jacobian_fd(map, p, opts)?;
    let image = map(p)?;
    Ok(max_abs_diff(&pullback_2form(&jac, &target(&image)), reference))
}

/// 1-form analogue of [`pullback_residual`].
pub fn pullback_1form_residual<M, F>(
    map: &M,
    p: &Vec4,
    target: F,
    reference: &Vec4,
    opts: &FdOptions,
) -> Result<f64>
where
    M: Fn(&Vec4) -> Result<Vec4>,
    F: Fn(&Vec4) -> Result<Vec4>,
{
    let jac = jacobian_fd(map, p, opts)?;
    let image = map(p)?;
    let pulled = pullback_1form(&jac, &target(&image)?);
    Ok(pulled.iter().zip(reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// The standard Darboux form `dx₁∧dy₁ + dx₂∧dy₂` in coordinates `(x₁, y₁, x₂, y₂)`.
pub fn darboux_matrix() -> Mat4 {
    let mut m = ZERO4;
    m[0][1] = 1.0;
    m[1][0] = -1.0;
    m[2][3] = 1.0;
    m[3][2] = -1.0;
    m
}
