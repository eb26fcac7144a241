//! Fixed-size 4×4 helpers for form matrices and Jacobians.

pub type Vec4 = [f64; 4];
pub type Mat4 = [[f64; 4]; 4];

pub const ZERO4: Mat4 = [[0.0; 4]; 4];

pub fn transpose(m: &Mat4) -> Mat4 {
    let mut t = ZERO4;
    for i in 0..4 {
        for j in 0..4 {
            t[i][j] = m[j][i];
        }
    }
    t
}

pub fn matmul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut c = ZERO4;
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|l| a[i][l] * b[l][j]).sum();
        }
    }
    c
}

/// `Jᵀ Ω J`: the matrix of the pullback of the 2-form `Ω` by a map with Jacobian `J`.
pub fn pullback_2form(jac: &Mat4, omega: &Mat4) -> Mat4 {
    matmul(&transpose(jac), &matmul(omega, jac))
}

/// `Jᵀ β`: the pullback of a covector.
pub fn pullback_1form(jac: &Mat4, beta: &Vec4) -> Vec4 {
    let mut out = [0.0; 4];
    for (j, o) in out.iter_mut().enumerate() {
        *o = (0..4).map(|i| beta[i] * jac[i][j]).sum();
    }
    out
}

/// `uᵀ Ω v`.
pub fn bilinear(omega: &Mat4, u: &Vec4, v: &Vec4) -> f64 {
    let mut acc = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            acc += u[i] * omega[i][j] * v[j];
        }
    }
    acc
}

pub fn scale(m: &Mat4, c: f64) -> Mat4 {
    let mut out = *m;
    out.iter_mut().flatten().for_each(|x| *x *= c);
    out
}

pub fn max_abs_diff(a: &Mat4, b: &Mat4) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Determinant by cofactor expansion along the first row.
pub fn det4(m: &Mat4) -> f64 {
    fn det3(a: [[f64; 3]; 3]) -> f64 {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    }
    let mut det = 0.0;
    for col in 0..4 {
        let mut minor = [[0.0; 3]; 3];
        for (r, row) in m.iter().enumerate().skip(1) {
            let mut c2 = 0;
            for (c, &x) in row.iter().enumerate() {
                if c == col {
                    continue;
                }
                minor[r - 1][c2] = x;
                c2 += 1;
            }
        }
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        det += sign * m[0][col] * det3(minor);
    }
    det
}

/// Wraps an angle difference into `(-π, π]`.
pub fn wrap_angle_diff(d: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut x = d.rem_euclid(tau);
    if x > std::f64::consts::PI {
        x -= tau;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_of_diagonal_and_permutation() {
        let mut m = ZERO4;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = (i + 1) as f64;
        }
        assert_eq!(det4(&m), 24.0);
        let p: Mat4 = [
            [0.0, 1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        assert_eq!(det4(&p), -1.0);
    }

    #[test]
    fn wrap_is_symmetric() {
        assert!((wrap_angle_diff(2.0 * std::f64::consts::PI + 0.1) - 0.1).abs() < 1e-12);
        assert!((wrap_angle_diff(-0.1) + 0.1).abs() < 1e-12);
    }
}
