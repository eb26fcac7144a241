//! Virtual dimensions of punctured holomorphic spheres.
//!
//! Inside the ellipsoid (positive ends only), a sphere through `k` points:
//! `−2 + Σ(μ_CZ + 1) − 2k`. Outside it, in degree `m` (negative ends only):
//! `Σ(1 − μ_CZ) + 6m − 2 − 2k`. In the symplectization the Fredholm index of
//! a sphere is `(n⁺ + n⁻ − 2) + Σμ⁺ − Σμ⁻`.

use crate::error::{Error, Result};
use crate::reeb::{cz_index, EllipsoidSpec};
use crate::sft::building::{Orbit, Puncture, Sign};

fn check_signs(asym: &[Puncture], sign: Sign) -> Result<()> {
    if asym.iter().any(|p| p.sign != sign) {
        return Err(Error::domain(format!("all punctures must be {sign:?}").to_lowercase()));
    }
    Ok(())
}

fn cz(spec: &EllipsoidSpec, o: &Orbit) -> Result<i64> {
    cz_index(spec, o.axis, o.mult)
}

pub fn virtdim_inside(spec: &EllipsoidSpec, asym: &[Puncture], k_points: u32) -> Result<i64> {
    check_signs(asym, Sign::Positive)?;
    let mut sum = 0;
    for p in asym {
        sum += cz(spec, &p.orbit)? + 1;
    }
    Ok(-2 + sum - 2 * k_points as i64)
}

pub fn virtdim_outside(spec: &EllipsoidSpec, asym: &[Puncture], k_points: u32, m: u32) -> Result<i64> {
    check_signs(asym, Sign::Negative)?;
    if m == 0 {
        return Err(Error::domain("outside components have degree m ≥ 1"));
    }
    let mut sum = 0;
    for p in asym {
        sum += 1 - cz(spec, &p.orbit)?;
    }
    Ok(sum + 6 * m as i64 - 2 - 2 * k_points as i64)
}

/// Fredholm index of a sphere in the symplectization.
pub fn symplectization_index(spec: &EllipsoidSpec, positive: &[Orbit], negative: &[Orbit]) -> Result<i64> {
    let mut ind = (positive.len() + negative.len()) as i64 - 2;
    for o in positive {
        ind += cz(spec, o)?;
    }
    for o in negative {
        ind -= cz(spec, o)?;
    }
    Ok(ind)
}

pub(crate) fn inside_dim(spec: &EllipsoidSpec, positive: &[Orbit], k: u32) -> Result<i64> {
    let asym: Vec<Puncture> = positive.iter().map(|o| Puncture::positive(*o)).collect();
    virtdim_inside(spec, &asym, k)
}

pub(crate) fn outside_dim(spec: &EllipsoidSpec, negative: &[Orbit], k: u32, m: u32) -> Result<i64> {
    let asym: Vec<Puncture> = negative.iter().map(|o| Puncture::negative(*o)).collect();
    virtdim_outside(spec, &asym, k, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn hard2() -> EllipsoidSpec {
        EllipsoidSpec::new(q(17, 10), q(41, 100)).unwrap()
    }

    #[test]
    fn anchors() {
        let s = hard2();
        assert_eq!(virtdim_inside(&s, &[Puncture::positive(Orbit::plus(1))], 5).unwrap(), 0);
        assert_eq!(virtdim_inside(&s, &[Puncture::positive(Orbit::minus(1))], 1).unwrap(), 0);
        assert_eq!(virtdim_outside(&s, &[Puncture::negative(Orbit::minus(1))], 1, 1).unwrap(), 0);
        assert_eq!(virtdim_outside(&s, &[Puncture::negative(Orbit::plus(1))], 0, 2).unwrap(), 0);
        assert_eq!(virtdim_outside(&s, &[], 2, 1).unwrap(), 0);
    }

    #[test]
    fn puncture_adds_index_plus_one() {
        let s = hard2();
        let base = [Puncture::positive(Orbit::minus(1))];
        let more = [Puncture::positive(Orbit::minus(1)), Puncture::positive(Orbit::minus(3))];
        let d0 = virtdim_inside(&s, &base, 1).unwrap();
        let d1 = virtdim_inside(&s, &more, 1).unwrap();
        assert_eq!(d1 - d0, cz_index(&s, crate::reeb::Axis::Minus, 3).unwrap() + 1);
    }

    #[test]
    fn wrong_signs_rejected() {
        let s = hard2();
        assert!(virtdim_inside(&s, &[Puncture::negative(Orbit::minus(1))], 0).is_err());
        assert!(virtdim_outside(&s, &[Puncture::positive(Orbit::minus(1))], 0, 1).is_err());
        assert!(virtdim_outside(&s, &[], 0, 0).is_err());
    }

    #[test]
    fn cylinder_index() {
        let s = hard2();
        assert_eq!(symplectization_index(&s, &[Orbit::minus(1)], &[Orbit::minus(1)]).unwrap(), 0);
        assert_eq!(symplectization_index(&s, &[Orbit::plus(1)], &[Orbit::minus(1)]).unwrap(), 8);
    }
}
