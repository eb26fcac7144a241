//! The maximal two-ball packing of the degree-one bundle over the sphere.
//!
//! The sphere of area 1 is cut into two hemispheres of area `1/2`. Over each
//! hemisphere the bundle is the ellipsoid `E̊(1/2, 1)`, which contains the
//! ball of capacity `1/2`. The two closed balls meet along the equator of the
//! zero-section, the circle `{A₁ = 1/2, A₂ = 0}` of either chart.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::blowup::{packing_obstruction, Packing};
use crate::bundle::{omega0_matrix, BundleParams, BundlePoint, EllipsoidChart};
use crate::error::Result;
use crate::flow::pullback::{pullback_residual, FdOptions, BUNDLE_ANGLES};
use crate::linalg::Vec4;
use crate::rational::{q, q_str, real_str, Q};

/// Where the two closed balls touch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContactCircle {
    /// Fiber coordinate of the circle (on the zero-section).
    #[serde(with = "real_str")]
    pub s: f64,
    /// Base area coordinate of the circle in either chart (the equator).
    #[serde(with = "q_str")]
    pub area: Q,
    /// The circle in action-angle coordinates of either chart: `(A₁, A₂)`.
    #[serde(with = "q_str")]
    pub a1: Q,
    #[serde(with = "q_str")]
    pub a2: Q,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KarshonModel {
    pub charts: [EllipsoidChart; 2],
    /// Capacity of each of the two inscribed balls.
    #[serde(with = "q_str")]
    pub ball_capacity: Q,
    /// Sum of the capacities, equal to the sum of squared radii.
    #[serde(with = "q_str")]
    pub capacity_sum: Q,
    pub packing: Packing,
    pub circle: ContactCircle,
    /// Interior samples of one ball found inside the other ball.
    pub interior_overlaps: usize,
    pub interior_samples: usize,
    /// Boundary samples of one ball lying on the boundary of the other.
    pub boundary_contacts: usize,
    /// Largest distance of a contact sample from the circle.
    #[serde(with = "real_str")]
    pub max_contact_offset: f64,
    /// Symplecticity residual of the chart transition.
    #[serde(with = "real_str")]
    pub transition_residual: f64,
}

/// Transition between the northern and southern charts of the degree-`k`
/// bundle over the unit sphere: `(s, θ, A, φ) ↦ (s, θ − kφ, 1 − A, −φ)`.
/// It is an involution.
pub fn hemisphere_transition(k: u32, p: &BundlePoint) -> BundlePoint {
    BundlePoint::new(p.s, p.theta - k as f64 * p.phi, 1.0 - p.area, -p.phi)
}

/// `A₁/c + A₂/c − 1` for the ball of capacity `c = 1/2` in a degree-one chart.
fn ball_level(p: &BundlePoint) -> f64 {
    2.0 * p.area * (1.0 - p.s) + 2.0 * p.s - 1.0
}

/// Builds the model and checks disjointness and contact on an `n`-point grid
/// per coordinate.
pub fn karshon_model(n: usize) -> Result<KarshonModel> {
    let n = n.max(4);
    let params = BundleParams::disc(1, q(1, 2))?;
    let chart = EllipsoidChart::new(&params)?;
    let cap = q(1, 2);
    let packing = packing_obstruction(cap, cap)?;

    let mut interior_samples = 0;
    let mut overlaps = 0;
    let mut contacts = 0;
    let mut max_offset: f64 = 0.0;
    for i in 0..n {
        let s_frac = i as f64 / n as f64;
        for j in 0..n {
            let t = (j as f64 + 0.5) / n as f64;
            for l in 0..n {
                let theta = TAU * l as f64 / n as f64;
                for m in 0..n {
                    let phi = TAU * m as f64 / n as f64;
                    // interior: A₂ = s < 1/2, A₁ < 1/2 − s
                    let s = 0.5 * (i as f64 + 0.5) / n as f64;
                    let a1 = t * (0.5 - s);
                    let inner = BundlePoint::new(s, theta, a1 / (1.0 - s), phi);
                    interior_samples += 1;
                    if ball_level(&hemisphere_transition(1, &inner)) < 0.0 {
                        overlaps += 1;
                    }
                    // boundary, traversed once per (s, θ, φ)
                    if j == 0 {
                        let s = 0.5 * s_frac;
                        let area = (1.0 - 2.0 * s) / (2.0 * (1.0 - s));
                        let b = BundlePoint::new(s, theta, area, phi);
                        let other = hemisphere_transition(1, &b);
                        if ball_level(&other).abs() < 1e-12 {
                            contacts += 1;
                            max_offset = max_offset.max(b.s.abs() + (b.area - 0.5).abs());
                        }
                    }
                }
            }
        }
    }

    let mut transition_residual: f64 = 0.0;
    let map = |x: &Vec4| Ok(hemisphere_transition(1, &BundlePoint::from_array(*x)).to_array());
    for p in [
        BundlePoint::new(0.1, 0.3, 0.4, 1.0),
        BundlePoint::new(0.3, 2.0, 0.45, 4.0),
        BundlePoint::new(0.05, 5.0, 0.2, 0.2),
    ] {
        let r = pullback_residual(
            &map,
            &p.to_array(),
            |y| omega0_matrix(1.0, &BundlePoint::from_array(*y)),
            &omega0_matrix(1.0, &p),
            &FdOptions::central(1e-5).periodic(BUNDLE_ANGLES),
        )?;
        transition_residual = transition_residual.max(r);
    }

    Ok(KarshonModel {
        charts: [chart.clone(), chart],
        ball_capacity: cap,
        capacity_sum: cap + cap,
        packing,
        circle: ContactCircle { s: 0.0, area: q(1, 2), a1: q(1, 2), a2: q(0, 1) },
        interior_overlaps: overlaps,
        interior_samples,
        boundary_contacts: contacts,
        max_contact_offset: max_offset,
        transition_residual,
    })
}
