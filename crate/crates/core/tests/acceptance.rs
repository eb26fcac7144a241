//! The acceptance criteria, one line each. Runs without the libtest harness
//! so the verdict lines are always printed; exits nonzero if any fails.

mod common;

use std::f64::consts::TAU;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::brute::{brute_survivors, extent, Caps};
use common::{nondegenerate, random_q};
use llab_core::blowup::{
    enumerate_bubble_decompositions, omega_lambda_residual, packing_obstruction, sample_shell, BubbleMode,
    BubbleVerdict, HomologyClass, Packing,
};
use llab_core::bundle::{karshon_model, BundleParams, BundlePoint, EllipsoidChart, LiouvilleSpec, Potential, PotentialTerm, Trig};
use llab_core::flow::{
    flow_closed_form, flow_scaling_residual, integrate_flow, rescaled_time, ConjugationMap, DesingularizedField,
    FlowRequest, Germ, InflationSetup, RescaleProblem,
};
use llab_core::flow::inflation::point_distance;
use llab_core::rational::{q, Q};
use llab_core::reeb::{cz_index, Axis, EllipsoidSpec};
use llab_core::sft::{
    classify_conic_degeneration, classify_line_degeneration, enumerate_buildings, virtdim_outside, EnumerationRequest,
    EvalConfig, FilterConfig, Layer, Orbit, Puncture,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn hard2() -> EllipsoidSpec {
    EllipsoidSpec::new(q(17, 10), q(41, 100)).unwrap()
}

fn cz_table() -> Outcome {
    let s = hard2();
    let minus: Vec<i64> = (1..=5).map(|m| cz_index(&s, Axis::Minus, m).unwrap()).collect();
    let plus = cz_index(&s, Axis::Plus, 1).unwrap();
    ensure(minus == [3, 5, 7, 9, 13], || format!("γ- indices {minus:?}"))?;
    ensure(plus == 11, || format!("γ+ index {plus}"))?;
    Ok(format!("γ- 1..5 → {minus:?}, γ+ → {plus}"))
}

fn virtdim_anchor() -> Outcome {
    let v = virtdim_outside(&hard2(), &[Puncture::negative(Orbit::minus(1))], 1, 1).map_err(|e| e.to_string())?;
    ensure(v == 0, || format!("virtdim = {v}"))?;
    Ok("virtdim_outside({γ-}, 1 point, m = 1) = 0".into())
}

fn line_classification() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut done = 0;
    let mut smallest = q(1, 1);
    while done < 100 {
        let a_plus = random_q(&mut rng, q(1, 20), q(1, 1), 100);
        let a_minus = random_q(&mut rng, q(1, 20), a_plus + q(1, 1000), 100).min(a_plus);
        let spec = EllipsoidSpec::new(a_plus, a_minus).unwrap();
        let cap = (Q::from_integer(1) / a_minus).ceil().to_integer() as u32;
        if !nondegenerate(&spec, cap) {
            continue;
        }
        let rep = classify_line_degeneration(&spec).map_err(|e| format!("{spec}: {e}"))?;
        ensure(rep.outside_configuration == "outside(m=1, -{γ-})", || {
            format!("{spec}: outside layer {}", rep.outside_configuration)
        })?;
        ensure(!rep.cap_limited, || format!("{spec}: multiplicity cap reached"))?;
        smallest = smallest.min(a_minus);
        done += 1;
    }
    Ok(format!("100 specs (a_- down to {smallest}) all give outside(m=1, -{{γ-}})"))
}

fn conic_classification() -> Outcome {
    let s = hard2();
    let rep = classify_conic_degeneration(&s, None).map_err(|e| e.to_string())?;
    ensure(rep.survivors.len() == 1, || format!("{} survivors", rep.survivors.len()))?;
    let c = &rep.survivors[0].candidate;
    ensure(c.levels == 0, || format!("{} intermediate levels", c.levels))?;
    let outside: Vec<_> = c.outside_components().collect();
    ensure(outside.len() == 1 && outside[0].degree == 2 && outside[0].negative == [Orbit::plus(1)], || {
        format!("outside layer {}", c.outside_configuration())
    })?;
    let expected_area = Q::from_integer(2) - q(17, 10);
    let area = llab_core::sft::component_area(&s, outside[0]);
    ensure(area == expected_area, || format!("outside area {area}"))?;
    let inside: Vec<_> = c.inside_components().collect();
    ensure(inside.len() == 1 && inside[0].positive == [Orbit::plus(1)] && inside[0].points == 5, || {
        format!("inside layer {c}")
    })?;
    ensure(c.components.iter().all(|x| x.layer != Layer::Intermediate), || "intermediate component".into())?;
    Ok(format!("unique survivor {c}, outside area {area}"))
}

fn enumerator_soundness() -> Outcome {
    let configs = [(1, 1), (0, 0), (1, 0), (0, 1), (2, 0), (0, 2)];
    let specs = [(q(9, 10), q(7, 10), 1u32), (q(7, 10), q(1, 2), 1), (q(9, 10), q(2, 5), 2)];
    let mut compared = 0;
    let mut generated = 0;
    let mut survivors = 0;
    for (ap, am, levels) in specs {
        let spec = EllipsoidSpec::new(ap, am).unwrap();
        for (pin, pout) in configs {
            let toggles: &[bool] = if levels > 1 { &[false] } else { &[false, true] };
            for &index in toggles {
                let filters = FilterConfig { ball_capacity: None, symplectization_index: index };
                let req = EnumerationRequest::new(1, pin, pout).with_mult_cap(3).with_filters(filters.clone());
                let res = enumerate_buildings(&spec, &req).map_err(|e| e.to_string())?;
                let caps = Caps { interface: 2, levels, mult_cap: 3 };
                for s in &res.survivors {
                    let (w, l) = extent(&s.candidate);
                    ensure(w <= caps.interface && l <= caps.levels, || {
                        format!("{spec}: survivor {} outside the oracle caps", s.description)
                    })?;
                }
                let cfg = EvalConfig { degree: 1, points_inside: pin, points_outside: pout, filters };
                let brute = brute_survivors(&spec, &cfg, caps);
                let mine: std::collections::BTreeSet<String> = res.survivor_keys().into_iter().collect();
                ensure(mine == brute.survivors, || {
                    format!(
                        "{spec} ({pin},{pout}) index={index}: enumerator {mine:?} vs oracle {:?}",
                        brute.survivors
                    )
                })?;
                compared += 1;
                generated += brute.generated;
                survivors += mine.len();
            }
        }
    }
    Ok(format!("{compared} runs equal; {generated} oracle candidates, {survivors} survivors in total"))
}

fn bubbling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut rows = 0;
    for _ in 0..20 {
        let lam = random_q(&mut rng, q(0, 1), q(1, 1), 100);
        let t = random_q(&mut rng, q(0, 1), q(1, 1) + q(1, 1000), 100).min(q(1, 1));
        let target = HomologyClass::new(1, 1);
        let rep = enumerate_bubble_decompositions(target, lam, t, BubbleMode::Family).map_err(|e| e.to_string())?;
        ensure(rep.survivors.is_empty(), || format!("λ={lam}, t={t}: {} survivors", rep.survivors.len()))?;
        ensure(rep.trivial_admissible, || format!("λ={lam}, t={t}: L - E itself rejected"))?;
        for c in &rep.candidates {
            let genus = Q::new(-c.k * (c.k - 1), 2);
            ensure(c.verdict == BubbleVerdict::Adjunction && c.virtual_genus == genus && genus < q(0, 1), || {
                format!("λ={lam}, t={t}: k={} has genus {} and verdict {:?}", c.k, c.virtual_genus, c.verdict)
            })?;
        }
        let general = enumerate_bubble_decompositions(target, lam, t, BubbleMode::General { max_m: 4, max_parts: 4 })
            .map_err(|e| e.to_string())?;
        ensure(general.survivors.is_empty(), || format!("λ={lam}, t={t}: general mode survivors"))?;
        rows += rep.candidates.len();
    }
    Ok(format!("20 (λ, t) pairs, {rows} family rows, all killed by adjunction"))
}

fn closed_form_s(k: f64, s: f64, t: f64) -> f64 {
    (1.0 - (-t).exp() * (1.0 - k * s)) / k
}

fn flow_correctness() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 1..=3u32 {
        let params = BundleParams::disc(k, q(1, 2)).unwrap();
        let start = BundlePoint::new(0.05 / k as f64, 0.4, 0.2, 1.1);
        for t in [0.5, 1.0, 2.0] {
            let req = FlowRequest::new(params.clone(), LiouvilleSpec::standard(), start, t);
            let end = integrate_flow(&req).map_err(|e| e.to_string())?;
            let exact = flow_closed_form(&params, t, &start).map_err(|e| e.to_string())?;
            let oracle = closed_form_s(k as f64, start.s, t);
            ensure((exact.s - oracle).abs() < 1e-14, || format!("closed form disagrees with oracle at k={k}, t={t}"))?;
            worst = worst.max((end.s - exact.s).abs());
        }
    }
    ensure(worst < 1e-8, || format!("max |Δs| = {worst:e}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let params = BundleParams::disc(1, q(1, 2)).unwrap();
    let mut res: f64 = 0.0;
    for _ in 0..100 {
        let p = BundlePoint::new(rng.gen_range(0.02..0.5), rng.gen_range(0.0..TAU), rng.gen_range(0.02..0.48), rng.gen_range(0.0..TAU));
        let req = FlowRequest::new(params.clone(), LiouvilleSpec::standard(), p, 1.0);
        res = res.max(flow_scaling_residual(&req, 1e-4).map_err(|e| e.to_string())?);
    }
    ensure(res < 1e-5, || format!("scaling residual {res:e}"))?;
    Ok(format!("max |Δs| = {worst:.2e}, scaling residual = {res:.2e}"))
}

fn chart_symplecticity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let params = BundleParams::disc(2, q(1, 3)).unwrap();
    let chart = EllipsoidChart::new(&params).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = BundlePoint::new(rng.gen_range(0.0..0.49), rng.gen_range(0.0..TAU), rng.gen_range(0.0..0.33), rng.gen_range(0.0..TAU));
        worst = worst.max(chart.pullback_residual(&p, 1e-4).map_err(|e| e.to_string())?);
    }
    ensure(worst < 1e-8, || format!("chart residual {worst:e}"))?;
    let lam = q(1, 2);
    let samples = sample_shell(lam, q(1, 2), 1000, &mut rng).map_err(|e| e.to_string())?;
    let res = omega_lambda_residual(lam, &samples, 1e-3).map_err(|e| e.to_string())?;
    ensure(res.max_residual < 1e-6, || format!("blow-up residual {:e}", res.max_residual))?;
    ensure(res.evaluated >= 990, || format!("only {} of 1000 shell samples evaluated", res.evaluated))?;
    Ok(format!(
        "chart {worst:.2e}, blow-up {:.2e} ({} evaluated, {} skipped near the sphere)",
        res.max_residual,
        res.evaluated,
        res.skipped.len()
    ))
}

fn conjugation() -> Outcome {
    let params = BundleParams::disc(1, q(1, 2)).unwrap();
    let mu = Potential::new(vec![
        PotentialTerm::new(0.02).r(1).theta(1, Trig::Cos),
        PotentialTerm::new(0.01).r(2).area(1).phi(1, Trig::Sin),
    ]);
    let spec = LiouvilleSpec::standard().with_mu(mu);
    let sup = spec.perturbation_sup(0.9, 0.5, 12);
    ensure(sup <= 0.05, || format!("perturbation sup-norm {sup}"))?;
    let psi = ConjugationMap::new(&params, &spec);
    let mut res: f64 = 0.0;
    for p in [BundlePoint::new(0.3, 1.0, 0.2, 2.0), BundlePoint::new(0.1, 4.0, 0.4, 0.5), BundlePoint::new(0.6, 2.5, 0.1, 5.0)] {
        res = res.max(psi.symplectic_residual(&p, 1e-4).map_err(|e| e.to_string())?);
    }
    ensure(res < 1e-4, || format!("symplectic residual {res:e}"))?;
    let mut devs = vec![];
    for s in [1e-2, 1e-4, 1e-6] {
        devs.push((psi.radial_ratio(&BundlePoint::new(s, 1.0, 0.2, 2.0)).map_err(|e| e.to_string())? - 1.0).abs());
    }
    ensure(devs.windows(2).all(|w| w[1] <= w[0]) && devs.iter().all(|d| *d < 0.05), || format!("radial deviations {devs:?}"))?;
    let field = DesingularizedField::new(&params, &spec);
    let t = 1e-6;
    let tau = rescaled_time(&RescaleProblem::new(1.0, 0.2, 2.0, t).unwrap(), &field, 1e-10).map_err(|e| e.to_string())?;
    let ratio = tau / (2.0 * t.sqrt());
    ensure((ratio - 1.0).abs() < 0.01, || format!("τ/2√t = {ratio}"))?;
    let devs: Vec<String> = devs.iter().map(|d| format!("{d:.2e}")).collect();
    Ok(format!("residual {res:.2e}, |r ratio − 1| = [{}], τ/2√t = {ratio:.5}", devs.join(", ")))
}

fn inflation() -> Outcome {
    use llab_core::bundle::{BaseForm, Cutoff};
    let params = BundleParams::disc(1, q(1, 2)).unwrap();
    let source = LiouvilleSpec::with_vartheta(BaseForm::rotation(0.01));
    let h = Potential::new(vec![
        PotentialTerm::new(0.02).r(2).theta(1, Trig::Sin),
        PotentialTerm::new(0.01).area(1).phi(1, Trig::Cos),
    ])
    .with_fiber_cutoff(Cutoff::new(0.3, 0.4).unwrap());
    let setup = InflationSetup::new(params, source.clone(), source.with_mu(h), Germ::FiberRotation(0.3), 0.05).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let x = BundlePoint::new(rng.gen_range(0.1..0.28), rng.gen_range(0.0..TAU), rng.gen_range(0.05..0.45), rng.gen_range(0.0..TAU));
        let (lo, hi) = setup.admissible_times(&x).map_err(|e| e.to_string())?.ok_or("point in germ domain")?;
        let a = setup.embed(&x, Some(lo + 0.15 * (hi - lo))).map_err(|e| e.to_string())?;
        let b = setup.embed(&x, Some(lo + 0.85 * (hi - lo))).map_err(|e| e.to_string())?;
        worst = worst.max(point_distance(&a, &b));
    }
    ensure(worst < 1e-6, || format!("max distance {worst:e}"))?;
    Ok(format!("max distance between images {worst:.2e} over 100 points"))
}

fn packing() -> Outcome {
    let half = q(1, 2);
    ensure(packing_obstruction(half, half).unwrap() == Packing::Admissible, || "(1/2, 1/2) rejected".into())?;
    ensure(packing_obstruction(half, half + q(1, 1000)).unwrap() == Packing::Obstructed, || {
        "(1/2, 1/2 + 1/1000) admitted".into()
    })?;
    let m = karshon_model(16).map_err(|e| e.to_string())?;
    ensure(m.capacity_sum == q(1, 1), || format!("capacity sum {}", m.capacity_sum))?;
    ensure(m.interior_overlaps == 0, || format!("{} interior overlaps", m.interior_overlaps))?;
    Ok("(1/2,1/2) admissible, (1/2,501/1000) obstructed, model capacity sum 1".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("CZ table", cz_table, Duration::from_secs(1)),
        ("virtual-dimension anchor", virtdim_anchor, Duration::from_secs(1)),
        ("line classification", line_classification, Duration::from_secs(30)),
        ("conic classification", conic_classification, Duration::from_secs(10)),
        ("enumerator soundness", enumerator_soundness, Duration::from_secs(60)),
        ("bubbling exclusion", bubbling, Duration::from_secs(5)),
        ("flow correctness", flow_correctness, Duration::from_secs(30)),
        ("chart symplecticity", chart_symplecticity, Duration::from_secs(30)),
        ("conjugation map", conjugation, Duration::from_secs(60)),
        ("inflation time independence", inflation, Duration::from_secs(30)),
        ("packing boundary", packing, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *budget => Err(format!("{detail}; over the {budget:?} budget")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({:.2?}) {detail}", i + 1, elapsed),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({:.2?}) {why}", i + 1, elapsed);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 11 acceptance criteria passed");
}
