//! Recovers the map from the quaternionic residual to the classical
//! residuals by brute force: every sign assignment is tried on random
//! non-solution states, and exactly one must reproduce the classical values.

use qmaxwell::forms::{classical_residuals, decompose_residual, maxmain_residual, EMState};
use qmaxwell::harness::random::{coeff, rng};
use qmaxwell::jet::{Jet4, VecFieldSample};
use qmaxwell::medium::{MediumSample, UnitSystem};
use qmaxwell::{Point4, Vec3};
use rand::Rng;

fn jet(r: &mut impl Rng) -> Jet4 {
    Jet4::new(coeff(r), [0, 1, 2, 3].map(|_| coeff(r)))
}

fn field(r: &mut impl Rng) -> VecFieldSample {
    VecFieldSample([0, 1, 2].map(|_| jet(r)))
}

fn medium(r: &mut impl Rng, units: UnitSystem) -> MediumSample {
    let positive = |r: &mut dyn rand::RngCore| {
        let g = [0, 1, 2].map(|_| r.gen_range(-1.0..=1.0));
        Jet4::new(r.gen_range(0.2..=5.0), [0.0, g[0], g[1], g[2]])
    };
    let (e, m) = (positive(r), positive(r));
    MediumSample::from_relative(e, m, units, Point4::default()).unwrap()
}

/// Candidate classical residuals for signs `s` (each +1 or -1).
fn candidate(s: [f64; 4], r: &qmaxwell::forms::MaxmainResidual, m: &MediumSample) -> ([f64; 3], [f64; 3], f64, f64) {
    let (se, sm) = (m.eps.sqrt(), m.mu.sqrt());
    let vr = r.vec_re();
    let vi = r.vec_im();
    (
        [0, 1, 2].map(|k| s[0] * vr[k] / sm),
        [0, 1, 2].map(|k| s[1] * vi[k] / se),
        s[2] * se * r.sc_im(),
        s[3] * sm * r.sc_re(),
    )
}

fn rel(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(f64::MIN_POSITIVE)
}

fn deviation(c: ([f64; 3], [f64; 3], f64, f64), r1: Vec3, r2: Vec3, r3: f64, r4: f64) -> f64 {
    let mut worst = 0.0_f64;
    for k in 0..3 {
        worst = worst
            .max(rel(c.0[k], r1[k], r1.max_abs()))
            .max(rel(c.1[k], r2[k], r2.max_abs()));
    }
    worst.max(rel(c.2, r3, r3.abs())).max(rel(c.3, r4, r4.abs()))
}

fn signs(mask: u32) -> [f64; 4] {
    [0, 1, 2, 3].map(|b| if mask & (1 << b) == 0 { 1.0 } else { -1.0 })
}

#[test]
fn unique_sign_assignment_matches_the_encoded_table() {
    let mut r = rng(2024, 0);
    let mut survivors: Vec<u32> = (0..16).collect();
    for n in 0..1000 {
        let units = if n % 4 == 3 {
            UnitSystem::SI
        } else {
            UnitSystem::NATURAL
        };
        let m = medium(&mut r, units);
        let state = EMState {
            e: field(&mut r),
            h: field(&mut r),
            rho: jet(&mut r),
            j: field(&mut r),
        };
        let c = classical_residuals(&state, &m);
        let res = maxmain_residual(&state, &m);
        survivors.retain(|&mask| deviation(candidate(signs(mask), &res, &m), c.r1, c.r2, c.r3, c.r4) <= 1e-9);

        let d = decompose_residual(&res, &m);
        let dev = deviation(
            ([0, 1, 2].map(|k| d.r1[k]), [0, 1, 2].map(|k| d.r2[k]), d.r3, d.r4),
            c.r1,
            c.r2,
            c.r3,
            c.r4,
        );
        assert!(dev <= 1e-9, "state {n}: encoded decomposition off by {dev:e}");
    }
    assert_eq!(survivors.len(), 1, "surviving sign assignments: {survivors:?}");
    // r1 = -Re vec / sqrt(mu), r2 = Im vec / sqrt(eps), r3 = -sqrt(eps) Im sc, r4 = sqrt(mu) Re sc
    assert_eq!(signs(survivors[0]), [-1.0, 1.0, -1.0, 1.0]);
}
