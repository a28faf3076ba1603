//! Property suites over random parameters and states: algebraic identities
//! between the model variants, conservation and forward invariance, analytic
//! Jacobians against finite differences, scale invariance of the classifier,
//! and closed-form equilibria against independent numerical routes.

use proptest::prelude::*;
use revolt_core::*;
// The crate exports a single-parameter `Result` alias; tests need the std one.
use std::result::Result;

// ---------------------------------------------------------------------------
// Strategies.
// ---------------------------------------------------------------------------

fn rate() -> impl Strategy<Value = f64> {
    (-1.0..1.0f64).prop_map(|e| 10f64.powf(e))
}

/// Dominant rate sets, built constructively: `f_S = h_C (1 + a)`,
/// `f_C = h_S (1 + b)`.
fn dominant_rates() -> impl Strategy<Value = RateParams> {
    (rate(), rate(), 0.01..4.0f64, 0.01..4.0f64).prop_map(|(h_s, h_c, a, b)| {
        RateParams::new(h_c * (1.0 + a), h_s, h_s * (1.0 + b), h_c).unwrap()
    })
}

fn any_rates() -> impl Strategy<Value = RateParams> {
    (rate(), rate(), rate(), rate())
        .prop_map(|(f_s, h_s, f_c, h_c)| RateParams::new(f_s, h_s, f_c, h_c).unwrap())
}

fn interior_split() -> impl Strategy<Value = PopulationSplit> {
    (0.02..0.98f64).prop_map(|s| PopulationSplit::new(s).unwrap())
}

/// Interior fractions of the available ranges, kept away from the boundary
/// so finite-difference stencils stay inside the box.
fn interior_fracs() -> impl Strategy<Value = (f64, f64)> {
    ((0.01..0.99f64), (0.01..0.99f64))
}

// ---------------------------------------------------------------------------
// Algebraic identities.
// ---------------------------------------------------------------------------

proptest! {
    /// The four-variable and two-variable right-hand sides agree under
    /// `SR = S - SB`, `CB = C - CR`.
    #[test]
    fn reduction_identity(
        rates in any_rates(),
        split in interior_split(),
        (u, v) in interior_fracs(),
    ) {
        let sb = u * split.s();
        let cr = v * split.c();
        let reduced = ReducedState::new(sb, cr, &split).unwrap();
        let full = reduced.to_basic(&split).unwrap();
        let (d_sb, d_cr) = rhs_basic(&reduced, &split, &rates).unwrap();
        let d = rhs_full_basic(&full, &rates).unwrap();
        prop_assert!((d[0] - d_sb).abs() <= 1e-14);
        prop_assert!((d[2] - d_cr).abs() <= 1e-14);
    }

    /// Population exchange terms cancel exactly.
    #[test]
    fn full_rhs_conserves_mass_bitwise(
        rates in any_rates(),
        split in interior_split(),
        (u, v) in interior_fracs(),
    ) {
        let reduced = ReducedState::new(u * split.s(), v * split.c(), &split).unwrap();
        let full = reduced.to_basic(&split).unwrap();
        let d = rhs_full_basic(&full, &rates).unwrap();
        prop_assert_eq!(d[0] + d[1], 0.0);
        prop_assert_eq!(d[2] + d[3], 0.0);
    }

    /// Zero intervention degenerates bit-for-bit to the basic model.
    #[test]
    fn direct_zero_intervention_is_bitwise_basic(
        rates in any_rates(),
        split in interior_split(),
        (u, v) in interior_fracs(),
    ) {
        let st = ReducedState::new(u * split.s(), v * split.c(), &split).unwrap();
        let basic = rhs_basic(&st, &split, &rates).unwrap();
        let direct = rhs_direct(&st, &split, &rates, &DirectIntervention::none()).unwrap();
        prop_assert_eq!(basic, direct);
    }

    /// On every face of the valid box the flow points inward or along it.
    #[test]
    fn forward_invariance_basic_and_direct(
        rates in any_rates(),
        split in interior_split(),
        (u, v) in interior_fracs(),
        lambda_s in 0.0..3.0f64,
        lambda_c in 0.0..3.0f64,
    ) {
        let iv = DirectIntervention::new(lambda_s, lambda_c).unwrap();
        let s = split.s();
        let c = split.c();
        let sb = u * s;
        let cr = v * c;
        for (b_sb, b_cr, check_sb, check_cr) in [
            (0.0, cr, Some(false), None),      // SB = 0: dSB >= 0
            (s, cr, Some(true), None),         // SB = S: dSB <= 0
            (sb, 0.0, None, Some(false)),      // CR = 0: dCR >= 0
            (sb, c, None, Some(true)),         // CR = C: dCR <= 0
        ] {
            let st = ReducedState::new(b_sb, b_cr, &split).unwrap();
            for (d_sb, d_cr) in [
                rhs_basic(&st, &split, &rates).unwrap(),
                rhs_direct(&st, &split, &rates, &iv).unwrap(),
            ] {
                if let Some(upper) = check_sb {
                    let inward = if upper { d_sb <= 0.0 } else { d_sb >= 0.0 };
                    prop_assert!(inward, "d_sb = {} on SB face", d_sb);
                }
                if let Some(upper) = check_cr {
                    let inward = if upper { d_cr <= 0.0 } else { d_cr >= 0.0 };
                    prop_assert!(inward, "d_cr = {} on CR face", d_cr);
                }
            }
        }
    }

    /// Opportunistic variant: the box `0 <= SB <= S <= 1`, `0 <= CR <= 1-S`
    /// is forward-invariant, including the coupled faces.
    #[test]
    fn forward_invariance_opportunistic(
        rates in any_rates(),
        alpha in 0.05..5.0f64,
        s in 0.02..0.98f64,
        (u, v) in interior_fracs(),
    ) {
        let op = OpportunisticParams::new(alpha).unwrap();
        let sb = u * s;
        let cr = v * (1.0 - s);

        // SB = 0 and CR = 0 faces are absorbing coordinates.
        let st = OpportunisticState::new(0.0, cr, s).unwrap();
        let (d_sb, _, _) = rhs_opportunistic(&st, &rates, &op).unwrap();
        prop_assert_eq!(d_sb, 0.0);
        let st = OpportunisticState::new(sb, 0.0, s).unwrap();
        let (_, d_cr, _) = rhs_opportunistic(&st, &rates, &op).unwrap();
        prop_assert_eq!(d_cr, 0.0);

        // SB = S: SR' = S' - SB' must not drive SR negative.
        let st = OpportunisticState::new(s, cr, s).unwrap();
        let (d_sb, _, d_s) = rhs_opportunistic(&st, &rates, &op).unwrap();
        prop_assert!(d_s - d_sb >= -1e-15);

        // CR = 1 - S: CB' = -S' - CR' must not drive CB negative.
        let st = OpportunisticState::new(sb, 1.0 - s, s).unwrap();
        let (_, d_cr, d_s) = rhs_opportunistic(&st, &rates, &op).unwrap();
        prop_assert!(-d_s - d_cr >= -1e-15);

        // S boundaries.
        let st = OpportunisticState::new(0.0, cr.min(1.0), 0.0).unwrap();
        let (_, _, d_s) = rhs_opportunistic(&st, &rates, &op).unwrap();
        prop_assert!(d_s >= 0.0);
        let st = OpportunisticState::new(sb.min(1.0), 0.0, 1.0).unwrap();
        let (_, _, d_s) = rhs_opportunistic(&st, &rates, &op).unwrap();
        prop_assert!(d_s <= 0.0);
    }
}

// ---------------------------------------------------------------------------
// Jacobians against central finite differences.
// ---------------------------------------------------------------------------

fn fd_step() -> f64 {
    1e-6
}

fn check2(analytic: [[f64; 2]; 2], fd: [[f64; 2]; 2]) -> Result<(), TestCaseError> {
    let scale = analytic
        .iter()
        .flatten()
        .fold(1.0f64, |m, x| m.max(x.abs()));
    for i in 0..2 {
        for j in 0..2 {
            prop_assert!(
                (analytic[i][j] - fd[i][j]).abs() <= 1e-6 * scale,
                "entry ({i},{j}): {} vs {}",
                analytic[i][j],
                fd[i][j]
            );
        }
    }
    Ok(())
}

proptest! {
    #[test]
    fn jacobian_basic_matches_finite_differences(
        rates in any_rates(),
        split in interior_split(),
        (u, v) in interior_fracs(),
    ) {
        let h = fd_step();
        let sb = h + u * (split.s() - 2.0 * h);
        let cr = h + v * (split.c() - 2.0 * h);
        let st = ReducedState::new(sb, cr, &split).unwrap();
        let analytic = jacobian_basic(&st, &split, &rates).unwrap();

        let f = |sb: f64, cr: f64| {
            let st = ReducedState::new(sb, cr, &split).unwrap();
            rhs_basic(&st, &split, &rates).unwrap()
        };
        let fd = [
            [
                (f(sb + h, cr).0 - f(sb - h, cr).0) / (2.0 * h),
                (f(sb, cr + h).0 - f(sb, cr - h).0) / (2.0 * h),
            ],
            [
                (f(sb + h, cr).1 - f(sb - h, cr).1) / (2.0 * h),
                (f(sb, cr + h).1 - f(sb, cr - h).1) / (2.0 * h),
            ],
        ];
        check2(analytic, fd)?;
    }

    #[test]
    fn jacobian_direct_matches_finite_differences(
        rates in any_rates(),
        split in interior_split(),
        (u, v) in interior_fracs(),
        lambda_s in 0.0..2.0f64,
        lambda_c in 0.0..2.0f64,
    ) {
        let iv = DirectIntervention::new(lambda_s, lambda_c).unwrap();
        let h = fd_step();
        let sb = h + u * (split.s() - 2.0 * h);
        let cr = h + v * (split.c() - 2.0 * h);
        let st = ReducedState::new(sb, cr, &split).unwrap();
        let analytic = jacobian_direct(&st, &split, &rates, &iv).unwrap();

        let f = |sb: f64, cr: f64| {
            let st = ReducedState::new(sb, cr, &split).unwrap();
            rhs_direct(&st, &split, &rates, &iv).unwrap()
        };
        let fd = [
            [
                (f(sb + h, cr).0 - f(sb - h, cr).0) / (2.0 * h),
                (f(sb, cr + h).0 - f(sb, cr - h).0) / (2.0 * h),
            ],
            [
                (f(sb + h, cr).1 - f(sb - h, cr).1) / (2.0 * h),
                (f(sb, cr + h).1 - f(sb, cr - h).1) / (2.0 * h),
            ],
        ];
        check2(analytic, fd)?;
    }

    #[test]
    fn jacobian_opportunistic_matches_finite_differences(
        rates in any_rates(),
        alpha in 0.05..5.0f64,
        s in 0.1..0.9f64,
        (u, v) in interior_fracs(),
    ) {
        let op = OpportunisticParams::new(alpha).unwrap();
        let h = fd_step();
        let sb = h + u * (s - 2.0 * h);
        let cr = h + v * (1.0 - s - 2.0 * h);
        let st = OpportunisticState::new(sb, cr, s).unwrap();
        let analytic = jacobian_opportunistic(&st, &rates, &op).unwrap();

        let f = |sb: f64, cr: f64, s: f64| {
            let st = OpportunisticState::new(sb, cr, s).unwrap();
            let (a, b, c) = rhs_opportunistic(&st, &rates, &op).unwrap();
            [a, b, c]
        };
        let mut fd = [[0.0; 3]; 3];
        let plus_minus = [
            (f(sb + h, cr, s), f(sb - h, cr, s)),
            (f(sb, cr + h, s), f(sb, cr - h, s)),
            (f(sb, cr, s + h), f(sb, cr, s - h)),
        ];
        for (j, (p, m)) in plus_minus.iter().enumerate() {
            for i in 0..3 {
                fd[i][j] = (p[i] - m[i]) / (2.0 * h);
            }
        }
        let scale = analytic.iter().flatten().fold(1.0f64, |mx, x| mx.max(x.abs()));
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!(
                    (analytic[i][j] - fd[i][j]).abs() <= 1e-6 * scale,
                    "entry ({i},{j}): {} vs {}",
                    analytic[i][j],
                    fd[i][j]
                );
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Classification properties.
// ---------------------------------------------------------------------------

proptest! {
    /// Only the LSERs enter the victory conditions: scaling all four rates
    /// by a common factor never changes the verdict.
    #[test]
    fn classify_is_scale_invariant(
        rates in dominant_rates(),
        split in interior_split(),
        log_c in -3.0..3.0f64,
    ) {
        let scaled = rates.scaled(10f64.powf(log_c)).unwrap();
        let a = classify_basic(&split, &rates).unwrap();
        let b = classify_basic(&split, &scaled).unwrap();
        match (&a, &b) {
            (Outcome::Stalemate(p), Outcome::Stalemate(q)) => {
                prop_assert!((p.sb() - q.sb()).abs() < 1e-12);
                prop_assert!((p.sr() - q.sr()).abs() < 1e-12);
                prop_assert!((p.cr() - q.cr()).abs() < 1e-12);
                prop_assert!((p.cb() - q.cb()).abs() < 1e-12);
            }
            _ => prop_assert_eq!(&a, &b),
        }
    }

    /// With foreign support present in friendly regions Red can never win.
    #[test]
    fn direct_with_support_never_red_victory(
        rates in dominant_rates(),
        split in interior_split(),
        lambda_s in 1e-6..3.0f64,
        lambda_c in 0.0..3.0f64,
    ) {
        let iv = DirectIntervention::new(lambda_s, lambda_c).unwrap();
        let out = classify_direct(&split, &rates, &iv).unwrap();
        prop_assert!(!matches!(out, Outcome::RedVictory));
    }

    /// Securing a win costs at least as much as avoiding a loss whenever
    /// both multipliers bind.
    #[test]
    fn win_multiplier_dominates_defense_multiplier(
        rates in dominant_rates(),
        split in interior_split(),
    ) {
        let th = indirect_thresholds(&split, &rates).unwrap();
        if th.mu_s_min > 1.0 && th.mu_c_min > 1.0 {
            prop_assert!(th.mu_c_min >= th.mu_s_min);
        }
    }

    /// Closed-form equilibria are numerical fixed points of their RHS.
    #[test]
    fn closed_forms_are_fixed_points(
        rates in dominant_rates(),
        split in interior_split(),
        lambda_s in 0.0..1.0f64,
        lambda_c in 0.0..1.0f64,
        alpha in 0.05..5.0f64,
    ) {
        if let Ok(st) = stalemate_basic(&split, &rates) {
            let red = ReducedState::new(st.sb(), st.cr(), &split).unwrap();
            let (a, b) = rhs_basic(&red, &split, &rates).unwrap();
            prop_assert!(a.abs() < 1e-10 && b.abs() < 1e-10, "basic ({a}, {b})");
        }
        let iv = DirectIntervention::new(lambda_s, lambda_c).unwrap();
        if let Ok(st) = stalemate_direct(&split, &rates, &iv) {
            let red = ReducedState::new(st.sb(), st.cr(), &split).unwrap();
            let (a, b) = rhs_direct(&red, &split, &rates, &iv).unwrap();
            prop_assert!(a.abs() < 1e-10 && b.abs() < 1e-10, "direct ({a}, {b})");
        }
        let op = OpportunisticParams::new(alpha).unwrap();
        let bal = balanced_stalemate(&rates);
        let (a, b, c) = rhs_opportunistic(&bal, &rates, &op).unwrap();
        prop_assert!(a.abs() < 1e-10 && b.abs() < 1e-10 && c.abs() < 1e-10);
    }

    /// Exactly one equilibrium of the basic model is stable away from the
    /// boundaries, and it is the classified outcome.
    #[test]
    fn one_stable_equilibrium_matching_classifier(
        rates in dominant_rates(),
        split in interior_split(),
    ) {
        let th = basic_thresholds(&split).unwrap();
        // Skip draws too close to a boundary to call.
        prop_assume!((rates.r_c() - th.blue_if_rc_below).abs() > 1e-9);
        prop_assume!((rates.r_s() - th.red_if_rs_below).abs() > 1e-9);

        let reports = stability_basic(&split, &rates).unwrap();
        let stable: Vec<_> = reports.iter().filter(|r| r.stable).collect();
        prop_assert_eq!(stable.len(), 1, "{:?}", reports);
        let outcome = classify_basic(&split, &rates).unwrap();
        let expected = match outcome {
            Outcome::BlueVictory => EquilibriumKind::BlueVictory,
            Outcome::RedVictory => EquilibriumKind::RedVictory,
            Outcome::Stalemate(_) => EquilibriumKind::Stalemate,
            Outcome::MarginalBoundary(_) => unreachable!("filtered by prop_assume"),
        };
        prop_assert_eq!(stable[0].kind, expected);
        prop_assert!(!reports[0].stable, "hostile-control equilibrium must not be stable");
    }

    /// The balanced stalemate of the opportunistic model always has a
    /// positive Jacobian determinant, hence a positive eigenvalue; both
    /// victories are stable.
    #[test]
    fn opportunistic_balanced_always_unstable(
        rates in any_rates(),
        alpha in 0.05..5.0f64,
    ) {
        let op = OpportunisticParams::new(alpha).unwrap();
        prop_assert!(balanced_stalemate_jacobian_det(&rates, &op) > 0.0);
        let eq = opportunistic_equilibria(&rates, &op);
        for r in &eq.reports {
            match r.kind {
                EquilibriumKind::BlueVictory | EquilibriumKind::RedVictory => {
                    prop_assert!(r.stable, "{:?} {:?}", r.kind, r.eigenvalues);
                }
                _ => prop_assert!(!r.stable, "{:?} {:?}", r.kind, r.eigenvalues),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Independent numerical oracles.
// ---------------------------------------------------------------------------

/// Damped Newton iteration on the raw intervention RHS with a
/// finite-difference Jacobian: an independent route to the stalemate that
/// never touches the closed form.
fn newton_direct_stalemate(
    split: &PopulationSplit,
    rates: &RateParams,
    iv: &DirectIntervention,
    start: (f64, f64),
) -> Option<(f64, f64)> {
    let f = |sb: f64, cr: f64| {
        let st =
            ReducedState::new(sb.clamp(0.0, split.s()), cr.clamp(0.0, split.c()), split).ok()?;
        rhs_direct(&st, split, rates, iv).ok()
    };
    let (mut sb, mut cr) = start;
    let h = 1e-7;
    for _ in 0..200 {
        let (f1, f2) = f(sb, cr)?;
        if f1.abs().max(f2.abs()) < 1e-13 {
            return Some((sb, cr));
        }
        let (a11, a21) = {
            let p = f(sb + h, cr)?;
            let m = f(sb - h, cr)?;
            ((p.0 - m.0) / (2.0 * h), (p.1 - m.1) / (2.0 * h))
        };
        let (a12, a22) = {
            let p = f(sb, cr + h)?;
            let m = f(sb, cr - h)?;
            ((p.0 - m.0) / (2.0 * h), (p.1 - m.1) / (2.0 * h))
        };
        let det = a11 * a22 - a12 * a21;
        if det.abs() < 1e-14 {
            return None;
        }
        let dx = (f1 * a22 - f2 * a12) / det;
        let dy = (f2 * a11 - f1 * a21) / det;
        // Damping keeps iterates inside the box.
        let mut step = 1.0;
        while step > 1e-6 {
            let (nsb, ncr) = (sb - step * dx, cr - step * dy);
            if (0.0..=split.s()).contains(&nsb) && (0.0..=split.c()).contains(&ncr) {
                sb = nsb;
                cr = ncr;
                break;
            }
            step *= 0.5;
        }
    }
    None
}

#[test]
fn direct_stalemate_matches_root_finder_oracle() {
    let split = PopulationSplit::new(0.4).unwrap();
    let rates = RateParams::new(2.0, 1.0, 2.0, 1.0).unwrap();
    let iv = DirectIntervention::new(0.1, 0.1).unwrap();
    let closed = stalemate_direct(&split, &rates, &iv).unwrap();
    let (sb, cr) =
        newton_direct_stalemate(&split, &rates, &iv, (closed.sb() * 0.7, closed.cr() * 1.3))
            .expect("oracle converged");
    assert!(
        (sb - closed.sb()).abs() < 1e-9 && (cr - closed.cr()).abs() < 1e-9,
        "oracle ({sb}, {cr}) vs closed ({}, {})",
        closed.sb(),
        closed.cr()
    );
}

#[test]
fn direct_stalemate_matches_root_finder_on_random_draws() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 25 {
        let h_s = 10f64.powf(rng.gen_range(-0.5..0.5));
        let h_c = 10f64.powf(rng.gen_range(-0.5..0.5));
        let rates = RateParams::new(
            h_c * (1.0 + rng.gen_range(0.05..3.0)),
            h_s,
            h_s * (1.0 + rng.gen_range(0.05..3.0)),
            h_c,
        )
        .unwrap();
        let split = PopulationSplit::new(rng.gen_range(0.1..0.9)).unwrap();
        let iv = DirectIntervention::new(rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5)).unwrap();
        let Ok(closed) = stalemate_direct(&split, &rates, &iv) else {
            continue;
        };
        if closed.sb() == 0.0 {
            continue; // boundary stalemate: Newton's box damping stalls there
        }
        let oracle =
            newton_direct_stalemate(&split, &rates, &iv, (closed.sb() * 0.8, closed.cr() * 1.2));
        let Some((sb, cr)) = oracle else {
            continue;
        };
        assert!(
            (sb - closed.sb()).abs() < 1e-8 && (cr - closed.cr()).abs() < 1e-8,
            "draw {checked}: oracle ({sb}, {cr}) vs closed ({}, {})",
            closed.sb(),
            closed.cr()
        );
        checked += 1;
    }
}

// ---------------------------------------------------------------------------
// Trajectory-level properties.
// ---------------------------------------------------------------------------

fn sample_models() -> Vec<Model> {
    let split = PopulationSplit::new(0.4).unwrap();
    vec![
        // Stalemate regime.
        Model::Basic {
            split,
            rates: RateParams::new(2.0, 1.0, 2.0, 1.0).unwrap(),
        },
        // Blue-victory regime.
        Model::Basic {
            split,
            rates: RateParams::new(2.5, 1.0, 1.1, 2.2).unwrap(),
        },
        // Red-victory regime.
        Model::Basic {
            split,
            rates: RateParams::new(0.8, 1.0, 1.25, 0.5).unwrap(),
        },
        // Intervention stalemate.
        Model::Direct {
            split,
            rates: RateParams::new(0.8, 1.0, 1.25, 0.5).unwrap(),
            intervention: DirectIntervention::new(0.3, 0.2).unwrap(),
        },
        // Entrenched, stiff-ish stalemate.
        Model::Basic {
            split,
            rates: RateParams::new(10.0, 1.0, 9.0, 1.0).unwrap(),
        },
    ]
}

/// The numerical shadow of the no-limit-cycles results: once the RHS norm
/// falls below a threshold along a trajectory, it never climbs back an order
/// of magnitude above it.
#[test]
fn rhs_norm_decays_without_sustained_oscillation() {
    for model in sample_models() {
        let traj = integrate(&model, &model.default_init(), &IntegratorConfig::default()).unwrap();
        let norms: Vec<f64> = traj
            .samples
            .iter()
            .map(|p| {
                let d = model.rhs_raw(&[p.sb, p.cr, p.s]);
                d[0].abs().max(d[1].abs()).max(d[2].abs())
            })
            .collect();
        for threshold in [1e-3, 1e-6] {
            if let Some(first) = norms.iter().position(|&n| n < threshold) {
                for (i, &n) in norms.iter().enumerate().skip(first + 1) {
                    assert!(
                        n < threshold * 10.0,
                        "{model:?}: norm {n} at sample {i} after crossing {threshold}"
                    );
                }
            }
        }
    }
}

/// Four-variable mass conservation along a fixed-step RK4 trajectory of the
/// full system; the exchange structure keeps the sum at 1 up to rounding.
#[test]
fn mass_conserved_along_full_system_trajectory() {
    let rates = RateParams::new(2.0, 1.0, 2.0, 1.0).unwrap();
    let rhs4 = |y: &[f64; 4]| {
        let st = BasicState::with_sum_tol(y[0], y[1], y[2], y[3], 1e-6).unwrap();
        rhs_full_basic(&st, &rates).unwrap()
    };
    let mut y = [0.36, 0.04, 0.54, 0.06];
    let h = 1e-2;
    for _ in 0..100 {
        y = rk4_fixed(rhs4, y, h, 100);
        let sum: f64 = y.iter().sum();
        assert!((sum - 1.0).abs() < 1e-7, "sum drifted to {sum}");
    }
}

/// Recorded samples of adaptive trajectories respect the state invariants
/// within the drift bound, for every variant.
#[test]
fn adaptive_trajectories_stay_in_the_box() {
    let mut models = sample_models();
    models.push(Model::Opportunistic {
        rates: RateParams::new(1.3, 0.7, 0.9, 1.1).unwrap(),
        switching: OpportunisticParams::new(0.7).unwrap(),
    });
    for model in models {
        let traj = integrate(&model, &model.default_init(), &IntegratorConfig::default()).unwrap();
        assert!(matches!(traj.terminal, Terminal::ConvergedToEquilibrium(_)));
        for p in &traj.samples {
            assert!(p.sb >= 0.0 && p.cr >= 0.0);
            assert!(p.sb <= p.s + 1e-7);
            assert!(p.cr <= 1.0 - p.s + 1e-7);
            assert!((p.sb + p.sr() + p.cr + p.cb() - 1.0).abs() <= 1e-7);
        }
    }
}
