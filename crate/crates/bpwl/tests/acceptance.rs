//! Acceptance gate: one test per published criterion, each printing a pass
//! line with its runtime and enforcing its wall-clock budget.
//!
//! Every value comparison is exact rational or polynomial equality; the
//! budgets bound the whole criterion on a single worker.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use bpwl::classifier::{
    classify_nondegenerate, classify_singlet_ordinary, classify_singlet_relaxed, coincidences_23,
    family_in_domain, family_top_dim, family_weight, kl_membership_23, minimal_qhr,
    orbit_image_hw_23, Coincidence, FamilyTag, ModulePayload, TopDim, ORDINARY_FAMILIES,
};
use bpwl::engine::{
    check_commutation, gminus_topspace_coeff, verify_embedding, BpGenerator, GradedState,
    ModuleCtx, DEFAULT_TRUNCATION,
};
use bpwl::level::{kappa_sym, Level};
use bpwl::minmod::{j_of_rs, orbit_hw, z3_orbit_reps};
use bpwl::qseries::{bp_string_fn, check_string_convergence, string_fn_target};
use bpwl::rat;
use bpwl::scalars::{MPoly, RatFunc, Rational, UniPoly, Var};
use bpwl::weights::{
    conjugate_weight, f_sym, g_sym, hw_spectral_flow_image, omega_sym, relaxed_cubic_coeffs,
    relaxed_cubic_eval, spectral_flow_weight, top_space_dim, BPWeight,
};

fn finish(criterion: &str, started: Instant, budget_secs: u64) {
    let elapsed = started.elapsed();
    println!(
        "criterion {criterion}: pass in {:.2}s",
        elapsed.as_secs_f64()
    );
    assert!(
        elapsed < Duration::from_secs(budget_secs),
        "criterion {criterion} exceeded its {budget_secs}s budget: {elapsed:?}"
    );
}

/// Deterministic xorshift generator for the randomised criteria.
struct SampleRng(u64);

impl SampleRng {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    fn pick(&mut self, lo: i64, hi: i64) -> i64 {
        let span = u64::try_from(hi - lo + 1).expect("nonempty range");
        lo + i64::try_from(self.next() % span).expect("span fits")
    }

    fn rational(&mut self) -> Rational {
        Rational::new(self.pick(-9, 9), self.pick(1, 6)).expect("positive denominator")
    }
}

#[test]
fn criterion_1_nondegenerate_classification() {
    let started = Instant::now();
    for (u, v) in [(4u32, 3u32), (5, 3), (4, 5), (5, 4)] {
        let table = classify_nondegenerate(u, v).expect("nondegenerate pair");
        let level = Level::from_pair(u64::from(u), u64::from(v)).expect("valid pair");
        let kappa = level.kappa();
        let labels = z3_orbit_reps(u, v).expect("nondegenerate pair");
        assert_eq!(table.orbits.len(), labels.len(), "orbit count at ({u}, {v})");

        for (orbit, label) in table.orbits.iter().zip(&labels) {
            assert_eq!(orbit.rep, label.to_string());
            let (h, w_hat) = orbit_hw(label, u, v);
            assert_eq!(orbit.h, h);
            assert_eq!(orbit.w_hat, w_hat);

            let expected_cosets: BTreeSet<Rational> = label
                .members()
                .iter()
                .map(|(r, s)| j_of_rs(r, s, u, v).coset_rep())
                .collect();
            let listed: BTreeSet<Rational> = orbit.reducible_cosets.iter().cloned().collect();
            assert_eq!(listed, expected_cosets, "cosets at ({u}, {v})");

            assert_eq!(orbit.quotients.len(), orbit.j_roots.len());
            for (entry, root) in orbit.quotients.iter().zip(&orbit.j_roots) {
                let expected = BPWeight::new(root - &rat!(1), &h + &kappa);
                assert_eq!(
                    entry.payload,
                    ModulePayload::Weight(expected),
                    "quotient weight at ({u}, {v}) root {root}"
                );
            }

            let cubic = UniPoly::new(relaxed_cubic_coeffs(&h, &w_hat, &level).to_vec());
            let mut product = UniPoly::constant(rat!(-1));
            for root in &orbit.j_roots {
                product = &product * &UniPoly::new(vec![-root, rat!(1)]);
            }
            assert_eq!(cubic, product, "cubic factorisation at ({u}, {v})");
        }
    }
    finish("1 (nondegenerate classification)", started, 2);
}

#[test]
fn criterion_2_singlet_classification() {
    let started = Instant::now();
    let level = Level::from_pair(2, 3).expect("valid pair");

    for p in -45i64..=45 {
        let lambda = Rational::new(p, 9).expect("positive denominator");
        if lambda == rat!(-1) {
            assert!(
                classify_singlet_relaxed(&lambda).is_err(),
                "lambda = -1 labels the same point as lambda = 0"
            );
            continue;
        }
        let table = classify_singlet_relaxed(&lambda).expect("spectrum point");
        let three_lambda = &rat!(3) * &lambda;
        let expected = [
            &(&three_lambda + &rat!(5)) / &rat!(9),
            &(&three_lambda + &rat!(2)) / &rat!(9),
            &(-&(&(&rat!(6) * &lambda) + &rat!(1))) / &rat!(9),
        ];
        assert_eq!(table.roots, expected, "roots at lambda = {lambda}");
        let expected_cosets: BTreeSet<Rational> =
            expected.iter().map(Rational::coset_rep).collect();
        let listed: BTreeSet<Rational> = table.excluded_cosets.iter().cloned().collect();
        assert_eq!(listed, expected_cosets, "cosets at lambda = {lambda}");

        let collides =
            (&lambda - &rat!(1, 3)).is_integer() || (&lambda + &rat!(1, 3)).is_integer();
        assert_eq!(
            !table.collisions.is_empty(),
            collides,
            "collision pattern at lambda = {lambda}"
        );
    }

    for m in -15i64..=15 {
        let lambda = Rational::new(m, 3).expect("positive denominator");
        for tag in ORDINARY_FAMILIES {
            if !family_in_domain(tag, &lambda) {
                continue;
            }
            let Some(TopDim::Finite(n)) = family_top_dim(tag, &lambda) else {
                panic!("family {tag} has no finite dimension at lambda = {lambda}");
            };
            let probed = top_space_dim(&family_weight(tag, &lambda), &level, 32);
            assert_eq!(probed, Some(n), "family {tag} at lambda = {lambda}");
        }
    }

    let entries =
        classify_singlet_ordinary(&rat!(-5), &rat!(5), 16).expect("family sweep succeeds");
    assert!(!entries.is_empty());

    let (relaxed, ordinary) = coincidences_23().expect("coincidence recomputation");
    let pair = |w: BPWeight, a: (FamilyTag, Rational), b: (FamilyTag, Rational)| Coincidence {
        weight: w,
        first: a,
        second: b,
    };
    let expected_relaxed = vec![
        pair(
            BPWeight::new(rat!(-10, 9), rat!(-5, 9)),
            (FamilyTag::RelaxedII, rat!(-1)),
            (FamilyTag::RelaxedIII, rat!(0)),
        ),
        pair(
            BPWeight::new(rat!(-8, 9), rat!(-2, 3)),
            (FamilyTag::RelaxedII, rat!(-1, 3)),
            (FamilyTag::RelaxedIII, rat!(-1, 3)),
        ),
        pair(
            BPWeight::new(rat!(-7, 9), rat!(-5, 9)),
            (FamilyTag::RelaxedI, rat!(-1)),
            (FamilyTag::RelaxedII, rat!(0)),
        ),
        pair(
            BPWeight::new(rat!(-2, 3), rat!(-2, 3)),
            (FamilyTag::RelaxedI, rat!(-2, 3)),
            (FamilyTag::RelaxedIII, rat!(-2, 3)),
        ),
        pair(
            BPWeight::new(rat!(-4, 9), rat!(-5, 9)),
            (FamilyTag::RelaxedI, rat!(0)),
            (FamilyTag::RelaxedIII, rat!(-1)),
        ),
    ];
    let expected_ordinary = vec![
        pair(
            BPWeight::new(rat!(-5, 9), rat!(0)),
            (FamilyTag::Ordinary1, rat!(-5, 3)),
            (FamilyTag::Ordinary3, rat!(2, 3)),
        ),
        pair(
            BPWeight::new(rat!(-1, 3), rat!(-1, 3)),
            (FamilyTag::Ordinary1, rat!(-1)),
            (FamilyTag::Ordinary2, rat!(1, 3)),
        ),
        pair(
            BPWeight::new(rat!(-2, 9), rat!(-1, 3)),
            (FamilyTag::Ordinary1, rat!(-2, 3)),
            (FamilyTag::Ordinary5, rat!(-4, 3)),
        ),
        pair(
            BPWeight::new(rat!(0), rat!(0)),
            (FamilyTag::Ordinary1, rat!(0)),
            (FamilyTag::Ordinary4, rat!(-5, 3)),
        ),
    ];
    assert_eq!(relaxed, expected_relaxed);
    assert_eq!(ordinary, expected_ordinary);

    finish("2 (singlet classification)", started, 5);
}

#[test]
fn criterion_3_orbit_arrows() {
    let started = Instant::now();
    let level = Level::from_pair(2, 3).expect("valid pair");
    let samples: Vec<(FamilyTag, Rational)> = (0..20i64)
        .flat_map(|n| {
            [
                (
                    FamilyTag::Ordinary1,
                    Rational::new(n + 1, 3).expect("positive denominator"),
                ),
                (FamilyTag::Ordinary2, &rat!(1, 3) + &Rational::from(n)),
                (FamilyTag::Ordinary3, &rat!(2, 3) + &Rational::from(n)),
                (FamilyTag::Ordinary4, &rat!(-5, 3) - &Rational::from(n)),
                (FamilyTag::Ordinary5, &rat!(-4, 3) - &Rational::from(n)),
            ]
        })
        .collect();
    assert_eq!(samples.len(), 100);
    for (tag, lambda) in samples {
        let Some(TopDim::Finite(n)) = family_top_dim(tag, &lambda) else {
            panic!("arrow source {tag} at lambda = {lambda} has no finite dimension");
        };
        let flowed = hw_spectral_flow_image(&family_weight(tag, &lambda), n, &level);
        let (_, _, image) = orbit_image_hw_23(tag, &lambda).expect("arrow in domain");
        assert_eq!(image, flowed, "family {tag} at lambda = {lambda}");
    }
    finish("3 (orbit arrows)", started, 1);
}

#[test]
fn criterion_4_kazhdan_lusztig_membership() {
    let started = Instant::now();
    for r in 1..=12u32 {
        for s in 1..=12u32 {
            let member = kl_membership_23(r, s).expect("valid indices");
            assert_eq!(member, r == 1 || s == 1, "membership at ({r}, {s})");
        }
    }
    let level = Level::from_pair(2, 3).expect("valid pair");
    for r in 1..=8u32 {
        for s in 1..=8u32 {
            let (_, dim) = minimal_qhr(r, s, &level).expect("valid indices");
            assert_eq!(dim, s, "top dimension at ({r}, {s})");
        }
    }
    finish("4 (Kazhdan-Lusztig membership)", started, 1);
}

#[test]
fn criterion_5_string_function_convergence() {
    let started = Instant::now();
    let report = check_string_convergence(10);
    assert!(
        report.stable_from <= 10,
        "slices must stabilise by charge 10, got {}",
        report.stable_from
    );
    assert!(report.probed_to >= 10);
    for n in 10i64..=12 {
        assert_eq!(
            bp_string_fn(n, 10).coefficients(),
            string_fn_target(n, 10).coefficients(),
            "charge {n} slice at order 10"
        );
    }
    let witness = report.witness.expect("charge 0 disagrees");
    assert_eq!(witness.q_power, 1);
    assert_eq!(witness.character, rat!(1));
    assert_eq!(witness.target, rat!(2));
    finish("5 (string-function convergence)", started, 10);
}

#[test]
fn criterion_6_embedding_verification() {
    let started = Instant::now();

    for (u, v) in [(2u64, 3u64), (4, 3), (3, 5)] {
        let level = Level::from_pair(u, v).expect("valid pair");
        let scan = verify_embedding(&level, &rat!(2, 7), &rat!(1, 3), &rat!(-1, 5), 3, 2)
            .expect("embedding exists");
        assert!(scan.all_passed, "commutator sweep failed at ({u}, {v})");
        assert_eq!(scan.basis_size, 59);
        assert_eq!(scan.pairs.len(), 16);
        assert!(scan.pairs.iter().all(|pair| pair.checks == 59 * 25));

        let ctx = ModuleCtx::new(level.clone(), rat!(0), rat!(0));
        let vacuum = GradedState::vacuum_vector(DEFAULT_TRUNCATION);
        let report = check_commutation(
            BpGenerator::GPlus,
            2,
            BpGenerator::GMinus,
            -2,
            &vacuum,
            &ctx,
        )
        .expect("embedding exists");
        assert!(report.matches);
        let k = level.k();
        let central = (k + Rational::from(1)) * (&(&Rational::from(2) * k) + &Rational::from(3));
        assert_eq!(
            report.lhs,
            GradedState::vacuum_vector(report.lhs.truncation()).scaled(&central),
            "central value at ({u}, {v})"
        );
    }

    let embedding_levels = [(2u64, 3u64), (4, 3), (3, 5), (5, 4)];
    let mut rng = SampleRng(0x5eed_cafe_f00d_0001);
    for round in 0..25usize {
        let (u, v) = embedding_levels[round % embedding_levels.len()];
        let level = Level::from_pair(u, v).expect("valid pair");
        let j = rng.rational();
        let h = rng.rational();
        let w_hat = rng.rational();
        let engine = gminus_topspace_coeff(&j, &h, &w_hat, &level).expect("embedding exists");
        assert_eq!(
            engine,
            relaxed_cubic_eval(&j, &h, &w_hat, &level),
            "round {round} at ({u}, {v}) with (j, h, w) = ({j}, {h}, {w_hat})"
        );
    }

    finish("6 (embedding verification)", started, 60);
}

#[test]
fn criterion_7_symbolic_identities() {
    let started = Instant::now();

    let omega = omega_sym();
    assert!(omega.derivative(Var::J).is_zero());
    assert!(!omega.variables().contains(&Var::J));

    let int = |n: i64| MPoly::from_rational(Rational::from(n));
    let k_const = |a: i64, b: i64| {
        MPoly::constant(RatFunc::from_poly(UniPoly::new(vec![
            Rational::from(b),
            Rational::from(a),
        ])))
    };

    let j = MPoly::var(Var::J);
    for n in 1i64..=12 {
        let mut sum = MPoly::zero();
        for m in 0..n {
            sum = &sum + &f_sym().subst(Var::J, &(&j - &int(m)));
        }
        let scale = MPoly::from_rational(Rational::new(1, n).expect("n >= 1"));
        assert_eq!(&sum * &scale, g_sym(&int(n)), "averaged sum at n = {n}");
    }

    let delta = MPoly::var(Var::Delta);
    let m = MPoly::var(Var::M);
    let n = MPoly::var(Var::N);
    let l = MPoly::var(Var::L);
    let j_image = &(&(&j - &n) + &int(1)) + &MPoly::constant(kappa_sym());
    let delta_image = &(&(&delta + &j) - &n) + &int(1);

    let g_lhs = &g_sym(&m)
        .subst(Var::J, &j_image)
        .subst(Var::Delta, &delta_image)
        - &g_sym(&n);
    let linear = &(&(&(&int(3) * &j) + &int(3)) - &m) - &(&int(2) * &n);
    let g_rhs = &linear * &(&(&k_const(1, 3) - &m) - &n);
    assert_eq!(g_lhs, g_rhs, "flowed Zhu-value difference");

    let factor = |a: &MPoly, b: &MPoly, x: &MPoly| -> MPoly {
        &(&(&(&int(3) * x) + &int(3)) - a) - &(&int(2) * b)
    };
    let f_lhs = &factor(&l, &m, &j_image) - &factor(&m, &n, &j);
    let f_rhs = &(&(&k_const(2, 6) - &l) - &m) - &n;
    assert_eq!(f_lhs, f_rhs, "flowed linear-factor difference");

    let sample_levels: Vec<Level> = [(2u64, 3u64), (4, 3), (3, 5), (5, 4), (7, 2)]
        .into_iter()
        .map(|(u, v)| Level::from_pair(u, v).expect("valid pair"))
        .collect();

    let grid = [rat!(-7, 3), rat!(0), rat!(5, 2), rat!(9, 7)];
    for level in &sample_levels {
        for j0 in &grid {
            for d0 in &grid {
                let w = BPWeight::new(j0.clone(), d0.clone());
                for ell in -6i64..=6 {
                    let back =
                        spectral_flow_weight(-ell, &spectral_flow_weight(ell, &w, level), level);
                    assert_eq!(back, w, "flow round trip at ell = {ell}");
                    let lhs = conjugate_weight(&spectral_flow_weight(ell, &w, level), level);
                    let rhs = spectral_flow_weight(-ell, &conjugate_weight(&w, level), level);
                    assert_eq!(lhs, rhs, "dihedral relation at ell = {ell}");
                }
            }
        }
        assert_eq!(
            level.c_pi() + level.c_w3(),
            level.c_bp(),
            "central charges at k = {}",
            level.k()
        );
    }

    finish("7 (symbolic identities)", started, 5);
}
