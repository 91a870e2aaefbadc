//! Oracle-level checks: certification soundness, stage-2 rationality,
//! insider-only restriction, grid seeding, and refinement stability.

use nomgame::closed_form::{solve_insider, solve_outsider, table_fixtures};
use nomgame::model::{ModelParams, Platform, Politician, DEFAULT_TIE_EPS};
use nomgame::oracle::{
    endorsement_value, find_stage1_equilibria, sample_params, verify_closed_form, GameVariant,
    GridSpec,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EPS: f64 = DEFAULT_TIE_EPS;

#[test]
fn every_returned_equilibrium_is_certified() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..60 {
        let p = sample_params(&mut rng);
        let spec = GridSpec::default_for(&p);
        for variant in [GameVariant::InsiderOnly, GameVariant::WithOutsider] {
            for eq in find_stage1_equilibria(&p, &spec, variant, EPS) {
                assert!(
                    eq.certified,
                    "uncertified equilibrium for {variant:?} at {p:?}: {eq:?}"
                );
            }
        }
    }
}

#[test]
fn stage_two_rationality() {
    // R's realized expected utility weakly beats endorsing the rival's
    // standing offer, both valued with the opposition reacting.
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..40 {
        let p = sample_params(&mut rng);
        let spec = GridSpec::default_for(&p);
        let eq = &find_stage1_equilibria(&p, &spec, GameVariant::WithOutsider, EPS)[0];
        let (endorsed_offer, rival, rival_offer) = match eq.endorsed {
            Politician::InsiderR => (eq.offer_r, Politician::Outsider, eq.offer_o.unwrap()),
            Politician::Outsider => (eq.offer_o.unwrap(), Politician::InsiderR, eq.offer_r),
            Politician::InsiderL => unreachable!("R endorses r or o"),
        };
        let realized = endorsement_value(&p, &spec, eq.endorsed, endorsed_offer, EPS);
        let alternative = endorsement_value(&p, &spec, rival, rival_offer, EPS);
        assert!(
            realized >= alternative - 1e-9,
            "endorsement irrational: {realized} < {alternative} at {p:?}"
        );
    }
}

#[test]
fn insider_restriction_reproduces_insider_game() {
    // Removing the outsider from R's menu reproduces the insider-only
    // equilibria within grid tolerance.
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..40 {
        let p = sample_params(&mut rng);
        let spec = GridSpec::default_for(&p);
        let eq = &find_stage1_equilibria(&p, &spec, GameVariant::InsiderOnly, EPS)[0];
        let closed = solve_insider(&p, EPS);
        assert!(eq.offer_o.is_none());
        assert!(
            (eq.winning_policy() - closed.winning_policy).abs()
                <= spec.policy_step() + spec.epsilon,
            "insider-only mismatch: oracle {} vs closed {} at {p:?}",
            eq.winning_policy(),
            closed.winning_policy
        );
    }
}

#[test]
fn default_grid_includes_critical_points() {
    let p = table_fixtures()[4].1; // case-5 fixture
    let spec = GridSpec::default_for(&p);
    for value in [
        0.0,
        p.k_l,
        p.k_r,
        p.k_o,
        p.b_r,
        p.v_r(),
        p.v_o(),
        2.0 * p.b_r - p.k_l.max(p.v_r()),
    ] {
        assert!(
            spec.critical_points.contains(&value),
            "missing critical point {value}"
        );
    }
    assert!(spec.policy_steps >= 2 && spec.rent_steps >= 2);
    assert!(spec.policy_lo <= p.k_l.min(p.v_r()) - 1.0 + 1e-12);
    assert!(spec.policy_hi >= p.b_r.max(p.k_r) + 1.0 - 1e-12);
}

/// Discrepancy of the oracle against the closed form at a given resolution.
fn discrepancy(p: &ModelParams, policy_steps: usize, rent_steps: usize) -> f64 {
    let spec = GridSpec::with_resolution(p, policy_steps, rent_steps, 1e-6);
    let closed = solve_outsider(p, EPS).unwrap();
    let eq = &find_stage1_equilibria(p, &spec, GameVariant::WithOutsider, EPS)[0];
    let dp = (closed.winning_policy - eq.winning_policy()).abs();
    let dm = (closed.winning_rent - eq.winning_rent()).abs();
    dp.max(dm)
}

#[test]
fn refinement_stability() {
    // Halving the grid step never moves the oracle away from the closed form.
    for (label, p) in table_fixtures() {
        let d = [
            discrepancy(&p, 51, 26),
            discrepancy(&p, 101, 51),
            discrepancy(&p, 201, 101),
        ];
        assert!(
            d[0] + 1e-9 >= d[1] && d[1] + 1e-9 >= d[2],
            "{label}: discrepancies not non-increasing: {d:?}"
        );
    }
}

#[test]
fn verification_report_is_serializable() {
    let p = table_fixtures()[8].1; // case-9 fixture
    let spec = GridSpec::default_for(&p);
    let report = verify_closed_form(&p, &spec, EPS);
    assert!(report.all_agree);
    let json = serde_json::to_string(&report).unwrap();
    assert!(json.contains("tolerance_policy"));
}

#[test]
fn endorsement_value_matches_fallback_logic() {
    // For the case-5 fixture, endorsing the insider's null offer is valued at
    // the continuation where l re-optimizes and wins near max{k_l, V_r}.
    let p = table_fixtures()[4].1;
    let spec = GridSpec::default_for(&p);
    let fallback = endorsement_value(&p, &spec, Politician::InsiderR, Platform::null(), EPS);
    let expected = -(p.k_l.max(p.v_r()) - p.b_r).abs();
    assert!(
        (fallback - expected).abs() <= spec.policy_step() + spec.epsilon,
        "fallback {fallback} vs expected {expected}"
    );
}
