use pentaks_core::golden::PHI_INV_5;
use pentaks_core::orthograph::{canonical_ks_subgraph, realize_ks_subgraph};
use pentaks_core::paradoxes::{
    av_game, hardy_construct, ks_probability, random_hardy_params, random_ks_subgraph, verify_p_plus_2, AvGame,
    HardyParams,
};
use pentaks_core::pentagram3::{build_family, PentagramParams};
use pentaks_core::sampling::stream_rng;
use pentaks_core::Error;

#[test]
fn random_realizations_obey_the_identities() {
    let mut rng = stream_rng(21, 0);
    for i in 0..1000 {
        let g = random_ks_subgraph(&mut rng, i % 2 == 0).unwrap();
        assert!(verify_p_plus_2(&g) < 1e-10);
        assert!(ks_probability(&g) <= 1.0 / 9.0 + 1e-9);
        let (se, sf) = g.triad_sums();
        assert!((se - 1.0).abs() < 1e-10 && (sf - 1.0).abs() < 1e-10);
    }
}

#[test]
fn degenerate_upper_pentagon_is_rejected() {
    let p = build_family(&PentagramParams::new(0.0, 0.7, 0.0, 0.0).unwrap()).unwrap();
    assert!(matches!(realize_ks_subgraph(&p), Err(Error::Degenerate(_))));
}

#[test]
fn probability_vanishes_towards_the_degenerate_edge() {
    // At b = pi/2 the pentagon degenerates; just inside, psi_d is nearly
    // orthogonal to psi_u and the upper expectation approaches 2.
    let b = std::f64::consts::FRAC_PI_2 - 1e-3;
    let p = build_family(&PentagramParams::new(0.6, b, 0.0, 0.0).unwrap()).unwrap();
    let g = realize_ks_subgraph(&p).unwrap();
    assert!(ks_probability(&g) < 1e-5);
    assert!(verify_p_plus_2(&g) < 1e-12);
    assert!((g.upper().expectation(&g.psi_d()) - 2.0).abs() < 1e-5);
}

#[test]
fn av_game_is_deterministic_and_always_wins() {
    let a = av_game(20_000, 7).unwrap();
    let b = av_game(20_000, 7).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.wins_among_selected, a.selected);
    assert!(a.wins_among_selected <= a.selected && a.selected <= a.runs);
    assert_ne!(av_game(20_000, 8).unwrap(), a);
    assert!(matches!(av_game(0, 7), Err(Error::InvalidArgument(_))));
}

#[test]
fn av_game_on_other_realizations_still_always_wins() {
    let mut rng = stream_rng(3, 0);
    for _ in 0..5 {
        let game = AvGame::new(&random_ks_subgraph(&mut rng, false).unwrap());
        let stats = game.play(5_000, 1).unwrap();
        assert_eq!(stats.wins_among_selected, stats.selected);
    }
    let canonical = AvGame::new(&canonical_ks_subgraph());
    assert_eq!(canonical, AvGame::canonical());
}

#[test]
fn hardy_constraints_hold_over_the_feasible_family() {
    let mut rng = stream_rng(9, 0);
    let mut tested = 0;
    while tested < 1000 {
        let params = random_hardy_params(&mut rng);
        let Ok(h) = hardy_construct(&params) else { continue };
        tested += 1;
        assert!(h.constraints().max() < 1e-10);
        assert!(h.max_separable_concurrence() < 1e-8);
        assert!(h.psi_concurrence() > 0.0);
        assert!(h.probability() <= PHI_INV_5 + 1e-9);
        assert!((h.upper_expectation() - (h.probability() + 2.0)).abs() < 1e-10);
    }
}

#[test]
fn hardy_collapses_when_a1b1_is_orthogonal_to_a2b2() {
    let params = HardyParams { alpha: 0.3, phi: 0.0, beta: std::f64::consts::FRAC_PI_2, chi: 1.0 };
    assert_eq!(hardy_construct(&params).unwrap_err(), Error::HardyCollapse);
}
