use pentaks::parallel;
use pentaks_core::orthograph::cabello18;
use pentaks_core::paradoxes::{hardy_maximize_with, AvGame};
use pentaks_core::pentagram3::{max_eigenvalue_over_family, refine_overlap_minimum, scan_family, FamilyGrid};
use pentaks_core::pentagram4::{conjecture_scan, entangled_regular_with, separable_regular_with};

fn pools() -> Vec<rayon::ThreadPool> {
    [1, 3].iter().map(|&n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap()).collect()
}

#[test]
fn game_matches_sequential_play() {
    let game = AvGame::canonical();
    let seq = game.play(5000, 11).unwrap();
    for pool in pools() {
        assert_eq!(parallel::av_game(&pool, &game, 5000, 11).unwrap(), seq);
    }
}

#[test]
fn conjecture_matches_sequential_scan() {
    let g = cabello18();
    let seq = conjecture_scan(&g, 400, 9).unwrap();
    for pool in pools() {
        assert_eq!(parallel::conjecture_scan(&pool, &g, 400, 9).unwrap(), seq);
    }
}

#[test]
fn family_searches_match_sequential_ones() {
    let grid = FamilyGrid { angle_points: 9, phase_points: 5 };
    let max = max_eigenvalue_over_family(grid).unwrap();
    let min = refine_overlap_minimum(&scan_family(grid)).unwrap();
    let rows = scan_family(grid);
    for pool in pools() {
        assert_eq!(parallel::max_eigenvalue_over_family(&pool, grid).unwrap(), max);
        assert_eq!(parallel::overlap_minimum(&pool, grid).unwrap(), min);
        let mut streamed = Vec::new();
        parallel::scan_family(&pool, grid, |s| {
            streamed.push(*s);
            Ok(())
        })
        .unwrap();
        assert_eq!(streamed, rows);
    }
}

#[test]
fn restarts_match_sequential_searches() {
    let hardy = hardy_maximize_with(3, 5).unwrap();
    let sep = separable_regular_with(10, 4).unwrap();
    let ent = entangled_regular_with(12, 4).unwrap();
    for pool in pools() {
        assert_eq!(parallel::hardy_maximize(&pool, 3, 5).unwrap(), hardy);
        assert_eq!(parallel::separable_regular(&pool, 10, 4).unwrap(), sep);
        assert_eq!(parallel::entangled_regular(&pool, 12, 4).unwrap(), ent);
    }
}

#[test]
fn zero_work_is_rejected() {
    let pool = &pools()[0];
    assert!(parallel::av_game(pool, &AvGame::canonical(), 0, 1).is_err());
    assert!(parallel::conjecture_scan(pool, &cabello18(), 0, 1).is_err());
    assert!(parallel::hardy_maximize(pool, 0, 1).is_err());
}
