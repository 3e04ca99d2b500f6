//! Independent brute-force and closed-form oracles checked against the
//! library's solvers and evaluators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use splitnash::expr::{eval_utility, parse_utility};
use splitnash::game::{best_response, solve_nash, verify_nash, Game};
use splitnash::models::{builtin, InstanceProblem};
use splitnash::numeric::{sup_distance, SearchBudget};

fn game(id: &str) -> Game {
    match builtin(id).unwrap().problem {
        InstanceProblem::Game(g) => g,
        _ => unreachable!(),
    }
}

fn fa(a: f64, b: f64, c: f64) -> f64 {
    a * b * c - 4.0 * a * a
}
fn fb(a: f64, b: f64, c: f64) -> f64 {
    a * a * b * c - b.powi(4) / 8.0
}
fn fc(a: f64, b: f64, c: f64) -> f64 {
    a.sqrt() * b.sqrt() * c.sqrt() - c / 2.0
}
fn gd(d: f64, e: f64) -> f64 {
    d * e / 2.0 - d * d / 3.0
}
fn ge(d: f64, e: f64) -> f64 {
    48.0 * d.sqrt() * e - e.powi(4) / 48.0
}

/// Grid points of `[0, 6]^3` at step 0.05 where every player's grid regret
/// is at most `eps`.
fn e1_grid_equilibria(eps: f64) -> Vec<[f64; 3]> {
    let n = 121;
    let g: Vec<f64> = (0..n).map(|k| k as f64 * 0.05).collect();
    let idx = |i: usize, j: usize| i * n + j;
    let mut best_a = vec![f64::NEG_INFINITY; n * n];
    let mut best_b = vec![f64::NEG_INFINITY; n * n];
    let mut best_c = vec![f64::NEG_INFINITY; n * n];
    for i in 0..n {
        for j in 0..n {
            for &t in &g {
                best_a[idx(i, j)] = best_a[idx(i, j)].max(fa(t, g[i], g[j]));
                best_b[idx(i, j)] = best_b[idx(i, j)].max(fb(g[i], t, g[j]));
                best_c[idx(i, j)] = best_c[idx(i, j)].max(fc(g[i], g[j], t));
            }
        }
    }
    let mut out = Vec::new();
    for (i, &a) in g.iter().enumerate() {
        for (j, &b) in g.iter().enumerate() {
            for (k, &c) in g.iter().enumerate() {
                if best_a[idx(j, k)] - fa(a, b, c) <= eps
                    && best_b[idx(i, k)] - fb(a, b, c) <= eps
                    && best_c[idx(i, j)] - fc(a, b, c) <= eps
                {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

#[test]
fn e1_grid_oracle_has_two_clusters() {
    let interior = [4f64.cbrt(), 2.0 * 2f64.sqrt(), 2.0 * 2f64.sqrt() * 4f64.cbrt()];
    let members = e1_grid_equilibria(0.01);
    assert!(members.iter().any(|m| sup_distance(m, &[0.0; 3]) < 1e-12));
    assert!(members.iter().any(|m| sup_distance(m, &interior) <= 0.1));
    assert!(!members.iter().any(|m| sup_distance(m, &[1.0, 2.0, 4.0]) < 1e-9));
    // Points on the upper face of the box are equilibria of the truncated
    // game only: some player would like to go past 6.
    for m in members.iter().filter(|m| m.iter().all(|v| *v < 6.0)) {
        let near_origin = sup_distance(m, &[0.0; 3]) <= 0.6;
        let near_interior = sup_distance(m, &interior) <= 0.3;
        assert!(near_origin || near_interior, "unexpected grid equilibrium {m:?}");
    }

    let budget = SearchBudget::default();
    let g = game("example-4.1:E1");
    assert!(verify_nash(&g, &interior, &budget).unwrap().verdict);
    assert!(verify_nash(&g, &[0.0; 3], &budget).unwrap().verdict);
    // Damped simultaneous best response is repelled by the interior point,
    // so the solver may come back empty; whatever it returns must be
    // verified and sit in one of the oracle's clusters.
    for p in solve_nash(&g, &budget).unwrap() {
        assert!(verify_nash(&g, &p, &budget).unwrap().max_regret() <= budget.tolerance);
        assert!(sup_distance(&p, &[0.0; 3]) <= 0.6 || sup_distance(&p, &interior) <= 0.3, "{p:?}");
    }
}

#[test]
fn parsed_utilities_match_hand_written() {
    let exprs = [
        ("x*y*z - 4*x^2", 0),
        ("x^2*y*z - 0.125*y^4", 1),
        ("x^0.5*y^0.5*z^0.5 - 0.5*z", 2),
        ("0.5*x*y - 0.3333333333333333*x^2", 3),
        ("48*x^0.5*y - 0.020833333333333332*y^4", 4),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (src, which) in exprs {
        let e = parse_utility(src).unwrap();
        for _ in 0..100 {
            let (x, y, z) = (rng.random_range(0.0..20.0), rng.random_range(0.0..20.0), rng.random_range(0.0..20.0));
            let bind = [("x".to_string(), x), ("y".to_string(), y), ("z".to_string(), z)].into_iter().collect();
            let got = eval_utility(&e, &bind).unwrap();
            let want = match which {
                0 => fa(x, y, z),
                1 => fb(x, y, z),
                2 => fc(x, y, z),
                3 => gd(x, y),
                _ => ge(x, y),
            };
            assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "{src} at ({x}, {y}, {z}): {got} vs {want}");
        }
    }
}

#[test]
fn best_response_matches_fine_grid() {
    let budget = SearchBudget::default();
    let step = budget.grid_step / 10.0;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for id in ["example-4.1:E1", "example-4.1:E2"] {
        let g = game(id);
        for _ in 0..10 {
            let x: Vec<f64> = (0..g.dim()).map(|_| rng.random_range(0.0..5.0)).collect();
            for i in 0..g.num_players() {
                let br = best_response(&g, i, &x, &budget).unwrap();
                let mut y = x.clone();
                let mut grid_best = f64::NEG_INFINITY;
                for k in 0..=(60.0 / step) as usize {
                    y[i] = k as f64 * step;
                    grid_best = grid_best.max(g.utility(i, &y).unwrap());
                }
                assert!((br.value - grid_best).abs() <= 1e-4, "{id} player {i} at {x:?}: {} vs {grid_best}", br.value);
            }
        }
    }
    for id in ["quadratic-sanity", "quadratic-mismatch"] {
        let InstanceProblem::Split(p) = builtin(id).unwrap().problem else { unreachable!() };
        for g in [&p.game_n, &p.game_m] {
            let x = vec![7.5, 0.3];
            for i in 0..2 {
                let br = best_response(g, i, &x, &budget).unwrap();
                assert!(br.value.abs() <= 1e-4, "{}", br.value);
            }
        }
    }
}

#[test]
fn solver_examples() {
    let budget = SearchBudget::default();
    let e2 = solve_nash(&game("example-4.1:E2"), &budget).unwrap();
    assert!(e2.iter().any(|p| sup_distance(p, &[9.0, 12.0]) <= 1e-3), "{e2:?}");
    let InstanceProblem::Split(p) = builtin("quadratic-sanity").unwrap().problem else { unreachable!() };
    let n = solve_nash(&p.game_n, &budget).unwrap();
    assert_eq!(n.len(), 1);
    assert!(sup_distance(&n[0], &[1.0, 2.0]) <= 1e-4);
}

#[test]
fn origin_is_a_split_equilibrium_of_the_example() {
    let InstanceProblem::Split(p) = builtin("example-4.1").unwrap().problem else { unreachable!() };
    let budget = SearchBudget::default();
    let v = splitnash::split::verify_split_equilibrium(&p, &[0.0; 3], &budget).unwrap();
    assert!(v.verdict);
    assert_eq!(v.image, vec![0.0, 0.0]);
    let interior = [4f64.cbrt(), 2.0 * 2f64.sqrt(), 2.0 * 2f64.sqrt() * 4f64.cbrt()];
    assert!(!splitnash::split::verify_split_equilibrium(&p, &interior, &budget).unwrap().verdict);
}
