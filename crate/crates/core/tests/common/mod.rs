//! Property suites shared by the property tests and the acceptance run.

#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::sample::select;
use proptest::test_runner::{Config, TestRunner};
use tropflag::crit::{layer_gradient, layer_objective, solve_layer_minimum, LayerProblem};
use tropflag::group::chart_x_minus;
use tropflag::peel::{chart_letters, chart_matrix};
use tropflag::quiver::Quiver;
use tropflag::sections::{borel_weil_valuations, nu, omega_inv, pi_p_in_charts, y_chart_matrix};
use tropflag::superpot::{chart_invert, chart_transition_symbolic, nu_vee, string_polytope, superpotential_tropical, theta_m};
use tropflag::tropsolve::{ffl_check, filling_to_tropical, ideal_filling, solve_tropical};
use tropflag::weights::{lambda_p, reduced_words, weyl_dim, DominantWeight, ParabolicType, ReducedWord};
use tropflag_arith::Rational;

/// Generated cases per suite.
pub const CASES: u32 = 200;
/// Relative tolerance of numeric chart round trips.
pub const CHART_TOL: f64 = 1e-9;
/// Relative tolerance of the finite-difference gradient check.
pub const GRADIENT_TOL: f64 = 1e-6;

pub struct Suite {
    pub name: &'static str,
    /// Part of the required property list of the acceptance run.
    pub required: bool,
    pub run: fn(u32) -> Result<(), String>,
}

fn check<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

/// Dominant weights with `2 <= n <= 5`, fundamental coefficients `k/d` in
/// `[0, 6]` with `d` in {1, 2, 3}, and lifts shifted by an integer in `[-6, 6]`.
pub fn rational_weight() -> impl Strategy<Value = DominantWeight> {
    let coeff = (1i64..=3).prop_flat_map(|d| (0..=6 * d).prop_map(move |k| Rational::new(k, d)));
    (2usize..=5)
        .prop_flat_map(move |n| (prop::collection::vec(coeff.clone(), n - 1), -6i64..=6))
        .prop_map(|(m, shift)| DominantWeight::from_fundamental(&m).unwrap().shifted(&Rational::from_int(shift)))
}

pub fn integral_weight(n: std::ops::RangeInclusive<usize>, max: i64) -> impl Strategy<Value = DominantWeight> {
    n.prop_flat_map(move |n| prop::collection::vec(0i64..=max, n - 1))
        .prop_map(|m| DominantWeight::from_fundamental_ints(&m).unwrap())
}

pub fn word_for(n: usize) -> impl Strategy<Value = ReducedWord> {
    select(reduced_words(n).unwrap())
}

pub fn weight_and_word(n: std::ops::RangeInclusive<usize>, max: i64) -> impl Strategy<Value = (DominantWeight, ReducedWord)> {
    integral_weight(n, max).prop_flat_map(|l| {
        let n = l.n();
        (Just(l), word_for(n))
    })
}

fn min_of(xs: impl Iterator<Item = Rational>) -> Option<Rational> {
    xs.reduce(|a, b| Rational::min(&a, &b))
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() < tol * x.abs().max(1.0)
}

pub fn min_in_equals_min_out(lambda: DominantWeight) -> Result<(), TestCaseError> {
    let p = solve_tropical(&lambda).unwrap();
    let q = &p.quiver;
    for v in q.bullets() {
        let inc = min_of(q.incoming(v).iter().map(|&a| p.sigma[a].clone())).unwrap();
        let out = min_of(q.outgoing(v).iter().map(|&a| p.sigma[a].clone())).unwrap();
        prop_assert_eq!(&inc, &out, "vertex {}", q.vertex_name(v));
    }
    for (a, arrow) in q.arrows().iter().enumerate() {
        prop_assert_eq!(&p.sigma[a], &(&p.delta[arrow.head] - &p.delta[arrow.tail]));
    }
    for (i, &v) in q.stars().iter().enumerate() {
        prop_assert_eq!(&p.delta[v], &lambda.lift()[i]);
    }
    Ok(())
}

pub fn arrow_valuations_nonnegative(lambda: DominantWeight) -> Result<(), TestCaseError> {
    let p = solve_tropical(&lambda).unwrap();
    prop_assert!(p.sigma.iter().all(|s| !s.is_negative()), "{:?}", p.sigma);
    Ok(())
}

pub fn weight_zero_diagonals(lambda: DominantWeight) -> Result<(), TestCaseError> {
    let p = solve_tropical(&lambda).unwrap();
    let q = &p.quiver;
    let n = q.n();
    let diag = |i: usize| -> Rational {
        if i > n {
            Rational::zero()
        } else {
            q.diagonal(i).iter().map(|&v| p.delta[v].clone()).sum()
        }
    };
    for i in 2..=n {
        prop_assert_eq!(&diag(i - 1) + &diag(i + 1), &diag(i) + &diag(i), "diagonal {}", i);
    }
    Ok(())
}

pub fn shift_equivariance((lambda, k, d): (DominantWeight, i64, i64)) -> Result<(), TestCaseError> {
    let c = Rational::new(k, d);
    let p = solve_tropical(&lambda).unwrap();
    let s = solve_tropical(&lambda.shifted(&c)).unwrap();
    for (a, b) in p.delta.iter().zip(&s.delta) {
        prop_assert_eq!(&(a + &c), b);
    }
    prop_assert_eq!(&p.sigma, &s.sigma);
    Ok(())
}

pub fn filling_round_trips(lambda: DominantWeight) -> Result<(), TestCaseError> {
    let f = ideal_filling(&lambda).unwrap();
    let zero_sum = DominantWeight::new(lambda.zero_sum_lift()).unwrap();
    let expected = solve_tropical(&zero_sum).unwrap();
    let back = filling_to_tropical(&f).unwrap();
    prop_assert_eq!(&back.delta, &expected.delta);
    prop_assert_eq!(&back.sigma, &expected.sigma);
    prop_assert!(back.lambda.same_weight(&lambda));
    let again = ideal_filling(&back.lambda).unwrap();
    prop_assert_eq!(again.rows(), f.rows());
    Ok(())
}

pub fn lattice_count(args: (DominantWeight, ReducedWord)) -> Result<(), TestCaseError> {
    let (lambda, word) = args;
    let sp = string_polytope(&lambda, &word).unwrap();
    prop_assert_eq!(sp.lattice_points.len() as u128, weyl_dim(&lambda).unwrap());
    Ok(())
}

pub fn filling_in_ffl(lambda: DominantWeight) -> Result<(), TestCaseError> {
    let f = ideal_filling(&lambda).unwrap();
    let r = ffl_check(&lambda, &f.root_vector()).unwrap();
    prop_assert!(r.inside, "{:?}", r.violations);
    Ok(())
}

pub fn chart_round_trip((word, q, z): (ReducedWord, Vec<f64>, Vec<f64>)) -> Result<(), TestCaseError> {
    let b = chart_x_minus(&word, &q, &z).unwrap();
    let (q2, z2) = chart_invert(&word, &b).unwrap();
    for (x, y) in z.iter().zip(&z2) {
        prop_assert!(close(*x, *y, CHART_TOL), "z {} vs {}", x, y);
    }
    // the torus part is only defined up to scalars
    for i in 0..q.len() - 1 {
        let (r, r2) = (q[i] / q[i + 1], q2[i] / q2[i + 1]);
        prop_assert!(close(r, r2, CHART_TOL), "q ratio {} vs {}", r, r2);
    }
    Ok(())
}

pub fn quiver_chart_round_trip((word, arrows): (ReducedWord, Vec<f64>)) -> Result<(), TestCaseError> {
    let t = chart_transition_symbolic(&word).unwrap();
    let quiver = Quiver::new(word.n());
    let (q, z) = t.eval_f64(&arrows);
    let b = theta_m(&quiver, &arrows).unwrap();
    let fwd = chart_x_minus(&word, &q, &z).unwrap();
    for (x, y) in b.entries().iter().zip(fwd.entries()) {
        prop_assert!(close(*x, *y, CHART_TOL), "{} vs {}", x, y);
    }
    let (q2, z2) = chart_invert(&word, &b).unwrap();
    for (x, y) in z.iter().zip(&z2).chain(q.iter().zip(&q2)) {
        prop_assert!(close(*x, *y, CHART_TOL), "{} vs {}", x, y);
    }
    Ok(())
}

pub fn projection_in_parabolic((word, ip, x): (ReducedWord, BTreeSet<usize>, Vec<f64>)) -> Result<(), TestCaseError> {
    let n = word.n();
    let p = ParabolicType::new(n, ip).unwrap();
    let u: Vec<f64> = pi_p_in_charts(&word, &p).unwrap().iter().map(|f| f.eval_f64(&x)).collect();
    let g = chart_matrix(n, &chart_letters(&word, &p), &u);
    let rest = g.inverse().unwrap().mul(&y_chart_matrix(&word, &x));
    let blocks = p.blocks();
    let scale = rest.entries().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for r in 0..n {
        for c in 0..n {
            if blocks[r] > blocks[c] {
                prop_assert!(rest.get(r, c).abs() < CHART_TOL * scale, "entry ({}, {}) = {}", r, c, rest.get(r, c));
            }
        }
    }
    Ok(())
}

/// Objective `sum_a d_h / d_t` over the quiver with stars fixed and bullets free.
fn quiver_layer(n: usize, stars: Vec<f64>) -> LayerProblem {
    let quiver = Quiver::new(n);
    LayerProblem {
        vertices: quiver.bullets(),
        arrows: quiver.arrows().iter().map(|a| (a.head, a.tail)).collect(),
        boundary: quiver.stars().into_iter().zip(stars).collect(),
    }
}

fn gradient_agrees(problem: &LayerProblem, d: &[f64], at_min: bool) -> Result<(), TestCaseError> {
    let f = layer_objective(problem, d).unwrap();
    let g = layer_gradient(problem, d).unwrap();
    let scale = g.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    for i in 0..d.len() {
        let h = 1e-6 * d[i];
        let (mut plus, mut minus) = (d.to_vec(), d.to_vec());
        plus[i] += h;
        minus[i] -= h;
        let fd = (layer_objective(problem, &plus).unwrap() - layer_objective(problem, &minus).unwrap()) / (2.0 * h);
        prop_assert!((fd - g[i]).abs() <= GRADIENT_TOL * scale, "coordinate {}: {} vs {}", i, fd, g[i]);
        if at_min {
            prop_assert!((g[i] * d[i]).abs() <= GRADIENT_TOL * f, "gradient {} at the minimum", g[i]);
        }
    }
    Ok(())
}

pub fn layer_gradient_fd((n, stars, d): (usize, Vec<f64>, Vec<f64>)) -> Result<(), TestCaseError> {
    let problem = quiver_layer(n, stars);
    gradient_agrees(&problem, &d, false)?;
    let dmin = solve_layer_minimum(&problem, 1e-12, 200).unwrap();
    gradient_agrees(&problem, &dmin, true)
}

pub fn nu_vee_in_polytope((lambda, word): (DominantWeight, ReducedWord)) -> Result<(), TestCaseError> {
    let v = nu_vee(&lambda, &word).unwrap();
    let sp = string_polytope(&lambda, &word).unwrap();
    prop_assert!(sp.contains(&v), "{:?}", v);
    for f in superpotential_tropical(&lambda, &word).unwrap().iter() {
        prop_assert!(!f.eval(&v, lambda.lift()).is_negative());
    }
    Ok(())
}

pub fn section_valuation_in_polytope((lambda, word): (DominantWeight, ReducedWord)) -> Result<(), TestCaseError> {
    let s = match omega_inv(&lambda, &word) {
        Ok(s) => s,
        Err(tropflag::Error::NotIntegral(_)) => return Ok(()),
        Err(e) => return Err(TestCaseError::fail(e.to_string())),
    };
    let v = nu(&s).unwrap();
    let sp = string_polytope(&lambda, &word).unwrap();
    prop_assert!(sp.lattice_points.contains(&v), "{:?}", v);
    Ok(())
}

pub fn borel_weil_is_lattice((lambda, word): (DominantWeight, ReducedWord)) -> Result<(), TestCaseError> {
    let bw = borel_weil_valuations(&lambda, &word).unwrap();
    let sp = string_polytope(&lambda, &word).unwrap();
    let lattice: BTreeSet<Vec<i64>> = sp.lattice_points.into_iter().collect();
    prop_assert_eq!(bw, lattice);
    Ok(())
}

pub fn chain_multiplicative((word, order, a, b): (ReducedWord, Vec<usize>, Vec<i64>, Vec<i64>)) -> Result<(), TestCaseError> {
    let n = word.n();
    // a maximal chain of parabolics: I_P grows by one simple root at a time
    let chain: Vec<ParabolicType> = (0..n - 1).map(|k| ParabolicType::new(n, order[..k].iter().copied()).unwrap()).collect();
    let combine = |c: &[i64]| -> DominantWeight {
        chain
            .iter()
            .zip(c)
            .fold(DominantWeight::from_ints(&vec![0; n]).unwrap(), |acc, (p, &k)| acc.add(&lambda_p(p).scale(&Rational::from_int(k))))
    };
    let (lambda, mu) = (combine(&a), combine(&b));
    let lhs = omega_inv(&lambda.add(&mu), &word).unwrap();
    let rhs = omega_inv(&lambda, &word).unwrap().mul(&omega_inv(&mu, &word).unwrap());
    prop_assert_eq!(lhs.poly, rhs.poly);
    Ok(())
}

pub fn suites() -> Vec<Suite> {
    vec![
        Suite { name: "min-in = min-out exactness", required: true, run: |c| check(c, rational_weight(), min_in_equals_min_out) },
        Suite { name: "sigma >= 0", required: true, run: |c| check(c, rational_weight(), arrow_valuations_nonnegative) },
        Suite { name: "weight-zero diagonal identity", required: true, run: |c| check(c, rational_weight(), weight_zero_diagonals) },
        Suite {
            name: "shift equivariance",
            required: true,
            run: |c| check(c, (rational_weight(), -12i64..=12, 1i64..=4), shift_equivariance),
        },
        Suite { name: "filling bijection round trips", required: true, run: |c| check(c, rational_weight(), filling_round_trips) },
        Suite {
            name: "lattice count = Weyl dimension",
            required: true,
            run: |c| check(c, prop_oneof![weight_and_word(2..=3, 6), weight_and_word(4..=4, 2)], lattice_count),
        },
        Suite { name: "ideal filling in FFL polytope", required: true, run: |c| check(c, rational_weight(), filling_in_ffl) },
        Suite {
            name: "chart round trip",
            required: true,
            run: |c| {
                let s = (2usize..=5).prop_flat_map(|n| {
                    (word_for(n), prop::collection::vec(0.2f64..5.0, n), prop::collection::vec(0.2f64..5.0, n * (n - 1) / 2))
                });
                check(c, s, chart_round_trip)
            },
        },
        Suite {
            name: "quiver chart transition round trip",
            required: true,
            run: |c| {
                let s = (2usize..=4).prop_flat_map(|n| (word_for(n), prop::collection::vec(0.2f64..5.0, n * (n - 1))));
                check(c, s, quiver_chart_round_trip)
            },
        },
        Suite {
            name: "layer gradient vs finite differences",
            required: true,
            run: |c| {
                let s = (2usize..=5).prop_flat_map(|n| {
                    (Just(n), prop::collection::vec(0.3f64..4.0, n), prop::collection::vec(0.3f64..3.0, n * (n - 1) / 2))
                });
                check(c, s, layer_gradient_fd)
            },
        },
        Suite {
            name: "projection to G/P lands in P",
            required: false,
            run: |c| {
                let s = (2usize..=4).prop_flat_map(|n| {
                    (word_for(n), prop::collection::btree_set(1..n, 0..n - 1), prop::collection::vec(0.2f64..5.0, n * (n - 1) / 2))
                });
                check(c, s, projection_in_parabolic)
            },
        },
        Suite { name: "nu_vee in string polytope", required: false, run: |c| check(c, weight_and_word(2..=4, 2), nu_vee_in_polytope) },
        Suite {
            name: "nu(omega_inv) in lattice points",
            required: false,
            run: |c| check(c, weight_and_word(2..=4, 3), section_valuation_in_polytope),
        },
        Suite {
            name: "Borel-Weil valuations = lattice points",
            required: false,
            run: |c| check(c, weight_and_word(2..=3, 2), borel_weil_is_lattice),
        },
        Suite {
            name: "chain multiplicativity",
            required: false,
            run: |c| {
                let s = (2usize..=4).prop_flat_map(|n| {
                    (
                        word_for(n),
                        Just((1..n).collect::<Vec<usize>>()).prop_shuffle(),
                        prop::collection::vec(0i64..=2, n - 1),
                        prop::collection::vec(0i64..=2, n - 1),
                    )
                });
                check(c, s, chain_multiplicative)
            },
        },
    ]
}

pub fn run_suite(name: &str) {
    let suite = suites().into_iter().find(|s| s.name == name).expect("known suite");
    if let Err(e) = (suite.run)(CASES) {
        panic!("{name}: {e}");
    }
}
