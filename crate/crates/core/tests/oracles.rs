//! Solver outputs checked against brute-force enumeration.

mod common;

use common::*;
use mmtv_core::hypothesis::tv_ball;
use mmtv_core::lp::{check_solution, solve, LpStatus, Relation};
use mmtv_core::measures::{mix, risk_of_test, tv_distance, Pmf, TestFn};
use mmtv_core::minimax::{closest_pair, minimax_risk};
use mmtv_core::{Error, HypothesisSet, LinearConstraint};
use num_traits::{One, Zero};
use rand::Rng;

#[test]
fn simplex_matches_vertex_enumeration() {
    let mut rng = rng(11);
    let mut optimal = 0;
    for case in 0..300 {
        let p = random_box_lp(&mut rng);
        let s = solve(&p).unwrap();
        match brute_force_lp(&p) {
            None => assert_eq!(s.status, LpStatus::Infeasible, "case {case}: {p:?}"),
            Some(best) => {
                optimal += 1;
                assert_eq!(s.status, LpStatus::Optimal, "case {case}");
                assert_eq!(s.objective, best, "case {case}: {p:?}");
                assert!(check_solution(&p, &s).max().is_zero(), "case {case}");
            }
        }
    }
    assert!(optimal > 100, "too few feasible cases: {optimal}");
}

fn random_polytope(rng: &mut impl Rng, n: usize) -> Vec<LinearConstraint<Q>> {
    (0..rng.random_range(1..=3))
        .map(|_| {
            let coeffs = (0..n).map(|_| q(rng.random_range(-2..=3), 1)).collect();
            let rel = match rng.random_range(0..5) {
                0 => Relation::Eq,
                1 | 2 => Relation::Ge,
                _ => Relation::Le,
            };
            LinearConstraint::new(coeffs, rel, q(rng.random_range(-1..=4), 4))
        })
        .collect()
}

#[test]
fn polytope_support_matches_vertex_enumeration() {
    let mut rng = rng(12);
    let mut nonempty = 0;
    for case in 0..200 {
        let n = rng.random_range(2..=4);
        let sp = space(n);
        let cons = random_polytope(&mut rng, n);
        let h = HypothesisSet::polytope(sp.clone(), 0, cons.clone()).unwrap();
        let verts = polytope_vertices(n, &cons);
        if verts.is_empty() {
            assert_eq!(h.validate(), Err(Error::EmptyHypothesis), "case {case}");
            continue;
        }
        nonempty += 1;
        h.validate().unwrap();
        for v in &verts {
            assert!(h.contains(&Pmf::new(sp.clone(), v.clone()).unwrap()).unwrap());
        }
        for _ in 0..5 {
            let f: Vec<Q> = (0..n).map(|_| q(rng.random_range(-5..=5), 3)).collect();
            let best = verts.iter().map(|v| dot(&f, v)).max().unwrap();
            let sq = h.support_value(&f).unwrap();
            assert_eq!(sq.value, best, "case {case}");
            assert!(h.contains(&sq.maximizer).unwrap());
            assert_eq!(dot(&f, sq.maximizer.mass()), best);
        }
        // A generator representation of the same set has the same support.
        let as_gens = HypothesisSet::generators(
            sp.clone(),
            verts.iter().map(|v| Pmf::new(sp.clone(), v.clone()).unwrap()).collect(),
        )
        .unwrap();
        let f: Vec<Q> = (0..n).map(|i| q(i as i64 * 2 - 3, 5)).collect();
        assert_eq!(
            as_gens.support_value(&f).unwrap().value,
            h.support_value(&f).unwrap().value
        );
    }
    assert!(nonempty > 50, "too few nonempty cases: {nonempty}");
}

#[test]
fn coarse_grid_tests_never_beat_the_lp() {
    let mut rng = rng(13);
    let sp = space(3);
    for _ in 0..20 {
        let (kp, kq) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let p = random_family(&mut rng, &sp, kp);
        let qf = random_family(&mut rng, &sp, kq);
        let lp_risk = minimax_risk(&gens(&sp, &p), &gens(&sp, &qf)).unwrap().risk;
        let mut best = Q::from(num_bigint::BigInt::from(2));
        for a in 0..=4 {
            for b in 0..=4 {
                for c in 0..=4 {
                    let phi = TestFn::new(sp.clone(), vec![q(a, 4), q(b, 4), q(c, 4)]).unwrap();
                    best = best.min(risk_of_test(&phi, &p, &qf).unwrap());
                }
            }
        }
        assert!(best >= lp_risk);
    }
}

/// Minimizes `tv(mix(w, P), delta_0)` over a grid of mixture weights.
fn escaping_mass_grid_min(n_max: usize, steps: i64) -> Q {
    let sp = space(n_max + 1);
    let family: Vec<Pmf<Q>> = (2..=n_max)
        .map(|n| {
            let mut m = vec![Q::zero(); n_max + 1];
            m[0] = q(1, 2) - q(1, n as i64);
            m[n] = q(1, 2) + q(1, n as i64);
            Pmf::new(sp.clone(), m).unwrap()
        })
        .collect();
    let dirac = Pmf::dirac(sp.clone(), 0).unwrap();
    let k = family.len();
    let mut best: Option<Q> = None;
    let mut w = vec![0i64; k];
    fn rec(i: usize, left: i64, w: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
        if i + 1 == w.len() {
            w[i] = left;
            f(w);
            return;
        }
        for x in 0..=left {
            w[i] = x;
            rec(i + 1, left - x, w, f);
        }
    }
    rec(0, steps, &mut w, &mut |w| {
        let weights: Vec<Q> = w.iter().map(|&x| q(x, steps)).collect();
        let m = mix(&weights, &family).unwrap();
        let tv = tv_distance(&m, &dirac).unwrap();
        best = Some(best.take().map_or(tv.clone(), |b| b.min(tv)));
    });
    best.unwrap()
}

#[test]
fn escaping_mass_matches_weight_grid() {
    for n_max in 2..=6 {
        let (p, qs) = mmtv_core::experiments::escaping_mass_instance::<Q>(n_max).unwrap();
        let tv = closest_pair(&p, &qs).unwrap().tv;
        assert_eq!(tv, escaping_mass_grid_min(n_max, 12), "N = {n_max}");
        assert_eq!(tv, q(1, 2) + q(1, n_max as i64));
    }
}

#[test]
fn tv_between_balls_shrinks_by_twice_the_radius() {
    let mut rng = rng(14);
    for _ in 0..40 {
        let n = rng.random_range(2..=4);
        let sp = space(n);
        let c1 = random_pmf(&mut rng, &sp);
        let c2 = random_pmf(&mut rng, &sp);
        let r = q(rng.random_range(0..=6), 20);
        let d = tv_distance(&c1, &c2).unwrap();
        let expected = (d - q(2, 1) * r.clone()).max(Q::zero());
        let b1 = tv_ball(&c1, r.clone()).unwrap();
        let b2 = tv_ball(&c2, r).unwrap();
        let got = closest_pair(&b1, &b2).unwrap();
        assert_eq!(got.tv, expected);
        assert!(b1.contains(&got.mu).unwrap() && b2.contains(&got.nu).unwrap());
        assert_eq!(tv_distance(&got.mu, &got.nu).unwrap(), got.tv);
    }
}

#[test]
fn simplex_contains_everything() {
    let mut rng = rng(15);
    let sp = space(4);
    let s = HypothesisSet::<Q>::simplex(sp.clone());
    for _ in 0..20 {
        assert!(s.contains(&random_pmf(&mut rng, &sp)).unwrap());
    }
    assert_eq!(
        s.support_value(&[q(1, 3), Q::one(), Q::zero(), q(-1, 1)])
            .unwrap()
            .value,
        Q::one()
    );
}
