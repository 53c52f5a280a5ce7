//! Structural properties of focal points, checked exhaustively on small
//! frames and on seeded random instances.

mod common;

use std::collections::HashSet;
use std::sync::Arc;

use common::{frame, random_mass, random_set, rng, Forced};
use focal_core::focal::{
    closure_properties_check, level_partition_oracle, mobius_naive_on_points, EXHAUSTIVE_MAX_N,
};
use focal_core::lattice::{fmt_set_function, mobius_column, mobius_naive, zeta_naive, Transform};
use focal_core::{
    ablate_weight, closure, commonality_to_conjunctive_weights, efficient_mobius, eta_table,
    extend_zeta, focal_points_from_partition, focal_points_from_partition_nonneg,
    implicability_to_disjunctive_weights, mass_to_commonality, mass_to_implicability,
    perturb_multiplicative, zeta_on_points, FocalFunction, ImagePartition, InversionPath,
    OrderDirection, Role, SetFunction, DEFAULT_MEM_CAP_BYTES as CAP,
};
use proptest::prelude::*;
use rand::Rng;

const DIRECTIONS: [OrderDirection; 2] = [OrderDirection::Subset, OrderDirection::Superset];

/// Every join of a nonempty subfamily of `s`.
fn all_joins(s: &[u64], d: OrderDirection) -> HashSet<u64> {
    let mut out = HashSet::new();
    for pick in 1u32..1 << s.len() {
        let mut it = (0..s.len()).filter(|i| pick >> i & 1 == 1).map(|i| s[i]);
        let first = it.next().unwrap();
        out.insert(it.fold(first, |a, x| d.join(a, x)));
    }
    out
}

fn sets(n: usize, max_len: usize) -> impl Strategy<Value = (usize, Vec<u64>, Vec<u64>)> {
    (1..=n).prop_flat_map(move |n| {
        let set = 0u64..1 << n;
        (
            Just(n),
            prop::collection::vec(set.clone(), 1..=max_len),
            prop::collection::vec(set, 0..4),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closure_is_a_closure_operator((n, s, extra) in sets(10, 10)) {
        let fr = frame(n);
        let mut bigger = s.clone();
        bigger.extend(extra);
        for d in DIRECTIONS {
            prop_assert!(closure_properties_check(&fr, &s, &bigger, d));
            let c = closure(fr.clone(), &s, d).unwrap();
            prop_assert_eq!(c.point_set(), all_joins(&s, d));
            prop_assert!(c.is_join_closed());
        }
    }

    #[test]
    fn level_partition_minima_are_the_closure((n, s, _) in sets(10, 8)) {
        let fr = frame(n);
        for d in DIRECTIONS {
            let lp = level_partition_oracle(&fr, &s, d).unwrap();
            let minima: Option<HashSet<u64>> = lp.minima().into_iter().collect();
            let closed = closure(fr.clone(), &s, d).unwrap().point_set();
            prop_assert_eq!(minima, Some(closed));
        }
    }
}

#[test]
fn eta_is_the_mobius_function_of_the_focal_points() {
    let mut r = rng(31);
    for _ in 0..60 {
        let n = r.random_range(1..=10);
        let k = r.random_range(1..=8);
        let s: Vec<u64> = (0..k).map(|_| random_set(&mut r, n, 0.5)).collect();
        for d in DIRECTIONS {
            let fp = closure(frame(n), &s, d).unwrap();
            if fp.len() > 64 {
                continue;
            }
            let lp = level_partition_oracle(&frame(n), fp.points(), d).unwrap();
            for &y in fp.points() {
                let eta = eta_table(&fp, y).unwrap();
                let mu = mobius_column(y, fp.points(), d);
                for (p, e) in eta.iter() {
                    assert_eq!(mu[&p], e);
                    // Aggregate of the powerset Möbius function over the level part of p.
                    let part = lp.part_of[p as usize];
                    let agg: i64 = (0..1u64 << n)
                        .filter(|&z| lp.part_of[z as usize] == part && d.leq(z, y))
                        .map(|z| if (z ^ y).count_ones() % 2 == 0 { 1 } else { -1 })
                        .sum();
                    assert_eq!(agg, e);
                }
            }
        }
    }
}

#[test]
fn eta_on_the_full_powerset_is_the_signed_distance() {
    for n in 1..=5 {
        let all: Vec<u64> = (0..1 << n).collect();
        for d in DIRECTIONS {
            let fp = closure(frame(n), &all, d).unwrap();
            for &y in &all {
                for (s, e) in eta_table(&fp, y).unwrap().iter() {
                    assert_eq!(e, if (s ^ y).count_ones() % 2 == 0 { 1 } else { -1 });
                }
            }
        }
    }
}

#[test]
fn efficient_inversion_equals_naive_for_signed_functions() {
    let mut r = rng(32);
    for _ in 0..60 {
        let n = r.random_range(1..=12);
        let f = common::random_signed(&mut r, n, 24);
        if f.is_empty() {
            continue;
        }
        for d in DIRECTIONS {
            let fp = Arc::new(closure(f.frame().clone(), &f.support(), d).unwrap());
            let g = zeta_on_points(&f, fp.clone());
            let rec = efficient_mobius(&g, InversionPath::Recursive).unwrap();
            let eta = efficient_mobius(&g, InversionPath::Eta).unwrap();
            assert!(rec.max_abs_diff(&f) <= 1e-12);
            assert!(eta.max_abs_diff(&f) <= 1e-12);
            let dense = zeta_naive(&f, d).unwrap();
            for y in 0..1u64 << n {
                assert!((extend_zeta(&g, y) - dense.get(y)).abs() <= 1e-12);
            }
            if n <= 10 {
                let naive = mobius_naive(&dense, d).unwrap();
                assert!(naive.max_abs_diff(&rec) <= 1e-12);
                let on_points = mobius_naive_on_points(&dense, &fp).unwrap();
                for (i, &p) in fp.points().iter().enumerate() {
                    assert!((on_points[i] - rec.get(p)).abs() <= 1e-12);
                }
            }
        }
    }
}

#[test]
fn multiplicative_round_trip_on_focal_points() {
    let mut r = rng(33);
    for _ in 0..40 {
        let n = r.random_range(1..=8);
        let k = r.random_range(1..=12);
        let entries: Vec<(u64, f64)> = (0..k)
            .map(|_| (random_set(&mut r, n, 0.5), r.random_range(0.2..3.0)))
            .collect();
        let h = SetFunction::new(frame(n), Role::Multiplicative, entries).unwrap();
        if h.is_empty() {
            continue;
        }
        for d in DIRECTIONS {
            let fp = Arc::new(closure(h.frame().clone(), &h.support(), d).unwrap());
            let g = zeta_on_points(&h, fp);
            let back = focal_core::efficient_mobius_multiplicative(&g, InversionPath::Recursive).unwrap();
            for (y, v) in h.iter() {
                assert!(((back.get(y) - v) / v).abs() <= 1e-9);
            }
            let dense = zeta_naive(&h, d).unwrap();
            for y in 0..1u64 << n {
                assert!(((extend_zeta(&g, y) - dense.get(y)) / dense.get(y)).abs() <= 1e-9);
            }
        }
    }
}

/// Signed function with planted cancellations: some support elements have
/// the same zeta image as an element they cover, so they are not minima of
/// any level set of the image.
fn hidden_support(r: &mut rand_chacha::ChaCha8Rng, n: usize, d: OrderDirection) -> SetFunction {
    let mut entries: Vec<(u64, f64)> = Vec::new();
    for _ in 0..r.random_range(1..=3) {
        let s = random_set(r, n, 0.4);
        let v = r.random_range(0.1..1.0);
        // t above s, cancelling it: g(t) = g(below t without s, t).
        let extra = random_set(r, n, 0.3);
        let t = d.join(s, match d {
            OrderDirection::Subset => extra,
            OrderDirection::Superset => !extra & ((1u64 << n) - 1),
        });
        entries.push((s, v));
        if t != s {
            entries.push((t, -v));
        }
        // An incomparable element with the same value.
        let u = random_set(r, n, 0.5);
        entries.push((u, v));
    }
    for _ in 0..r.random_range(0..4) {
        entries.push((random_set(r, n, 0.5), r.random_range(-1.0..1.0)));
    }
    SetFunction::new(frame(n), Role::Additive, entries).unwrap()
}

#[test]
fn partition_recovers_focal_points_including_hidden_ones() {
    let mut r = rng(34);
    let mut hidden_seen = 0;
    for round in 0..120 {
        let n = if round < 100 { r.random_range(2..=8) } else { r.random_range(9..=10) };
        for d in DIRECTIONS {
            let f = hidden_support(&mut r, n, d);
            if f.is_empty() {
                continue;
            }
            let g = zeta_naive(&f, d).unwrap();
            let gp = ImagePartition::from_full_image(&g, d).unwrap();
            gp.validate().unwrap();
            let recovered = focal_points_from_partition(&gp).unwrap().point_set();
            let truth = closure(f.frame().clone(), &f.support(), d).unwrap().point_set();
            assert!(truth.is_subset(&recovered), "n={n} {d:?}");
            let minima: Vec<u64> = gp.parts.iter().flat_map(|p| p.min_elements.clone()).collect();
            let outer = closure(f.frame().clone(), &minima, d).unwrap().point_set();
            assert!(recovered.is_subset(&outer));

            // A support element whose image equals that of something it covers.
            hidden_seen += f
                .support()
                .into_iter()
                .filter(|&y| {
                    y.count_ones() as usize != if d == OrderDirection::Subset { 0 } else { n }
                        && (0..n).any(|i| {
                            let below = match d {
                                OrderDirection::Subset => y & !(1 << i),
                                OrderDirection::Superset => y | 1 << i,
                            };
                            below != y && (g.get(below) - g.get(y)).abs() < 1e-12
                        })
                })
                .count();
        }
    }
    assert!(hidden_seen > 20, "construction produced {hidden_seen} hidden elements");
}

#[test]
fn nonnegative_functions_need_no_closure() {
    let mut r = rng(35);
    for _ in 0..60 {
        let n = r.random_range(1..=EXHAUSTIVE_MAX_N.min(10));
        let m = random_mass(&mut r, n, 1..=12, Forced::default());
        for d in DIRECTIONS {
            let g = zeta_naive(m.as_set_function(), d).unwrap();
            let gp = ImagePartition::from_full_image(&g, d).unwrap();
            let g_minus_m: HashSet<u64> = focal_points_from_partition_nonneg(&gp).into_iter().collect();
            let truth = closure(m.frame().clone(), &m.support(), d).unwrap().point_set();
            assert!(truth.is_subset(&g_minus_m));
        }
    }
}

#[test]
fn support_link_between_masses_and_weights() {
    let mut r = rng(36);
    for _ in 0..100 {
        let n = r.random_range(1..=10);
        let m = random_mass(&mut r, n, 1..=16, Forced { omega: true, empty: true });
        let omega = m.frame().omega();

        let q = mass_to_commonality(&m).unwrap();
        let w = commonality_to_conjunctive_weights(&q, omega).unwrap();
        let mut gens = w.support();
        gens.push(omega);
        let from_w = closure(m.frame().clone(), &gens, OrderDirection::Superset).unwrap();
        assert_eq!(from_w.point_set(), q.focal_points().point_set());

        let b = mass_to_implicability(&m).unwrap();
        let v = implicability_to_disjunctive_weights(&b, 0).unwrap();
        let mut gens = v.support();
        gens.push(0);
        let from_v = closure(m.frame().clone(), &gens, OrderDirection::Subset).unwrap();
        assert_eq!(from_v.point_set(), b.focal_points().point_set());
    }
}

/// Changing one weight and renormalizing, computed from scratch with dense
/// transforms, agrees with the incremental update.
#[test]
fn ablation_agrees_with_full_recomputation() {
    let mut r = rng(37);
    let mut done = 0;
    while done < 100 {
        let n = r.random_range(1..=10);
        let m = random_mass(&mut r, n, 1..=12, Forced { omega: true, empty: false });
        let omega = m.frame().omega();
        let q = mass_to_commonality(&m).unwrap();
        let w = commonality_to_conjunctive_weights(&q, omega).unwrap();
        let candidates: Vec<u64> = w.support().into_iter().filter(|&p| p != omega).collect();
        if candidates.is_empty() {
            continue;
        }
        let x = candidates[r.random_range(0..candidates.len())];
        let new_w = r.random_range(0.2..3.0);
        let out = ablate_weight(&m, &q, &w, x, new_w).unwrap();

        let changed = SetFunction::new(
            m.frame().clone(),
            Role::Multiplicative,
            w.iter().map(|(p, v)| (p, if p == x { 1.0 / new_w } else { 1.0 / v })),
        )
        .unwrap();
        let q_raw = fmt_set_function(&changed, Transform::Zeta, OrderDirection::Superset, CAP).unwrap();
        let total = q_raw.get(0);
        let q_new = SetFunction::new(
            m.frame().clone(),
            Role::Additive,
            (0..1u64 << n).map(|y| (y, q_raw.get(y) / total)),
        )
        .unwrap();
        let m_new = fmt_set_function(&q_new, Transform::Mobius, OrderDirection::Superset, CAP).unwrap();

        assert!(out.mass.inner.max_abs_diff(&m_new) <= 1e-9);
        assert!((out.mass.inner.total() - 1.0).abs() <= 1e-9);
        for (y, v) in out.commonality.iter() {
            assert!((q_new.get(y) - v).abs() <= 1e-9);
        }
        // Entries outside the subsets of x are only rescaled.
        let ratio = new_w / w.get(x);
        for (y, v) in m.iter() {
            if y & !x != 0 {
                assert!((out.mass.get(y) - ratio * v).abs() <= 1e-12);
            }
        }
        done += 1;
    }
}

#[test]
fn perturbation_matches_rebuilt_transforms() {
    let mut r = rng(38);
    for _ in 0..60 {
        let n = r.random_range(1..=10);
        let d = DIRECTIONS[r.random_range(0..2)];
        let k = r.random_range(1..=8);
        let bottom = d.bottom((1u64 << n) - 1);
        let mut entries: Vec<(u64, f64)> = (0..k)
            .map(|_| (random_set(&mut r, n, 0.5), r.random_range(0.3..3.0)))
            .collect();
        entries.push((bottom, r.random_range(0.3..3.0)));
        let h = SetFunction::new(frame(n), Role::Multiplicative, entries).unwrap();
        let mut gens = h.support();
        gens.push(bottom);
        let fp = Arc::new(closure(h.frame().clone(), &gens, d).unwrap());
        let g_mult = zeta_on_points(&h, fp.clone());
        let g = FocalFunction::from_values(fp.clone(), Role::Additive, g_mult.values().to_vec());
        let x = fp.points()[r.random_range(0..fp.len())];
        let new_value = r.random_range(0.3..3.0);
        let (g2, f2) = perturb_multiplicative(&h, &g, x, new_value).unwrap();

        let rebuilt = SetFunction::new(
            h.frame().clone(),
            Role::Multiplicative,
            (0..1u64 << n).map(|y| (y, if y == x { new_value } else { h.get(y) })),
        )
        .unwrap();
        let g_dense = zeta_naive(&rebuilt, d).unwrap();
        let g_add = SetFunction::new(
            h.frame().clone(),
            Role::Additive,
            (0..1u64 << n).map(|y| (y, g_dense.get(y))),
        )
        .unwrap();
        let f_dense = mobius_naive(&g_add, d).unwrap();
        for y in 0..1u64 << n {
            assert!((g2.get(y) - g_add.get(y)).abs() <= 1e-9 * g_add.get(y).abs().max(1.0));
        }
        assert!(f2.max_abs_diff(&f_dense) <= 1e-9);
    }
}
