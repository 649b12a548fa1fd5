//! Library results against the independent references in `common`.

mod common;

use std::sync::Arc;

use flowspan::algorithms::{li_makespan, worst_ld_makespan, DEFAULT_TIE_CAP};
use flowspan::caseanalysis::{candidate_schedules, enumerate_cases, CaseModel};
use flowspan::lp::Relation;
use flowspan::oracle::{ratio_of, solve, OracleOptions};
use flowspan::search::enumerate_instances;
use flowspan::{ld_bound, li_bound, Instance, Rational};

use common::{all_sorted_instances, brute_force_optimum};

#[test]
fn oracle_matches_plain_enumeration() {
    for m in 1..=3 {
        for k in 1..=3 {
            for inst in all_sorted_instances(m, k, 3) {
                let expected = brute_force_optimum(&inst);
                let got = solve(&Arc::new(inst.clone()), &OracleOptions::default()).unwrap();
                assert_eq!(got.makespan, expected, "{inst:?}");
                assert_eq!(got.witness.makespan(), expected);
            }
        }
    }
}

#[test]
fn heuristics_stay_within_their_bounds() {
    for m in 1..=3 {
        for k in 1..=3 {
            for inst in all_sorted_instances(m, k, 4) {
                let arc = Arc::new(inst);
                let opt = brute_force_optimum(&arc);
                let ld = worst_ld_makespan(&arc, DEFAULT_TIE_CAP).unwrap();
                assert!(ratio_of(&ld, &opt) <= ld_bound(m), "LD on {arc:?}");
                assert!(ratio_of(&li_makespan(&arc), &opt) <= li_bound(m), "LI on {arc:?}");
                assert!(opt >= *arc.lambda(1));
                assert!(opt >= (1..=k).map(|r| arc.mu(r).clone()).sum::<Rational>());
                assert!(opt.clone() * Rational::from(m) >= arc.total_work());
            }
        }
    }
}

/// Every branch whose conditions hold predicts the LD makespan, and every
/// instance scaled to optimum 1 satisfies some case's constraints.
fn soundness_and_coverage(m: usize, k: usize, lmax: u64) -> usize {
    let model = CaseModel::new(m, k).unwrap();
    let branches = model.ld_branches();
    let schedules: Vec<_> = candidate_schedules(m, k).iter().map(|s| model.schedule_loads(s)).collect();
    let mut checked = 0;
    for inst in enumerate_instances(m, k, lmax).iter() {
        let arc = Arc::new(inst.clone());
        let x = model.point_of(&inst).expect("enumerated instances are normalized");
        let worst = worst_ld_makespan(&arc, DEFAULT_TIE_CAP).unwrap();
        let mut holds = 0;
        for b in &branches {
            if b.holds_at(&x) {
                holds += 1;
                assert_eq!(b.t_ld.eval(&x), worst, "{inst:?} {:?} top {}", b.orders, b.top);
            }
        }
        assert!(holds > 0, "no branch admits {inst:?}");

        let opt = brute_force_optimum(&inst);
        let scale = opt.recip().unwrap();
        let y: Vec<Rational> = x.iter().map(|v| v * &scale).collect();
        assert!(model.chain().iter().all(|c| c.expr.eval(&y) <= c.rhs));
        let fits = schedules.iter().any(|loads| loads.iter().all(|l| l.eval(&y) <= Rational::one()));
        assert!(fits, "no candidate schedule reaches the optimum of {inst:?}");
        checked += 1;
    }
    checked
}

#[test]
fn case_family_is_sound_and_covering_for_two_machines() {
    assert_eq!(soundness_and_coverage(2, 3, 8), 164);
    assert!(soundness_and_coverage(2, 2, 8) > 0);
}

#[test]
fn case_family_is_sound_and_covering_for_three_machines() {
    assert_eq!(soundness_and_coverage(3, 3, 8), 3002);
}

#[test]
fn case_constraints_admit_the_scaled_tight_instance() {
    let inst = Instance::from_ints(3, &[7, 6, 5, 5, 4, 3, 3, 0, 0]).unwrap();
    let model = CaseModel::new(3, 3).unwrap();
    let y: Vec<Rational> = model
        .point_of(&inst)
        .unwrap()
        .iter()
        .map(|v| v * &Rational::frac(1, 11))
        .collect();
    let admitting: Vec<_> = enumerate_cases(3, 3)
        .unwrap()
        .into_iter()
        .filter(|c| {
            c.lp.constraints.iter().all(|row| match row.relation {
                Relation::Le => row.expr.eval(&y) <= row.rhs,
                Relation::Eq => row.expr.eval(&y) == row.rhs,
            })
        })
        .collect();
    assert!(!admitting.is_empty());
    assert!(admitting.iter().all(|c| c.lp.objective.eval(&y) == Rational::frac(13, 11)));
}
