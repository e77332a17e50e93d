use qshuffle::braided::{Group, GroupData};
use qshuffle::filtration::bound_constants;
use qshuffle::homology::RankMode;
use qshuffle::hurwitz::*;

fn s3() -> GroupData {
    let g = Group::from_permutations(&[vec![2, 1, 3], vec![1, 3, 2]]).unwrap();
    let t = g.index_of("(12)").unwrap();
    GroupData::from_class_reps(g, &[t]).unwrap()
}

#[test]
fn s3_report_through_degree_five() {
    let k = bound_constants(4, &[(1, 1), (1, 1), (1, 1), (4, 6)]).unwrap();
    let r = hurwitz_report(&s3(), 5, |_| RankMode::Exact, Some(k), false).unwrap();
    assert!(r.orbit_check());
    assert!(r.convergence_check());
    assert!(r.rows.iter().all(|x| x.bound != Verdict::Fail));
    assert!(r.rows.iter().all(|x| x.frob_weight >= 0 && x.frob_weight <= (2 * x.n - x.i) as i64));
}

#[test]
fn fk3_profile() {
    let p = nichols_profile(&hurwitz_space(&s3()).unwrap(), NICHOLS_SEARCH_BOUND).unwrap();
    assert_eq!(p, NicholsProfile { max_degree: Some(4), total: 12, dims: vec![1, 3, 4, 3, 1] });
}
