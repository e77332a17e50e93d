use qshuffle::algebra::{AlgebraKind, WordCoalgebra};
use qshuffle::braided::{from_group_class, Group, GroupData};
use qshuffle::combinat::orbit_enumerate;
use qshuffle::homology::*;
use qshuffle::Scalar;

fn s3() -> GroupData {
    let g = Group::from_permutations(&[vec![2, 1, 3], vec![1, 3, 2]]).unwrap();
    let t = g.index_of("(12)").unwrap();
    GroupData::from_class_reps(g, &[t]).unwrap()
}

#[test]
fn top_tor_counts_orbits() {
    let gd = s3();
    let v = from_group_class(&gd, &Scalar::from_int(-1)).unwrap();
    let t = tor_dims(&v, AlgebraKind::Shuffle, 6, |n| default_mode(n, 3, 1), false).unwrap();
    assert!(t.verified);
    for n in 1..=6 {
        assert_eq!(t.get(n, n, None), orbit_enumerate(&gd, n).unwrap().count, "n={n}");
    }
}

#[test]
fn bar_cobar_duality() {
    let v = from_group_class(&s3(), &Scalar::from_int(-1)).unwrap();
    let bar = tor_dims(&v, AlgebraKind::Shuffle, 4, |_| RankMode::Exact, false).unwrap();
    let co = WordCoalgebra::tensor(&v.dual(), 4).unwrap();
    let cobar = cotor_dims(&co, 4, RankMode::Exact).unwrap();
    assert_eq!(bar.entries, cobar.entries);
}
