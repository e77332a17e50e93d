use qshuffle::braided::{from_group_class, make_diagonal, make_trivial, Group, GroupData};
use qshuffle::filtration::*;
use qshuffle::{FieldDesc, Scalar};

fn s3_transpositions(x: i64) -> qshuffle::braided::BraidedVectorSpace {
    let g = Group::from_permutations(&[vec![2, 1, 3], vec![1, 3, 2]]).unwrap();
    let t = g.index_of("(12)").unwrap();
    let gd = GroupData::from_class_reps(g, &[t]).unwrap();
    from_group_class(&gd, &Scalar::from_int(x)).unwrap()
}

fn row(t: &FiltrationTable, s: i32) -> Vec<usize> {
    (0..=t.nmax()).map(|n| t.gr_dim(n, s)).collect()
}

#[test]
fn figure_3_left_wordlength() {
    let t = wordlength_filtration(&s3_transpositions(1), 5).unwrap();
    t.check().unwrap();
    assert_eq!(row(&t, 0), vec![1, 3, 9, 27, 79, 225]);
    assert_eq!(row(&t, 1), vec![0; 6]);
    assert_eq!(row(&t, 2), vec![0; 6]);
    assert_eq!(row(&t, 3), vec![0, 0, 0, 0, 2, 12]);
    assert_eq!(row(&t, 4), vec![0, 0, 0, 0, 0, 6]);
}

#[test]
fn figure_3_right_wordlength() {
    let t = wordlength_filtration(&s3_transpositions(-1), 5).unwrap();
    t.check().unwrap();
    assert_eq!(row(&t, 0), vec![1, 3, 4, 3, 1, 0]);
    assert_eq!(row(&t, 1), vec![0, 0, 5, 21, 42, 51]);
    assert_eq!(row(&t, 2), vec![0, 0, 0, 3, 32, 132]);
    assert_eq!(row(&t, 3), vec![0, 0, 0, 0, 6, 51]);
    assert_eq!(row(&t, 4), vec![0, 0, 0, 0, 0, 9]);
}

#[test]
fn figure_6_weight() {
    let t = weight_filtration_A(&s3_transpositions(1), 5).unwrap();
    t.check().unwrap();
    assert_eq!(row(&t, 0), vec![1, 3, 9, 27, 79, 225]);
    assert_eq!(row(&t, 1), vec![0, 0, 0, 0, 2, 18]);
}

#[test]
fn figure_3_right_weight() {
    let w = weight_filtration_A(&s3_transpositions(-1), 5).unwrap();
    let l = wordlength_filtration(&s3_transpositions(-1), 5).unwrap();
    assert_eq!(w.entries(), l.entries());
}

/// Necklace count (1/n) Σ_{e | n} μ(e) d^{n/e}.
fn lyndon_count(d: i64, n: u32) -> i64 {
    fn mobius(mut n: u32) -> i64 {
        let mut m = 1;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                m = -m;
            }
            p += 1;
        }
        if n > 1 {
            -m
        } else {
            m
        }
    }
    (1..=n).filter(|e| n % e == 0).map(|e| mobius(e) * d.pow(n / e)).sum::<i64>() / n as i64
}

#[test]
fn figure_2() {
    let t = wordlength_filtration(&make_trivial(3).unwrap(), 5).unwrap();
    t.check().unwrap();
    assert_eq!(row(&t, 0), vec![1, 3, 6, 10, 15, 21]);
    assert_eq!(row(&t, 1), vec![0, 0, 3, 9, 18, 30]);
    assert_eq!(row(&t, 2), vec![0, 0, 0, 8, 30, 66]);
    assert_eq!(row(&t, 3), vec![0, 0, 0, 0, 18, 78]);
    assert_eq!(row(&t, 4), vec![0, 0, 0, 0, 0, 48]);
    for n in 0..=5 {
        let col: usize = (0..=4).map(|s| t.gr_dim(n, s)).sum();
        assert_eq!(col, 3usize.pow(n as u32));
    }
    for n in 1..=5usize {
        assert_eq!(t.gr_dim(n, n as i32 - 1) as i64, lyndon_count(3, n as u32));
    }
}

#[test]
fn trivial_braiding_weight_is_pbw() {
    let v = make_trivial(2).unwrap();
    let w = weight_filtration_A(&v, 6).unwrap();
    let l = wordlength_filtration(&v, 6).unwrap();
    assert_eq!(w.entries(), l.entries());
}

fn zeta3() -> qshuffle::braided::BraidedVectorSpace {
    make_diagonal(&[vec![Scalar::cyclotomic(3, 1)]], FieldDesc::Cyclotomic { order: 3 }).unwrap()
}

#[test]
fn figure_1() {
    let t = wordlength_filtration(&zeta3(), 8).unwrap();
    assert_eq!(row(&t, 0), vec![1, 1, 1, 0, 0, 0, 0, 0, 0]);
    assert_eq!(row(&t, 1), vec![0; 9]);
    assert_eq!(row(&t, 2), vec![0, 0, 0, 1, 1, 1, 0, 0, 0]);
    assert_eq!(row(&t, 3), vec![0; 9]);
    assert_eq!(row(&t, 4), vec![0, 0, 0, 0, 0, 0, 1, 1, 1]);
}

#[test]
fn figure_5() {
    let t = weight_filtration_A(&zeta3(), 8).unwrap();
    assert_eq!(row(&t, 0), vec![1, 1, 1, 0, 0, 0, 0, 0, 0]);
    assert_eq!(row(&t, 1), vec![0, 0, 0, 1, 1, 1, 0, 0, 0]);
    assert_eq!(row(&t, 2), vec![0, 0, 0, 0, 0, 0, 1, 1, 1]);
}
