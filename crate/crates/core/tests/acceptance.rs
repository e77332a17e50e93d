//! Acceptance suite: one PASS/FAIL line per criterion, with timings.
//! Run with `cargo test --release --test acceptance`.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use qshuffle::algebra::{nichols_basis, symmetrizer_image, AlgebraKind, WordCoalgebra};
use qshuffle::braided::{from_group_class, make_diagonal, make_trivial, yang_baxter_check, BraidedVectorSpace, Group, GroupData};
use qshuffle::combinat::orbit_enumerate;
use qshuffle::filtration::{
    bound_constants, hilbert_quotient, weight_filtration_A, weight_filtration_T, weight_statistic, wordlength_filtration,
    Bigraded, FiltrationTable,
};
use qshuffle::homology::{
    algebra_for, build_bar, cotor_dims, default_mode, filtered_algebra, filtered_bar, spectral_sequence, tor_dims, RankMode,
};
use qshuffle::hurwitz::{
    check_weight_bound, hurwitz_report, hurwitz_space, nichols_profile, rows_from_decomposition, weight_decomposition,
    NicholsProfile, Verdict, NICHOLS_SEARCH_BOUND,
};
use qshuffle::{FieldDesc, Scalar, Q};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|x| x.to_string())
}

fn s3_group() -> GroupData {
    let g = Group::from_permutations(&[vec![2, 1, 3], vec![1, 3, 2]]).unwrap();
    let t = g.index_of("(12)").unwrap();
    GroupData::from_class_reps(g, &[t]).unwrap()
}

fn s3(x: i64) -> BraidedVectorSpace {
    from_group_class(&s3_group(), &Scalar::from_int(x)).unwrap()
}

fn zeta3() -> BraidedVectorSpace {
    make_diagonal(&[vec![Scalar::cyclotomic(3, 1)]], FieldDesc::Cyclotomic { order: 3 }).unwrap()
}

fn trivial3() -> BraidedVectorSpace {
    make_trivial(3).unwrap()
}

fn suite_spaces() -> Vec<(&'static str, BraidedVectorSpace)> {
    vec![("trivial-d3", trivial3()), ("diagonal-zeta3", zeta3()), ("S3 x=+1", s3(1)), ("S3 x=-1", s3(-1))]
}

fn rows(t: &FiltrationTable, top: i32) -> Vec<Vec<usize>> {
    (0..=top).map(|s| (0..=t.nmax()).map(|n| t.gr_dim(n, s)).collect()).collect()
}

fn expect_rows(t: &FiltrationTable, want: &[&[usize]], label: &str) -> Result<(), String> {
    let got = rows(t, want.len() as i32 + 1);
    for (s, w) in want.iter().enumerate() {
        ensure(got[s] == *w, format!("{label}: Gr{s} is {:?}, expected {:?}", got[s], w))?;
    }
    for (s, g) in got.iter().enumerate().skip(want.len()) {
        ensure(g.iter().all(|&x| x == 0), format!("{label}: unexpected nonzero Gr{s}"))?;
    }
    Ok(())
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, format!("took {t:.1?}, limit {limit:?}"))
}

fn lyndon(d: i64, n: u32) -> i64 {
    let mobius = |mut k: u32| -> i64 {
        let mut m = 1;
        let mut p = 2;
        while p * p <= k {
            if k % p == 0 {
                k /= p;
                if k % p == 0 {
                    return 0;
                }
                m = -m;
            }
            p += 1;
        }
        if k > 1 {
            -m
        } else {
            m
        }
    };
    (1..=n).filter(|e| n % e == 0).map(|e| mobius(e) * d.pow(n / e)).sum::<i64>() / n as i64
}

fn c1() -> Outcome {
    let start = Instant::now();
    let t = e(wordlength_filtration(&zeta3(), 8))?;
    e(t.check())?;
    let z = [0; 9];
    expect_rows(&t, &[&[1, 1, 1, 0, 0, 0, 0, 0, 0], &z, &[0, 0, 0, 1, 1, 1, 0, 0, 0], &z, &[0, 0, 0, 0, 0, 0, 1, 1, 1]], "Figure 1")?;
    within(start, Duration::from_secs(5))?;
    Ok("d=1 q=zeta_3, n<=8, cell-for-cell".into())
}

fn c2() -> Outcome {
    let start = Instant::now();
    let t = e(wordlength_filtration(&trivial3(), 5))?;
    e(t.check())?;
    expect_rows(
        &t,
        &[&[1, 3, 6, 10, 15, 21], &[0, 0, 3, 9, 18, 30], &[0, 0, 0, 8, 30, 66], &[0, 0, 0, 0, 18, 78], &[0, 0, 0, 0, 0, 48]],
        "Figure 2",
    )?;
    let nonzero = t.entries().iter().filter(|x| x.gr_dim > 0).count();
    ensure(nonzero == 15 + 1, format!("{nonzero} nonzero cells including A0"))?;
    for n in 0..=5usize {
        let col: usize = (0..=4).map(|s| t.gr_dim(n, s)).sum();
        ensure(col == 3usize.pow(n as u32), format!("column {n} sums to {col}"))?;
        if n >= 1 {
            let diag = t.gr_dim(n, n as i32 - 1) as i64;
            ensure(diag == lyndon(3, n as u32), format!("diagonal at n={n} is {diag}, Lyndon count {}", lyndon(3, n as u32)))?;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok("trivial d=3, n<=5; column sums 3^n; diagonal = Lyndon counts".into())
}

fn c3() -> Outcome {
    let start = Instant::now();
    let plus = e(wordlength_filtration(&s3(1), 5))?;
    let minus = e(wordlength_filtration(&s3(-1), 5))?;
    e(plus.check())?;
    e(minus.check())?;
    let z = [0; 6];
    expect_rows(&plus, &[&[1, 3, 9, 27, 79, 225], &z, &z, &[0, 0, 0, 0, 2, 12], &[0, 0, 0, 0, 0, 6]], "Figure 3 left")?;
    expect_rows(
        &minus,
        &[&[1, 3, 4, 3, 1, 0], &[0, 0, 5, 21, 42, 51], &[0, 0, 0, 3, 32, 132], &[0, 0, 0, 0, 6, 51], &[0, 0, 0, 0, 0, 9]],
        "Figure 3 right",
    )?;
    within(start, Duration::from_secs(300))?;
    Ok("S3 transpositions x=+1 and x=-1, n<=5".into())
}

fn c4() -> Outcome {
    let start = Instant::now();
    let f5 = e(weight_filtration_A(&zeta3(), 8))?;
    e(f5.check())?;
    expect_rows(&f5, &[&[1, 1, 1, 0, 0, 0, 0, 0, 0], &[0, 0, 0, 1, 1, 1, 0, 0, 0], &[0, 0, 0, 0, 0, 0, 1, 1, 1]], "Figure 5")?;
    let f6 = e(weight_filtration_A(&s3(1), 5))?;
    e(f6.check())?;
    expect_rows(&f6, &[&[1, 3, 9, 27, 79, 225], &[0, 0, 0, 0, 2, 18]], "Figure 6")?;
    within(start, Duration::from_secs(300))?;
    Ok("weight tables for zeta_3 (n<=8) and S3 x=+1 (n<=5)".into())
}

/// a(5)/5 straight from the table cells of W on T_5.
fn a5_over_5(t: &FiltrationTable) -> Q {
    let num: i64 = t.entries().iter().filter(|x| x.n == 5).map(|x| x.index as i64 * x.gr_dim as i64).sum();
    Q::new(num, 5 * 243)
}

fn round_to(x: f64, places: i32) -> f64 {
    let s = 10f64.powi(places);
    (x * s).round() / s
}

fn c5() -> Outcome {
    let mut notes = Vec::new();
    for (x, exact, printed, places) in [(1, Q::new(-18, 1215), -0.0148, 4), (-1, Q::new(-504, 1215), -0.415, 3)] {
        let t = e(weight_filtration_T(&s3(x), 5))?;
        let from_cells = a5_over_5(&t);
        ensure(from_cells == exact, format!("x={x}: table gives a(5)/5 = {from_cells}, expected {exact}"))?;
        let st = e(weight_statistic(&t))?;
        ensure(st.a_over_n[5] == exact, format!("x={x}: statistic reports {}", st.a_over_n[5]))?;
        let dec = round_to(exact.to_f64(), places);
        ensure(dec == printed, format!("x={x}: {dec} does not match printed {printed}"))?;
        ensure(st.monotone_ok && st.superadditive_ok, format!("x={x}: flags {:?}", st.violations))?;
        notes.push(format!("x={x}: {exact} ~ {printed}"));
    }
    Ok(notes.join("; "))
}

fn c6() -> Outcome {
    let v = s3(-1);
    let p = e(nichols_profile(&v, NICHOLS_SEARCH_BOUND))?;
    let want = NicholsProfile { max_degree: Some(4), total: 12, dims: vec![1, 3, 4, 3, 1] };
    ensure(p == want, format!("profile {p:?}"))?;
    let w = e(weight_filtration_A(&v, 5))?;
    for n in 0..=5 {
        let w0 = w.degree(n).get(0);
        ensure(w0 == e(nichols_basis(&v, n))?, format!("W_0 differs from the Nichols subspace at n={n}"))?;
    }
    Ok("FK3 profile (4, 12, 1 3 4 3 1); W_0 = Nichols for n<=5".into())
}

fn c7() -> Outcome {
    let k = e(bound_constants(4, &[(1, 1), (1, 1), (1, 1), (4, 6)]))?;
    ensure(k.delta == Q::new(1, 5) && k.c == Q::new(1, 3) && k.epsilon == Q::new(3, 10), format!("{k:?}"))?;
    Ok("(delta, c, epsilon) = (1/5, 1/3, 3/10)".into())
}

fn c8() -> Outcome {
    let mut complexes = 0;
    let mut spaces = suite_spaces();
    spaces.push(("diagonal 2x2", make_diagonal(&[vec![Scalar::from_int(-1), Scalar::from_int(2)], vec![Scalar::ratio(1, 2), Scalar::cyclotomic(1, 0)]], FieldDesc::Rational).unwrap()));
    for (name, v) in &spaces {
        ensure(yang_baxter_check(v), format!("{name}: Yang-Baxter fails"))?;
        ensure(yang_baxter_check(&v.dual()), format!("{name}: dual fails Yang-Baxter"))?;
        let nmax = if v.dim() >= 3 { 5 } else { 6 };
        for kind in [AlgebraKind::Tensor, AlgebraKind::Shuffle, AlgebraKind::Nichols] {
            let alg = e(algebra_for(v, kind, nmax))?;
            for n in 1..=nmax {
                e(e(build_bar(alg.as_ref(), n))?.complex.check_d_squared()).map_err(|m| format!("{name} {kind:?} n={n}: {m}"))?;
                complexes += 1;
            }
        }
        let tables = [e(wordlength_filtration(v, nmax))?, e(weight_filtration_A(v, nmax))?, e(weight_filtration_T(v, nmax))?];
        for t in &tables {
            e(t.check()).map_err(|m| format!("{name}: {m}"))?;
            for n in 0..=nmax {
                let s: usize = t.degree(n).gr_dims().iter().map(|g| g.1).sum();
                ensure(s == v.dim().pow(n as u32), format!("{name}: Gr sum {s} at n={n}"))?;
            }
        }
        // filtered runs: E_inf against unfiltered homology
        for t in &tables[..2] {
            let fa = e(filtered_algebra(v, t, nmax.min(5)))?;
            for n in 1..=nmax.min(5) {
                let bar = e(filtered_bar(&fa, n))?;
                e(bar.complex.check_d_squared())?;
                complexes += 1;
                let ss = spectral_sequence(&bar.complex);
                let h = bar.complex.homology(RankMode::Exact);
                for (&k, &d) in &h.dims {
                    let got = ss.abutment().get(&k).copied().unwrap_or(0);
                    ensure(got == d, format!("{name}: E_inf sum {got} != H {d} in degree {k}, n={n}"))?;
                }
            }
        }
    }
    // S3 transpositions in degree 6 (guard-permitted, d = 3)
    let alg = e(algebra_for(&s3(-1), AlgebraKind::Shuffle, 6))?;
    e(e(build_bar(alg.as_ref(), 6))?.complex.check_d_squared())?;
    complexes += 1;
    Ok(format!("{complexes} complexes with d^2 = 0; YB, table and E_inf gates on {} spaces", spaces.len()))
}

fn c9() -> Outcome {
    let gd = s3_group();
    let v = hurwitz_space(&gd).map_err(|x| x.to_string())?;
    let tor = e(tor_dims(&v, AlgebraKind::Shuffle, 6, |n| default_mode(n, 3, 1), false))?;
    ensure(tor.verified, "modular ranks in degree 6 not certified")?;
    let mut counts = Vec::new();
    for n in 1..=6 {
        let orbits = e(orbit_enumerate(&gd, n))?.count;
        ensure(tor.get(n, n, None) == orbits, format!("Tor_{{{n},{n}}} = {} but {orbits} orbits", tor.get(n, n, None)))?;
        counts.push(orbits);
    }
    for (name, v) in suite_spaces() {
        let bar = e(tor_dims(&v, AlgebraKind::Shuffle, 5, |_| RankMode::Exact, false))?;
        let co = e(WordCoalgebra::tensor(&v.dual(), 5))?;
        let cobar = e(cotor_dims(&co, 5, RankMode::Exact))?;
        ensure(bar.entries == cobar.entries, format!("{name}: bar and cobar dimensions differ"))?;
        for n in 1..=5 {
            ensure(e(nichols_basis(&v, n))? == e(symmetrizer_image(&v, n))?, format!("{name}: Nichols != symmetrizer image at n={n}"))?;
        }
    }
    Ok(format!("(a) orbit counts {counts:?}; (b) bar = cobar; (c) Nichols = symmetrizer image, n<=5"))
}

fn c10() -> Outcome {
    let v = s3(-1);
    let t = e(weight_filtration_A(&v, 5))?;
    let a: Bigraded = t.bigraded();
    let b: Bigraded = e(nichols_basis_dims(&v, 5))?;
    let q = e(hilbert_quotient(&a, &b, 5))?;
    // multiply back: B·Q = A through degree 5
    let mut prod: BTreeMap<(usize, i64), i64> = BTreeMap::new();
    for (&(nb, wb), &cb) in &b {
        for (&(nq, wq), &cq) in &q {
            if nb + nq <= 5 {
                *prod.entry((nb + nq, wb + wq)).or_insert(0) += cb * cq;
            }
        }
    }
    prod.retain(|_, v| *v != 0);
    let a_nz: BTreeMap<_, _> = a.iter().filter(|(_, &v)| v != 0).map(|(&k, &v)| (k, v)).collect();
    ensure(prod == a_nz, "B * quotient does not reproduce Hilb(A^gr)")?;
    for (&(n, w), &c) in &q {
        ensure(c >= 0, format!("negative coefficient at ({n}, {w})"))?;
        if c > 0 && n >= 1 {
            ensure(5 * w >= n as i64, format!("coefficient at (n={n}, w={w}) has w < n/5"))?;
        }
    }
    Ok(format!("{} nonzero quotient coefficients, all with w >= n/5", q.values().filter(|&&c| c > 0).count()))
}

fn nichols_basis_dims(v: &BraidedVectorSpace, nmax: usize) -> qshuffle::Result<Bigraded> {
    let mut b = Bigraded::new();
    for n in 0..=nmax {
        let d = nichols_basis(v, n)?.dim();
        if d > 0 {
            b.insert((n, 0), d as i64);
        }
    }
    Ok(b)
}

fn c11() -> Outcome {
    let dec = e(weight_decomposition(&s3_group(), 5, false))?;
    let mut rows = rows_from_decomposition(&dec);
    let mut checked = 0;
    for r in &rows {
        let top = 2 * r.n as i64 - r.i as i64;
        if r.i > 2 * (r.n / 6) {
            ensure(r.frob_weight < top, format!("row {r:?}: w' not below 2n-i"))?;
            checked += 1;
        }
        // i > n/3  ⇔  3i > n;  w' ≤ (2n−i) − (3/10)(i − n/3)  ⇔  30w' ≤ 30(2n−i) − 9i + 3n
        if 3 * r.i > r.n {
            let lhs = 30 * r.frob_weight;
            let rhs = 30 * top - 9 * r.i as i64 + 3 * r.n as i64;
            ensure(lhs <= rhs, format!("row {r:?}: epsilon bound fails"))?;
        }
    }
    let k = e(bound_constants(4, &[(1, 1), (1, 1), (1, 1), (4, 6)]))?;
    check_weight_bound(&mut rows, &k, true);
    ensure(rows.iter().all(|r| r.bound != Verdict::Fail), "checker reports a failing row")?;
    Ok(format!("{} entries, {checked} under the strict clause, all within bounds", rows.len()))
}

fn c12() -> Outcome {
    let gd = s3_group();
    let k = e(bound_constants(4, &[(1, 1), (1, 1), (1, 1), (4, 6)]))?;
    let modular = |n: usize| RankMode::Modular { primes: 3, seed: 42 + n as u64 };
    let a = e(hurwitz_report(&gd, 5, modular, Some(k.clone()), false))?.to_json(|q| q.to_string().into()).to_string();
    let b = e(hurwitz_report(&gd, 5, modular, Some(k), false))?.to_json(|q| q.to_string().into()).to_string();
    ensure(a == b, "library JSON differs between runs")?;
    let bin = env!("CARGO_BIN_EXE_qshuffle");
    let spec = r#"{"type":"group_class","group":{"perm_generators":[[2,1,3],[1,3,2]]},"class_reps":["(12)"],"cocycle":-1}"#;
    let run = || {
        Command::new(bin)
            .args(["hurwitz", "--spec", spec, "--nmax", "5", "--mode", "modular", "--seed", "9"])
            .output()
            .map(|o| o.stdout)
    };
    let (x, y) = (e(run())?, e(run())?);
    ensure(!x.is_empty() && x == y, "CLI JSON differs between runs")?;
    let mut ranks = 0;
    for (name, v) in suite_spaces() {
        for kind in [AlgebraKind::Shuffle, AlgebraKind::Nichols] {
            let alg = e(algebra_for(&v, kind, 5))?;
            for n in 1..=5 {
                let bar = e(build_bar(alg.as_ref(), n))?;
                let ex = bar.complex.ranks(RankMode::Exact);
                let md = bar.complex.ranks(RankMode::Modular { primes: 3, seed: 7 });
                for (deg, r) in &ex {
                    let m = &md[deg];
                    ensure(m.rank == r.rank, format!("{name} {kind:?} n={n} degree {deg}: modular {} vs exact {}", m.rank, r.rank))?;
                    ensure(m.verified, format!("{name} {kind:?} n={n} degree {deg}: modular rank not certified"))?;
                    ranks += 1;
                }
            }
        }
    }
    Ok(format!("byte-identical JSON (library and CLI); {ranks} ranks agree, all certified"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("Figure 1 reproduction", c1),
        ("Figure 2 reproduction", c2),
        ("Figure 3 reproduction", c3),
        ("Figure 5 and 6 reproduction", c4),
        ("concentration statistic a(5)/5", c5),
        ("Nichols algebra FK3", c6),
        ("bound constants", c7),
        ("structural gates", c8),
        ("oracle equivalences", c9),
        ("Hilbert factorization", c10),
        ("weight bound check", c11),
        ("determinism and modular agreement", c12),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match outcome {
            Ok(note) => println!("PASS {:>2} {name} [{t:.2?}]: {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{t:.2?}]: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.2?}", criteria.len() - failed, criteria.len(), total.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
