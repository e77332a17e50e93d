//! Rank over ℚ or ℚ(ζ_m) through reductions modulo random word-size primes,
//! with an exact kernel check that turns the modular answer into a proof.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::SparseMatrix;
use crate::scalar::{euler_phi, inv_mod, is_prime_u64, mul_mod, Scalar, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMode {
    Exact,
    Modular { primes: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub rank: usize,
    /// False only when the modular lower bound could not be matched by a
    /// verified kernel; `rank` is then a lower bound.
    pub verified: bool,
}

pub fn certified_rank(m: &SparseMatrix, mode: RankMode) -> RankCertificate {
    if m.is_zero() {
        return RankCertificate { rank: 0, verified: true };
    }
    match mode {
        RankMode::Exact => RankCertificate { rank: m.rank(), verified: true },
        RankMode::Modular { primes, seed } => modular_rank(m, primes.max(1), seed),
    }
}

/// `count` distinct primes in [2^30, 2^31) drawn from a seeded generator.
pub fn random_primes(count: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<u64> = Vec::with_capacity(count);
    while out.len() < count {
        let c = rng.gen_range((1u64 << 30)..(1u64 << 31)) | 1;
        if is_prime_u64(c) && !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

type IntCols = Vec<Vec<(u32, BigInt)>>;

fn zeta_coeffs(s: &Scalar, phi: usize) -> Vec<Q> {
    match s {
        Scalar::Rational(q) => {
            let mut v = vec![Q::from_int(0); phi];
            v[0] = q.clone();
            v
        }
        Scalar::Cyclotomic(c) => {
            let mut v = c.coeffs().to_vec();
            v.resize(phi, Q::from_int(0));
            v
        }
        Scalar::Prime(_) => unreachable!("prime-field matrices are handled directly"),
    }
}

/// Scales every column to integers. Cyclotomic entries are replaced by their
/// φ(m)×φ(m) multiplication matrices over ℚ, multiplying the rank by φ(m).
fn integerize(m: &SparseMatrix) -> (usize, IntCols, usize) {
    let order = m
        .cols
        .iter()
        .flat_map(|c| c.entries())
        .find_map(|(_, v)| match v {
            Scalar::Cyclotomic(c) => Some(c.order()),
            _ => None,
        });
    let (nrows, qcols, phi): (usize, Vec<Vec<(u32, Q)>>, usize) = match order {
        None => (
            m.nrows,
            m.cols.iter().map(|c| c.entries().iter().map(|(r, v)| (*r, v.as_rational().unwrap().clone())).collect()).collect(),
            1,
        ),
        Some(ord) => {
            let phi = euler_phi(ord) as usize;
            let powers: Vec<Scalar> = (0..phi).map(|j| Scalar::cyclotomic(ord, j as i64)).collect();
            let mut cols = Vec::with_capacity(m.ncols() * phi);
            for c in &m.cols {
                for zj in &powers {
                    let mut col = Vec::new();
                    for (r, v) in c.entries() {
                        for (i, x) in zeta_coeffs(&(v * zj), phi).into_iter().enumerate() {
                            if !x.is_zero() {
                                col.push((*r * phi as u32 + i as u32, x));
                            }
                        }
                    }
                    cols.push(col);
                }
            }
            (m.nrows * phi, cols, phi)
        }
    };
    let cols = qcols
        .into_iter()
        .map(|col| {
            let l = col.iter().fold(BigInt::one(), |acc, (_, q)| acc.lcm(&q.denom()));
            col.into_iter().map(|(r, q)| (r, q.numer() * (&l / q.denom()))).collect()
        })
        .collect();
    (nrows, cols, phi)
}

fn reduce_int(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

struct ModReduction {
    pivots: Vec<usize>,
    /// (dependent column j, coefficients c_i on pivot columns with col_j = Σ c_i col_i)
    relations: Vec<(usize, Vec<(usize, u64)>)>,
}

/// Left-to-right elimination mod p recording, for each dependent column,
/// its expression in the earlier independent ones.
fn reduce_mod_p(cols: &IntCols, p: u64, track: bool) -> ModReduction {
    let mut stored: Vec<(Vec<(u32, u64)>, HashMap<usize, u64>)> = Vec::new();
    let mut by_low: HashMap<u32, usize> = HashMap::new();
    let mut pivots = Vec::new();
    let mut relations = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        let mut c: Vec<(u32, u64)> =
            col.iter().map(|(r, x)| (*r, reduce_int(x, p))).filter(|x| x.1 != 0).collect();
        let mut comb: HashMap<usize, u64> = HashMap::new();
        loop {
            let Some(&(low, val)) = c.last() else {
                if track {
                    let mut rel: Vec<(usize, u64)> = comb.iter().map(|(&i, &v)| (i, (p - v) % p)).filter(|x| x.1 != 0).collect();
                    rel.sort();
                    relations.push((j, rel));
                }
                break;
            };
            match by_low.get(&low) {
                Some(&k) => {
                    // stored columns are normalized to end in 1
                    let f = p - val;
                    c = axpy(&c, f, &stored[k].0, p);
                    if track {
                        for (&i, &v) in &stored[k].1 {
                            let e = comb.entry(i).or_insert(0);
                            *e = (*e + mul_mod(f, v, p)) % p;
                        }
                    }
                }
                None => {
                    let inv = inv_mod(val, p).unwrap();
                    let c: Vec<(u32, u64)> = c.iter().map(|&(r, x)| (r, mul_mod(x, inv, p))).collect();
                    let mut comb: HashMap<usize, u64> = comb.into_iter().map(|(i, v)| (i, mul_mod(v, inv, p))).collect();
                    comb.insert(j, inv);
                    by_low.insert(low, stored.len());
                    stored.push((c, if track { comb } else { HashMap::new() }));
                    pivots.push(j);
                    break;
                }
            }
        }
    }
    ModReduction { pivots, relations }
}

fn axpy(x: &[(u32, u64)], f: u64, y: &[(u32, u64)], p: u64) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i]);
            i += 1;
        } else if take_y {
            out.push((y[j].0, mul_mod(f, y[j].1, p)));
            j += 1;
        } else {
            let v = (x[i].1 + mul_mod(f, y[j].1, p)) % p;
            if v != 0 {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rational number with |num|, den ≤ sqrt(m/2) congruent to a mod m.
fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        (r0, r1, t0, t1) = (r1, r2, t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (num, den) = if t1.is_negative() { (-r1, -t1) } else { (r1, t1) };
    if num.gcd(&den) != BigInt::one() {
        return None;
    }
    Some((num, den))
}

fn prime_field_rank(m: &SparseMatrix, p: u64) -> usize {
    let cols: IntCols = m
        .cols
        .iter()
        .map(|c| {
            c.entries()
                .iter()
                .map(|(r, v)| match v {
                    Scalar::Prime(f) => (*r, BigInt::from(f.value)),
                    _ => (*r, BigInt::from(v.reduce_mod(p, None).map_or(0, |s| match s {
                        Scalar::Prime(f) => f.value,
                        _ => 0,
                    }))),
                })
                .collect()
        })
        .collect();
    reduce_mod_p(&cols, p, false).pivots.len()
}

fn modular_rank(m: &SparseMatrix, primes: usize, seed: u64) -> RankCertificate {
    if let Some(p) = m.cols.iter().flat_map(|c| c.entries()).find_map(|(_, v)| match v {
        Scalar::Prime(f) => Some(f.modulus),
        _ => None,
    }) {
        return RankCertificate { rank: prime_field_rank(m, p), verified: true };
    }
    let (_, cols, phi) = integerize(m);
    let ps = random_primes(primes, seed);
    let reductions = crate::par_map(&ps, |&p| reduce_mod_p(&cols, p, true));
    let best = reductions.iter().map(|r| r.pivots.len()).max().unwrap();
    let lower = best / phi;
    // primes whose pivot pattern matches the first best one
    let lead = reductions.iter().position(|r| r.pivots.len() == best).unwrap();
    let group: Vec<usize> = (0..ps.len()).filter(|&k| reductions[k].pivots == reductions[lead].pivots).collect();
    let modulus: BigInt = group.iter().map(|&k| BigInt::from(ps[k])).product();
    let verified = reductions[lead].relations.iter().enumerate().all(|(idx, (j, _))| {
        // combine coefficient k of relation idx across the prime group by CRT
        let mut coeffs: HashMap<usize, BigInt> = HashMap::new();
        let mut acc_mod = BigInt::one();
        for &k in &group {
            let p = BigInt::from(ps[k]);
            let (jj, rel) = &reductions[k].relations[idx];
            debug_assert_eq!(jj, j);
            let vals: HashMap<usize, u64> = rel.iter().copied().collect();
            let keys: Vec<usize> = coeffs.keys().copied().chain(vals.keys().copied()).collect();
            for i in keys {
                let a = coeffs.get(&i).cloned().unwrap_or_default();
                let b = BigInt::from(vals.get(&i).copied().unwrap_or(0));
                coeffs.insert(i, crt(&a, &acc_mod, &b, &p));
            }
            acc_mod *= &p;
        }
        let mut rational: Vec<(usize, BigInt, BigInt)> = Vec::new();
        for (i, a) in coeffs {
            let Some((num, den)) = rational_reconstruct(&a, &modulus) else {
                return false;
            };
            if !num.is_zero() {
                rational.push((i, num, den));
            }
        }
        verify_relation(&cols, *j, &rational)
    });
    RankCertificate { rank: lower, verified: verified && best % phi == 0 }
}

fn crt(a: &BigInt, m: &BigInt, b: &BigInt, p: &BigInt) -> BigInt {
    // x ≡ a (mod m), x ≡ b (mod p)
    let m_mod_p = m.mod_floor(p).to_u64().unwrap();
    let pu = p.to_u64().unwrap();
    let inv = BigInt::from(inv_mod(m_mod_p, pu).unwrap());
    let t = ((b - a) * inv).mod_floor(p);
    (a + m * t).mod_floor(&(m * p))
}

/// Exact check that col_j = Σ (num/den) col_i.
fn verify_relation(cols: &IntCols, j: usize, rel: &[(usize, BigInt, BigInt)]) -> bool {
    let l = rel.iter().fold(BigInt::one(), |acc, (_, _, d)| acc.lcm(d));
    let mut sum: HashMap<u32, BigInt> = HashMap::new();
    for (r, x) in &cols[j] {
        *sum.entry(*r).or_default() += x * &l;
    }
    for (i, num, den) in rel {
        let f = num * (&l / den);
        for (r, x) in &cols[*i] {
            *sum.entry(*r).or_default() -= x * &f;
        }
    }
    sum.values().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SparseVec;

    #[test]
    fn reconstruct() {
        let m = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64);
        let val = (BigInt::from(-3) * modinv(&BigInt::from(7), &m)).mod_floor(&m);
        assert_eq!(rational_reconstruct(&val, &m), Some((BigInt::from(-3), BigInt::from(7))));
    }

    fn modinv(a: &BigInt, m: &BigInt) -> BigInt {
        let e = a.extended_gcd(m);
        e.x.mod_floor(m)
    }

    #[test]
    fn cyclotomic_rank() {
        let z = Scalar::cyclotomic(3, 1);
        // rows (1, ζ) and (ζ, ζ²) are dependent
        let cols = vec![
            SparseVec::from_terms(vec![(0, Scalar::one()), (1, z.clone())]),
            SparseVec::from_terms(vec![(0, z.clone()), (1, &z * &z)]),
        ];
        let m = SparseMatrix::from_cols(2, cols);
        assert_eq!(m.rank(), 1);
        let r = certified_rank(&m, RankMode::Modular { primes: 2, seed: 7 });
        assert_eq!(r, RankCertificate { rank: 1, verified: true });
    }
}
