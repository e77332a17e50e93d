//! Exact coefficient fields: rationals, cyclotomic fields and prime fields.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational number in lowest terms. Values that fit in machine words
/// stay there; everything else falls back to a big rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Q {
    Small(i64, i64),
    Big(Box<BigRational>),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
        let (mut x, mut y) = (a as u64, b as u64);
        while y != 0 {
            let t = x % y;
            x = y;
            y = t;
        }
        return x as u128;
    }
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Q {
    pub const ZERO: Q = Q::Small(0, 1);
    pub const ONE: Q = Q::Small(1, 1);

    pub fn from_int(n: i64) -> Q {
        Q::Small(n, 1).normalized_small()
    }

    fn normalized_small(self) -> Q {
        match self {
            Q::Small(n, d) if n == i64::MIN || d == i64::MIN => Q::from_i128(n as i128, d as i128),
            other => other,
        }
    }

    /// `num / den`; panics on a zero denominator.
    pub fn new(num: i64, den: i64) -> Q {
        Q::from_i128(num as i128, den as i128)
    }

    pub fn from_i128(num: i128, den: i128) -> Q {
        assert!(den != 0, "zero denominator");
        if num == 0 {
            return Q::ZERO;
        }
        let neg = (num < 0) != (den < 0);
        let (un, ud) = (num.unsigned_abs(), den.unsigned_abs());
        let g = gcd_u128(un, ud);
        let (un, ud) = (un / g, ud / g);
        if un <= i64::MAX as u128 && ud <= i64::MAX as u128 {
            let n = un as i64;
            Q::Small(if neg { -n } else { n }, ud as i64)
        } else {
            let n = BigInt::from(un);
            let n = if neg { -n } else { n };
            Q::Big(Box::new(BigRational::new_raw(n, BigInt::from(ud))))
        }
    }

    /// Canonicalize a (reduced) big rational.
    pub fn from_big(r: BigRational) -> Q {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Q::Small(n, d),
            _ => Q::Big(Box::new(r)),
        }
    }

    pub fn from_bigint(n: BigInt) -> Q {
        Q::from_big(BigRational::from_integer(n))
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Q::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Q::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Q::Small(n, _) => BigInt::from(*n),
            Q::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Q::Small(_, d) => BigInt::from(*d),
            Q::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Q::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Q::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Q::Small(_, d) => *d == 1,
            Q::Big(b) => b.is_integer(),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Q::Small(n, _) => n.signum() as i32,
            Q::Big(b) => {
                if b.is_negative() {
                    -1
                } else if b.is_zero() {
                    0
                } else {
                    1
                }
            }
        }
    }

    pub fn inv(&self) -> Option<Q> {
        match self {
            Q::Small(0, _) => None,
            Q::Small(n, d) => Some(Q::from_i128(*d as i128, *n as i128)),
            Q::Big(b) => Some(Q::from_big(b.recip())),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Q::Small(n, d) => *n as f64 / *d as f64,
            Q::Big(b) => {
                let n = b.numer().to_f64().unwrap_or(f64::NAN);
                let d = b.denom().to_f64().unwrap_or(f64::NAN);
                n / d
            }
        }
    }

    /// Image in F_p, or `None` when p divides the denominator.
    pub fn reduce_mod(&self, p: u64) -> Option<u64> {
        let (n, d) = match self {
            Q::Small(n, d) => {
                let pm = p as i128;
                ((*n as i128).rem_euclid(pm) as u64, (*d as i128).rem_euclid(pm) as u64)
            }
            Q::Big(b) => {
                let pb = BigInt::from(p);
                let n = b.numer().mod_floor(&pb).to_u64().unwrap();
                let d = b.denom().mod_floor(&pb).to_u64().unwrap();
                (n, d)
            }
        };
        if d == 0 {
            return None;
        }
        Some(mul_mod(n, inv_mod(d, p)?, p))
    }

    /// Parses `"a"`, `"-a"` or `"a/b"`.
    pub fn parse(s: &str) -> Option<Q> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::from_big(BigRational::new(n, d)))
    }

    fn big_op(&self, other: &Q, f: impl Fn(BigRational, BigRational) -> BigRational) -> Q {
        Q::from_big(f(self.to_big(), other.to_big()))
    }
}

impl Default for Q {
    fn default() -> Self {
        Q::ZERO
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Q::Small(n, 1) => write!(f, "{n}"),
            Q::Small(n, d) => write!(f, "{n}/{d}"),
            Q::Big(b) => write!(f, "{b}"),
        }
    }
}

impl PartialOrd for Q {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Q {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Q::Small(a, b), Q::Small(c, d)) => ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128))),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl<'a> Add<&'a Q> for &'a Q {
    type Output = Q;
    fn add(self, o: &Q) -> Q {
        match (self, o) {
            (Q::Small(a, 1), Q::Small(c, 1)) => Q::from_i128(*a as i128 + *c as i128, 1),
            (Q::Small(a, b), Q::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Q::from_i128(a * d + c * b, b * d)
            }
            _ => self.big_op(o, |x, y| x + y),
        }
    }
}

impl<'a> Sub<&'a Q> for &'a Q {
    type Output = Q;
    fn sub(self, o: &Q) -> Q {
        match (self, o) {
            (Q::Small(a, 1), Q::Small(c, 1)) => Q::from_i128(*a as i128 - *c as i128, 1),
            (Q::Small(a, b), Q::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Q::from_i128(a * d - c * b, b * d)
            }
            _ => self.big_op(o, |x, y| x - y),
        }
    }
}

impl<'a> Mul<&'a Q> for &'a Q {
    type Output = Q;
    fn mul(self, o: &Q) -> Q {
        match (self, o) {
            (Q::Small(a, b), Q::Small(c, d)) => {
                Q::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => self.big_op(o, |x, y| x * y),
        }
    }
}

impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        match self {
            Q::Small(n, d) => Q::from_i128(-(*n as i128), *d as i128),
            Q::Big(b) => Q::from_big(-(**b).clone()),
        }
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse modulo `p` by the extended Euclidean algorithm.
pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(p as i128) as u64)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Euler's totient.
pub fn euler_phi(m: u32) -> u32 {
    let mut n = m;
    let mut r = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

fn poly_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (ascending, monic) of the m-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(m: u32) -> Arc<Vec<i64>> {
    assert!(m >= 1);
    if let Some(p) = poly_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by every Phi_d with d | m, d < m.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let den = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &den);
        }
    }
    let res = Arc::new(num);
    poly_cache().lock().unwrap().insert(m, res.clone());
    res
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quo = vec![0i64; num.len() - dn];
    for k in (0..quo.len()).rev() {
        let c = rem[k + dn];
        quo[k] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    quo
}

/// Element of Q(zeta_m) as a polynomial of degree < phi(m) in zeta_m.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyc {
    order: u32,
    coeffs: Vec<Q>,
}

impl Cyc {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    fn from_rational(order: u32, q: Q) -> Cyc {
        let n = euler_phi(order) as usize;
        let mut coeffs = vec![Q::ZERO; n];
        coeffs[0] = q;
        Cyc { order, coeffs }
    }

    /// Reduces an arbitrary-length coefficient vector modulo Phi_m.
    fn reduced(order: u32, mut c: Vec<Q>) -> Cyc {
        let phi = cyclotomic_polynomial(order);
        let n = phi.len() - 1;
        for k in (n..c.len()).rev() {
            if c[k].is_zero() {
                continue;
            }
            let top = c[k].clone();
            for j in 0..n {
                if phi[j] != 0 {
                    let t = &top * &Q::from_int(phi[j]);
                    c[k - n + j] = &c[k - n + j] - &t;
                }
            }
            c[k] = Q::ZERO;
        }
        c.resize(n, Q::ZERO);
        Cyc { order, coeffs: c }
    }

    fn mul(&self, o: &Cyc) -> Cyc {
        let n = self.coeffs.len();
        let mut c = vec![Q::ZERO; 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] = &c[i + j] + &(a * b);
                }
            }
        }
        Cyc::reduced(self.order, c)
    }

    fn inv(&self) -> Option<Cyc> {
        // Solve (self * x) = 1 with the multiplication matrix.
        let n = self.coeffs.len();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut basis = vec![Q::ZERO; n];
            basis[j] = Q::ONE;
            cols.push(self.mul(&Cyc { order: self.order, coeffs: basis }).coeffs);
        }
        // Augmented matrix rows: [M | e_0].
        let mut m: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                let mut row: Vec<Q> = (0..n).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { Q::ONE } else { Q::ZERO });
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            let inv = m[col][col].inv()?;
            for x in m[col].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for k in col..=n {
                        let t = &f * &m[col][k];
                        m[r][k] = &m[r][k] - &t;
                    }
                }
            }
        }
        Some(Cyc { order: self.order, coeffs: m.into_iter().map(|r| r[n].clone()).collect() })
    }
}

/// Element of F_p with p prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    pub value: u64,
    pub modulus: u64,
}

/// Field descriptor as it appears in braiding-spec files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(tag = "field", rename_all = "lowercase")]
pub enum FieldDesc {
    #[default]
    Rational,
    Cyclotomic {
        order: u32,
    },
    Prime {
        modulus: u64,
    },
}

/// An exact scalar. Canonical form: a cyclotomic value with no irrational
/// part is stored as a rational, so structural equality is field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Q),
    Cyclotomic(Cyc),
    Prime(Fp),
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Rational(Q::ZERO)
    }

    pub fn one() -> Scalar {
        Scalar::Rational(Q::ONE)
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::Rational(Q::from_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Scalar {
        Scalar::Rational(Q::new(n, d))
    }

    pub fn modular(value: u64, modulus: u64) -> Scalar {
        Scalar::Prime(Fp { value: value % modulus, modulus })
    }

    /// zeta_m^e for a primitive m-th root of unity.
    pub fn cyclotomic(m: u32, e: i64) -> Scalar {
        assert!(m >= 1, "cyclotomic order must be positive");
        let e = e.rem_euclid(m as i64) as usize;
        match m {
            1 => Scalar::one(),
            2 => Scalar::from_int(if e == 0 { 1 } else { -1 }),
            _ => {
                let mut c = vec![Q::ZERO; e + 1];
                c[e] = Q::ONE;
                Scalar::from_cyc(Cyc::reduced(m, c))
            }
        }
    }

    /// Builds a cyclotomic value from coefficients of powers of zeta_m.
    pub fn from_zeta_coeffs(m: u32, coeffs: Vec<Q>) -> Scalar {
        if m <= 2 {
            let mut acc = Q::ZERO;
            for (i, c) in coeffs.iter().enumerate() {
                let c = if m == 2 && i % 2 == 1 { -c } else { c.clone() };
                acc = &acc + &c;
            }
            return Scalar::Rational(acc);
        }
        let mut c = coeffs;
        if c.is_empty() {
            c.push(Q::ZERO);
        }
        // fold powers >= m using zeta^m = 1
        let mut folded = vec![Q::ZERO; m as usize];
        for (i, x) in c.into_iter().enumerate() {
            let k = i % m as usize;
            folded[k] = &folded[k] + &x;
        }
        Scalar::from_cyc(Cyc::reduced(m, folded))
    }

    fn from_cyc(c: Cyc) -> Scalar {
        if c.coeffs[1..].iter().all(Q::is_zero) {
            Scalar::Rational(c.coeffs[0].clone())
        } else {
            Scalar::Cyclotomic(c)
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Cyclotomic(_) => false,
            Scalar::Prime(f) => f.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Cyclotomic(_) => false,
            Scalar::Prime(f) => f.value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&Q> {
        match self {
            Scalar::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// The smallest field descriptor containing this value.
    pub fn field(&self) -> FieldDesc {
        match self {
            Scalar::Rational(_) => FieldDesc::Rational,
            Scalar::Cyclotomic(c) => FieldDesc::Cyclotomic { order: c.order },
            Scalar::Prime(f) => FieldDesc::Prime { modulus: f.modulus },
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) => q.inv().map(Scalar::Rational),
            Scalar::Cyclotomic(c) => c.inv().map(Scalar::from_cyc),
            Scalar::Prime(f) => inv_mod(f.value, f.modulus).map(|v| Scalar::modular(v, f.modulus)),
        }
    }

    pub fn pow(&self, e: i64) -> Scalar {
        let mut base = if e < 0 { self.inv().expect("inverse of zero") } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = match self {
            Scalar::Prime(f) => Scalar::modular(1, f.modulus),
            _ => Scalar::one(),
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Ring homomorphism to F_p. For cyclotomic values `zeta_image` must be a
    /// root of Phi_m modulo p. Returns `None` if a denominator vanishes.
    pub fn reduce_mod(&self, p: u64, zeta_image: Option<u64>) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) => q.reduce_mod(p).map(|v| Scalar::modular(v, p)),
            Scalar::Cyclotomic(c) => {
                let z = zeta_image?;
                let mut acc = 0u64;
                let mut zp = 1u64;
                for q in &c.coeffs {
                    let v = q.reduce_mod(p)?;
                    acc = (acc + mul_mod(v, zp, p)) % p;
                    zp = mul_mod(zp, z, p);
                }
                Some(Scalar::modular(acc, p))
            }
            Scalar::Prime(f) if f.modulus == p => Some(self.clone()),
            Scalar::Prime(_) => None,
        }
    }

    fn promote_pair<'a>(a: &'a Scalar, b: &'a Scalar) -> (std::borrow::Cow<'a, Scalar>, std::borrow::Cow<'a, Scalar>) {
        use std::borrow::Cow;
        match (a, b) {
            (Scalar::Rational(x), Scalar::Cyclotomic(c)) => {
                (Cow::Owned(Scalar::Cyclotomic(Cyc::from_rational(c.order, x.clone()))), Cow::Borrowed(b))
            }
            (Scalar::Cyclotomic(c), Scalar::Rational(y)) => {
                (Cow::Borrowed(a), Cow::Owned(Scalar::Cyclotomic(Cyc::from_rational(c.order, y.clone()))))
            }
            (Scalar::Rational(x), Scalar::Prime(f)) => (
                Cow::Owned(Scalar::modular(
                    x.reduce_mod(f.modulus).expect("denominator divisible by the characteristic"),
                    f.modulus,
                )),
                Cow::Borrowed(b),
            ),
            (Scalar::Prime(f), Scalar::Rational(y)) => (
                Cow::Borrowed(a),
                Cow::Owned(Scalar::modular(
                    y.reduce_mod(f.modulus).expect("denominator divisible by the characteristic"),
                    f.modulus,
                )),
            ),
            _ => (Cow::Borrowed(a), Cow::Borrowed(b)),
        }
    }

    fn combine(&self, o: &Scalar, op: Op) -> Scalar {
        if let (Scalar::Rational(x), Scalar::Rational(y)) = (self, o) {
            return Scalar::Rational(match op {
                Op::Add => x + y,
                Op::Sub => x - y,
                Op::Mul => x * y,
            });
        }
        let (a, b) = Scalar::promote_pair(self, o);
        match (a.as_ref(), b.as_ref()) {
            (Scalar::Cyclotomic(x), Scalar::Cyclotomic(y)) => {
                assert_eq!(x.order, y.order, "mixing cyclotomic fields of different order");
                match op {
                    Op::Mul => Scalar::from_cyc(x.mul(y)),
                    _ => {
                        let coeffs = x
                            .coeffs
                            .iter()
                            .zip(&y.coeffs)
                            .map(|(p, q)| if matches!(op, Op::Add) { p + q } else { p - q })
                            .collect();
                        Scalar::from_cyc(Cyc { order: x.order, coeffs })
                    }
                }
            }
            (Scalar::Prime(x), Scalar::Prime(y)) => {
                assert_eq!(x.modulus, y.modulus, "mixing prime fields");
                let p = x.modulus;
                let v = match op {
                    Op::Add => (x.value + y.value) % p,
                    Op::Sub => (x.value + p - y.value) % p,
                    Op::Mul => mul_mod(x.value, y.value, p),
                };
                Scalar::Prime(Fp { value: v, modulus: p })
            }
            _ => panic!("incompatible scalar fields"),
        }
    }
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Sub,
    Mul,
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Prime(x) => write!(f, "{} mod {}", x.value, x.modulus),
            Scalar::Cyclotomic(c) => {
                let mut first = true;
                for (i, q) in c.coeffs.iter().enumerate() {
                    if q.is_zero() {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    match i {
                        0 => write!(f, "{q}")?,
                        1 => write!(f, "({q})z{}", c.order)?,
                        _ => write!(f, "({q})z{}^{i}", c.order)?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.combine(o, Op::Add)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.combine(o, Op::Sub)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.combine(o, Op::Mul)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv().expect("division by zero")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Cyclotomic(c) => {
                Scalar::Cyclotomic(Cyc { order: c.order, coeffs: c.coeffs.iter().map(|q| -q).collect() })
            }
            Scalar::Prime(x) => Scalar::modular((x.modulus - x.value) % x.modulus, x.modulus),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar { (&self).$m(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Q> for Scalar {
    fn from(q: Q) -> Self {
        Scalar::Rational(q)
    }
}

/// The quantum integer [r]_q = 1 + q + ... + q^(r-1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumInteger {
    pub r: u32,
    pub value: Scalar,
}

impl QuantumInteger {
    pub fn new(r: u32, q: &Scalar) -> QuantumInteger {
        let mut value = Scalar::zero();
        let mut p = Scalar::one();
        for _ in 0..r {
            value = &value + &p;
            p = &p * q;
        }
        QuantumInteger { r, value }
    }
}

/// Gaussian binomial coefficient by the q-Pascal rule
/// [a, b] = [a-1, b-1] + q^b [a-1, b]; no division is involved.
pub fn q_binomial(a: usize, b: usize, q: &Scalar) -> Result<Scalar> {
    if b > a {
        return Err(Error::Domain(format!("q_binomial({a}, {b}): b exceeds a")));
    }
    let one = q.pow(0);
    let mut qpow = vec![one.clone()];
    for j in 1..=b {
        qpow.push(&qpow[j - 1] * q);
    }
    let mut row = vec![one.clone()];
    for r in 1..=a {
        let width = r.min(b) + 1;
        let mut next = vec![Scalar::zero(); width];
        for (j, slot) in next.iter_mut().enumerate() {
            let left = if j >= 1 { row.get(j - 1).cloned().unwrap_or_default() } else { Scalar::zero() };
            let right = if j < row.len() { &qpow[j] * &row[j] } else { Scalar::zero() };
            *slot = &left + &right;
        }
        row = next;
    }
    Ok(row[b].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(Scalar::cyclotomic(1, 0), Scalar::one());
        let s = Scalar::cyclotomic(3, 0) + Scalar::cyclotomic(3, 1) + Scalar::cyclotomic(3, 2);
        assert!(s.is_zero());
        assert_eq!(Scalar::cyclotomic(4, 2), Scalar::from_int(-1));
        assert_eq!(Scalar::cyclotomic(5, 7), Scalar::cyclotomic(5, 2));
        assert_eq!(Scalar::cyclotomic(6, 3), Scalar::from_int(-1));
    }

    #[test]
    fn rational_overflow_promotes() {
        let big = Q::from_int(i64::MAX);
        let p = &big * &big;
        assert!(matches!(p, Q::Big(_)));
        let back = &p * &big.inv().unwrap();
        assert_eq!(back, big);
    }

    #[test]
    fn q_binomial_values() {
        let q = Scalar::ratio(3, 7);
        assert_eq!(q_binomial(2, 1, &q).unwrap(), Scalar::one() + q.clone());
        assert_eq!(q_binomial(5, 0, &q).unwrap(), Scalar::one());
        assert!(q_binomial(3, 1, &Scalar::cyclotomic(3, 1)).unwrap().is_zero());
        assert!(q_binomial(1, 2, &q).is_err());
        assert_eq!(q_binomial(6, 3, &Scalar::one()).unwrap(), Scalar::from_int(20));
    }

    #[test]
    fn quantum_integers() {
        assert_eq!(QuantumInteger::new(5, &Scalar::one()).value, Scalar::from_int(5));
        for m in 2..=12 {
            assert!(QuantumInteger::new(m, &Scalar::cyclotomic(m, 1)).value.is_zero());
        }
    }

    #[test]
    fn cyclotomic_inverse() {
        let z = Scalar::cyclotomic(7, 1);
        let x = Scalar::from_int(2) + z.clone() * z.clone() - Scalar::ratio(1, 3);
        let y = x.inv().unwrap();
        assert!((x * y).is_one());
    }

    #[test]
    fn prime_field() {
        let p = 1_000_000_007;
        let a = Scalar::modular(5, p);
        assert!((a.clone() * a.inv().unwrap()).is_one());
        assert_eq!(Scalar::ratio(1, 2).reduce_mod(p, None).unwrap(), Scalar::modular((p + 1) / 2, p));
        assert!(is_prime_u64(p));
        assert!(!is_prime_u64(p * 3));
    }
}
