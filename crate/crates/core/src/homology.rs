//! Bar and cobar complexes of graded connected (co)algebras, their exact
//! homology, filtered bar complexes and the spectral sequence of a filtration.

use std::collections::{BTreeMap, HashMap};

use serde_json::json;

use crate::algebra::{nichols_algebra, AlgebraKind, BasedAlgebra, BasedCoalgebra, BasisAlgebra, WordAlgebra};
use crate::braided::BraidedVectorSpace;
use crate::error::{invalid, Error, Result};
use crate::filtration::{FiltrationTable, Side};
use crate::linalg::{column_reduce, SparseMatrix, SparseVec};
use crate::scalar::Scalar;

pub use crate::modular::{certified_rank, random_primes, RankCertificate, RankMode};

/// Largest total chain dimension built without `force`.
pub const CHAIN_GUARD: u128 = 10_000_000;

/// Refuses degrees whose full bar complex would exceed [`CHAIN_GUARD`].
pub fn check_guard(d: usize, n: usize, force: bool) -> Result<()> {
    if n == 0 || force {
        return Ok(());
    }
    let size = (1u128 << (n - 1)).saturating_mul((d as u128).saturating_pow(n as u32));
    if size > CHAIN_GUARD {
        return Err(Error::Resource(format!(
            "bar complex in degree {n} has total dimension {size} > {CHAIN_GUARD}; pass --force to run anyway"
        )));
    }
    Ok(())
}

/// Exact for n ≤ 5, modular above.
pub fn default_mode(n: usize, primes: usize, seed: u64) -> RankMode {
    if n <= 5 {
        RankMode::Exact
    } else {
        RankMode::Modular { primes, seed }
    }
}

/// Cochain complex with d: C^k → C^{k+1} and a filtration level on every
/// basis vector (all zero when unfiltered).
#[derive(Clone, Debug, Default)]
pub struct Complex {
    pub levels: BTreeMap<i32, Vec<i32>>,
    pub diffs: BTreeMap<i32, SparseMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyDims {
    pub dims: BTreeMap<i32, usize>,
    pub verified: bool,
}

impl Complex {
    pub fn dim(&self, k: i32) -> usize {
        self.levels.get(&k).map_or(0, Vec::len)
    }

    pub fn degrees(&self) -> Vec<i32> {
        self.levels.keys().copied().collect()
    }

    pub fn check_d_squared(&self) -> Result<()> {
        for (&k, d) in &self.diffs {
            if let Some(next) = self.diffs.get(&(k + 1)) {
                if !next.mul(d).is_zero() {
                    return Err(Error::Gate(format!("d∘d ≠ 0 starting in degree {k}")));
                }
            }
        }
        Ok(())
    }

    /// Fails if some differential entry raises the filtration level.
    pub fn check_filtered(&self) -> Result<()> {
        for (&k, d) in &self.diffs {
            let src = &self.levels[&k];
            let dst = &self.levels[&(k + 1)];
            for (c, col) in d.cols.iter().enumerate() {
                for (r, _) in col.entries() {
                    if dst[*r as usize] > src[c] {
                        return Err(Error::FiltrationViolation(format!(
                            "differential from degree {k} sends level {} to level {}",
                            src[c], dst[*r as usize]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.levels.iter().map(|(&k, v)| if k.rem_euclid(2) == 0 { v.len() as i64 } else { -(v.len() as i64) }).sum()
    }

    /// rank of d_k for every k.
    pub fn ranks(&self, mode: RankMode) -> BTreeMap<i32, RankCertificate> {
        self.diffs.iter().map(|(&k, d)| (k, split_rank(d, mode))).collect()
    }

    pub fn homology(&self, mode: RankMode) -> HomologyDims {
        let ranks = self.ranks(mode);
        let rk = |k: i32| ranks.get(&k).map_or(0, |r| r.rank);
        let dims = self
            .degrees()
            .into_iter()
            .map(|k| (k, self.dim(k) - rk(k) - rk(k - 1)))
            .collect();
        HomologyDims { dims, verified: ranks.values().all(|r| r.verified) }
    }
}

/// Row and column index sets of the connected blocks of a sparse matrix.
fn blocks(m: &SparseMatrix) -> Vec<(Vec<usize>, Vec<usize>)> {
    let nr = m.nrows;
    let mut parent: Vec<usize> = (0..nr + m.ncols()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (c, col) in m.cols.iter().enumerate() {
        for (r, _) in col.entries() {
            let (a, b) = (find(&mut parent, nr + c), find(&mut parent, *r as usize));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (c, col) in m.cols.iter().enumerate() {
        if !col.is_zero() {
            let root = find(&mut parent, nr + c);
            groups.entry(root).or_default().1.push(c);
        }
    }
    for r in 0..nr {
        let root = find(&mut parent, r);
        if let Some(g) = groups.get_mut(&root) {
            g.0.push(r);
        }
    }
    groups.into_values().collect()
}

fn sub_block(m: &SparseMatrix, rows: &[usize], cols: &[usize]) -> SparseMatrix {
    let pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let cols = cols.iter().map(|&c| m.cols[c].remap(|r| pos[&r])).collect();
    SparseMatrix::from_cols(rows.len(), cols)
}

fn split_rank(m: &SparseMatrix, mode: RankMode) -> RankCertificate {
    let bl = blocks(m);
    let parts = crate::par_map(&bl, |(rows, cols)| certified_rank(&sub_block(m, rows, cols), mode));
    RankCertificate { rank: parts.iter().map(|r| r.rank).sum(), verified: parts.iter().all(|r| r.verified) }
}

/// Pivot pairs (row level, column level) of d with both sides ordered by
/// level; they determine the rank of every level-truncated block of d.
fn level_pairs(m: &SparseMatrix, row_levels: &[i32], col_levels: &[i32]) -> Vec<(i32, i32)> {
    let bl = blocks(m);
    let parts = crate::par_map(&bl, |(rows, cols)| {
        let mut rows = rows.clone();
        rows.sort_by_key(|&r| (row_levels[r], r));
        let mut cols = cols.clone();
        cols.sort_by_key(|&c| (col_levels[c], c));
        let pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let sorted: Vec<SparseVec> = cols.iter().map(|&c| m.cols[c].remap(|r| pos[&r])).collect();
        column_reduce(&sorted)
            .into_iter()
            .map(|(r, c)| (row_levels[rows[r]], col_levels[cols[c]]))
            .collect::<Vec<_>>()
    });
    parts.into_iter().flatten().collect()
}

/// A bar or cobar complex in one algebraic degree.
#[derive(Clone, Debug)]
pub struct BarComplex {
    pub n: usize,
    pub ascending: bool,
    /// degree → compositions with their offsets into that degree's basis
    pub blocks: BTreeMap<i32, Vec<(Vec<usize>, usize)>>,
    pub complex: Complex,
}

pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for mask in 0..(1u64 << (n - 1)) {
        let mut parts = Vec::new();
        let mut cur = 1;
        for i in 0..n - 1 {
            if mask >> (n - 2 - i) & 1 == 1 {
                parts.push(cur);
                cur = 1;
            } else {
                cur += 1;
            }
        }
        parts.push(cur);
        out.push(parts);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(b.cmp(a)));
    out
}

fn layout(n: usize, dim: impl Fn(usize) -> usize, sign: i32) -> BTreeMap<i32, Vec<(Vec<usize>, usize)>> {
    let mut by_deg: BTreeMap<i32, Vec<(Vec<usize>, usize)>> = BTreeMap::new();
    for lam in compositions(n) {
        let k = sign * lam.len() as i32;
        let e = by_deg.entry(k).or_default();
        let off = e.last().map_or(0, |(l, o): &(Vec<usize>, usize)| o + l.iter().map(|&p| dim(p)).product::<usize>());
        e.push((lam, off));
    }
    by_deg
}

/// Index tuples of a composition block, in mixed-radix order.
fn tuples(lam: &[usize], dim: &impl Fn(usize) -> usize) -> Vec<Vec<usize>> {
    let radix: Vec<usize> = lam.iter().map(|&p| dim(p)).collect();
    let total: usize = radix.iter().product();
    let mut out = Vec::with_capacity(total);
    if total == 0 {
        return out;
    }
    let mut t = vec![0usize; lam.len()];
    for _ in 0..total {
        out.push(t.clone());
        for i in (0..t.len()).rev() {
            t[i] += 1;
            if t[i] < radix[i] {
                break;
            }
            t[i] = 0;
        }
    }
    out
}

fn flat_index(t: &[usize], lam: &[usize], dim: &impl Fn(usize) -> usize) -> usize {
    t.iter().zip(lam).fold(0, |acc, (&i, &p)| acc * dim(p) + i)
}

fn assemble(
    n: usize,
    ascending: bool,
    dim: impl Fn(usize) -> usize,
    level: impl Fn(usize, usize) -> i32,
    edges: impl Fn(&[usize], &[usize]) -> Vec<(Vec<usize>, Vec<usize>, Scalar)>,
) -> BarComplex {
    let sign = if ascending { 1 } else { -1 };
    let lay = layout(n, &dim, sign);
    let mut complex = Complex::default();
    for (&k, blocks) in &lay {
        let mut lv = Vec::new();
        for (lam, _) in blocks {
            for t in tuples(lam, &dim) {
                lv.push(t.iter().zip(lam.iter()).map(|(&i, &p)| level(p, i)).sum());
            }
        }
        complex.levels.insert(k, lv);
    }
    for (&k, blocks) in &lay {
        let Some(targets) = lay.get(&(k + 1)) else { continue };
        let offsets: HashMap<&Vec<usize>, usize> = targets.iter().map(|(l, o)| (l, *o)).collect();
        let mut triplets = Vec::new();
        for (lam, off) in blocks {
            for (ti, t) in tuples(lam, &dim).iter().enumerate() {
                for (mu, u, c) in edges(lam, t) {
                    let row = offsets[&mu] + flat_index(&u, &mu, &dim);
                    triplets.push((row, off + ti, c));
                }
            }
        }
        let nrows = complex.dim(k + 1);
        complex.diffs.insert(k, SparseMatrix::from_triplets(nrows, complex.dim(k), triplets));
    }
    BarComplex { n, ascending, blocks: lay, complex }
}

fn koszul(k: usize) -> Scalar {
    if k % 2 == 0 {
        Scalar::one()
    } else {
        Scalar::from_int(-1)
    }
}

/// B_n(A): compositions with m parts in degree −m; fusing parts k, k+1
/// (counted from one) by multiplication carries the sign (−1)^{k−1}.
pub fn build_bar(alg: &dyn BasedAlgebra, n: usize) -> Result<BarComplex> {
    if n == 0 {
        return invalid("bar complex needs n ≥ 1");
    }
    let dim = |p: usize| alg.dim(p);
    Ok(assemble(n, false, dim, |p, i| alg.level(p, i), |lam, t| {
        let mut out = Vec::new();
        for k in 0..lam.len() - 1 {
            let prod = alg.mul_basis(lam[k], t[k], lam[k + 1], t[k + 1]);
            let mut mu = lam.to_vec();
            mu[k] += mu.remove(k + 1);
            for (j, c) in prod.iter() {
                let mut u = t.to_vec();
                u.remove(k + 1);
                u[k] = j;
                out.push((mu.clone(), u, c * &koszul(k)));
            }
        }
        out
    }))
}

/// B_n†(C): compositions with m parts in degree +m; splitting part k by
/// Δ_{p, λ_k − p} carries the sign (−1)^{k−1}.
pub fn build_cobar(coalg: &dyn BasedCoalgebra, n: usize) -> Result<BarComplex> {
    if n == 0 {
        return invalid("cobar complex needs n ≥ 1");
    }
    let dim = |p: usize| coalg.dim(p);
    Ok(assemble(n, true, dim, |_, _| 0, |lam, t| {
        let mut out = Vec::new();
        for k in 0..lam.len() {
            for p in 1..lam[k] {
                let q = lam[k] - p;
                let dq = coalg.dim(q);
                let mut mu = lam.to_vec();
                mu[k] = p;
                mu.insert(k + 1, q);
                for (j, c) in coalg.comul_basis(lam[k], t[k], p).iter() {
                    let mut u = t.to_vec();
                    u[k] = j / dq;
                    u.insert(k + 1, j % dq);
                    out.push((mu.clone(), u, c * &koszul(k)));
                }
            }
        }
        out
    }))
}

/// The algebra of the given kind on its standard basis, up to degree nmax.
pub fn algebra_for(bvs: &BraidedVectorSpace, kind: AlgebraKind, nmax: usize) -> Result<Box<dyn BasedAlgebra>> {
    Ok(match kind {
        AlgebraKind::Tensor | AlgebraKind::Shuffle => Box::new(WordAlgebra::new(bvs, kind, nmax)?),
        AlgebraKind::Nichols => Box::new(nichols_algebra(bvs, nmax)?),
    })
}

/// (m, n, optional weight) → dimension, nonzero entries only.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TriGradedDims {
    pub entries: BTreeMap<(usize, usize, Option<i32>), usize>,
    pub verified: bool,
}

impl TriGradedDims {
    pub fn get(&self, m: usize, n: usize, w: Option<i32>) -> usize {
        self.entries.get(&(m, n, w)).copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<_> = self
            .entries
            .iter()
            .map(|(&(m, n, w), &dim)| match w {
                Some(w) => json!({"m": m, "n": n, "w": w, "dim": dim}),
                None => json!({"m": m, "n": n, "dim": dim}),
            })
            .collect();
        json!({"entries": entries, "verified": self.verified})
    }
}

/// Euler characteristic of homology against that of the chains.
fn euler_gate(c: &Complex, h: &HomologyDims, n: usize) -> Result<()> {
    let eh: i64 = h.dims.iter().map(|(&k, &v)| if k.rem_euclid(2) == 0 { v as i64 } else { -(v as i64) }).sum();
    if eh != c.euler_characteristic() {
        return Err(Error::Gate(format!("Euler characteristic mismatch in degree {n}")));
    }
    Ok(())
}

/// Tor_{m,n}^A(k,k) = H^{−m}(B_n(A)) for 1 ≤ n ≤ nmax, plus Tor_{0,0} = 1.
pub fn tor_dims(bvs: &BraidedVectorSpace, kind: AlgebraKind, nmax: usize, mode: impl Fn(usize) -> RankMode, force: bool) -> Result<TriGradedDims> {
    for n in 1..=nmax {
        check_guard(bvs.dim(), n, force)?;
    }
    let alg = algebra_for(bvs, kind, nmax.max(1))?;
    let mut out = TriGradedDims { verified: true, ..Default::default() };
    out.entries.insert((0, 0, None), 1);
    for n in 1..=nmax {
        let bar = build_bar(alg.as_ref(), n)?;
        bar.complex.check_d_squared()?;
        let h = bar.complex.homology(mode(n));
        euler_gate(&bar.complex, &h, n)?;
        out.verified &= h.verified;
        for (k, v) in h.dims {
            if v > 0 {
                out.entries.insert(((-k) as usize, n, None), v);
            }
        }
    }
    Ok(out)
}

/// H^m(B_n†(C)) for 1 ≤ n ≤ nmax, plus degree (0, 0).
pub fn cotor_dims(coalg: &dyn BasedCoalgebra, nmax: usize, mode: RankMode) -> Result<TriGradedDims> {
    let mut out = TriGradedDims { verified: true, ..Default::default() };
    out.entries.insert((0, 0, None), 1);
    for n in 1..=nmax {
        let cobar = build_cobar(coalg, n)?;
        cobar.complex.check_d_squared()?;
        let h = cobar.complex.homology(mode);
        euler_gate(&cobar.complex, &h, n)?;
        out.verified &= h.verified;
        for (k, v) in h.dims {
            if v > 0 {
                out.entries.insert((k as usize, n, None), v);
            }
        }
    }
    Ok(out)
}

/// 𝔄(V) on a basis adapted to a filtration table on 𝔄, with levels.
pub fn filtered_algebra(bvs: &BraidedVectorSpace, table: &FiltrationTable, nmax: usize) -> Result<BasisAlgebra> {
    if table.side != Side::A {
        return invalid("filtered bar complexes need a filtration on the shuffle algebra");
    }
    if table.nmax() < nmax {
        return invalid(format!("filtration table stops at degree {}", table.nmax()));
    }
    let mut bases = Vec::new();
    let mut levels = Vec::new();
    for n in 0..=nmax {
        let (b, l): (Vec<SparseVec>, Vec<i32>) = table.degree(n).adapted_basis().into_iter().unzip();
        bases.push(b);
        levels.push(l);
    }
    BasisAlgebra::new(bvs, bases, levels).map_err(|e| match e {
        Error::Gate(m) => Error::FiltrationViolation(m),
        e => e,
    })
}

/// The bar complex with the induced filtration on each chain group; fails
/// if the differential raises the level anywhere.
pub fn filtered_bar(alg: &BasisAlgebra, n: usize) -> Result<BarComplex> {
    let bar = build_bar(alg, n)?;
    bar.complex.check_d_squared()?;
    bar.complex.check_filtered()?;
    Ok(bar)
}

/// Pages of the spectral sequence of a finitely filtered complex.
/// Positions are (p, k): filtration level p and total degree k; d_r maps
/// (p, k) to (p − r, k + 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralSequencePages {
    /// pages[r − 1] holds E_r.
    pub pages: Vec<BTreeMap<(i32, i32), usize>>,
    /// out_ranks[r − 1] holds the rank of d_r leaving each position.
    pub out_ranks: Vec<BTreeMap<(i32, i32), usize>>,
    pub e_inf: BTreeMap<(i32, i32), usize>,
}

impl SpectralSequencePages {
    pub fn page(&self, r: usize) -> &BTreeMap<(i32, i32), usize> {
        &self.pages[r.min(self.pages.len()) - 1]
    }

    /// Σ_p dim E_∞^{p} at each total degree.
    pub fn abutment(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (&(_, k), &v) in &self.e_inf {
            *out.entry(k).or_insert(0) += v;
        }
        out
    }

    /// Nonzero differentials as (r, p, k, rank).
    pub fn nonzero_differentials(&self) -> Vec<(usize, i32, i32, usize)> {
        let mut out = Vec::new();
        for (r, m) in self.out_ranks.iter().enumerate() {
            for (&(p, k), &v) in m {
                if v > 0 {
                    out.push((r + 1, p, k, v));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let cells = |m: &BTreeMap<(i32, i32), usize>| -> Vec<serde_json::Value> {
            m.iter().filter(|(_, &v)| v > 0).map(|(&(p, k), &v)| json!({"p": p, "q": k - p, "dim": v})).collect()
        };
        let pages: Vec<_> = self
            .pages
            .iter()
            .zip(&self.out_ranks)
            .enumerate()
            .map(|(r, (e, d))| json!({"r": r + 1, "dims": cells(e), "d_ranks": cells(d)}))
            .collect();
        json!({"pages": pages, "e_inf": cells(&self.e_inf)})
    }
}

struct RankInvariant {
    pairs: Vec<(i32, i32)>,
}

impl RankInvariant {
    /// rank of F_b C^k → C^{k+1} / F_a C^{k+1}
    fn rho(&self, a: i32, b: i32) -> usize {
        self.pairs.iter().filter(|&&(r, c)| r > a && c <= b).count()
    }
}

pub fn spectral_sequence(c: &Complex) -> SpectralSequencePages {
    let all: Vec<i32> = c.levels.values().flatten().copied().collect();
    let (lo, hi) = (all.iter().copied().min().unwrap_or(0), all.iter().copied().max().unwrap_or(0));
    let inv: BTreeMap<i32, RankInvariant> = c
        .diffs
        .iter()
        .map(|(&k, d)| (k, RankInvariant { pairs: level_pairs(d, &c.levels[&(k + 1)], &c.levels[&k]) }))
        .collect();
    let rho = |k: i32, a: i32, b: i32| inv.get(&k).map_or(0, |ri| ri.rho(a, b)) as i64;
    let fdim = |k: i32, p: i32| c.levels.get(&k).map_or(0, |v| v.iter().filter(|&&l| l <= p).count()) as i64;
    let z = |r: i32, p: i32, k: i32| fdim(k, p) - rho(k, p - r, p);
    let b = |r: i32, p: i32, k: i32| rho(k - 1, i32::MIN, p + r) - rho(k - 1, p, p + r);
    let last = (hi - lo + 1).max(1);
    let degrees = c.degrees();
    let mut pages = Vec::new();
    let mut out_ranks = Vec::new();
    for r in 1..=last {
        let mut e = BTreeMap::new();
        let mut d = BTreeMap::new();
        for &k in &degrees {
            for p in lo..=hi {
                let v = z(r, p, k) - z(r - 1, p - 1, k) - b(r - 1, p, k) + b(r, p - 1, k);
                let out = z(r, p, k) - z(r + 1, p, k) - z(r - 1, p - 1, k) + z(r, p - 1, k);
                debug_assert!(v >= 0 && out >= 0);
                e.insert((p, k), v as usize);
                d.insert((p, k), out as usize);
            }
        }
        pages.push(e);
        out_ranks.push(d);
    }
    let e_inf = pages.last().cloned().unwrap_or_default();
    SpectralSequencePages { pages, out_ranks, e_inf }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braided::{make_diagonal, make_trivial};
    use crate::scalar::FieldDesc;

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(4).len(), 8);
        assert_eq!(compositions(3)[0], vec![3]);
    }

    #[test]
    fn shuffle_d1_degree_two() {
        let v = make_trivial(1).unwrap();
        let alg = algebra_for(&v, AlgebraKind::Shuffle, 2).unwrap();
        let bar = build_bar(alg.as_ref(), 2).unwrap();
        assert_eq!(bar.complex.diffs[&-2].get(0, 0), Scalar::from_int(2));
        let h = bar.complex.homology(RankMode::Exact);
        assert!(h.dims.values().all(|&x| x == 0));
    }

    #[test]
    fn tensor_algebra_is_free() {
        let v = make_diagonal(&[vec![Scalar::from_int(2)]], FieldDesc::Rational).unwrap();
        let t = tor_dims(&v, AlgebraKind::Tensor, 4, |_| RankMode::Exact, false).unwrap();
        let nonzero: Vec<_> = t.entries.keys().copied().collect();
        assert_eq!(nonzero, vec![(0, 0, None), (1, 1, None)]);
    }

    #[test]
    fn guard_refuses_large() {
        assert!(matches!(check_guard(3, 14, false), Err(Error::Resource(_))));
        assert!(check_guard(3, 14, true).is_ok());
        assert!(check_guard(3, 6, false).is_ok());
    }
}
