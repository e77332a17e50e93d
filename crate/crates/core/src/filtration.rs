//! Word-length, weighted word-length and weight filtrations on 𝔄(V) and
//! T(V*), plus the statistics derived from them.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde_json::json;

use crate::algebra::{apply_pair_table, concat_sparse, shuffle_table, unshuffle_table, words_in_degree, PairTable};
use crate::braided::BraidedVectorSpace;
use crate::combinat::{apply_R_sigma, Permutation, TensorElement};
use crate::error::{invalid, Error, Result};
use crate::linalg::{SparseMatrix, SparseVec, Subspace};
use crate::scalar::{Scalar, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiltrationKind {
    WordLength,
    /// f(1), f(2), … listed from part size 1.
    WeightedWordLength(Vec<u32>),
    Weight,
}

impl FiltrationKind {
    pub fn name(&self) -> &'static str {
        match self {
            FiltrationKind::WordLength => "wordlen",
            FiltrationKind::WeightedWordLength(_) => "weighted",
            FiltrationKind::Weight => "weight",
        }
    }
}

impl std::str::FromStr for FiltrationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wordlen" | "wordlength" => Ok(FiltrationKind::WordLength),
            "weight" => Ok(FiltrationKind::Weight),
            _ => {
                let Some(rest) = s.strip_prefix("weighted:") else {
                    return invalid(format!("unknown filtration '{s}'"));
                };
                let f = rest
                    .split(',')
                    .map(|t| t.trim().parse::<u32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::InvalidInput(format!("bad weight function '{rest}'")))?;
                Ok(FiltrationKind::WeightedWordLength(f))
            }
        }
    }
}

/// Which algebra the filtration lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    T,
}

/// An increasing filtration F_lo ⊆ … ⊆ F_hi = whole of one graded piece.
/// F_{lo−1} is implicitly zero.
#[derive(Clone, Debug)]
pub struct DegreeFiltration {
    n: usize,
    min_index: i32,
    steps: Vec<Subspace>,
}

impl DegreeFiltration {
    pub fn new(n: usize, min_index: i32, steps: Vec<Subspace>) -> DegreeFiltration {
        assert!(!steps.is_empty());
        DegreeFiltration { n, min_index, steps }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn min_index(&self) -> i32 {
        self.min_index
    }

    pub fn max_index(&self) -> i32 {
        self.min_index + self.steps.len() as i32 - 1
    }

    pub fn ambient(&self) -> usize {
        self.steps[0].ambient()
    }

    /// F_s, clamped: zero below the range, everything above it.
    pub fn get(&self, s: i32) -> Subspace {
        if s < self.min_index {
            Subspace::zero(self.ambient())
        } else if s > self.max_index() {
            self.steps.last().unwrap().clone()
        } else {
            self.steps[(s - self.min_index) as usize].clone()
        }
    }

    pub fn step(&self, s: i32) -> Option<&Subspace> {
        if s < self.min_index || s > self.max_index() {
            return None;
        }
        Some(&self.steps[(s - self.min_index) as usize])
    }

    pub fn gr_dim(&self, s: i32) -> usize {
        if s < self.min_index || s > self.max_index() {
            return 0;
        }
        let i = (s - self.min_index) as usize;
        let below = if i == 0 { 0 } else { self.steps[i - 1].dim() };
        self.steps[i].dim() - below
    }

    pub fn gr_dims(&self) -> Vec<(i32, usize)> {
        (self.min_index..=self.max_index()).map(|s| (s, self.gr_dim(s))).collect()
    }

    /// A basis compatible with the filtration: every vector has a level s
    /// and the vectors of level ≤ s span F_s. Leading entries are distinct
    /// and equal to one.
    pub fn adapted_basis(&self) -> Vec<(SparseVec, i32)> {
        let mut out = Vec::with_capacity(self.ambient());
        let mut seen = std::collections::HashSet::new();
        for (i, step) in self.steps.iter().enumerate() {
            for row in step.basis() {
                let lead = row.leading().unwrap().0;
                if seen.insert(lead) {
                    out.push((row.clone(), self.min_index + i as i32));
                }
            }
        }
        out
    }

    /// The least s with v ∈ F_s.
    pub fn level_of(&self, v: &SparseVec) -> i32 {
        if v.is_zero() {
            return self.min_index;
        }
        for (i, step) in self.steps.iter().enumerate() {
            if step.contains(v) {
                return self.min_index + i as i32;
            }
        }
        unreachable!("top step is the whole space")
    }

    fn check(&self) -> Result<()> {
        for (i, w) in self.steps.windows(2).enumerate() {
            if !w[0].is_subspace_of(&w[1]) {
                return Err(Error::FiltrationViolation(format!(
                    "degree {}: step {} not contained in step {}",
                    self.n,
                    self.min_index + i as i32,
                    self.min_index + i as i32 + 1
                )));
            }
        }
        let top = self.steps.last().unwrap();
        if top.dim() != top.ambient() {
            return Err(Error::FiltrationViolation(format!("degree {}: top step is not exhaustive", self.n)));
        }
        Ok(())
    }
}

/// One nonzero cell of a graded-dimension table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub n: usize,
    pub index: i32,
    pub gr_dim: usize,
}

#[derive(Clone, Debug)]
pub struct FiltrationTable {
    pub kind: FiltrationKind,
    pub side: Side,
    pub d: usize,
    pub degrees: Vec<DegreeFiltration>,
}

impl FiltrationTable {
    pub fn nmax(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn degree(&self, n: usize) -> &DegreeFiltration {
        &self.degrees[n]
    }

    pub fn gr_dim(&self, n: usize, s: i32) -> usize {
        self.degrees.get(n).map_or(0, |f| f.gr_dim(s))
    }

    /// Nonzero cells ordered by n then index.
    pub fn entries(&self) -> Vec<TableEntry> {
        let mut out = Vec::new();
        for f in &self.degrees {
            for (s, g) in f.gr_dims() {
                if g > 0 {
                    out.push(TableEntry { n: f.n, index: s, gr_dim: g });
                }
            }
        }
        out
    }

    /// Nested, exhaustive, and graded pieces summing to d^n.
    pub fn check(&self) -> Result<()> {
        for f in &self.degrees {
            f.check()?;
            let total: usize = f.gr_dims().iter().map(|x| x.1).sum();
            if total != self.d.pow(f.n as u32) {
                return Err(Error::FiltrationViolation(format!("degree {}: graded dims sum to {total}", f.n)));
            }
        }
        Ok(())
    }

    /// (n, index) → dim Gr, nonzero cells only.
    pub fn bigraded(&self) -> Bigraded {
        self.entries().into_iter().map(|e| ((e.n, e.index as i64), e.gr_dim as i64)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let side = match self.side {
            Side::A => "A",
            Side::T => "T",
        };
        let entries: Vec<_> = self
            .entries()
            .iter()
            .map(|e| json!({"n": e.n, "index": e.index, "gr_dim": e.gr_dim}))
            .collect();
        let mut v = json!({"kind": self.kind.name(), "side": side, "entries": entries});
        if let FiltrationKind::WeightedWordLength(f) = &self.kind {
            v["f"] = json!(f);
        }
        v
    }

    /// Rows are Gr indices, columns are degrees; zero cells are blank.
    /// On T the rows run 0, −1, −2, … so that both sides read downward.
    pub fn to_tsv(&self) -> String {
        let letter = if self.side == Side::A { "A" } else { "T" };
        let mut out = String::new();
        for n in 0..=self.nmax() {
            write!(out, "\t{letter}{n}").unwrap();
        }
        out.push('\n');
        let nonzero: Vec<i32> = self.entries().iter().map(|e| e.index).collect();
        let rows: Vec<i32> = match self.side {
            Side::A => (0..=nonzero.iter().copied().max().unwrap_or(0).max(0)).collect(),
            Side::T => (nonzero.iter().copied().min().unwrap_or(0).min(0)..=0).rev().collect(),
        };
        for s in rows {
            write!(out, "Gr{s}").unwrap();
            for n in 0..=self.nmax() {
                let g = self.gr_dim(n, s);
                if g > 0 {
                    write!(out, "\t{g}").unwrap();
                } else {
                    out.push('\t');
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Dimension table indexed by (algebraic degree, weight).
pub type Bigraded = BTreeMap<(usize, i64), i64>;

struct ShuffleTables {
    d: usize,
    tables: HashMap<(usize, usize), PairTable>,
}

impl ShuffleTables {
    fn new(bvs: &BraidedVectorSpace, nmax: usize) -> ShuffleTables {
        let pairs: Vec<(usize, usize)> =
            (2..=nmax).flat_map(|n| (1..n).map(move |p| (p, n - p))).collect();
        let built = crate::par_map(&pairs, |&(p, q)| shuffle_table(bvs, p, q));
        ShuffleTables { d: bvs.dim(), tables: pairs.into_iter().zip(built).collect() }
    }
}

/// Adds e_u ⋆ b to `span` for all words u of length p and b in `right` (degree q).
fn extend_span(st: &ShuffleTables, span: &mut Subspace, p: usize, q: usize, right: &Subspace) {
    let d = st.d;
    let dq = d.pow(q as u32);
    if q == 0 {
        if !right.basis().is_empty() {
            for u in 0..d.pow(p as u32) {
                if span.dim() == span.ambient() {
                    return;
                }
                span.insert(&SparseVec::unit(u));
            }
        }
        return;
    }
    let table = &st.tables[&(p, q)];
    for u in 0..d.pow(p as u32) {
        let x = SparseVec::unit(u);
        for b in right.basis() {
            if span.dim() == span.ambient() {
                return;
            }
            span.insert(&apply_pair_table(table, &x, b, dq));
        }
    }
}

fn check_size(d: usize, nmax: usize) -> Result<()> {
    words_in_degree(d, nmax)?;
    Ok(())
}

/// F_c𝔄_n = span of shuffle products of exactly n−c words of positive length.
pub fn wordlength_filtration(bvs: &BraidedVectorSpace, nmax: usize) -> Result<FiltrationTable> {
    let d = bvs.dim();
    check_size(d, nmax)?;
    let st = ShuffleTables::new(bvs, nmax);
    // m[n][k]: products of exactly k words in degree n, 1 ≤ k ≤ n.
    let mut m: Vec<Vec<Subspace>> = vec![Vec::new(); nmax + 1];
    let mut degrees = vec![DegreeFiltration::new(0, 0, vec![Subspace::full(1)])];
    for n in 1..=nmax {
        let total = d.pow(n as u32);
        let mut row = vec![Subspace::zero(total), Subspace::full(total)];
        for k in 2..=n {
            let mut span = Subspace::zero(total);
            for p in 1..=n + 1 - k {
                extend_span(&st, &mut span, p, n - p, &m[n - p][k - 1]);
            }
            row.push(span);
        }
        let steps = (0..n).map(|c| row[n - c].clone()).collect();
        degrees.push(DegreeFiltration::new(n, 0, steps));
        m[n] = row;
    }
    Ok(FiltrationTable { kind: FiltrationKind::WordLength, side: Side::A, d, degrees })
}

fn check_weight_function(f: &[u32], nmax: usize) -> Result<()> {
    if nmax >= 1 && f.len() < nmax {
        return invalid(format!("weight function lists {} values, need {nmax}", f.len()));
    }
    if f.first().is_some_and(|&x| x != 0) {
        return invalid("weight function must have f(1) = 0");
    }
    for a in 1..=nmax {
        for b in 1..=nmax - a {
            if f[a - 1] + f[b - 1] > f[a + b - 1] {
                return invalid(format!("weight function not superadditive at ({a}, {b})"));
            }
        }
    }
    Ok(())
}

/// F_b𝔄_n = span of shuffle products over compositions λ of n with Σ f(λ_i) ≤ b.
/// `f[k-1]` is f(k).
pub fn weighted_wordlength_filtration(bvs: &BraidedVectorSpace, f: &[u32], nmax: usize) -> Result<FiltrationTable> {
    check_weight_function(f, nmax)?;
    let d = bvs.dim();
    check_size(d, nmax)?;
    let st = ShuffleTables::new(bvs, nmax);
    let fv = |k: usize| f[k - 1] as i64;
    let mut g: HashMap<(usize, i64), Subspace> = HashMap::new();
    let lookup = |g: &HashMap<(usize, i64), Subspace>, n: usize, b: i64| -> Subspace {
        let total = d.pow(n as u32);
        if b < 0 {
            Subspace::zero(total)
        } else if n == 0 || b >= fv(n) {
            Subspace::full(total)
        } else {
            g[&(n, b)].clone()
        }
    };
    let mut degrees = vec![DegreeFiltration::new(0, 0, vec![Subspace::full(1)])];
    for n in 1..=nmax {
        let total = d.pow(n as u32);
        let mut steps = Vec::new();
        for b in 0..=fv(n) {
            let mut span = Subspace::zero(total);
            for p in 1..=n {
                let right = lookup(&g, n - p, b - fv(p));
                extend_span(&st, &mut span, p, n - p, &right);
                if span.dim() == total {
                    break;
                }
            }
            g.insert((n, b), span.clone());
            steps.push(span);
        }
        degrees.push(DegreeFiltration::new(n, 0, steps));
    }
    Ok(FiltrationTable { kind: FiltrationKind::WeightedWordLength(f.to_vec()), side: Side::A, d, degrees })
}

/// Primitive elements of T(W)_n for the braided space W: the common kernel
/// of the interior unshuffle components.
pub fn tensor_primitives(w: &BraidedVectorSpace, n: usize) -> Result<Subspace> {
    let d = w.dim();
    let total = words_in_degree(d, n)?;
    if n <= 1 {
        return Ok(Subspace::full(total));
    }
    let tables: Vec<PairTable> = (1..n).map(|p| unshuffle_table(w, p, n - p)).collect();
    let cols = (0..total)
        .map(|x| {
            let mut terms = Vec::new();
            for (k, t) in tables.iter().enumerate() {
                let shift = (k * total) as u32;
                terms.extend(t[x].entries().iter().map(|(i, c)| (i + shift, c.clone())));
            }
            SparseVec::from_sorted(terms)
        })
        .collect();
    Ok(SparseMatrix::from_cols((n - 1) * total, cols).kernel())
}

/// Primitives of T(V*)_n, in word coordinates dual to those of 𝔄(V)_n.
pub fn primitives(bvs: &BraidedVectorSpace, n: usize) -> Result<Subspace> {
    tensor_primitives(&bvs.dual(), n)
}

/// (Σ_{p+q=n} 𝔄_p ⋆ 𝔄_q)^⊥, which equals the primitives by duality.
pub fn primitives_via_products(bvs: &BraidedVectorSpace, n: usize) -> Result<Subspace> {
    let d = bvs.dim();
    let total = words_in_degree(d, n)?;
    let mut span = Subspace::zero(total);
    for p in 1..n {
        for v in shuffle_table(bvs, p, n - p) {
            if span.dim() == total {
                break;
            }
            span.insert(&v);
        }
    }
    Ok(span.orthogonal_complement())
}

/// The weight filtration on T(W), built degree by degree:
/// W_wT_n = μ(W_wS) + (μ(W_{w+1}S) ∩ P_n) with S = ⊕ T_p ⊗ T_q.
pub fn tensor_weight_filtration(w: &BraidedVectorSpace, nmax: usize) -> Result<FiltrationTable> {
    let d = w.dim();
    check_size(d, nmax)?;
    let mut degrees = vec![DegreeFiltration::new(0, 0, vec![Subspace::full(1)])];
    let mut adapted: Vec<Vec<(SparseVec, i32)>> = vec![degrees[0].adapted_basis()];
    for n in 1..=nmax {
        let total = d.pow(n as u32);
        if n == 1 {
            let f = DegreeFiltration::new(1, 0, vec![Subspace::full(total)]);
            adapted.push(f.adapted_basis());
            degrees.push(f);
            continue;
        }
        let prim = tensor_primitives(w, n)?;
        let mut items: Vec<(i32, SparseVec)> = Vec::with_capacity((n - 1) * total);
        for p in 1..n {
            let dq = d.pow((n - p) as u32);
            for (a, la) in &adapted[p] {
                for (b, lb) in &adapted[n - p] {
                    items.push((la + lb, concat_sparse(a, b, dq)));
                }
            }
        }
        items.sort_by_key(|x| x.0);
        let lo = items.first().map_or(0, |x| x.0);
        // snapshots of μ(W_wS) for w = lo..=0
        let mut snaps: Vec<Subspace> = Vec::new();
        let mut cur = Subspace::zero(total);
        let mut it = items.iter().peekable();
        for level in lo..=0 {
            while let Some((l, v)) = it.peek() {
                if *l > level {
                    break;
                }
                cur.insert(v);
                it.next();
            }
            snaps.push(cur.clone());
        }
        let mu = |level: i32| -> Subspace {
            if level < lo {
                Subspace::zero(total)
            } else if level > 0 {
                Subspace::full(total)
            } else {
                snaps[(level - lo) as usize].clone()
            }
        };
        let min = -(n as i32 - 1);
        let steps: Vec<Subspace> = (min..=0).map(|s| mu(s).sum(&mu(s + 1).intersection(&prim))).collect();
        let f = DegreeFiltration::new(n, min, steps);
        adapted.push(f.adapted_basis());
        degrees.push(f);
    }
    Ok(FiltrationTable { kind: FiltrationKind::Weight, side: Side::T, d, degrees })
}

/// The weight filtration on T(V*).
#[allow(non_snake_case)]
pub fn weight_filtration_T(bvs: &BraidedVectorSpace, nmax: usize) -> Result<FiltrationTable> {
    tensor_weight_filtration(&bvs.dual(), nmax)
}

/// Annihilators of a filtration on T: F_w𝔄_n = (F_{−w−1}T_n)^⊥.
pub fn dual_table(t: &FiltrationTable) -> FiltrationTable {
    let degrees = t
        .degrees
        .iter()
        .map(|f| {
            let top = -f.min_index();
            let steps = (0..=top.max(0)).map(|s| f.get(-s - 1).orthogonal_complement()).collect();
            DegreeFiltration::new(f.degree(), 0, steps)
        })
        .collect();
    FiltrationTable { kind: t.kind.clone(), side: Side::A, d: t.d, degrees }
}

/// W_w𝔄_n = (W_{−w−1}T_n)^⊥.
#[allow(non_snake_case)]
pub fn weight_filtration_A(bvs: &BraidedVectorSpace, nmax: usize) -> Result<FiltrationTable> {
    Ok(dual_table(&weight_filtration_T(bvs, nmax)?))
}

/// R on T_p ⊗ T_q for a degree-n vector split after p letters.
fn block_braid(w: &BraidedVectorSpace, z: &TensorElement, p: usize) -> Result<TensorElement> {
    let n = z.degree();
    let q = n - p;
    let images: Vec<usize> = (0..n).map(|j| if j < p { j + q } else { j - p } + 1).collect();
    let sigma = Permutation::from_one_line(&images)?;
    apply_R_sigma(w, n, &sigma, z)
}

pub const BRPRIM_PERIOD_BOUND: usize = 64;

/// For x, y in T(V*) find the least even 2k ≤ bound with R^{2k}(x⊗y) = x⊗y
/// and return (1/2k) Σ_{j<2k} (−1)^j μ(R^j(x⊗y)); `None` if no period is found.
pub fn brprim2(bvs: &BraidedVectorSpace, x: &TensorElement, y: &TensorElement, bound: usize) -> Result<Option<TensorElement>> {
    let w = bvs.dual();
    let z = crate::algebra::concat_product(x, y);
    let n = z.degree();
    let (p, q) = (x.degree(), y.degree());
    let mut powers = vec![z.clone()];
    let mut cur = z.clone();
    for j in 1..=bound {
        let split = if j % 2 == 1 { p } else { q };
        cur = block_braid(&w, &cur, split)?;
        if j % 2 == 0 && cur == z {
            let mut acc = TensorElement::zero(n);
            for (i, t) in powers.iter().enumerate() {
                let sign = if i % 2 == 0 { Scalar::one() } else { Scalar::from_int(-1) };
                acc = acc.add(&t.scale(&sign))?;
            }
            return Ok(Some(acc.scale(&Scalar::ratio(1, j as i64))));
        }
        powers.push(cur.clone());
    }
    Ok(None)
}

/// a(n) = (1/dim T_n) Σ_w w · dim Gr_w T_n.
pub fn avg_weight(table: &FiltrationTable, n: usize) -> Result<Q> {
    if n > table.nmax() {
        return invalid(format!("table stops at degree {}", table.nmax()));
    }
    let f = table.degree(n);
    let num: i64 = f.gr_dims().iter().map(|&(s, g)| s as i64 * g as i64).sum();
    Ok(Q::from_i128(num as i128, table.d.pow(n as u32) as i128))
}

#[derive(Clone, Debug)]
pub struct WeightStatistic {
    /// a(n) for n = 0..=nmax.
    pub a: Vec<Q>,
    /// a(n)/n for n ≥ 1 (index 0 unused and zero).
    pub a_over_n: Vec<Q>,
    /// min_{k ≤ n} a(k)/k for n ≥ 1.
    pub running_inf: Vec<Q>,
    /// a(nm) ≤ m·a(n) on every computed pair.
    pub superadditive_ok: bool,
    /// a(n+1) ≤ a(n) for every computed n.
    pub monotone_ok: bool,
    pub violations: Vec<String>,
    /// −inf a(n)/n over the computed range. This only bounds the limiting
    /// constant from the computed side; it is not the limit.
    pub c_estimate: Q,
}

pub fn weight_statistic(table: &FiltrationTable) -> Result<WeightStatistic> {
    let nmax = table.nmax();
    let a: Vec<Q> = (0..=nmax).map(|n| avg_weight(table, n)).collect::<Result<_>>()?;
    let mut a_over_n = vec![Q::from_int(0)];
    let mut running_inf = vec![Q::from_int(0)];
    for n in 1..=nmax {
        let r = &a[n] * &Q::new(1, n as i64);
        let inf = if n == 1 { r.clone() } else { running_inf[n - 1].clone().min(r.clone()) };
        a_over_n.push(r);
        running_inf.push(inf);
    }
    let mut violations = Vec::new();
    for n in 1..=nmax {
        for m in 1..=nmax / n {
            if a[n * m] > &a[n] * &Q::from_int(m as i64) {
                violations.push(format!("a({}) > {}·a({n})", n * m, m));
            }
        }
    }
    let superadditive_ok = violations.is_empty();
    for n in 0..nmax {
        if a[n + 1] > a[n] {
            violations.push(format!("a({}) > a({n})", n + 1));
        }
    }
    let monotone_ok = (0..nmax).all(|n| a[n + 1] <= a[n]);
    let c_estimate = -running_inf.last().unwrap_or(&Q::from_int(0));
    Ok(WeightStatistic { a, a_over_n, running_inf, superadditive_ok, monotone_ok, violations, c_estimate })
}

pub fn concentration_report(bvs: &BraidedVectorSpace, nmax: usize) -> Result<WeightStatistic> {
    if nmax < 2 {
        return invalid("concentration report needs nmax ≥ 2");
    }
    weight_statistic(&weight_filtration_T(bvs, nmax)?)
}

/// Two-variable power-series quotient Hilb(a)/Hilb(b) truncated at degree
/// nmax. `b` must have constant term 1. Fails if a coefficient of the
/// quotient is negative.
pub fn hilbert_quotient(a: &Bigraded, b: &Bigraded, nmax: usize) -> Result<Bigraded> {
    if b.get(&(0, 0)) != Some(&1) || b.keys().any(|&(n, w)| n == 0 && w != 0) {
        return Err(Error::Domain("divisor must have constant term 1".into()));
    }
    let slice = |m: &Bigraded, n: usize| -> BTreeMap<i64, i64> {
        m.range((n, i64::MIN)..=(n, i64::MAX)).map(|(&(_, w), &v)| (w, v)).collect()
    };
    let mut c: Vec<BTreeMap<i64, i64>> = Vec::new();
    for n in 0..=nmax {
        let mut cur = slice(a, n);
        for k in 1..=n {
            for (wb, vb) in slice(b, k) {
                for (wc, vc) in &c[n - k] {
                    *cur.entry(wb + wc).or_insert(0) -= vb * vc;
                }
            }
        }
        cur.retain(|_, v| *v != 0);
        if let Some((w, v)) = cur.iter().find(|(_, v)| **v < 0) {
            return Err(Error::Domain(format!("quotient coefficient {v} at (n={n}, w={w}) is negative")));
        }
        c.push(cur);
    }
    let mut out = Bigraded::new();
    for (n, row) in c.into_iter().enumerate() {
        for (w, v) in row {
            out.insert((n, w), v);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundConstants {
    pub delta: Q,
    pub c: Q,
    pub epsilon: Q,
}

/// δ = 1/(m+1), c = max i/n over generators in bidegree (n−i, n), ε = δ/(1−c).
pub fn bound_constants(m: usize, generators: &[(usize, usize)]) -> Result<BoundConstants> {
    if m == 0 {
        return invalid("Nichols top degree must be at least 1");
    }
    if generators.is_empty() {
        return invalid("no generator bidegrees given");
    }
    let mut c = Q::from_int(0);
    for &(hom, n) in generators {
        if hom == 0 || hom > n {
            return invalid(format!("bad generator bidegree ({hom}, {n})"));
        }
        c = c.max(Q::new((n - hom) as i64, n as i64));
    }
    if c >= Q::from_int(1) {
        return Err(Error::Domain("c ≥ 1".into()));
    }
    let delta = Q::new(1, m as i64 + 1);
    let epsilon = &delta * &(&Q::from_int(1) - &c).inv().unwrap();
    Ok(BoundConstants { delta, c, epsilon })
}

/// Whether Δ_{p,q}(W_wT_n) ⊆ Σ_{u+v=w} W_uT_p ⊗ W_vT_q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BialgebraCheck {
    pub n: usize,
    pub p: usize,
    pub w: i32,
    pub holds: bool,
}

/// Tests the coproduct compatibility of a filtration on T(W) for all
/// interior splittings. This is a report; failures are data, not errors.
pub fn bialgebra_report(w: &BraidedVectorSpace, table: &FiltrationTable) -> Result<Vec<BialgebraCheck>> {
    let d = w.dim();
    let adapted: Vec<Vec<(SparseVec, i32)>> = table.degrees.iter().map(|f| f.adapted_basis()).collect();
    let mut out = Vec::new();
    for n in 2..=table.nmax() {
        let f = table.degree(n);
        for p in 1..n {
            let q = n - p;
            let dq = d.pow(q as u32);
            let delta = unshuffle_table(w, p, q);
            let mut pairs: Vec<(i32, SparseVec)> = Vec::new();
            for (a, la) in &adapted[p] {
                for (b, lb) in &adapted[q] {
                    pairs.push((la + lb, concat_sparse(a, b, dq)));
                }
            }
            pairs.sort_by_key(|x| x.0);
            let mut target = Subspace::zero(d.pow(n as u32));
            let mut idx = 0;
            for level in f.min_index()..=f.max_index() {
                while idx < pairs.len() && pairs[idx].0 <= level {
                    target.insert(&pairs[idx].1);
                    idx += 1;
                }
                let holds = f.step(level).unwrap().basis().iter().all(|x| {
                    let mut terms = Vec::new();
                    for (i, c) in x.iter() {
                        terms.extend(delta[i].entries().iter().map(|(j, e)| (*j, e * c)));
                    }
                    target.contains(&SparseVec::from_terms(terms))
                });
                out.push(BialgebraCheck { n, p, w: level, holds });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braided::{make_diagonal, make_trivial};
    use crate::scalar::FieldDesc;

    fn zeta3() -> BraidedVectorSpace {
        make_diagonal(&[vec![Scalar::cyclotomic(3, 1)]], FieldDesc::Cyclotomic { order: 3 }).unwrap()
    }

    #[test]
    fn figure_one_pattern() {
        let t = wordlength_filtration(&zeta3(), 8).unwrap();
        t.check().unwrap();
        for n in 0..=8 {
            let s = 2 * (n / 3) as i32;
            assert_eq!(t.gr_dim(n, s), 1, "n={n}");
        }
    }

    #[test]
    fn figure_five_pattern() {
        let a = weight_filtration_A(&zeta3(), 8).unwrap();
        a.check().unwrap();
        for n in 0..=8 {
            assert_eq!(a.gr_dim(n, (n / 3) as i32), 1, "n={n}");
        }
    }

    #[test]
    fn trivial_d2_wordlength_matches_weight() {
        let v = make_trivial(2).unwrap();
        let wl = wordlength_filtration(&v, 4).unwrap();
        let wa = weight_filtration_A(&v, 4).unwrap();
        assert_eq!(wl.entries(), wa.entries());
        let f: Vec<u32> = (0..4).collect();
        let ww = weighted_wordlength_filtration(&v, &f, 4).unwrap();
        assert_eq!(wl.entries(), ww.entries());
    }

    #[test]
    fn weight_functions_are_validated() {
        let v = make_trivial(1).unwrap();
        assert!(weighted_wordlength_filtration(&v, &[1, 1, 2], 3).is_err());
        assert!(weighted_wordlength_filtration(&v, &[0, 3, 2], 3).is_err());
        assert!(weighted_wordlength_filtration(&v, &[0, 1], 3).is_err());
    }

    #[test]
    fn constants() {
        let b = bound_constants(4, &[(1, 1), (1, 1), (1, 1), (4, 6)]).unwrap();
        assert_eq!((b.delta, b.c, b.epsilon), (Q::new(1, 5), Q::new(1, 3), Q::new(3, 10)));
        assert!(bound_constants(1, &[(0, 1)]).is_err());
    }

    #[test]
    fn hilbert_quotient_by_itself() {
        let a: Bigraded = [((0, 0), 1), ((1, 0), 2), ((2, 0), 3), ((2, 1), 1)].into_iter().collect();
        let q = hilbert_quotient(&a, &a, 2).unwrap();
        assert_eq!(q, [((0, 0), 1)].into_iter().collect());
    }
}
