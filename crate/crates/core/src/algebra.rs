//! Tensor algebra T(V), quantum shuffle algebra 𝔄(V) and Nichols algebra
//! 𝔅(V): products, coproduct components, the word pairing and Nichols bases.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::braided::BraidedVectorSpace;
use crate::combinat::{
    apply_braid_word_sparse, enumerate_shuffles, enumerate_unshuffles, matsumoto_lift, Permutation, TensorElement,
};
use crate::error::{Error, Result};
use crate::linalg::{SparseVec, TriangularBasis};
pub use crate::linalg::Subspace;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Tensor,
    Shuffle,
    Nichols,
}

impl std::str::FromStr for AlgebraKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tensor" => Ok(AlgebraKind::Tensor),
            "shuffle" => Ok(AlgebraKind::Shuffle),
            "nichols" => Ok(AlgebraKind::Nichols),
            _ => Err(Error::InvalidInput(format!("unknown algebra kind {s:?}"))),
        }
    }
}

/// Word count d^n, guarded against index overflow.
pub fn words_in_degree(d: usize, n: usize) -> Result<usize> {
    match d.checked_pow(n as u32) {
        Some(x) if x < u32::MAX as usize => Ok(x),
        _ => Err(Error::Resource(format!("{d}^{n} words do not fit the index space"))),
    }
}

/// An element of V^⊗p ⊗ V^⊗q stored as a degree p+q element and a split position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitElement {
    pub p: usize,
    pub q: usize,
    pub element: TensorElement,
}

/// Images of all pairs of basis words under a bilinear map V^⊗p × V^⊗q → V^⊗(p+q),
/// indexed by u·d^q + v.
pub type PairTable = Vec<SparseVec>;

/// e_u ⋆ e_v for all words u of length p and v of length q.
pub fn shuffle_table(bvs: &BraidedVectorSpace, p: usize, q: usize) -> PairTable {
    let d = bvs.dim();
    let n = p + q;
    let total = d.pow(n as u32);
    let lifts: Vec<_> = enumerate_shuffles(p, q).iter().map(matsumoto_lift).collect();
    (0..total)
        .map(|id| {
            let start = SparseVec::unit(id);
            let mut terms = Vec::new();
            for w in &lifts {
                terms.extend(apply_braid_word_sparse(bvs, w, &start).into_entries());
            }
            SparseVec::from_terms(terms)
        })
        .collect()
}

/// Δ_{p,q}(e_w) = Σ over unshuffles τ of R_τ e_w for every word w of length p+q.
pub fn unshuffle_table(bvs: &BraidedVectorSpace, p: usize, q: usize) -> PairTable {
    let d = bvs.dim();
    let total = d.pow((p + q) as u32);
    let lifts: Vec<_> = enumerate_unshuffles(p, q).iter().map(matsumoto_lift).collect();
    (0..total)
        .map(|id| {
            let start = SparseVec::unit(id);
            let mut terms = Vec::new();
            for w in &lifts {
                terms.extend(apply_braid_word_sparse(bvs, w, &start).into_entries());
            }
            SparseVec::from_terms(terms)
        })
        .collect()
}

/// Bilinear extension of a pair table to arbitrary vectors.
pub fn apply_pair_table(table: &PairTable, x: &SparseVec, y: &SparseVec, dq: usize) -> SparseVec {
    let mut terms = Vec::new();
    for (u, a) in x.iter() {
        for (v, b) in y.iter() {
            let ab = a * b;
            for (w, c) in table[u * dq + v].entries() {
                terms.push((*w, c * &ab));
            }
        }
    }
    SparseVec::from_terms(terms)
}

/// Concatenation x·y of word vectors.
pub fn concat_sparse(x: &SparseVec, y: &SparseVec, dq: usize) -> SparseVec {
    let mut entries = Vec::with_capacity(x.nnz() * y.nnz());
    for (u, a) in x.iter() {
        for (v, b) in y.iter() {
            entries.push(((u * dq + v) as u32, a * b));
        }
    }
    SparseVec::from_sorted(entries)
}

fn check_space(bvs: &BraidedVectorSpace, x: &TensorElement) -> Result<()> {
    if x.terms().keys().flatten().any(|&l| l as usize >= bvs.dim()) {
        return Err(Error::Domain("letter outside the basis".into()));
    }
    Ok(())
}

/// u ⋆ v = Σ_{σ ∈ Sh(p,q)} R_σ(u ⊗ v).
pub fn shuffle_product(bvs: &BraidedVectorSpace, u: &TensorElement, v: &TensorElement) -> Result<TensorElement> {
    check_space(bvs, u)?;
    check_space(bvs, v)?;
    let (p, q) = (u.degree(), v.degree());
    let d = bvs.dim();
    let table = shuffle_table(bvs, p, q);
    let out = apply_pair_table(&table, &u.to_sparse(d), &v.to_sparse(d), d.pow(q as u32));
    Ok(TensorElement::from_sparse(&out, p + q, d))
}

/// Free (concatenation) product.
pub fn concat_product(u: &TensorElement, v: &TensorElement) -> TensorElement {
    let mut terms = Vec::new();
    for (a, x) in u.terms() {
        for (b, y) in v.terms() {
            let mut w = a.clone();
            w.extend_from_slice(b);
            terms.push((w, x * y));
        }
    }
    TensorElement::from_terms(u.degree() + v.degree(), terms).expect("degrees add")
}

/// Δ_{p,q}(x) = Σ_{τ ∈ USh(p,q)} R_τ x.
pub fn unshuffle_component(bvs: &BraidedVectorSpace, x: &TensorElement, p: usize, q: usize) -> Result<SplitElement> {
    check_space(bvs, x)?;
    if p + q != x.degree() {
        return Err(Error::Domain(format!("split ({p},{q}) of an element of degree {}", x.degree())));
    }
    let d = bvs.dim();
    let v = x.to_sparse(d);
    let mut terms = Vec::new();
    for tau in enumerate_unshuffles(p, q) {
        terms.extend(apply_braid_word_sparse(bvs, &matsumoto_lift(&tau), &v).into_entries());
    }
    let element = TensorElement::from_sparse(&SparseVec::from_terms(terms), p + q, d);
    Ok(SplitElement { p, q, element })
}

/// Deconcatenation component: the identity read through the split.
pub fn deconcat_component(x: &TensorElement, p: usize, q: usize) -> Result<SplitElement> {
    if p + q != x.degree() {
        return Err(Error::Domain(format!("split ({p},{q}) of an element of degree {}", x.degree())));
    }
    Ok(SplitElement { p, q, element: x.clone() })
}

/// Canonical pairing: dual words evaluate to the Kronecker delta.
pub fn pairing(w: &TensorElement, v: &TensorElement) -> Result<Scalar> {
    if w.degree() != v.degree() {
        return Err(Error::Domain("pairing of elements of different degree".into()));
    }
    let mut acc = Scalar::zero();
    for (word, c) in w.terms() {
        if let Some(x) = v.terms().get(word) {
            acc = &acc + &(c * x);
        }
    }
    Ok(acc)
}

/// Nichols bases in degrees 0..=nmax by iterated products B_n = span(B_{n-1} ⋆ V).
pub fn nichols_bases(bvs: &BraidedVectorSpace, nmax: usize) -> Result<Vec<Subspace>> {
    let d = bvs.dim();
    let mut out = vec![Subspace::full(1)];
    for n in 1..=nmax {
        let ambient = words_in_degree(d, n)?;
        if n == 1 {
            out.push(Subspace::full(d));
            continue;
        }
        let prev = &out[n - 1];
        if prev.dim() == 0 {
            out.push(Subspace::zero(ambient));
            continue;
        }
        let table = shuffle_table(bvs, n - 1, 1);
        let mut s = Subspace::zero(ambient);
        for b in prev.basis() {
            for i in 0..d {
                s.insert(&apply_pair_table(&table, b, &SparseVec::unit(i), d));
            }
        }
        out.push(s);
    }
    Ok(out)
}

pub fn nichols_basis(bvs: &BraidedVectorSpace, n: usize) -> Result<Subspace> {
    Ok(nichols_bases(bvs, n)?.pop().unwrap())
}

/// Image of the braided symmetrizer Σ_{σ ∈ S_n} R_σ.
pub fn symmetrizer_image(bvs: &BraidedVectorSpace, n: usize) -> Result<Subspace> {
    let d = bvs.dim();
    let total = words_in_degree(d, n)?;
    let lifts: Vec<_> = Permutation::all(n).iter().map(matsumoto_lift).collect();
    let mut s = Subspace::zero(total);
    for id in 0..total {
        let start = SparseVec::unit(id);
        let mut terms = Vec::new();
        for w in &lifts {
            terms.extend(apply_braid_word_sparse(bvs, w, &start).into_entries());
        }
        s.insert(&SparseVec::from_terms(terms));
    }
    Ok(s)
}

pub fn graded_dim(kind: AlgebraKind, bvs: &BraidedVectorSpace, n: usize) -> Result<usize> {
    match kind {
        AlgebraKind::Tensor | AlgebraKind::Shuffle => words_in_degree(bvs.dim(), n),
        AlgebraKind::Nichols => Ok(nichols_basis(bvs, n)?.dim()),
    }
}

/// A graded connected algebra with a fixed homogeneous basis in each degree.
pub trait BasedAlgebra: Sync {
    fn dim(&self, n: usize) -> usize;
    /// Product of basis elements, in basis coordinates of degree p+q.
    fn mul_basis(&self, p: usize, i: usize, q: usize, j: usize) -> &SparseVec;
    /// Filtration level of a basis element.
    fn level(&self, _n: usize, _i: usize) -> i32 {
        0
    }
}

/// A graded connected coalgebra with a fixed basis in each degree.
pub trait BasedCoalgebra: Sync {
    fn dim(&self, n: usize) -> usize;
    /// Δ_{p,n-p} of basis element i, in coordinates a·dim(n-p) + b of the tensor basis.
    fn comul_basis(&self, n: usize, i: usize, p: usize) -> &SparseVec;
}

/// T(V) or 𝔄(V) on the word basis, products tabulated up to degree nmax.
pub struct WordAlgebra {
    d: usize,
    dims: Vec<usize>,
    tables: BTreeMap<(usize, usize), PairTable>,
}

impl WordAlgebra {
    pub fn new(bvs: &BraidedVectorSpace, kind: AlgebraKind, nmax: usize) -> Result<WordAlgebra> {
        let d = bvs.dim();
        let dims = (0..=nmax).map(|n| words_in_degree(d, n)).collect::<Result<Vec<_>>>()?;
        let mut tables = BTreeMap::new();
        for p in 1..nmax {
            for q in 1..=nmax - p {
                let t = match kind {
                    AlgebraKind::Shuffle => shuffle_table(bvs, p, q),
                    AlgebraKind::Tensor => (0..dims[p + q]).map(SparseVec::unit).collect(),
                    AlgebraKind::Nichols => return Err(Error::Domain("use NicholsAlgebra".into())),
                };
                tables.insert((p, q), t);
            }
        }
        Ok(WordAlgebra { d, dims, tables })
    }

    pub fn table(&self, p: usize, q: usize) -> &PairTable {
        &self.tables[&(p, q)]
    }

    pub fn basis_dim(&self) -> usize {
        self.d
    }
}

impl BasedAlgebra for WordAlgebra {
    fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }
    fn mul_basis(&self, p: usize, i: usize, q: usize, j: usize) -> &SparseVec {
        &self.tables[&(p, q)][i * self.dims[q] + j]
    }
}

/// A graded subalgebra of 𝔄(V) (or 𝔄(V) itself) with an arbitrary triangular
/// basis in each degree and a level per basis vector.
pub struct BasisAlgebra {
    dims: Vec<usize>,
    levels: Vec<Vec<i32>>,
    products: BTreeMap<(usize, usize), Vec<SparseVec>>,
}

impl BasisAlgebra {
    /// `bases[n]` lists the basis of degree n in word coordinates with
    /// leading coefficient one; `levels[n]` the matching levels.
    pub fn new(
        bvs: &BraidedVectorSpace,
        bases: Vec<Vec<SparseVec>>,
        levels: Vec<Vec<i32>>,
    ) -> Result<BasisAlgebra> {
        let nmax = bases.len() - 1;
        let d = bvs.dim();
        let tri: Vec<TriangularBasis> = bases.iter().cloned().map(TriangularBasis::new).collect();
        let mut products = BTreeMap::new();
        for p in 1..nmax {
            for q in 1..=nmax - p {
                if bases[p].is_empty() || bases[q].is_empty() {
                    products.insert((p, q), Vec::new());
                    continue;
                }
                let table = shuffle_table(bvs, p, q);
                let dq = d.pow(q as u32);
                let mut out = Vec::with_capacity(bases[p].len() * bases[q].len());
                for a in &bases[p] {
                    for b in &bases[q] {
                        let prod = apply_pair_table(&table, a, b, dq);
                        let coords = tri[p + q].coordinates(&prod).ok_or_else(|| {
                            Error::Gate(format!("product of degrees {p} and {q} leaves the subalgebra"))
                        })?;
                        out.push(coords);
                    }
                }
                products.insert((p, q), out);
            }
        }
        Ok(BasisAlgebra { dims: bases.iter().map(Vec::len).collect(), levels, products })
    }

    pub fn max_degree(&self) -> usize {
        self.dims.len() - 1
    }
}

impl BasedAlgebra for BasisAlgebra {
    fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }
    fn mul_basis(&self, p: usize, i: usize, q: usize, j: usize) -> &SparseVec {
        &self.products[&(p, q)][i * self.dims[q] + j]
    }
    fn level(&self, n: usize, i: usize) -> i32 {
        self.levels[n][i]
    }
}

/// The Nichols algebra on its echelon basis.
pub fn nichols_algebra(bvs: &BraidedVectorSpace, nmax: usize) -> Result<BasisAlgebra> {
    let bases = nichols_bases(bvs, nmax)?;
    let levels = bases.iter().map(|b| vec![0; b.dim()]).collect();
    BasisAlgebra::new(bvs, bases.into_iter().map(|s| s.basis().to_vec()).collect(), levels)
}

/// Coalgebra structures on word bases: T(W) with unshuffles, or 𝔄(W) with deconcatenation.
pub struct WordCoalgebra {
    dims: Vec<usize>,
    /// (n, p) -> Δ_{p,n-p} of every word of length n
    tables: BTreeMap<(usize, usize), Vec<SparseVec>>,
}

impl WordCoalgebra {
    /// Unshuffle coproduct of the tensor algebra T(W).
    pub fn tensor(w: &BraidedVectorSpace, nmax: usize) -> Result<WordCoalgebra> {
        let d = w.dim();
        let dims = (0..=nmax).map(|n| words_in_degree(d, n)).collect::<Result<Vec<_>>>()?;
        let mut tables = BTreeMap::new();
        for n in 2..=nmax {
            for p in 1..n {
                tables.insert((n, p), unshuffle_table(w, p, n - p));
            }
        }
        Ok(WordCoalgebra { dims, tables })
    }

    /// Deconcatenation coproduct of 𝔄(W).
    pub fn deconcatenation(d: usize, nmax: usize) -> Result<WordCoalgebra> {
        let dims = (0..=nmax).map(|n| words_in_degree(d, n)).collect::<Result<Vec<_>>>()?;
        let mut tables = BTreeMap::new();
        for n in 2..=nmax {
            for p in 1..n {
                tables.insert((n, p), (0..dims[n]).map(SparseVec::unit).collect());
            }
        }
        Ok(WordCoalgebra { dims, tables })
    }
}

impl BasedCoalgebra for WordCoalgebra {
    fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }
    fn comul_basis(&self, n: usize, i: usize, p: usize) -> &SparseVec {
        &self.tables[&(n, p)][i]
    }
}

/// Deconcatenation restricted to the Nichols sub-coalgebra on echelon bases.
pub struct NicholsCoalgebra {
    dims: Vec<usize>,
    tables: BTreeMap<(usize, usize), Vec<SparseVec>>,
}

impl NicholsCoalgebra {
    pub fn new(bvs: &BraidedVectorSpace, nmax: usize) -> Result<NicholsCoalgebra> {
        let d = bvs.dim();
        let bases = nichols_bases(bvs, nmax)?;
        let mut tables = BTreeMap::new();
        for n in 2..=nmax {
            for p in 1..n {
                let q = n - p;
                let dq = d.pow(q as u32);
                let piv_p: BTreeMap<usize, usize> = bases[p].pivots().into_iter().enumerate().map(|(k, c)| (c, k)).collect();
                let piv_q: BTreeMap<usize, usize> = bases[q].pivots().into_iter().enumerate().map(|(k, c)| (c, k)).collect();
                let bq = bases[q].dim();
                let mut col = Vec::new();
                for b in bases[n].basis() {
                    // in echelon bases the coefficient of b_r ⊗ b_s is the value at (pivot_r, pivot_s)
                    let mut terms = Vec::new();
                    for (w, c) in b.iter() {
                        if let (Some(r), Some(s)) = (piv_p.get(&(w / dq)), piv_q.get(&(w % dq))) {
                            terms.push(((r * bq + s) as u32, c.clone()));
                        }
                    }
                    col.push(SparseVec::from_terms(terms));
                }
                tables.insert((n, p), col);
            }
        }
        Ok(NicholsCoalgebra { dims: bases.iter().map(Subspace::dim).collect(), tables })
    }
}

impl BasedCoalgebra for NicholsCoalgebra {
    fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }
    fn comul_basis(&self, n: usize, i: usize, p: usize) -> &SparseVec {
        &self.tables[&(n, p)][i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braided::{make_diagonal, make_trivial};
    use crate::scalar::FieldDesc;

    #[test]
    fn small_products() {
        let t = make_trivial(2).unwrap();
        let p = shuffle_product(&t, &TensorElement::word(&[0]), &TensorElement::word(&[1])).unwrap();
        let expect = TensorElement::word(&[0, 1]).add(&TensorElement::word(&[1, 0])).unwrap();
        assert_eq!(p, expect);
        let q = Scalar::ratio(2, 5);
        let b = make_diagonal(&[vec![q.clone()]], FieldDesc::Rational).unwrap();
        let x = TensorElement::word(&[0]);
        let p = shuffle_product(&b, &x, &x).unwrap();
        assert_eq!(p, TensorElement::word(&[0, 0]).scale(&(Scalar::one() + q)));
    }

    #[test]
    fn nichols_of_zeta3() {
        let b = make_diagonal(&[vec![Scalar::cyclotomic(3, 1)]], FieldDesc::Cyclotomic { order: 3 }).unwrap();
        let dims: Vec<usize> = nichols_bases(&b, 4).unwrap().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![1, 1, 1, 0, 0]);
    }
}
