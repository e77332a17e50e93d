//! Sparse exact linear algebra: vectors, echelon subspaces, column reduction.

use std::collections::HashMap;

use crate::scalar::Scalar;

/// Sparse vector with strictly increasing indices and no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(u32, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i as u32, Scalar::one())] }
    }

    /// Sums arbitrary (index, value) terms.
    pub fn from_terms<I: IntoIterator<Item = (u32, Scalar)>>(terms: I) -> Self {
        let mut t: Vec<(u32, Scalar)> = terms.into_iter().collect();
        if t.len() > 1 {
            t.sort_by_key(|e| e.0);
        }
        let mut out: Vec<(u32, Scalar)> = Vec::with_capacity(t.len());
        for (i, v) in t {
            match out.last_mut() {
                Some((j, w)) if *j == i => *w = &*w + &v,
                _ => {
                    if let Some((_, w)) = out.last() {
                        if w.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((i, v));
                }
            }
        }
        if let Some((_, w)) = out.last() {
            if w.is_zero() {
                out.pop();
            }
        }
        SparseVec { entries: out }
    }

    /// Trusts the caller: indices strictly increasing, values nonzero.
    pub fn from_sorted(entries: Vec<(u32, Scalar)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|e| !e.1.is_zero()));
        SparseVec { entries }
    }

    pub fn from_dense(values: &[Scalar]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i as u32, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); len];
        for (i, v) in &self.entries {
            out[*i as usize] = v.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(u32, Scalar)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(u32, Scalar)> {
        self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.iter().map(|(i, v)| (*i as usize, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.entries.binary_search_by_key(&(i as u32), |e| e.0).ok().map(|k| &self.entries[k].1)
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.first().map(|(i, v)| (*i as usize, v))
    }

    pub fn last(&self) -> Option<(usize, &Scalar)> {
        self.entries.last().map(|(i, v)| (*i as usize, v))
    }

    pub fn scaled(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, v)| (*i, v * c)).filter(|e| !e.1.is_zero()).collect() }
    }

    /// `self + c * other` by a sorted merge.
    pub fn add_scaled(&self, c: &Scalar, other: &SparseVec) -> SparseVec {
        if c.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                let v = &b[j].1 * c;
                if !v.is_zero() {
                    out.push((b[j].0, v));
                }
                j += 1;
            } else {
                let v = &a[i].1 + &(&b[j].1 * c);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(&Scalar::one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(&Scalar::from_int(-1), other)
    }

    /// Canonical bilinear pairing of coordinate vectors.
    pub fn dot(&self, other: &SparseVec) -> Scalar {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut acc = Scalar::zero();
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = &acc + &(&a[i].1 * &b[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    /// Relabels indices through `f`, which need not preserve order.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> SparseVec {
        SparseVec::from_terms(self.entries.iter().map(|(i, v)| (f(*i as usize) as u32, v.clone())))
    }

    pub fn map_values(&self, f: impl Fn(&Scalar) -> Scalar) -> SparseVec {
        SparseVec::from_terms(self.entries.iter().map(|(i, v)| (*i, f(v))))
    }
}

/// A subspace of k^ambient stored by its reduced row echelon basis. The
/// echelon form is unique, so two subspaces are equal iff their bases are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Subspace {
        Subspace { ambient, rows: Vec::new() }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace { ambient, rows: (0..ambient).map(SparseVec::unit).collect() }
    }

    pub fn span<I: IntoIterator<Item = SparseVec>>(ambient: usize, vectors: I) -> Subspace {
        let mut s = Subspace::zero(ambient);
        for v in vectors {
            if s.rows.len() == ambient {
                break;
            }
            s.insert(&v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.leading().unwrap().0).collect()
    }

    fn row_with_pivot(&self, col: usize) -> Result<usize, usize> {
        self.rows.binary_search_by_key(&col, |r| r.leading().unwrap().0)
    }

    /// The remainder of `v` after clearing all pivot columns.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        if self.rows.len() == self.ambient {
            return SparseVec::new();
        }
        let mut terms: Vec<(u32, Scalar)> = Vec::with_capacity(v.nnz());
        let mut hit = false;
        for (i, c) in v.entries() {
            match self.row_with_pivot(*i as usize) {
                Ok(r) => {
                    hit = true;
                    let neg = -c;
                    for (j, x) in self.rows[r].entries().iter().skip(1) {
                        terms.push((*j, x * &neg));
                    }
                }
                Err(_) => terms.push((*i, c.clone())),
            }
        }
        if !hit {
            return v.clone();
        }
        SparseVec::from_terms(terms)
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((p, lead)) = r.leading() else {
            return false;
        };
        let r = if lead.is_one() { r.clone() } else { r.scaled(&lead.inv().unwrap()) };
        for row in self.rows.iter_mut() {
            if let Some(c) = row.get(p) {
                let c = -c;
                *row = row.add_scaled(&c, &r);
            }
        }
        let pos = self.row_with_pivot(p).unwrap_err();
        self.rows.insert(pos, r);
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let (big, small) = if self.dim() >= other.dim() { (self, other) } else { (other, self) };
        let mut s = big.clone();
        for r in &small.rows {
            if s.dim() == s.ambient {
                break;
            }
            s.insert(r);
        }
        s
    }

    /// Annihilator under the canonical coordinate pairing.
    pub fn orthogonal_complement(&self) -> Subspace {
        let mut gens: Vec<Vec<(u32, Scalar)>> = vec![Vec::new(); self.ambient];
        let mut is_pivot = vec![false; self.ambient];
        for r in &self.rows {
            is_pivot[r.leading().unwrap().0] = true;
        }
        for r in &self.rows {
            let p = r.leading().unwrap().0 as u32;
            for (j, x) in r.entries().iter().skip(1) {
                if !is_pivot[*j as usize] {
                    gens[*j as usize].push((p, -x));
                }
            }
        }
        let mut out = Subspace::zero(self.ambient);
        for (j, mut g) in gens.into_iter().enumerate() {
            if is_pivot[j] {
                continue;
            }
            g.push((j as u32, Scalar::one()));
            out.insert(&SparseVec::from_terms(g));
        }
        out
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        if self.dim() == self.ambient {
            return other.clone();
        }
        if other.dim() == other.ambient {
            return self.clone();
        }
        self.orthogonal_complement().sum(&other.orthogonal_complement()).orthogonal_complement()
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        let mut terms = Vec::new();
        for (i, c) in v.entries() {
            if let Ok(r) = self.row_with_pivot(*i as usize) {
                terms.push((r as u32, c.clone()));
            }
        }
        let coords = SparseVec::from_sorted(terms);
        let mut back: Vec<(u32, Scalar)> = Vec::new();
        for (r, c) in coords.entries() {
            for (j, x) in self.rows[*r as usize].entries() {
                back.push((*j, x * c));
            }
        }
        if SparseVec::from_terms(back) == *v {
            Some(coords)
        } else {
            None
        }
    }
}

/// Basis whose vectors have distinct leading indices with leading value one.
/// Coordinates are found by forward substitution.
#[derive(Clone, Debug)]
pub struct TriangularBasis {
    vectors: Vec<SparseVec>,
    by_lead: HashMap<u32, usize>,
}

impl TriangularBasis {
    pub fn new(vectors: Vec<SparseVec>) -> TriangularBasis {
        let mut by_lead = HashMap::new();
        for (k, v) in vectors.iter().enumerate() {
            let (i, c) = v.leading().expect("zero basis vector");
            assert!(c.is_one(), "leading coefficient must be one");
            assert!(by_lead.insert(i as u32, k).is_none(), "repeated leading index");
        }
        TriangularBasis { vectors, by_lead }
    }

    pub fn vectors(&self) -> &[SparseVec] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        let mut rest = v.clone();
        let mut coords = Vec::new();
        while let Some((i, c)) = rest.leading() {
            let k = *self.by_lead.get(&(i as u32))?;
            let c = c.clone();
            rest = rest.add_scaled(&-&c, &self.vectors[k]);
            coords.push((k as u32, c));
        }
        Some(SparseVec::from_terms(coords))
    }
}

/// Column-major sparse matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> SparseMatrix {
        SparseMatrix { nrows, cols: vec![SparseVec::new(); ncols] }
    }

    pub fn from_cols(nrows: usize, cols: Vec<SparseVec>) -> SparseMatrix {
        SparseMatrix { nrows, cols }
    }

    pub fn from_triplets(nrows: usize, ncols: usize, t: impl IntoIterator<Item = (usize, usize, Scalar)>) -> SparseMatrix {
        let mut buckets: Vec<Vec<(u32, Scalar)>> = vec![Vec::new(); ncols];
        for (r, c, v) in t {
            buckets[c].push((r as u32, v));
        }
        SparseMatrix { nrows, cols: buckets.into_iter().map(SparseVec::from_terms).collect() }
    }

    pub fn identity(n: usize) -> SparseMatrix {
        SparseMatrix { nrows: n, cols: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut rows: Vec<Vec<(u32, Scalar)>> = vec![Vec::new(); self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col.entries() {
                rows[*r as usize].push((c as u32, v.clone()));
            }
        }
        SparseMatrix { nrows: self.ncols(), cols: rows.into_iter().map(SparseVec::from_sorted).collect() }
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut terms = Vec::new();
        for (c, x) in v.entries() {
            for (r, y) in self.cols[*c as usize].entries() {
                terms.push((*r, x * y));
            }
        }
        SparseVec::from_terms(terms)
    }

    /// The composite `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), other.nrows);
        SparseMatrix { nrows: self.nrows, cols: other.cols.iter().map(|c| self.mul_vec(c)).collect() }
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.cols[c].get(r).cloned().unwrap_or_default()
    }

    /// Exact rank by sparse elimination with a static Markowitz-style order.
    pub fn rank(&self) -> usize {
        markowitz_rank(&self.cols, self.nrows)
    }

    /// Null space, as a subspace of the column index space.
    pub fn kernel(&self) -> Subspace {
        let t = self.transpose();
        Subspace::span(self.ncols(), t.cols).orthogonal_complement()
    }

    pub fn image(&self) -> Subspace {
        Subspace::span(self.nrows, self.cols.iter().cloned())
    }
}

/// Left-to-right column reduction in the given row order ("low" = largest row
/// index). Returns the pivot pairs (low row, column). For any `i`, `j` the
/// rank of the submatrix with rows `> i` and columns `<= j` equals the number
/// of pairs with row `> i` and column `<= j`.
pub fn column_reduce(cols: &[SparseVec]) -> Vec<(usize, usize)> {
    let mut stored: Vec<SparseVec> = Vec::new();
    let mut by_low: HashMap<u32, usize> = HashMap::new();
    let mut pairs = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        let mut c = col.clone();
        while let Some((low, val)) = c.last() {
            match by_low.get(&(low as u32)) {
                Some(&k) => {
                    let f = -val;
                    c = c.add_scaled(&f, &stored[k]);
                }
                None => {
                    let c = if val.is_one() { c.clone() } else { c.scaled(&val.inv().unwrap()) };
                    by_low.insert(low as u32, stored.len());
                    stored.push(c);
                    pairs.push((low, j));
                    break;
                }
            }
        }
    }
    pairs
}

/// Rank with rows relabelled so that sparse rows are eliminated first and
/// columns processed from sparsest to densest.
pub fn markowitz_rank(cols: &[SparseVec], nrows: usize) -> usize {
    let mut count = vec![0usize; nrows];
    for c in cols {
        for (r, _) in c.entries() {
            count[*r as usize] += 1;
        }
    }
    let mut order: Vec<usize> = (0..nrows).filter(|&r| count[r] > 0).collect();
    // dense rows first, so the sparsest rows become the "low" pivots
    order.sort_by(|a, b| count[*b].cmp(&count[*a]).then(a.cmp(b)));
    let mut pos = vec![0usize; nrows];
    for (k, r) in order.iter().enumerate() {
        pos[*r] = k;
    }
    let mut relabelled: Vec<SparseVec> = cols.iter().filter(|c| !c.is_zero()).map(|c| c.remap(|r| pos[r])).collect();
    relabelled.sort_by_key(|c| c.nnz());
    column_reduce(&relabelled).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> SparseVec {
        SparseVec::from_dense(&x.iter().map(|&a| Scalar::from_int(a)).collect::<Vec<_>>())
    }

    #[test]
    fn echelon_and_complement() {
        let s = Subspace::span(4, vec![v(&[1, 2, 0, 1]), v(&[2, 4, 1, 0]), v(&[3, 6, 1, 1])]);
        assert_eq!(s.dim(), 2);
        let c = s.orthogonal_complement();
        assert_eq!(c.dim(), 2);
        for a in s.basis() {
            for b in c.basis() {
                assert!(a.dot(b).is_zero());
            }
        }
        assert_eq!(c.orthogonal_complement(), s);
    }

    #[test]
    fn intersection_of_planes() {
        let a = Subspace::span(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(a.intersection(&b), Subspace::span(3, vec![v(&[0, 1, 0])]));
    }

    #[test]
    fn coordinates_roundtrip() {
        let s = Subspace::span(3, vec![v(&[1, 1, 0]), v(&[0, 1, 1])]);
        let x = v(&[2, 5, 3]);
        let c = s.coordinates(&x).unwrap();
        assert_eq!(c, v(&[2, 5]));
        assert!(s.coordinates(&v(&[0, 0, 1])).is_none());
    }

    #[test]
    fn ranks() {
        let m = SparseMatrix::from_cols(3, vec![v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[0, 1, 1])]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.kernel().dim(), 1);
        assert_eq!(column_reduce(&m.cols).len(), 2);
    }
}
