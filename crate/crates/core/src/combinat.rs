//! Permutations, reduced words, braiding operators on tensor powers, shuffles
//! and the Hurwitz action of the braid group on tuples.

use std::collections::BTreeMap;
use std::fmt;

use crate::braided::{BraidedVectorSpace, GroupData};
use crate::error::{invalid, Error, Result};
use crate::linalg::SparseVec;
use crate::scalar::Scalar;

/// A permutation of {0..n-1}; `σ(j)` is `images[j]`. Displayed one-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation { images: (0..n).collect() }
    }

    /// From one-line notation on {1..n}.
    pub fn from_one_line(line: &[usize]) -> Result<Permutation> {
        let n = line.len();
        let mut seen = vec![false; n];
        for &x in line {
            if x == 0 || x > n || seen[x - 1] {
                return invalid(format!("{line:?} is not a permutation"));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation { images: line.iter().map(|x| x - 1).collect() })
    }

    pub(crate) fn from_images(images: Vec<usize>) -> Permutation {
        Permutation { images }
    }

    /// The simple transposition s_i (one-based i) of positions i, i+1.
    pub fn simple(i: usize, n: usize) -> Permutation {
        let mut p = Permutation::identity(n);
        p.images.swap(i - 1, i);
        p
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }

    pub fn apply(&self, j: usize) -> usize {
        self.images[j]
    }

    /// self ∘ other
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&j| self.images[j]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (j, &s) in self.images.iter().enumerate() {
            inv[s] = j;
        }
        Permutation { images: inv }
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let mut c = 0;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                if self.images[i] > self.images[j] {
                    c += 1;
                }
            }
        }
        c
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// All of S_n in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation { images: cur.clone() });
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_line().iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// A positive braid word σ_{i_1} σ_{i_2} ..., letters one-based, applied left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidWord {
    pub n: usize,
    pub letters: Vec<usize>,
}

impl BraidWord {
    pub fn new(n: usize, letters: Vec<usize>) -> Result<BraidWord> {
        if letters.iter().any(|&i| i == 0 || i >= n) {
            return invalid(format!("braid letters must lie in [1, {}]", n.saturating_sub(1)));
        }
        Ok(BraidWord { n, letters })
    }

    /// The permutation obtained by forgetting crossings: letter at j moves to σ(j).
    pub fn permutation(&self) -> Permutation {
        let mut p = Permutation::identity(self.n);
        for &i in &self.letters {
            p = Permutation::simple(i, self.n).compose(&p);
        }
        p
    }
}

/// Lexicographically smallest reduced word of σ, read in application order:
/// σ = s_{a_k} ∘ … ∘ s_{a_1}.
pub fn matsumoto_lift(sigma: &Permutation) -> BraidWord {
    let n = sigma.n();
    let mut cur = sigma.clone();
    let mut letters = Vec::with_capacity(cur.length());
    while let Some(a) = (0..n.saturating_sub(1)).find(|&a| cur.images[a] > cur.images[a + 1]) {
        letters.push(a + 1);
        cur = cur.compose(&Permutation::simple(a + 1, n));
    }
    BraidWord { n, letters }
}

pub type Word = Vec<u16>;

/// Linear combination of words of a fixed length.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TensorElement {
    degree: usize,
    terms: BTreeMap<Word, Scalar>,
}

impl TensorElement {
    pub fn zero(degree: usize) -> TensorElement {
        TensorElement { degree, terms: BTreeMap::new() }
    }

    /// The unit of the tensor algebra.
    pub fn unit() -> TensorElement {
        TensorElement::word(&[])
    }

    /// A basis word with zero-based letters.
    pub fn word(letters: &[usize]) -> TensorElement {
        let mut terms = BTreeMap::new();
        terms.insert(letters.iter().map(|&x| x as u16).collect(), Scalar::one());
        TensorElement { degree: letters.len(), terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Scalar)>>(degree: usize, terms: I) -> Result<TensorElement> {
        let mut out = TensorElement::zero(degree);
        for (w, c) in terms {
            if w.len() != degree {
                return Err(Error::Domain(format!("word of length {} in degree {degree}", w.len())));
            }
            out.add_term(w, &c);
        }
        Ok(out)
    }

    fn add_term(&mut self, w: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(x) => {
                *x = &*x + c;
                if x.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &[u16]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &TensorElement) -> Result<TensorElement> {
        if self.degree != other.degree {
            return Err(Error::Domain("degree mismatch".into()));
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> TensorElement {
        let mut out = TensorElement::zero(self.degree);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), &(x * c));
        }
        out
    }

    /// Coordinates in the word basis of V^⊗n, words numbered in base d.
    pub fn to_sparse(&self, d: usize) -> SparseVec {
        SparseVec::from_terms(self.terms.iter().map(|(w, c)| (word_id(w, d) as u32, c.clone())))
    }

    pub fn from_sparse(v: &SparseVec, degree: usize, d: usize) -> TensorElement {
        let mut terms = BTreeMap::new();
        for (i, c) in v.iter() {
            terms.insert(id_to_word(i, degree, d), c.clone());
        }
        TensorElement { degree, terms }
    }
}

pub fn word_id(w: &[u16], d: usize) -> usize {
    w.iter().fold(0, |acc, &x| acc * d + x as usize)
}

pub fn id_to_word(mut id: usize, n: usize, d: usize) -> Word {
    let mut w = vec![0u16; n];
    for k in (0..n).rev() {
        w[k] = (id % d) as u16;
        id /= d;
    }
    w
}

/// Applies R at positions (pos, pos+1) (zero-based) to a vector of V^⊗n in word coordinates.
pub fn apply_r_at(bvs: &BraidedVectorSpace, n: usize, pos: usize, v: &SparseVec) -> SparseVec {
    let d = bvs.dim();
    let p2 = d.pow((n - pos - 2) as u32);
    let p1 = p2 * d;
    let mut terms = Vec::with_capacity(v.nnz());
    for (id, c) in v.iter() {
        let a = (id / p1) % d;
        let b = (id / p2) % d;
        let base = id - a * p1 - b * p2;
        for (x, y, s) in bvs.image(a, b) {
            terms.push(((base + *x as usize * p1 + *y as usize * p2) as u32, c * s));
        }
    }
    if bvs.is_monomial() {
        // images are injective on words, so no merging is needed
        let mut t = terms;
        t.sort_by_key(|e| e.0);
        return SparseVec::from_sorted(t);
    }
    SparseVec::from_terms(terms)
}

/// Applies the braid word letter by letter in word coordinates.
pub fn apply_braid_word_sparse(bvs: &BraidedVectorSpace, word: &BraidWord, v: &SparseVec) -> SparseVec {
    let mut cur = v.clone();
    for &i in &word.letters {
        cur = apply_r_at(bvs, word.n, i - 1, &cur);
    }
    cur
}

pub fn apply_braid_word(bvs: &BraidedVectorSpace, word: &BraidWord, v: &TensorElement) -> Result<TensorElement> {
    if v.degree() != word.n {
        return Err(Error::Domain(format!("element of degree {} for a braid on {} strands", v.degree(), word.n)));
    }
    let d = bvs.dim();
    Ok(TensorElement::from_sparse(&apply_braid_word_sparse(bvs, word, &v.to_sparse(d)), word.n, d))
}

/// R_σ on V^⊗n along the Matsumoto lift of σ.
#[allow(non_snake_case)]
pub fn apply_R_sigma(bvs: &BraidedVectorSpace, n: usize, sigma: &Permutation, v: &TensorElement) -> Result<TensorElement> {
    if sigma.n() != n || v.degree() != n {
        return Err(Error::Domain("degree mismatch".into()));
    }
    apply_braid_word(bvs, &matsumoto_lift(sigma), v)
}

/// (p,q)-shuffles: σ increasing on the first p and on the last q positions.
pub fn enumerate_shuffles(p: usize, q: usize) -> Vec<Permutation> {
    let n = p + q;
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(p);
    fn rec(start: usize, n: usize, p: usize, chosen: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        if chosen.len() == p {
            let mut images = chosen.clone();
            images.extend((0..n).filter(|x| !chosen.contains(x)));
            out.push(Permutation::from_images(images));
            return;
        }
        for s in start..n {
            chosen.push(s);
            rec(s + 1, n, p, chosen, out);
            chosen.pop();
        }
    }
    rec(0, n, p, &mut chosen, &mut out);
    out
}

pub fn enumerate_unshuffles(p: usize, q: usize) -> Vec<Permutation> {
    enumerate_shuffles(p, q).iter().map(Permutation::inverse).collect()
}

/// σ_i (one-based) acting on a tuple of group elements, or its inverse.
pub fn hurwitz_move(gd: &GroupData, tuple: &[usize], i: usize, inverse: bool) -> Result<Vec<usize>> {
    if i == 0 || i >= tuple.len() {
        return Err(Error::Domain(format!("generator index {i} out of range for {} strands", tuple.len())));
    }
    let g = &gd.group;
    let mut out = tuple.to_vec();
    let (a, b) = (tuple[i - 1], tuple[i]);
    if inverse {
        out[i - 1] = g.mul(g.mul(a, b), g.inv(a));
        out[i] = a;
    } else {
        out[i - 1] = b;
        out[i] = g.conj(a, b);
    }
    Ok(out)
}

/// One braid orbit in c^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    /// lexicographically least tuple, as group element indices
    pub representative: Vec<usize>,
    pub size: usize,
    /// the product g_1 ⋯ g_n, constant on orbits
    pub product: usize,
    /// the entries generate the whole group
    pub full_monodromy: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSummary {
    pub count: usize,
    pub orbits: Vec<Orbit>,
}

impl OrbitSummary {
    pub fn representative_names(&self, gd: &GroupData) -> Vec<Vec<String>> {
        self.orbits
            .iter()
            .map(|o| o.representative.iter().map(|&g| gd.group.name(g).to_string()).collect())
            .collect()
    }
}

pub const ORBIT_GUARD: usize = 10_000_000;

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[parent[x as usize] as usize];
        parent[x as usize] = p;
        x = p;
    }
    x
}

/// Braid orbits on c^n by union-find over all tuples.
pub fn orbit_enumerate(gd: &GroupData, n: usize) -> Result<OrbitSummary> {
    let k = gd.class.len();
    let total = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > ORBIT_GUARD as u128 {
        return Err(Error::Resource(format!("|c|^n = {k}^{n} exceeds {ORBIT_GUARD}")));
    }
    let total = total as usize;
    let g = &gd.group;
    let pos: BTreeMap<usize, usize> = gd.class.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    // conj[a][b] = position of a^b
    let conj: Vec<Vec<usize>> =
        gd.class.iter().map(|&a| gd.class.iter().map(|&b| pos[&g.conj(a, b)]).collect()).collect();
    let mut parent: Vec<u32> = (0..total as u32).collect();
    let mut digits = vec![0usize; n];
    for t in 0..total {
        let mut x = t;
        for j in (0..n).rev() {
            digits[j] = x % k;
            x /= k;
        }
        for i in 0..n.saturating_sub(1) {
            let p = k.pow((n - i - 2) as u32);
            let (a, b) = (digits[i], digits[i + 1]);
            let moved = t - a * p * k - b * p + b * p * k + conj[a][b] * p;
            let (ra, rb) = (find(&mut parent, t as u32), find(&mut parent, moved as u32));
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent[hi as usize] = lo;
            }
        }
    }
    let mut orbits: Vec<Orbit> = Vec::new();
    let mut slot: BTreeMap<u32, usize> = BTreeMap::new();
    for t in 0..total {
        let r = find(&mut parent, t as u32);
        if let Some(&s) = slot.get(&r) {
            orbits[s].size += 1;
            continue;
        }
        // union by minimum keeps the root equal to the least member
        debug_assert_eq!(r as usize, t);
        let mut x = t;
        let mut rep = vec![0usize; n];
        for j in (0..n).rev() {
            rep[j] = gd.class[x % k];
            x /= k;
        }
        let product = rep.iter().fold(g.identity(), |acc, &h| g.mul(acc, h));
        let full_monodromy = g.generated_subgroup(&rep).len() == g.order();
        slot.insert(r, orbits.len());
        orbits.push(Orbit { representative: rep, size: 1, product, full_monodromy });
    }
    Ok(OrbitSummary { count: orbits.len(), orbits })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lifts() {
        assert!(matsumoto_lift(&Permutation::identity(4)).letters.is_empty());
        assert_eq!(matsumoto_lift(&Permutation::simple(1, 2)).letters, vec![1]);
        let w0 = Permutation::from_one_line(&[3, 2, 1]).unwrap();
        assert_eq!(matsumoto_lift(&w0).letters, vec![1, 2, 1]);
        for p in Permutation::all(4) {
            let w = matsumoto_lift(&p);
            assert_eq!(w.letters.len(), p.length());
            assert_eq!(w.permutation(), p);
        }
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(enumerate_shuffles(1, 1).len(), 2);
        assert_eq!(enumerate_shuffles(2, 2).len(), 6);
        assert_eq!(enumerate_shuffles(3, 0), vec![Permutation::identity(3)]);
        for s in enumerate_shuffles(2, 3) {
            assert!(s.apply(0) < s.apply(1));
            assert!(s.apply(2) < s.apply(3) && s.apply(3) < s.apply(4));
        }
    }
}
