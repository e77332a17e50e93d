//! Braided vector spaces: trivial, diagonal, rack, group/conjugacy-class and
//! raw-matrix braidings, with Yang-Baxter validation and duals.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{invalid, Error, Result};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::scalar::{FieldDesc, Scalar};

/// Image of a basis pair under the braiding: terms `coeff * (x ⊗ y)`.
pub type PairImage = Vec<(u16, u16, Scalar)>;

/// Yetter-Drinfeld data attached to a conjugacy-class braiding.
#[derive(Clone, Debug)]
pub struct YdData {
    pub group: GroupData,
    /// group element (index into the group) grading each basis vector
    pub grades: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct BraidedVectorSpace {
    dim: usize,
    labels: Vec<String>,
    field: FieldDesc,
    images: Vec<PairImage>,
    pub(crate) yd: Option<YdData>,
}

impl BraidedVectorSpace {
    fn from_images(labels: Vec<String>, field: FieldDesc, images: Vec<PairImage>) -> BraidedVectorSpace {
        BraidedVectorSpace { dim: labels.len(), labels, field, images, yd: None }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }

    pub fn yd_data(&self) -> Option<&YdData> {
        self.yd.as_ref()
    }

    /// R(e_a ⊗ e_b).
    pub fn image(&self, a: usize, b: usize) -> &[(u16, u16, Scalar)] {
        &self.images[a * self.dim + b]
    }

    /// Every basis pair maps to a multiple of a single basis pair.
    pub fn is_monomial(&self) -> bool {
        self.images.iter().all(|im| im.len() == 1)
    }

    /// R as a d²×d² matrix on the pair basis (i, j) ↦ i·d + j.
    pub fn matrix(&self) -> SparseMatrix {
        let d = self.dim;
        let cols = self
            .images
            .iter()
            .map(|im| SparseVec::from_terms(im.iter().map(|(x, y, c)| ((*x as usize * d + *y as usize) as u32, c.clone()))))
            .collect();
        SparseMatrix::from_cols(d * d, cols)
    }

    fn from_matrix_unchecked(labels: Vec<String>, field: FieldDesc, m: &SparseMatrix) -> BraidedVectorSpace {
        let d = labels.len();
        let images = m
            .cols
            .iter()
            .map(|c| c.iter().map(|(r, v)| ((r / d) as u16, (r % d) as u16, v.clone())).collect())
            .collect();
        BraidedVectorSpace::from_images(labels, field, images)
    }

    /// Shape and invertibility checks only; Yang-Baxter is left to the caller.
    pub(crate) fn matrix_candidate(d: usize, r: &[Vec<Scalar>], field: FieldDesc) -> Result<BraidedVectorSpace> {
        if d == 0 {
            return invalid("dimension must be positive");
        }
        if r.len() != d * d || r.iter().any(|row| row.len() != d * d) {
            return invalid(format!("braiding matrix must be {0}x{0}", d * d));
        }
        let m = SparseMatrix::from_triplets(
            d * d,
            d * d,
            r.iter().enumerate().flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (i, j, v.clone()))),
        );
        if m.rank() != d * d {
            return invalid("braiding matrix is singular");
        }
        let labels = (1..=d).map(|i| i.to_string()).collect();
        Ok(BraidedVectorSpace::from_matrix_unchecked(labels, field, &m))
    }

    /// Raw braiding matrix, rows and columns indexed by pairs (i, j) ↦ i·d + j.
    pub fn from_matrix(d: usize, r: &[Vec<Scalar>], field: FieldDesc) -> Result<BraidedVectorSpace> {
        let b = Self::matrix_candidate(d, r, field)?;
        if let Some((a, bb, c)) = yang_baxter_counterexample(&b) {
            return invalid(format!("Yang-Baxter fails on basis triple ({}, {}, {})", a + 1, bb + 1, c + 1));
        }
        Ok(b)
    }

    /// Same braiding, equality of the operator only.
    pub fn same_braiding(&self, other: &BraidedVectorSpace) -> bool {
        self.dim == other.dim && self.matrix() == other.matrix()
    }
}

pub fn make_trivial(d: usize) -> Result<BraidedVectorSpace> {
    if d == 0 {
        return invalid("dimension must be positive");
    }
    let ones = vec![vec![Scalar::one(); d]; d];
    make_diagonal(&ones, FieldDesc::Rational)
}

/// R(e_i ⊗ e_j) = q_ij e_j ⊗ e_i.
pub fn make_diagonal(q: &[Vec<Scalar>], field: FieldDesc) -> Result<BraidedVectorSpace> {
    let d = q.len();
    if d == 0 || q.iter().any(|r| r.len() != d) {
        return invalid("q-matrix must be square and nonempty");
    }
    let mut images = Vec::with_capacity(d * d);
    for (i, row) in q.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if x.is_zero() {
                return invalid(format!("q[{}][{}] is zero", i + 1, j + 1));
            }
            images.push(vec![(j as u16, i as u16, x.clone())]);
        }
    }
    Ok(BraidedVectorSpace::from_images((1..=d).map(|i| i.to_string()).collect(), field, images))
}

/// A finite rack: `action[a][b]` is the index of b^a.
#[derive(Clone, Debug)]
pub struct Rack {
    pub elements: Vec<String>,
    pub action: Vec<Vec<usize>>,
    /// x_{ab}; absent means the constant cocycle −1
    pub cocycle: Option<Vec<Vec<Scalar>>>,
}

impl Rack {
    /// b^a
    pub fn op(&self, b: usize, a: usize) -> usize {
        self.action[a][b]
    }

    pub fn check(&self) -> Result<()> {
        let n = self.elements.len();
        if n == 0 {
            return invalid("rack is empty");
        }
        if self.action.len() != n || self.action.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return invalid("rack action table has the wrong shape");
        }
        for a in 0..n {
            let mut seen = vec![false; n];
            for b in 0..n {
                seen[self.op(b, a)] = true;
            }
            if seen.iter().any(|s| !s) {
                return invalid(format!("b ↦ b^{} is not a bijection", self.elements[a]));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.op(self.op(c, a), self.op(b, a)) != self.op(self.op(c, b), a) {
                        return invalid(format!(
                            "self-distributivity fails at ({}, {}, {})",
                            self.elements[a], self.elements[b], self.elements[c]
                        ));
                    }
                }
            }
        }
        if let Some(x) = &self.cocycle {
            if x.len() != n || x.iter().any(|r| r.len() != n) {
                return invalid("cocycle table has the wrong shape");
            }
            if x.iter().flatten().any(Scalar::is_zero) {
                return invalid("cocycle has a zero entry");
            }
        }
        Ok(())
    }
}

/// R(a ⊗ b) = x_ab (b ⊗ a^b).
pub fn make_rack(rack: &Rack, field: FieldDesc) -> Result<BraidedVectorSpace> {
    let bvs = rack_candidate(rack, field)?;
    if let Some((a, b, c)) = yang_baxter_counterexample(&bvs) {
        return invalid(format!(
            "cocycle breaks Yang-Baxter on ({}, {}, {})",
            rack.elements[a], rack.elements[b], rack.elements[c]
        ));
    }
    Ok(bvs)
}

/// Rack axioms checked, Yang-Baxter not.
pub(crate) fn rack_candidate(rack: &Rack, field: FieldDesc) -> Result<BraidedVectorSpace> {
    rack.check()?;
    let n = rack.elements.len();
    let mut images = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let x = match &rack.cocycle {
                Some(t) => t[a][b].clone(),
                None => Scalar::from_int(-1),
            };
            images.push(vec![(b as u16, rack.op(a, b) as u16, x)]);
        }
    }
    Ok(BraidedVectorSpace::from_images(rack.elements.clone(), field, images))
}

/// A finite group by multiplication table. Elements are sorted by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    names: Vec<String>,
    mult: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl Group {
    pub fn from_table(names: Vec<String>, mult: Vec<Vec<usize>>) -> Result<Group> {
        let n = names.len();
        if n == 0 || mult.len() != n || mult.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return invalid("multiplication table has the wrong shape");
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mult[e][g] == g && mult[g][e] == g))
            .ok_or_else(|| Error::InvalidInput("no identity element".into()))?;
        let mut inverse = vec![0; n];
        for g in 0..n {
            inverse[g] = (0..n)
                .find(|&h| mult[g][h] == identity)
                .ok_or_else(|| Error::InvalidInput(format!("{} has no inverse", names[g])))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return invalid("multiplication is not associative");
                    }
                }
            }
        }
        let mut sorted: Vec<usize> = (0..n).collect();
        sorted.sort_by(|a, b| names[*a].cmp(&names[*b]));
        if sorted.windows(2).any(|w| names[w[0]] == names[w[1]]) {
            return invalid("duplicate element names");
        }
        let mut pos = vec![0; n];
        for (k, &g) in sorted.iter().enumerate() {
            pos[g] = k;
        }
        let new_mult = sorted.iter().map(|&a| sorted.iter().map(|&b| pos[mult[a][b]]).collect()).collect();
        Ok(Group {
            names: sorted.iter().map(|&g| names[g].clone()).collect(),
            mult: new_mult,
            identity: pos[identity],
            inverse: sorted.iter().map(|&g| pos[inverse[g]]).collect(),
        })
    }

    /// The group generated by permutations given in one-line notation on
    /// {1..N}. The product g·h applies g first.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<Group> {
        let degree = gens.iter().map(Vec::len).max().unwrap_or(0).max(1);
        let mut g0: Vec<Vec<u16>> = Vec::new();
        for g in gens {
            let mut p: Vec<u16> = (0..degree as u16).collect();
            let mut seen = vec![false; degree];
            for (i, &x) in g.iter().enumerate() {
                if x == 0 || x > g.len() || seen[x - 1] {
                    return invalid(format!("{g:?} is not a permutation in one-line notation"));
                }
                seen[x - 1] = true;
                p[i] = (x - 1) as u16;
            }
            g0.push(p);
        }
        let id: Vec<u16> = (0..degree as u16).collect();
        let mut index: HashMap<Vec<u16>, usize> = HashMap::new();
        let mut elems = vec![id.clone()];
        index.insert(id, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for g in &g0 {
                let prod = perm_mul(&elems[k], g);
                if !index.contains_key(&prod) {
                    index.insert(prod.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(prod);
                    if elems.len() > 100_000 {
                        return Err(Error::Resource("permutation group larger than 100000".into()));
                    }
                }
            }
        }
        let n = elems.len();
        let mult = (0..n).map(|a| (0..n).map(|b| index[&perm_mul(&elems[a], &elems[b])]).collect()).collect();
        let names = elems.iter().map(|p| cycle_name(p)).collect();
        Group::from_table(names, mult)
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// g^h = h⁻¹ g h
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(self.inv(h), g), h)
    }

    pub fn conjugacy_class(&self, g: usize) -> Vec<usize> {
        let mut c: Vec<usize> = (0..self.order()).map(|h| self.conj(g, h)).collect();
        c.sort_unstable();
        c.dedup();
        c
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order()).filter(|&g| seen[g]).collect()
    }
}

fn perm_mul(g: &[u16], h: &[u16]) -> Vec<u16> {
    g.iter().map(|&x| h[x as usize]).collect()
}

/// Cycle notation, commas only when some moved point exceeds 9; "e" for the identity.
pub fn cycle_name(p: &[u16]) -> String {
    let n = p.len();
    let commas = n > 9 && (9..n).any(|i| p[i] as usize != i);
    let mut seen = vec![false; n];
    let mut s = String::new();
    for i in 0..n {
        if seen[i] || p[i] as usize == i {
            continue;
        }
        let mut cyc = Vec::new();
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            cyc.push((j + 1).to_string());
            j = p[j] as usize;
        }
        s.push('(');
        s.push_str(&cyc.join(if commas { "," } else { "" }));
        s.push(')');
    }
    if s.is_empty() {
        "e".to_string()
    } else {
        s
    }
}

/// A group together with a conjugation-closed subset c.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupData {
    pub group: Group,
    /// sorted element indices of c
    pub class: Vec<usize>,
}

impl GroupData {
    pub fn new(group: Group, mut class: Vec<usize>) -> Result<GroupData> {
        class.sort_unstable();
        class.dedup();
        if class.is_empty() {
            return Err(Error::Domain("the subset c is empty".into()));
        }
        if class.iter().any(|&g| g >= group.order()) {
            return invalid("class element out of range");
        }
        for &g in &class {
            for h in 0..group.order() {
                if class.binary_search(&group.conj(g, h)).is_err() {
                    return Err(Error::Domain(format!(
                        "c is not closed under conjugation: {} conjugated by {}",
                        group.name(g),
                        group.name(h)
                    )));
                }
            }
        }
        Ok(GroupData { group, class })
    }

    /// Union of the conjugacy classes of `reps`.
    pub fn from_class_reps(group: Group, reps: &[usize]) -> Result<GroupData> {
        let class: Vec<usize> = reps.iter().flat_map(|&r| group.conjugacy_class(r)).collect();
        GroupData::new(group, class)
    }

    pub fn class_names(&self) -> Vec<String> {
        self.class.iter().map(|&g| self.group.name(g).to_string()).collect()
    }

    /// The conjugation rack on c.
    pub fn rack(&self, cocycle: &Scalar) -> Rack {
        let pos: BTreeMap<usize, usize> = self.class.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let action = self
            .class
            .iter()
            .map(|&a| self.class.iter().map(|&b| pos[&self.group.conj(b, a)]).collect())
            .collect();
        let n = self.class.len();
        Rack { elements: self.class_names(), action, cocycle: Some(vec![vec![cocycle.clone(); n]; n]) }
    }
}

/// Conjugation rack on c with constant cocycle and Yetter-Drinfeld grading.
pub fn from_group_class(gd: &GroupData, cocycle: &Scalar) -> Result<BraidedVectorSpace> {
    if cocycle.is_zero() {
        return invalid("cocycle must be nonzero");
    }
    let rack = gd.rack(cocycle);
    let mut bvs = make_rack(&rack, cocycle.field())?;
    bvs.yd = Some(YdData { group: gd.clone(), grades: gd.class.clone() });
    Ok(bvs)
}

type Triple = (u16, u16, u16);

fn apply_r_triple(bvs: &BraidedVectorSpace, v: &HashMap<Triple, Scalar>, pos: usize) -> HashMap<Triple, Scalar> {
    let mut out: HashMap<Triple, Scalar> = HashMap::new();
    for (&(a, b, c), x) in v {
        let (p, q) = if pos == 0 { (a, b) } else { (b, c) };
        for (s, t, y) in bvs.image(p as usize, q as usize) {
            let key = if pos == 0 { (*s, *t, c) } else { (a, *s, *t) };
            let e = out.entry(key).or_insert_with(Scalar::zero);
            *e = &*e + &(x * y);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// First basis triple on which the braid relation fails, if any.
pub fn yang_baxter_counterexample(bvs: &BraidedVectorSpace) -> Option<(usize, usize, usize)> {
    let d = bvs.dim() as u16;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let start: HashMap<Triple, Scalar> = HashMap::from([((a, b, c), Scalar::one())]);
                let lhs = apply_r_triple(bvs, &apply_r_triple(bvs, &apply_r_triple(bvs, &start, 0), 1), 0);
                let rhs = apply_r_triple(bvs, &apply_r_triple(bvs, &apply_r_triple(bvs, &start, 1), 0), 1);
                if lhs != rhs {
                    return Some((a as usize, b as usize, c as usize));
                }
            }
        }
    }
    None
}

pub fn yang_baxter_check(bvs: &BraidedVectorSpace) -> bool {
    yang_baxter_counterexample(bvs).is_none()
}

/// The dual braided space (V*, R*) with R* the transpose of R in the pair
/// basis. With this choice the shuffle product of 𝔄(V) is adjoint to the
/// unshuffle coproduct of T(V*) under the word pairing.
pub fn dual(bvs: &BraidedVectorSpace) -> BraidedVectorSpace {
    let t = bvs.matrix().transpose();
    let mut out = BraidedVectorSpace::from_matrix_unchecked(bvs.labels.clone(), bvs.field, &t);
    out.yd = bvs.yd.clone();
    out
}

impl BraidedVectorSpace {
    pub fn dual(&self) -> BraidedVectorSpace {
        dual(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> GroupData {
        let g = Group::from_permutations(&[vec![2, 1, 3], vec![1, 3, 2]]).unwrap();
        let t = g.index_of("(12)").unwrap();
        GroupData::from_class_reps(g, &[t]).unwrap()
    }

    #[test]
    fn s3_names() {
        let gd = s3();
        assert_eq!(gd.group.names(), &["(12)", "(123)", "(13)", "(132)", "(23)", "e"]);
        assert_eq!(gd.class_names(), vec!["(12)", "(13)", "(23)"]);
        let g = &gd.group;
        let (a, b) = (g.index_of("(12)").unwrap(), g.index_of("(13)").unwrap());
        assert_eq!(g.name(g.conj(a, b)), "(23)");
    }

    #[test]
    fn braidings_satisfy_yang_baxter() {
        assert!(yang_baxter_check(&make_trivial(3).unwrap()));
        let bvs = from_group_class(&s3(), &Scalar::from_int(-1)).unwrap();
        assert!(yang_baxter_check(&bvs));
        assert!(yang_baxter_check(&bvs.dual()));
    }

    #[test]
    fn corrupted_swap_fails() {
        let mut r = vec![vec![Scalar::zero(); 4]; 4];
        r[0][0] = Scalar::one();
        r[2][1] = Scalar::one();
        r[1][2] = Scalar::one();
        r[3][3] = Scalar::one();
        assert!(BraidedVectorSpace::from_matrix(2, &r, FieldDesc::Rational).is_ok());
        // a zero entry turned into 2; rescaling a nonzero entry would stay diagonal
        r[0][1] = Scalar::from_int(2);
        assert!(BraidedVectorSpace::from_matrix(2, &r, FieldDesc::Rational).is_err());
    }
}
