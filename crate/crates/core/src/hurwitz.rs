//! Hurwitz-space cohomology for a group with a conjugation-closed subset c:
//! Betti numbers from Tor of 𝔄(V(c, −1)), their weight decomposition via
//! the weight-filtered bar complex, and the weight-bound checker.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use crate::algebra::{nichols_bases, AlgebraKind};
use crate::braided::{from_group_class, BraidedVectorSpace, GroupData};
use crate::combinat::orbit_enumerate;
use crate::error::{Error, Result};
use crate::filtration::{weight_filtration_A, BoundConstants};
use crate::homology::{check_guard, filtered_algebra, filtered_bar, spectral_sequence, tor_dims, RankMode, TriGradedDims};
use crate::linalg::Subspace;
use crate::scalar::{Scalar, Q};

/// V_ε = V(c, −1).
pub fn hurwitz_space(gd: &GroupData) -> Result<BraidedVectorSpace> {
    from_group_class(gd, &Scalar::from_int(-1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Betti {
    /// (n, j) → b_j(Hur_n), nonzero entries
    pub dims: BTreeMap<(usize, usize), usize>,
    pub verified: bool,
}

impl Betti {
    pub fn get(&self, n: usize, j: usize) -> usize {
        self.dims.get(&(n, j)).copied().unwrap_or(0)
    }
}

/// b_j(Hur_n) = dim Tor_{n−j,n}^{𝔄(V_ε)}(k,k).
pub fn hurwitz_betti(gd: &GroupData, nmax: usize, mode: impl Fn(usize) -> RankMode, force: bool) -> Result<Betti> {
    let v = hurwitz_space(gd)?;
    let tor = tor_dims(&v, AlgebraKind::Shuffle, nmax, mode, force)?;
    let dims = tor
        .entries
        .iter()
        .filter(|((_, n, _), _)| *n >= 1)
        .map(|(&(m, n, _), &d)| ((n, n - m), d))
        .collect();
    Ok(Betti { dims, verified: tor.verified })
}

#[derive(Clone, Debug)]
pub struct WeightDecomposition {
    /// (m, n, w) → dim Gr_W^w Ext^{m,n}
    pub dims: TriGradedDims,
    /// (n, r, p, k, rank) for every nonzero differential d_r
    pub nonzero_differentials: Vec<(usize, usize, i32, i32, usize)>,
}

/// E_∞ of the weight-filtered bar complex of 𝔄(V_ε) in each degree n.
/// The spectral sequence is computed exactly.
pub fn weight_decomposition(gd: &GroupData, nmax: usize, force: bool) -> Result<WeightDecomposition> {
    let v = hurwitz_space(gd)?;
    for n in 1..=nmax {
        check_guard(v.dim(), n, force)?;
    }
    let table = weight_filtration_A(&v, nmax)?;
    let alg = filtered_algebra(&v, &table, nmax)?;
    let mut dims = TriGradedDims { verified: true, ..Default::default() };
    dims.entries.insert((0, 0, Some(0)), 1);
    let mut nonzero = Vec::new();
    for n in 1..=nmax {
        let bar = filtered_bar(&alg, n)?;
        let ss = spectral_sequence(&bar.complex);
        let h = bar.complex.homology(RankMode::Exact);
        let ab = ss.abutment();
        for (k, &d) in &h.dims {
            if ab.get(k).copied().unwrap_or(0) != d {
                return Err(Error::Gate(format!("spectral sequence does not converge to homology in degree {n}")));
            }
        }
        for (&(p, k), &d) in &ss.e_inf {
            if d > 0 {
                dims.entries.insert(((-k) as usize, n, Some(p)), d);
            }
        }
        nonzero.extend(ss.nonzero_differentials().into_iter().map(|(r, p, k, x)| (n, r, p, k, x)));
    }
    Ok(WeightDecomposition { dims, nonzero_differentials: nonzero })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "n/a")]
    NotApplicable,
}

/// One weight-graded piece of cohomology, with all three indexings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HurwitzRow {
    pub n: usize,
    /// cohomological degree
    pub i: usize,
    /// homological degree m = n − i
    pub m: usize,
    /// algebraic weight
    pub w: i32,
    /// 2n − i − w
    pub frob_weight: i64,
    pub dim: usize,
    pub bound: Verdict,
}

/// Rows for every nonzero entry of a weight decomposition (degree n ≥ 1).
pub fn rows_from_decomposition(dec: &WeightDecomposition) -> Vec<HurwitzRow> {
    dec.dims
        .entries
        .iter()
        .filter(|((_, n, _), _)| *n >= 1)
        .map(|(&(m, n, w), &dim)| {
            let w = w.unwrap_or(0);
            let i = n - m;
            HurwitzRow { n, i, m, w, frob_weight: 2 * n as i64 - i as i64 - w as i64, dim, bound: Verdict::NotApplicable }
        })
        .collect()
}

/// For each row: w' ≤ (2n−i) − ε(i − cn) when i > cn, and, if `strict` is
/// set, w' < 2n − i when i > 2⌊n/6⌋. Rows where neither clause applies are n/a.
pub fn check_weight_bound(rows: &mut [HurwitzRow], k: &BoundConstants, strict: bool) {
    for row in rows.iter_mut() {
        if row.dim == 0 {
            continue;
        }
        let n = Q::from_int(row.n as i64);
        let i = Q::from_int(row.i as i64);
        let top = Q::from_int(2 * row.n as i64 - row.i as i64);
        let wp = Q::from_int(row.frob_weight);
        let cn = &k.c * &n;
        let mut applies = false;
        let mut ok = true;
        if i > cn {
            applies = true;
            let bound = &top - &(&k.epsilon * &(&i - &cn));
            ok &= wp <= bound;
        }
        if strict && row.i > 2 * (row.n / 6) {
            applies = true;
            ok &= wp < top;
        }
        row.bound = match (applies, ok) {
            (false, _) => Verdict::NotApplicable,
            (true, true) => Verdict::Pass,
            (true, false) => Verdict::Fail,
        };
    }
}

/// Whether c is the class of transpositions in a group of order 6.
pub fn is_s3_transpositions(gd: &GroupData) -> bool {
    let g = &gd.group;
    g.order() == 6 && gd.class.len() == 3 && gd.class.iter().all(|&x| x != g.identity() && g.mul(x, x) == g.identity())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NicholsProfile {
    /// top nonzero degree, if the dimensions vanished before the bound
    pub max_degree: Option<usize>,
    pub total: usize,
    pub dims: Vec<usize>,
}

pub const NICHOLS_SEARCH_BOUND: usize = 8;

/// Nichols dimensions up to `bound`; finite when some degree ≤ bound is zero.
pub fn nichols_profile(bvs: &BraidedVectorSpace, bound: usize) -> Result<NicholsProfile> {
    let all: Vec<usize> = nichols_bases(bvs, bound)?.iter().map(Subspace::dim).collect();
    let zero = all.iter().position(|&x| x == 0);
    let dims: Vec<usize> = match zero {
        Some(z) => all[..z].to_vec(),
        None => all,
    };
    Ok(NicholsProfile { max_degree: zero.map(|z| z - 1), total: dims.iter().sum(), dims })
}

#[derive(Clone, Debug)]
pub struct HurwitzReport {
    pub class: Vec<String>,
    pub nmax: usize,
    pub betti: Betti,
    /// braid orbit counts on c^n, n = 1..=nmax
    pub orbit_counts: Vec<usize>,
    pub full_monodromy_orbits: Vec<usize>,
    pub rows: Vec<HurwitzRow>,
    pub constants: Option<BoundConstants>,
    pub nonzero_differentials: Vec<(usize, usize, i32, i32, usize)>,
}

impl HurwitzReport {
    pub fn orbit_check(&self) -> bool {
        self.orbit_counts.iter().enumerate().all(|(k, &c)| self.betti.get(k + 1, 0) == c)
    }

    /// Σ_w dims at each (n, i) reproduce the Betti numbers.
    pub fn convergence_check(&self) -> bool {
        let mut sums: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for r in &self.rows {
            *sums.entry((r.n, r.i)).or_insert(0) += r.dim;
        }
        sums == self.betti.dims
    }

    pub fn to_json(&self, fmt: impl Fn(&Q) -> serde_json::Value) -> serde_json::Value {
        let betti: Vec<_> =
            self.betti.dims.iter().map(|(&(n, j), &d)| json!({"n": n, "j": j, "dim": d})).collect();
        let constants = self.constants.as_ref().map(|k| json!({"delta": fmt(&k.delta), "c": fmt(&k.c), "epsilon": fmt(&k.epsilon)}));
        let diffs: Vec<_> = self
            .nonzero_differentials
            .iter()
            .map(|&(n, r, p, k, rank)| json!({"n": n, "r": r, "p": p, "k": k, "rank": rank}))
            .collect();
        json!({
            "class": self.class,
            "nmax": self.nmax,
            "betti": betti,
            "betti_verified": self.betti.verified,
            "orbit_counts": self.orbit_counts,
            "full_monodromy_orbits": self.full_monodromy_orbits,
            "orbit_check": self.orbit_check(),
            "convergence_check": self.convergence_check(),
            "constants": constants,
            "rows": self.rows,
            "nonzero_differentials": diffs,
        })
    }
}

/// The whole pipeline: Betti numbers, weight decomposition, orbit counts,
/// and bound verdicts (when constants are supplied).
pub fn hurwitz_report(
    gd: &GroupData,
    nmax: usize,
    mode: impl Fn(usize) -> RankMode,
    constants: Option<BoundConstants>,
    force: bool,
) -> Result<HurwitzReport> {
    let betti = hurwitz_betti(gd, nmax, mode, force)?;
    let dec = weight_decomposition(gd, nmax, force)?;
    let mut rows = rows_from_decomposition(&dec);
    if let Some(k) = &constants {
        check_weight_bound(&mut rows, k, is_s3_transpositions(gd));
    }
    let mut orbit_counts = Vec::new();
    let mut full = Vec::new();
    for n in 1..=nmax {
        let o = orbit_enumerate(gd, n)?;
        orbit_counts.push(o.count);
        full.push(o.orbits.iter().filter(|x| x.full_monodromy).count());
    }
    Ok(HurwitzReport {
        class: gd.class_names(),
        nmax,
        betti,
        orbit_counts,
        full_monodromy_orbits: full,
        rows,
        constants,
        nonzero_differentials: dec.nonzero_differentials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, i: usize, w: i32) -> HurwitzRow {
        HurwitzRow { n, i, m: n - i, w, frob_weight: (2 * n - i) as i64 - w as i64, dim: 1, bound: Verdict::NotApplicable }
    }

    #[test]
    fn checker_flags_violations() {
        let k = BoundConstants { delta: Q::new(1, 5), c: Q::new(1, 3), epsilon: Q::new(3, 10) };
        let mut rows = vec![row(3, 2, 0), row(3, 2, 1), row(3, 0, 0)];
        check_weight_bound(&mut rows, &k, true);
        assert_eq!(rows[0].bound, Verdict::Fail);
        assert_eq!(rows[1].bound, Verdict::Pass);
        assert_eq!(rows[2].bound, Verdict::NotApplicable);
    }
}
