//! Braiding-spec files: the JSON input format shared by the command line
//! tool and the browser demo.
//!
//! ```json
//! {"type":"trivial","dim":3}
//! {"type":"diagonal","q":[[{"zeta":1}]],"field":{"field":"cyclotomic","order":3}}
//! {"type":"rack","elements":["a","b","c"],"action":[[0,2,1],[2,1,0],[1,0,2]],"cocycle":-1}
//! {"type":"group_class","group":{"perm_generators":[[2,1,3],[1,3,2]]},"class_reps":["(12)"],"cocycle":-1}
//! {"type":"matrix","R":[[...]]}
//! ```
//!
//! Scalars are an integer, a string `"a/b"`, `{"zeta":k}` or
//! `{"coeffs":[c0, c1, ...]}` (coefficients of powers of zeta).

use serde::{Deserialize, Serialize};

use crate::braided::{
    make_diagonal, make_trivial, rack_candidate, yang_baxter_counterexample, BraidedVectorSpace, Group, GroupData, Rack,
    YdData,
};
use crate::error::{invalid, Error, Result};
use crate::scalar::{FieldDesc, Scalar, Q};

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum RationalSpec {
    Int(i64),
    Str(String),
}

impl RationalSpec {
    fn to_q(&self) -> Result<Q> {
        match self {
            RationalSpec::Int(n) => Ok(Q::from_int(*n)),
            RationalSpec::Str(s) => Q::parse(s).ok_or_else(|| Error::InvalidInput(format!("bad rational {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum ScalarSpec {
    Rational(RationalSpec),
    Zeta { zeta: i64 },
    Coeffs { coeffs: Vec<RationalSpec> },
}

impl ScalarSpec {
    pub fn to_scalar(&self, field: FieldDesc) -> Result<Scalar> {
        match (self, field) {
            (ScalarSpec::Rational(r), FieldDesc::Prime { modulus }) => {
                let q = r.to_q()?;
                let v = q
                    .reduce_mod(modulus)
                    .ok_or_else(|| Error::Domain(format!("{q} is undefined mod {modulus}")))?;
                Ok(Scalar::modular(v, modulus))
            }
            (ScalarSpec::Rational(r), _) => Ok(Scalar::Rational(r.to_q()?)),
            (ScalarSpec::Zeta { zeta }, FieldDesc::Cyclotomic { order }) => Ok(Scalar::cyclotomic(order, *zeta)),
            (ScalarSpec::Coeffs { coeffs }, FieldDesc::Cyclotomic { order }) => {
                let c = coeffs.iter().map(RationalSpec::to_q).collect::<Result<Vec<_>>>()?;
                Ok(Scalar::from_zeta_coeffs(order, c))
            }
            _ => invalid("roots of unity need a cyclotomic field"),
        }
    }
}

fn check_field(field: FieldDesc) -> Result<()> {
    match field {
        FieldDesc::Cyclotomic { order: 0 } => invalid("cyclotomic order must be positive"),
        FieldDesc::Prime { modulus } if !crate::scalar::is_prime_u64(modulus) => {
            Err(Error::Domain(format!("{modulus} is not prime")))
        }
        _ => Ok(()),
    }
}

fn scalar_table(t: &[Vec<ScalarSpec>], field: FieldDesc) -> Result<Vec<Vec<Scalar>>> {
    t.iter().map(|r| r.iter().map(|x| x.to_scalar(field)).collect()).collect()
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum CocycleSpec {
    Constant(ScalarSpec),
    Table(Vec<Vec<ScalarSpec>>),
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum GroupSpec {
    Permutations { perm_generators: Vec<Vec<usize>> },
    Table { elements: Vec<String>, table: Vec<Vec<usize>> },
}

impl GroupSpec {
    pub fn build(&self) -> Result<Group> {
        match self {
            GroupSpec::Permutations { perm_generators } => Group::from_permutations(perm_generators),
            GroupSpec::Table { elements, table } => Group::from_table(elements.clone(), table.clone()),
        }
    }
}

/// A class representative by name (cycle notation for permutation groups)
/// or as a permutation in one-line notation.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum ElementRef {
    Name(String),
    OneLine(Vec<usize>),
}

impl ElementRef {
    fn resolve(&self, g: &Group) -> Result<usize> {
        let name = match self {
            ElementRef::Name(s) => s.clone(),
            ElementRef::OneLine(p) => {
                let perm = crate::combinat::Permutation::from_one_line(p)?;
                let p16: Vec<u16> = perm.images().iter().map(|&x| x as u16).collect();
                crate::braided::cycle_name(&p16)
            }
        };
        g.index_of(&name).ok_or_else(|| Error::InvalidInput(format!("no group element named {name:?}")))
    }
}

fn minus_one() -> ScalarSpec {
    ScalarSpec::Rational(RationalSpec::Int(-1))
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BraidingSpec {
    Trivial {
        dim: usize,
    },
    Diagonal {
        q: Vec<Vec<ScalarSpec>>,
        #[serde(default)]
        field: FieldDesc,
    },
    Rack {
        elements: Vec<String>,
        action: Vec<Vec<usize>>,
        #[serde(default)]
        cocycle: Option<CocycleSpec>,
        #[serde(default)]
        field: FieldDesc,
    },
    GroupClass {
        group: GroupSpec,
        class_reps: Vec<ElementRef>,
        #[serde(default = "minus_one")]
        cocycle: ScalarSpec,
        #[serde(default)]
        field: FieldDesc,
    },
    Matrix {
        #[serde(rename = "R")]
        r: Vec<Vec<ScalarSpec>>,
        #[serde(default)]
        field: FieldDesc,
    },
}

impl std::str::FromStr for BraidingSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("braiding spec: {e}")))
    }
}

/// One named validation with its outcome.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ValidationReport {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl ValidationReport {
    fn push<T>(&mut self, name: &str, r: &Result<T>) -> bool {
        let (pass, detail) = match r {
            Ok(_) => (true, None),
            Err(e) => (false, Some(e.to_string())),
        };
        self.checks.push(Check { name: name.into(), pass, detail });
        self.pass &= pass;
        pass
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::from("check\tresult\tdetail\n");
        for c in &self.checks {
            let r = if c.pass { "pass" } else { "fail" };
            s.push_str(&format!("{}\t{}\t{}\n", c.name, r, c.detail.as_deref().unwrap_or("")));
        }
        s
    }
}

impl BraidingSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            BraidingSpec::Trivial { .. } => "trivial",
            BraidingSpec::Diagonal { .. } => "diagonal",
            BraidingSpec::Rack { .. } => "rack",
            BraidingSpec::GroupClass { .. } => "group_class",
            BraidingSpec::Matrix { .. } => "matrix",
        }
    }

    pub fn field(&self) -> FieldDesc {
        match self {
            BraidingSpec::Trivial { .. } => FieldDesc::Rational,
            BraidingSpec::Diagonal { field, .. }
            | BraidingSpec::Rack { field, .. }
            | BraidingSpec::GroupClass { field, .. }
            | BraidingSpec::Matrix { field, .. } => *field,
        }
    }

    /// Group and class for `group_class` specs.
    pub fn group_data(&self) -> Result<GroupData> {
        let BraidingSpec::GroupClass { group, class_reps, .. } = self else {
            return invalid(format!("a {} spec has no group", self.kind()));
        };
        let g = group.build()?;
        let reps = class_reps.iter().map(|r| r.resolve(&g)).collect::<Result<Vec<_>>>()?;
        GroupData::from_class_reps(g, &reps)
    }

    fn rack(&self) -> Result<Rack> {
        let field = self.field();
        match self {
            BraidingSpec::Rack { elements, action, cocycle, .. } => {
                let n = elements.len();
                let cocycle = match cocycle {
                    None => None,
                    Some(CocycleSpec::Constant(x)) => Some(vec![vec![x.to_scalar(field)?; n]; n]),
                    Some(CocycleSpec::Table(t)) => Some(scalar_table(t, field)?),
                };
                Ok(Rack { elements: elements.clone(), action: action.clone(), cocycle })
            }
            BraidingSpec::GroupClass { cocycle, .. } => {
                let x = cocycle.to_scalar(field)?;
                if x.is_zero() {
                    return invalid("cocycle must be nonzero");
                }
                Ok(self.group_data()?.rack(&x))
            }
            _ => invalid("not a rack spec"),
        }
    }

    /// Everything except the Yang-Baxter test.
    fn candidate(&self) -> Result<BraidedVectorSpace> {
        let field = self.field();
        check_field(field)?;
        match self {
            BraidingSpec::Trivial { dim } => make_trivial(*dim),
            BraidingSpec::Diagonal { q, .. } => make_diagonal(&scalar_table(q, field)?, field),
            BraidingSpec::Rack { .. } => rack_candidate(&self.rack()?, field),
            BraidingSpec::GroupClass { .. } => {
                let gd = self.group_data()?;
                let mut b = rack_candidate(&self.rack()?, field)?;
                b.yd = Some(YdData { grades: gd.class.clone(), group: gd });
                Ok(b)
            }
            BraidingSpec::Matrix { r, .. } => {
                let d = (r.len() as f64).sqrt().round() as usize;
                if d * d != r.len() {
                    return invalid(format!("braiding matrix has {} rows, not a square number", r.len()));
                }
                BraidedVectorSpace::matrix_candidate(d, &scalar_table(r, field)?, field)
            }
        }
    }

    /// The braided vector space, fully validated.
    pub fn build(&self) -> Result<BraidedVectorSpace> {
        let b = self.candidate()?;
        if let Some((x, y, z)) = yang_baxter_counterexample(&b) {
            let l = b.labels();
            return invalid(format!("Yang-Baxter fails on basis triple ({}, {}, {})", l[x], l[y], l[z]));
        }
        Ok(b)
    }

    /// Runs each validation separately and reports all of them.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport { kind: self.kind().into(), dim: None, checks: Vec::new(), pass: true };
        if !rep.push("field", &check_field(self.field())) {
            return rep;
        }
        match self {
            BraidingSpec::Rack { .. } => {
                let rack = self.rack();
                if !rep.push("cocycle_entries", &rack) {
                    return rep;
                }
                if !rep.push("rack_axioms", &rack.unwrap().check()) {
                    return rep;
                }
            }
            BraidingSpec::GroupClass { group, .. } => {
                if !rep.push("group", &group.build()) || !rep.push("class_closure", &self.group_data()) {
                    return rep;
                }
            }
            _ => {}
        }
        let cand = self.candidate();
        if !rep.push("construction", &cand) {
            return rep;
        }
        let b = cand.unwrap();
        rep.dim = Some(b.dim());
        let detail = yang_baxter_counterexample(&b).map(|(x, y, z)| {
            let l = b.labels();
            format!("counterexample basis triple ({}, {}, {})", l[x], l[y], l[z])
        });
        rep.pass &= detail.is_none();
        rep.checks.push(Check { name: "yang_baxter".into(), pass: detail.is_none(), detail });
        rep
    }
}

/// Parses and validates a spec file's text; parse errors become a failing check.
pub fn validate_text(text: &str) -> ValidationReport {
    match text.parse::<BraidingSpec>() {
        Ok(spec) => {
            let mut r = spec.validate();
            r.checks.insert(0, Check { name: "parse".into(), pass: true, detail: None });
            r
        }
        Err(e) => ValidationReport {
            kind: "unknown".into(),
            dim: None,
            checks: vec![Check { name: "parse".into(), pass: false, detail: Some(e.to_string()) }],
            pass: false,
        },
    }
}

/// S3 acting on {1,2,3}, class of transpositions, constant cocycle x.
pub fn s3_transpositions(x: i64) -> BraidingSpec {
    BraidingSpec::GroupClass {
        group: GroupSpec::Permutations { perm_generators: vec![vec![2, 1, 3], vec![1, 3, 2]] },
        class_reps: vec![ElementRef::Name("(12)".into())],
        cocycle: ScalarSpec::Rational(RationalSpec::Int(x)),
        field: FieldDesc::Rational,
    }
}

/// One-dimensional V with R = zeta_m^k.
pub fn root_of_unity(m: u32, k: i64) -> BraidingSpec {
    BraidingSpec::Diagonal { q: vec![vec![ScalarSpec::Zeta { zeta: k }]], field: FieldDesc::Cyclotomic { order: m } }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_spec_round_trips() {
        let s = s3_transpositions(-1);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text.parse::<BraidingSpec>().unwrap(), s);
        let b = s.build().unwrap();
        assert_eq!(b.dim(), 3);
        assert!(b.yd_data().is_some());
        assert!(s.validate().pass);
    }

    #[test]
    fn corrupted_matrix_reports_triple() {
        // swap on k^2 plus one stray entry: invertible but not Yang-Baxter
        let mut r = vec![vec![0i64; 4]; 4];
        r[0][0] = 1;
        r[0][1] = 1;
        r[1][2] = 1;
        r[2][1] = 1;
        r[3][3] = 1;
        let r: Vec<Vec<ScalarSpec>> =
            r.into_iter().map(|row| row.into_iter().map(|x| ScalarSpec::Rational(RationalSpec::Int(x))).collect()).collect();
        let rep = BraidingSpec::Matrix { r, field: FieldDesc::Rational }.validate();
        assert!(!rep.pass);
        let yb = rep.checks.iter().find(|c| c.name == "yang_baxter").unwrap();
        assert!(yb.detail.as_ref().unwrap().contains("triple"));
    }

    #[test]
    fn empty_class_fails() {
        let text = r#"{"type":"group_class","group":{"perm_generators":[[2,1,3]]},"class_reps":[]}"#;
        let rep = validate_text(text);
        assert!(!rep.pass);
        assert!(rep.checks.iter().any(|c| c.name == "class_closure" && !c.pass));
    }

    #[test]
    fn scalar_forms() {
        let f = FieldDesc::Cyclotomic { order: 3 };
        let z: ScalarSpec = serde_json::from_str(r#"{"zeta":1}"#).unwrap();
        let c: ScalarSpec = serde_json::from_str(r#"{"coeffs":[0,1]}"#).unwrap();
        assert_eq!(z.to_scalar(f).unwrap(), c.to_scalar(f).unwrap());
        let h: ScalarSpec = serde_json::from_str(r#""-3/6""#).unwrap();
        assert_eq!(h.to_scalar(FieldDesc::Rational).unwrap(), Scalar::ratio(-1, 2));
        assert!(z.to_scalar(FieldDesc::Rational).is_err());
    }
}
