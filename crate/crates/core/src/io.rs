//! Instance files: a TOML description of the coefficient data, with exact
//! round-tripping.
//!
//! ```toml
//! alpha = 2
//! rank = 1
//! gram = [[[1, 0]]]
//!
//! [base_field]
//! p = 3
//! deg = 1
//!
//! [cross]
//! "0,0" = [[0, 0]]
//!
//! [Ncoeffs]
//! "0,0,0" = [0, 0]
//! ```
//!
//! Scalars are integers over `F_p`, `[c0, c1]` over `F_p^2`, and polynomial
//! expressions over `base_field = "polynomial"`. A `K`-entry is `[x0, x1]`,
//! meaning `x0 + x1 t`. `cross."i,j"` (`i <= j`) is `e_i x e_j` for `i < j`
//! and `e_i^sharp` for `i = j`; `Ncoeffs."i,j,k"` (`i <= j <= k`) is the
//! coefficient of `c_i c_j c_k` in `N`. Missing entries are zero.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::hcns::{GElem, Hcns, HcnsError, JElem};
use crate::instances::{quaternionic_hcns, QuaternionData, QuaternionError};
use crate::scalars::{Fq, FqField, KElem, KField, Loc, LocRing, PolyRing, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FileScalar {
    Int(i64),
    Coords([i64; 2]),
    Expr(String),
}

pub type KEntry = [FileScalar; 2];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseField {
    Finite { p: u64, deg: u32 },
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuaternionSection {
    pub alpha_prime: FileScalar,
    pub w_action: Vec<Vec<KEntry>>,
    pub q_coeffs: Vec<Vec<KEntry>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub alpha: FileScalar,
    #[serde(default)]
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub invert: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gram: Vec<Vec<KEntry>>,
    pub base_field: BaseField,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cross: BTreeMap<String, Vec<KEntry>>,
    #[serde(default, rename = "Ncoeffs", skip_serializing_if = "BTreeMap::is_empty")]
    pub ncoeffs: BTreeMap<String, KEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quaternionic: Option<QuaternionSection>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error at {path}: {msg}")]
    Schema { path: String, msg: String },
    #[error(transparent)]
    Hcns(#[from] HcnsError),
    #[error(transparent)]
    Quaternion(#[from] QuaternionError),
}

fn schema(path: impl Into<String>, msg: impl Into<String>) -> IoError {
    IoError::Schema { path: path.into(), msg: msg.into() }
}

/// A built instance over one of the supported base rings.
#[derive(Debug, Clone)]
pub enum Instance {
    Finite(Hcns<Fq>),
    Polynomial(Hcns<Loc>),
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        toml::from_str(text).map_err(|e| IoError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("instance files serialize")
    }

    pub fn build(&self) -> Result<Instance, IoError> {
        match &self.base_field {
            BaseField::Finite { p, deg } => {
                let f = match deg {
                    1 => FqField::prime(*p),
                    2 => FqField::quadratic(*p),
                    _ => return Err(schema("base_field.deg", "must be 1 or 2")),
                }
                .map_err(|e| schema("base_field.p", e.to_string()))?;
                let conv = |s: &FileScalar, path: &str| -> Result<Fq, IoError> {
                    match (s, f.degree()) {
                        (FileScalar::Int(n), _) => Ok(f.int(*n)),
                        (FileScalar::Coords([a, b]), 2) => {
                            let p = f.p() as i64;
                            Ok(f.from_coords(a.rem_euclid(p) as u64, b.rem_euclid(p) as u64))
                        }
                        _ => Err(schema(path, "expected an integer (or [c0, c1] over F_p^2)")),
                    }
                };
                let alpha = conv(&self.alpha, "alpha")?;
                let k = KField::new(alpha);
                if k.disc().inverse().is_none() {
                    return Err(schema("alpha", "1 - 4 alpha is not invertible"));
                }
                Ok(Instance::Finite(self.build_over(&k, &conv)?))
            }
            BaseField::Named(name) if name == "polynomial" => {
                let poly = PolyRing::new(&self.variables);
                let mut gens = Vec::new();
                for (i, g) in self.invert.iter().enumerate() {
                    let p = poly.parse(g).map_err(|e| schema(format!("invert[{i}]"), e.to_string()))?;
                    gens.push((g.clone(), p));
                }
                let ring = LocRing::new(poly, gens);
                let conv = |s: &FileScalar, path: &str| -> Result<Loc, IoError> {
                    match s {
                        FileScalar::Int(n) => Ok(ring.int(*n)),
                        FileScalar::Expr(e) => ring.parse(e).map_err(|err| schema(path, err.to_string())),
                        FileScalar::Coords(_) => Err(schema(path, "expected an integer or expression")),
                    }
                };
                let k = KField::new(conv(&self.alpha, "alpha")?);
                Ok(Instance::Polynomial(self.build_over(&k, &conv)?))
            }
            BaseField::Named(other) => Err(schema("base_field", format!("unknown base field {other:?}"))),
        }
    }

    fn build_over<R: Ring>(
        &self,
        k: &Arc<KField<R>>,
        conv: &dyn Fn(&FileScalar, &str) -> Result<R, IoError>,
    ) -> Result<Hcns<R>, IoError> {
        let kconv = |e: &KEntry, path: &str| -> Result<KElem<R>, IoError> {
            Ok(k.elem(conv(&e[0], &format!("{path}[0]"))?, conv(&e[1], &format!("{path}[1]"))?))
        };
        if let Some(q) = &self.quaternionic {
            if !self.gram.is_empty() || !self.cross.is_empty() || !self.ncoeffs.is_empty() {
                return Err(schema("quaternionic", "excludes gram, cross and Ncoeffs"));
            }
            let matrix = |m: &Vec<Vec<KEntry>>, name: &str| -> Result<Vec<Vec<KElem<R>>>, IoError> {
                m.iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(j, e)| kconv(e, &format!("quaternionic.{name}[{i}][{j}]")))
                            .collect()
                    })
                    .collect()
            };
            let qd = QuaternionData {
                k: k.clone(),
                alpha_prime: conv(&q.alpha_prime, "quaternionic.alpha_prime")?,
                w_action: matrix(&q.w_action, "w_action")?,
                q_coeffs: matrix(&q.q_coeffs, "q_coeffs")?,
            };
            let r = qd.w_action.len();
            if qd.w_action.iter().any(|row| row.len() != r)
                || qd.q_coeffs.len() != r
                || qd.q_coeffs.iter().any(|row| row.len() != r)
            {
                return Err(schema("quaternionic", "w_action and q_coeffs must be square of equal size"));
            }
            if self.rank != 0 && self.rank != r + 1 {
                return Err(schema("rank", format!("quaternionic data has rank {}", r + 1)));
            }
            return Ok(quaternionic_hcns(&qd)?);
        }
        let n = self.rank;
        if self.gram.len() != n {
            return Err(schema("gram", format!("expected {n} rows, got {}", self.gram.len())));
        }
        let mut gram = Vec::with_capacity(n);
        for (i, row) in self.gram.iter().enumerate() {
            if row.len() != n {
                return Err(schema(format!("gram[{i}]"), format!("expected {n} entries, got {}", row.len())));
            }
            gram.push(
                row.iter()
                    .enumerate()
                    .map(|(j, e)| kconv(e, &format!("gram[{i}][{j}]")))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        let mut cross = BTreeMap::new();
        for (key, vec) in &self.cross {
            let path = format!("cross.\"{key}\"");
            let idx = parse_key(key, 2, n).ok_or_else(|| schema(&path, "expected \"i,j\" with i <= j < rank"))?;
            if vec.len() != n {
                return Err(schema(&path, format!("expected {n} coordinates")));
            }
            let j = vec
                .iter()
                .enumerate()
                .map(|(c, e)| kconv(e, &format!("{path}[{c}]")))
                .collect::<Result<Vec<_>, _>>()?;
            cross.insert((idx[0], idx[1]), JElem(j));
        }
        let mut ncoef = BTreeMap::new();
        for (key, e) in &self.ncoeffs {
            let path = format!("Ncoeffs.\"{key}\"");
            let idx =
                parse_key(key, 3, n).ok_or_else(|| schema(&path, "expected \"i,j,k\" with i <= j <= k < rank"))?;
            ncoef.insert((idx[0], idx[1], idx[2]), kconv(e, &path)?);
        }
        let zero_j = JElem(vec![k.zero(); n]);
        Ok(Hcns::new(
            k.clone(),
            n,
            gram,
            |i, j| cross.get(&(i, j)).cloned().unwrap_or_else(|| zero_j.clone()),
            |i, j, l| ncoef.get(&(i, j, l)).cloned().unwrap_or_else(|| k.zero()),
        )?)
    }

    /// Describe a finite instance; zero entries are omitted.
    pub fn from_finite(h: &Hcns<Fq>) -> Self {
        let f = h.alpha().field();
        let s = |x: &Fq| -> FileScalar {
            let [c0, c1] = x.coords();
            if f.degree() == 1 {
                FileScalar::Int(c0 as i64)
            } else {
                FileScalar::Coords([c0 as i64, c1 as i64])
            }
        };
        let ke = |x: &KElem<Fq>| -> KEntry { [s(&x.x0), s(&x.x1)] };
        let n = h.rank();
        let mut cross = BTreeMap::new();
        let mut ncoeffs = BTreeMap::new();
        for i in 0..n {
            for j in i..n {
                let c = h.sharp_data(i, j);
                if !c.is_zero() {
                    cross.insert(format!("{i},{j}"), c.0.iter().map(ke).collect());
                }
                for l in j..n {
                    let c = h.n_coef(i, j, l);
                    if !c.is_zero() {
                        ncoeffs.insert(format!("{i},{j},{l}"), ke(c));
                    }
                }
            }
        }
        InstanceFile {
            alpha: s(h.alpha()),
            rank: n,
            variables: Vec::new(),
            invert: Vec::new(),
            gram: (0..n).map(|i| (0..n).map(|j| ke(h.gram(i, j))).collect()).collect(),
            base_field: BaseField::Finite { p: f.p(), deg: f.degree() },
            cross,
            ncoeffs,
            quaternionic: None,
        }
    }
}

fn parse_key(key: &str, len: usize, n: usize) -> Option<Vec<usize>> {
    let idx: Vec<usize> = key.split(',').map(|s| s.trim().parse().ok()).collect::<Option<_>>()?;
    (idx.len() == len && idx.windows(2).all(|w| w[0] <= w[1]) && idx.iter().all(|&i| i < n)).then_some(idx)
}

/// A group element for the command line: `a`, `v` and either `u` or the skew
/// coefficient `r` of `u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementSpec {
    pub a: [i64; 2],
    pub v: Vec<[i64; 2]>,
    #[serde(default)]
    pub u: Option<[i64; 2]>,
    #[serde(default)]
    pub r: Option<i64>,
}

impl ElementSpec {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))
    }

    pub fn build<R: Ring>(&self, h: &Hcns<R>) -> Result<GElem<R>, IoError> {
        let k = h.kfield();
        let one = h.alpha().one_like();
        let ke = |c: &[i64; 2]| k.elem(one.int_like(c[0]), one.int_like(c[1]));
        if self.v.len() != h.rank() {
            return Err(schema("v", format!("expected {} coordinates", h.rank())));
        }
        let a = ke(&self.a);
        let v = JElem(self.v.iter().map(ke).collect());
        match (&self.u, self.r) {
            (Some(u), None) => Ok(h.g_make(a, v, ke(u))?),
            (None, r) => Ok(h.g_from_skew(a, v, &one.int_like(r.unwrap_or(0)))?),
            (Some(_), Some(_)) => Err(schema("u", "give either u or r, not both")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{cubic_field_hcns, hermitian_form_hcns};

    const HERM: &str = r#"
alpha = 2
rank = 1
gram = [[[1, 0]]]

[base_field]
p = 3
deg = 1
"#;

    #[test]
    fn round_trip_and_build() {
        let f = InstanceFile::parse(HERM).unwrap();
        let text = f.to_toml();
        let g = InstanceFile::parse(&text).unwrap();
        assert_eq!(f, g);
        assert_eq!(text, g.to_toml());
        let Instance::Finite(h) = f.build().unwrap() else { panic!() };
        let k = h.kfield().clone();
        assert!(h.data_eq(&hermitian_form_hcns(&k, vec![vec![k.int(1)]]).unwrap()));
        let c = cubic_field_hcns(&KField::new(FqField::prime(7).unwrap().int(3)));
        let back = InstanceFile::from_finite(&c);
        let Instance::Finite(c2) = InstanceFile::parse(&back.to_toml()).unwrap().build().unwrap() else { panic!() };
        assert!(c.data_eq(&c2));
    }

    #[test]
    fn polynomial_instance() {
        let text = r#"
alpha = "alpha"
variables = ["alpha", "g"]
invert = ["1 - 4*alpha"]
base_field = "polynomial"
rank = 1
gram = [[["g", 0]]]
"#;
        let f = InstanceFile::parse(text).unwrap();
        assert_eq!(InstanceFile::parse(&f.to_toml()).unwrap(), f);
        let Instance::Polynomial(h) = f.build().unwrap() else { panic!() };
        assert!(h.check_axioms().unwrap().all_pass());
    }

    #[test]
    fn schema_errors() {
        let bad = HERM.replace("rank = 1", "rank = 2");
        assert!(
            matches!(InstanceFile::parse(&bad).unwrap().build(), Err(IoError::Schema { path, .. }) if path == "gram")
        );
        let bad = format!("{HERM}\n[cross]\n\"1,0\" = [[0, 0]]\n");
        assert!(matches!(InstanceFile::parse(&bad).unwrap().build(), Err(IoError::Schema { .. })));
        let err = InstanceFile::parse("alpha = \n").unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
        let nonherm = HERM.replace("[[[1, 0]]]", "[[[1, 1]]]");
        assert!(matches!(InstanceFile::parse(&nonherm).unwrap().build(), Err(IoError::Hcns(_))));
    }

    #[test]
    fn quaternionic_section() {
        let text = r#"
alpha = 2

[base_field]
p = 3
deg = 1

[quaternionic]
alpha_prime = 1
w_action = [[[1, 0]]]
q_coeffs = [[[0, 0]]]
"#;
        let f = InstanceFile::parse(text).unwrap();
        assert_eq!(InstanceFile::parse(&f.to_toml()).unwrap(), f);
        let Instance::Finite(h) = f.build().unwrap() else { panic!() };
        assert_eq!(h.rank(), 2);
    }

    #[test]
    fn element_spec() {
        let Instance::Finite(h) = InstanceFile::parse(HERM).unwrap().build().unwrap() else { panic!() };
        let e = ElementSpec::parse(r#"{"a": [1, 0], "v": [[1, 0]]}"#).unwrap();
        let g = e.build(&h).unwrap();
        assert!(h.nu(&g).is_zero());
        let bad = ElementSpec::parse(r#"{"a": [1, 0], "v": [[1, 0]], "u": [0, 0]}"#).unwrap();
        assert!(matches!(bad.build(&h), Err(IoError::Hcns(HcnsError::NotInGroup))));
    }
}
