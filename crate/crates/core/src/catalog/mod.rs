//! Named instances and the verification suites built on them.

mod suites;

use std::str::FromStr;

use crate::algebra::{Algebra, Closure, Element, Identity};
use crate::cayley_dickson::QuadraticAlgebra;
use crate::derivations::{lemma22_case1, lemma22_case2, Lemma22, NormCertificate};
use crate::error::{Error, Result};
use crate::field::{Field, FieldDescriptor};
use crate::linalg::{Matrix, Subspace};
use crate::options::Options;
use crate::report::Check;

pub use suites::{run_suite, run_suites, SUITES};

pub const INSTANCES: [&str; 13] = [
    "zorn",
    "quaternions-Q",
    "split-octonions-Q",
    "gagola-B",
    "lemma23-Dx",
    "remark22",
    "trivial-nilpotent",
    "upper3",
    "mat2",
    "field1",
    "zero2",
    "lemma22-I",
    "lemma22-II",
];

/// Build parameters; unset fields take the instance's default.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub field: Option<FieldDescriptor>,
    /// `a ∈ GF(4)` for `lemma23-Dx`, one of `0, 1, w, w2`.
    pub a: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub algebra: Algebra,
    pub quadratic: Option<QuadraticAlgebra>,
    /// The derivation the construction comes with, if any.
    pub derivation: Option<Matrix>,
    /// Norm factorization of `derivation`'s values.
    pub certificate: Option<NormCertificate>,
}

impl Instance {
    fn plain(name: &str, algebra: Algebra) -> Instance {
        Instance {
            name: name.to_string(),
            algebra,
            quadratic: None,
            derivation: None,
            certificate: None,
        }
    }

    fn quadratic(name: &str, q: QuadraticAlgebra) -> Instance {
        Instance {
            name: name.to_string(),
            algebra: q.algebra().clone(),
            quadratic: Some(q),
            derivation: None,
            certificate: None,
        }
    }

    fn lemma22(name: &str, l: Lemma22) -> Instance {
        Instance {
            derivation: Some(l.map),
            certificate: Some(l.certificate),
            ..Instance::quadratic(name, l.algebra)
        }
    }

    /// Identities the instance is expected to satisfy, checked afresh.
    pub fn sanity(&self, opts: &Options) -> Vec<Check> {
        let ids: &[Identity] = match self.name.as_str() {
            "zorn" | "split-octonions-Q" | "remark22" | "lemma22-I" | "lemma22-II" => {
                &[Identity::LeftAlternative, Identity::RightAlternative]
            }
            "gagola-B" | "lemma23-Dx" | "field1" | "zero2" => &[Identity::Associative, Identity::Commutative],
            _ => &[Identity::Associative],
        };
        let mut out: Vec<Check> = ids
            .iter()
            .map(|&id| {
                self.algebra
                    .check_identity(id, opts)
                    .to_check(&self.algebra, format!("{}: {id}", self.name))
            })
            .collect();
        if let Some(d) = &self.derivation {
            let check = self.algebra.is_derivation(d).expect("square map");
            let mut c = Check::new(
                format!("{}: derivation law", self.name),
                check.holds,
                crate::report::Provenance::Certified,
            );
            if let Some(w) = check.witness_json(&self.algebra) {
                c = c.with_witness(w);
            }
            out.push(c);
        }
        out
    }
}

fn field_or(params: &Params, default: &str) -> Result<Field> {
    let desc = match &params.field {
        Some(d) => d.clone(),
        None => FieldDescriptor::from_str(default)?,
    };
    Field::new(&desc)
}

pub fn build(name: &str, params: &Params) -> Result<Instance> {
    if params.a.is_some() && name != "lemma23-Dx" {
        return Err(Error::InvalidParams(format!("{name} takes no parameter a")));
    }
    match name {
        "zorn" => Ok(Instance::quadratic(
            name,
            QuadraticAlgebra::zorn(&field_or(params, "gf3")?),
        )),
        "quaternions-Q" => {
            let q = field_or(params, "q")?;
            Ok(Instance::quadratic(name, quaternions(&q)?))
        }
        "split-octonions-Q" => {
            let q = field_or(params, "q")?;
            Ok(Instance::quadratic(name, quaternions(&q)?.double(&q.one())?))
        }
        "gagola-B" => {
            let f = field_or(params, "gf2(s,t)")?;
            Ok(Instance::plain(name, Gagola::new(&f)?.restricted()?))
        }
        "lemma23-Dx" => {
            if params
                .field
                .as_ref()
                .is_some_and(|d| *d != FieldDescriptor::Prime { p: 2 })
            {
                return Err(Error::InvalidParams("lemma23-Dx is defined over GF(2)".into()));
            }
            let a = Gf4::parse(params.a.as_deref().unwrap_or("0"))?;
            let (algebra, d) = lemma23(a);
            Ok(Instance {
                derivation: Some(d),
                ..Instance::plain(name, algebra)
            })
        }
        "remark22" => Ok(Instance::plain(name, remark22(&field_or(params, "gf3")?))),
        "trivial-nilpotent" => Ok(Instance::plain(name, trivial_nilpotent(&field_or(params, "q")?))),
        "upper3" => Ok(Instance::plain(name, upper3(&field_or(params, "q")?))),
        "mat2" => Ok(Instance::plain(name, mat2(&field_or(params, "gf3")?))),
        "field1" => {
            let f = field_or(params, "gf5")?;
            Ok(Instance::quadratic(name, QuadraticAlgebra::ground(&f)))
        }
        "zero2" => {
            let f = field_or(params, "gf5")?;
            Ok(Instance::plain(name, Algebra::new(&f, 2, [])?))
        }
        "lemma22-I" => {
            let f = field_or(params, "q")?;
            let h = quaternions(&f)?;
            let u = h.algebra().basis(1);
            Ok(Instance::lemma22(name, lemma22_case1(&h, &f.one(), &u)?))
        }
        "lemma22-II" => {
            let f = field_or(params, "gf2(s,t)")?;
            let g = Gagola::new(&f)?;
            Ok(Instance::lemma22(name, lemma22_case2(&g.zorn, &g.subspace)?))
        }
        _ => Err(Error::UnknownInstance(name.to_string())),
    }
}

/// `(−1, −1)` doubled twice from the ground field; `i = v1`.
pub fn quaternions(field: &Field) -> Result<QuadraticAlgebra> {
    let m = -field.one();
    QuadraticAlgebra::tower(field, &[m.clone(), m])
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// `e² = f`.
pub fn trivial_nilpotent(field: &Field) -> Algebra {
    Algebra::new(field, 2, [(0, 0, 1, field.one())])
        .and_then(|a| a.with_names(names(&["e", "f"])))
        .expect("valid table")
}

/// Strictly upper-triangular 3×3 matrices, basis `(E12, E13, E23)`.
pub fn upper3(field: &Field) -> Algebra {
    Algebra::new(field, 3, [(0, 2, 1, field.one())])
        .and_then(|a| a.with_names(names(&["E12", "E13", "E23"])))
        .expect("valid table")
}

/// 2×2 matrices, basis `(E11, E12, E21, E22)`.
pub fn mat2(field: &Field) -> Algebra {
    let idx = |r: usize, c: usize| 2 * r + c;
    let mut entries = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                entries.push((idx(a, b), idx(b, c), idx(a, c), field.one()));
            }
        }
    }
    Algebra::new(field, 4, entries)
        .and_then(|a| a.with_names(names(&["E11", "E12", "E21", "E22"])))
        .expect("valid table")
}

/// Seven-dimensional nilpotent algebra on `(e1, e2, e3, u1, u2, v, w)`:
/// `e1² = u1, e2² = u2, e2e3 = e3e2 = −v, e3e1 = e1e3 = u2,
/// e1u1 = u1e1 = v, e2u2 = u2e2 = w, e1v = ve1 = u1² = w`.
pub fn remark22(field: &Field) -> Algebra {
    let (e1, e2, e3, u1, u2, v, w) = (0, 1, 2, 3, 4, 5, 6);
    let one = field.one();
    let neg = -field.one();
    let table = [
        (e1, e1, u1, one.clone()),
        (e2, e2, u2, one.clone()),
        (e2, e3, v, neg.clone()),
        (e3, e2, v, neg),
        (e3, e1, u2, one.clone()),
        (e1, e3, u2, one.clone()),
        (e1, u1, v, one.clone()),
        (u1, e1, v, one.clone()),
        (e2, u2, w, one.clone()),
        (u2, e2, w, one.clone()),
        (e1, v, w, one.clone()),
        (v, e1, w, one.clone()),
        (u1, u1, w, one),
    ];
    Algebra::new(field, 7, table)
        .and_then(|a| a.with_names(names(&["e1", "e2", "e3", "u1", "u2", "v", "w"])))
        .expect("valid table")
}

/// An element `c0 + c1·ω` of `GF(4) = GF(2)[ω]/(ω² + ω + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gf4(pub u8, pub u8);

impl Gf4 {
    pub const ALL: [Gf4; 4] = [Gf4(0, 0), Gf4(1, 0), Gf4(0, 1), Gf4(1, 1)];

    pub fn parse(s: &str) -> Result<Gf4> {
        match s {
            "0" => Ok(Gf4(0, 0)),
            "1" => Ok(Gf4(1, 0)),
            "w" => Ok(Gf4(0, 1)),
            "w2" | "w+1" | "1+w" => Ok(Gf4(1, 1)),
            _ => Err(Error::InvalidParams(format!("a must be one of 0, 1, w, w2; got {s:?}"))),
        }
    }
}

impl std::ops::Mul for Gf4 {
    type Output = Gf4;

    fn mul(self, o: Gf4) -> Gf4 {
        let (a0, a1, b0, b1) = (self.0, self.1, o.0, o.1);
        Gf4((a0 * b0 + a1 * b1) % 2, (a0 * b1 + a1 * b0 + a1 * b1) % 2)
    }
}

/// `GF(4)[x]/(x²)` over `GF(2)` on `(1, ω, x, ωx)`, with the derivation
/// `d(c0 + c1 x) = c1 (1 + a x)`.
pub fn lemma23(a: Gf4) -> (Algebra, Matrix) {
    let f = Field::prime(2).expect("2 is prime");
    // basis index 2m + b is ω^b x^m
    let split = |i: usize| (if i.is_multiple_of(2) { Gf4(1, 0) } else { Gf4(0, 1) }, i / 2);
    let coords = |c: Gf4, m: usize| {
        let mut v = vec![0i64; 4];
        v[2 * m] = c.0 as i64;
        v[2 * m + 1] = c.1 as i64;
        Element::from_ints(&f, &v)
    };
    let algebra = Algebra::from_products(&f, 4, |i, j| {
        let ((ci, mi), (cj, mj)) = (split(i), split(j));
        if mi + mj > 1 {
            Element::zero(&f, 4)
        } else {
            coords(ci * cj, mi + mj)
        }
    })
    .with_names(names(&["1", "w", "x", "wx"]))
    .expect("four names");
    // d(c x) = c + (c a) x for c ∈ {1, ω}; d vanishes on GF(4)
    let mut columns = vec![vec![f.zero(); 4]; 2];
    for c in [Gf4(1, 0), Gf4(0, 1)] {
        let image = &coords(c, 0) + &coords(c * a, 1);
        columns.push(image.into_coords());
    }
    let d = Matrix::from_columns(&f, 4, &columns);
    (algebra, d)
}

/// The four-dimensional subfield of split octonions over `GF(2)(s,t)`
/// generated by `X = (0, (s,0,0); (1,0,0), 0)` and `Y = (0, (0,t,0); (0,1,0), 0)`.
pub struct Gagola {
    pub zorn: QuadraticAlgebra,
    pub x: Element,
    pub y: Element,
    /// `1, X, Y, XY`
    pub basis: Vec<Element>,
    pub subspace: Subspace,
}

impl Gagola {
    pub fn new(field: &Field) -> Result<Gagola> {
        if !field.is_ratfun() || field.characteristic() != 2 {
            return Err(Error::InvalidParams("gagola-B needs GF(2)(s,t)".into()));
        }
        let zorn = QuadraticAlgebra::zorn(field);
        let (s, t) = (field.var(0)?, field.var(1)?);
        let a = zorn.algebra();
        let x = a.basis(2).scale(&s).add_scaled(&field.one(), &a.basis(5));
        let y = a.basis(3).scale(&t).add_scaled(&field.one(), &a.basis(6));
        let subspace = a.generated(Closure::Subalgebra, &[zorn.unit().clone(), x.clone(), y.clone()])?;
        let basis = vec![zorn.unit().clone(), x.clone(), y.clone(), a.mul(&x, &y)];
        Ok(Gagola {
            zorn,
            x,
            y,
            basis,
            subspace,
        })
    }

    pub fn restricted(&self) -> Result<Algebra> {
        self.zorn.algebra().restrict(&self.basis, names(&["1", "X", "Y", "XY"]))
    }
}
