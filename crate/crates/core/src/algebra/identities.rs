//! Polynomial identity checks.
//!
//! Identities of degree at most two in every argument are decided from basis
//! data alone: the diagonal terms and the symmetric cross terms are exactly
//! the coefficients of the expanded identity. Identities of higher degree are
//! evaluated on every element `x` of a small finite algebra (the remaining
//! arguments are linear, so basis vectors suffice), or on seeded random `x`.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use super::{Algebra, Element};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::options::Options;
use crate::report::{Check, Provenance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `(x,x,y) = 0`
    LeftAlternative,
    /// `(x,y,y) = 0`
    RightAlternative,
    /// `(x,y,x) = 0`
    Flexible,
    /// `(xy)(zx) = (x(yz))x`
    MiddleMoufang,
    /// `(x²,y,x) = 0`
    Jordan,
    /// `(x,y,z) = 0`
    Associative,
    /// `xy = yx`
    Commutative,
    /// `x² = 0`
    Anticommutative,
}

impl Identity {
    pub const ALL: [Identity; 8] = [
        Identity::LeftAlternative,
        Identity::RightAlternative,
        Identity::Flexible,
        Identity::MiddleMoufang,
        Identity::Jordan,
        Identity::Associative,
        Identity::Commutative,
        Identity::Anticommutative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::LeftAlternative => "left-alternative",
            Identity::RightAlternative => "right-alternative",
            Identity::Flexible => "flexible",
            Identity::MiddleMoufang => "middle-moufang",
            Identity::Jordan => "jordan",
            Identity::Associative => "associative",
            Identity::Commutative => "commutative",
            Identity::Anticommutative => "anticommutative",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Identity::MiddleMoufang | Identity::Associative => 3,
            Identity::Anticommutative => 1,
            _ => 2,
        }
    }

    /// The left side minus the right side; zero iff the identity holds at
    /// `args`.
    pub fn evaluate(self, a: &Algebra, args: &[Element]) -> Result<Element> {
        if args.len() != self.arity() {
            return Err(Error::Arity {
                expected: self.arity(),
                got: args.len(),
            });
        }
        for x in args {
            if x.dim() != a.dim() {
                return Err(Error::DimensionMismatch {
                    expected: a.dim(),
                    got: x.dim(),
                });
            }
        }
        Ok(match self {
            Identity::LeftAlternative => a.associator(&args[0], &args[0], &args[1]),
            Identity::RightAlternative => a.associator(&args[0], &args[1], &args[1]),
            Identity::Flexible => a.associator(&args[0], &args[1], &args[0]),
            Identity::MiddleMoufang => {
                let (x, y, z) = (&args[0], &args[1], &args[2]);
                let lhs = a.mul(&a.mul(x, y), &a.mul(z, x));
                let rhs = a.mul(&a.mul(x, &a.mul(y, z)), x);
                &lhs - &rhs
            }
            Identity::Jordan => a.associator(&a.square(&args[0]), &args[1], &args[0]),
            Identity::Associative => a.associator(&args[0], &args[1], &args[2]),
            Identity::Commutative => a.commutator(&args[0], &args[1]),
            Identity::Anticommutative => a.square(&args[0]),
        })
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Identity> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown identity {s:?}")))
    }
}

/// Arguments at which an identity fails, with the nonzero value there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityWitness {
    pub args: Vec<Element>,
    pub discrepancy: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub identity: Identity,
    pub passed: bool,
    pub provenance: Provenance,
    pub witness: Option<IdentityWitness>,
}

impl IdentityReport {
    fn pass(identity: Identity, provenance: Provenance) -> Self {
        IdentityReport {
            identity,
            passed: true,
            provenance,
            witness: None,
        }
    }

    fn fail(identity: Identity, provenance: Provenance, args: Vec<Element>, discrepancy: Element) -> Self {
        IdentityReport {
            identity,
            passed: false,
            provenance,
            witness: Some(IdentityWitness { args, discrepancy }),
        }
    }

    pub fn witness_json(&self, a: &Algebra) -> Option<Value> {
        self.witness.as_ref().map(|w| {
            json!({
                "args": w.args.iter().map(|x| a.encode_element(x)).collect::<Vec<_>>(),
                "discrepancy": a.encode_element(&w.discrepancy),
            })
        })
    }

    pub fn to_check(&self, a: &Algebra, name: impl Into<String>) -> Check {
        let mut check = Check::new(name, self.passed, self.provenance);
        if let Some(w) = self.witness_json(a) {
            check = check.with_witness(w);
        }
        check
    }
}

impl Algebra {
    pub fn check_identity(&self, identity: Identity, opts: &Options) -> IdentityReport {
        match identity {
            Identity::LeftAlternative => self.quadratic_check(identity, |s, x, y| s.associator(x, x, y), Slot::First),
            Identity::RightAlternative => self.quadratic_check(identity, |s, x, y| s.associator(y, x, x), Slot::Second),
            Identity::Flexible => self.quadratic_check(identity, |s, x, y| s.associator(x, y, x), Slot::First),
            Identity::Anticommutative => self.anticommutative_check(),
            Identity::Associative => self.multilinear_check(identity),
            Identity::Commutative => self.multilinear_check(identity),
            Identity::MiddleMoufang | Identity::Jordan => self.evaluated_check(identity, opts),
        }
    }

    /// `q(x, y)` quadratic in `x` and linear in `y`. The witness puts the
    /// quadratic argument in the position given by `slot`.
    fn quadratic_check(
        &self,
        identity: Identity,
        q: impl Fn(&Algebra, &Element, &Element) -> Element,
        slot: Slot,
    ) -> IdentityReport {
        let args = |x: Element, y: Element| match slot {
            Slot::First => vec![x, y],
            Slot::Second => vec![y, x],
        };
        let basis = self.basis_elements();
        for (i, ei) in basis.iter().enumerate() {
            for ek in &basis {
                let r = q(self, ei, ek);
                if !r.is_zero() {
                    return IdentityReport::fail(identity, Provenance::Certified, args(ei.clone(), ek.clone()), r);
                }
            }
            for ej in &basis[i + 1..] {
                let s = ei + ej;
                for ek in &basis {
                    let r = q(self, &s, ek);
                    if !r.is_zero() {
                        return IdentityReport::fail(identity, Provenance::Certified, args(s, ek.clone()), r);
                    }
                }
            }
        }
        IdentityReport::pass(identity, Provenance::Certified)
    }

    fn anticommutative_check(&self) -> IdentityReport {
        let identity = Identity::Anticommutative;
        let basis = self.basis_elements();
        for ei in &basis {
            let r = self.square(ei);
            if !r.is_zero() {
                return IdentityReport::fail(identity, Provenance::Certified, vec![ei.clone()], r);
            }
        }
        for (i, ei) in basis.iter().enumerate() {
            for ej in &basis[i + 1..] {
                let s = ei + ej;
                let r = self.square(&s);
                if !r.is_zero() {
                    return IdentityReport::fail(identity, Provenance::Certified, vec![s], r);
                }
            }
        }
        IdentityReport::pass(identity, Provenance::Certified)
    }

    fn multilinear_check(&self, identity: Identity) -> IdentityReport {
        let basis = self.basis_elements();
        let arity = identity.arity();
        let d = self.dim();
        let total = d.pow(arity as u32);
        for mut n in 0..total {
            let mut args = Vec::with_capacity(arity);
            for _ in 0..arity {
                args.push(basis[n % d].clone());
                n /= d;
            }
            args.reverse();
            let r = identity.evaluate(self, &args).expect("arity matches");
            if !r.is_zero() {
                return IdentityReport::fail(identity, Provenance::Certified, args, r);
            }
        }
        IdentityReport::pass(identity, Provenance::Certified)
    }

    /// Middle Moufang and Jordan: homogeneous in `x`, linear in the rest.
    /// Over a small finite field every `x` up to nonzero scalars is tried;
    /// otherwise `opts.samples` random `x`.
    fn evaluated_check(&self, identity: Identity, opts: &Options) -> IdentityReport {
        let witness = match self.element_count(opts.enum_cap) {
            Some(_) => {
                let found = self.projective_points().find_map(|x| self.residual_at(identity, &x));
                (found, Provenance::Exhaustive)
            }
            None => {
                let mut rng = opts.rng();
                let found = (0..opts.samples).find_map(|_| {
                    let x = self.random_element(&mut rng);
                    self.residual_at(identity, &x)
                });
                (found, Provenance::Sampled)
            }
        };
        match witness {
            (None, p) => IdentityReport::pass(identity, p),
            (Some((args, r)), p) => IdentityReport::fail(identity, p, args, r),
        }
    }

    /// Elements whose last nonzero coordinate is 1, in enumeration order.
    pub(crate) fn projective_points(&self) -> impl Iterator<Item = Element> + '_ {
        let q = self.field().order().expect("finite field");
        let count = self.element_count(u64::MAX).expect("count fits in u64");
        (1..count).filter_map(move |n| {
            let mut m = n;
            let mut top = 0;
            while m > 0 {
                top = m % q;
                m /= q;
            }
            (top == 1).then(|| self.element_at(n).expect("finite field"))
        })
    }

    /// First failure with `x` fixed and the linear arguments on the basis.
    fn residual_at(&self, identity: Identity, x: &Element) -> Option<(Vec<Element>, Element)> {
        let d = self.dim();
        let lx = self.left_mul(x);
        let rx = self.right_mul(x);
        let column = |m: &Matrix, c: usize| Element::new(m.column(c));
        match identity {
            Identity::MiddleMoufang => {
                // (xy)(zx) − R_x L_x (yz)
                let m = rx.mul(&lx);
                let xys: Vec<Element> = (0..d).map(|y| column(&lx, y)).collect();
                let zxs: Vec<Element> = (0..d).map(|z| column(&rx, z)).collect();
                for y in 0..d {
                    for z in 0..d {
                        let mut r = self.mul(&xys[y], &zxs[z]);
                        for (k, c) in self.entries(y, z) {
                            for row in 0..d {
                                let v = &m[(row, *k)];
                                if !v.is_zero() {
                                    r.0[row] = &r.0[row] - &(c * v);
                                }
                            }
                        }
                        if !r.is_zero() {
                            return Some((vec![x.clone(), self.basis(y), self.basis(z)], r));
                        }
                    }
                }
                None
            }
            Identity::Jordan => {
                // (x²y)x − x²(yx) = (R_x L_{x²} − L_{x²} R_x) y
                let ls = self.left_mul(&self.square(x));
                let c = rx.mul(&ls).sub(&ls.mul(&rx));
                (0..d).find_map(|y| {
                    let r = column(&c, y);
                    (!r.is_zero()).then(|| (vec![x.clone(), self.basis(y)], r))
                })
            }
            _ => unreachable!("only evaluated identities"),
        }
    }
}

#[derive(Clone, Copy)]
enum Slot {
    First,
    Second,
}

#[cfg(test)]
mod tests {
    use super::super::tests::{mat2, nil2};
    use super::*;
    use crate::field::Field;

    fn assert_reproduces(a: &Algebra, r: &IdentityReport) {
        let w = r.witness.as_ref().expect("witness on failure");
        let again = r.identity.evaluate(a, &w.args).unwrap();
        assert!(!again.is_zero());
        assert_eq!(again, w.discrepancy);
    }

    #[test]
    fn zero_algebra_passes_everything() {
        let f = Field::prime(3).unwrap();
        let z = Algebra::new(&f, 2, []).unwrap();
        for id in Identity::ALL {
            assert!(z.check_identity(id, &Options::default()).passed, "{id}");
        }
    }

    #[test]
    fn matrices_are_associative_not_commutative() {
        let f = Field::prime(5).unwrap();
        let m = mat2(&f);
        let opts = Options::default();
        for id in [
            Identity::Associative,
            Identity::LeftAlternative,
            Identity::MiddleMoufang,
            Identity::Jordan,
        ] {
            let r = m.check_identity(id, &opts);
            assert!(r.passed, "{id}");
        }
        let r = m.check_identity(Identity::Commutative, &opts);
        assert!(!r.passed);
        assert_reproduces(&m, &r);
        assert_eq!(
            m.check_identity(Identity::Jordan, &opts).provenance,
            Provenance::Exhaustive
        );

        let plus = m.derived(super::super::Sign::Plus);
        let r = plus.check_identity(Identity::Jordan, &opts);
        assert!(r.passed && r.provenance == Provenance::Exhaustive);
        assert!(plus.check_identity(Identity::Commutative, &opts).passed);
    }

    #[test]
    fn cross_term_witness_reproduces() {
        // e0·e1 = e0 alone: (x,x,y) vanishes on the diagonal only when the
        // cross term is checked.
        let f = Field::rationals();
        let a = Algebra::new(&f, 2, [(0, 1, 0, f.one()), (1, 0, 1, f.one())]).unwrap();
        for id in [
            Identity::LeftAlternative,
            Identity::RightAlternative,
            Identity::Flexible,
        ] {
            let r = a.check_identity(id, &Options::default());
            if !r.passed {
                assert_reproduces(&a, &r);
            }
        }
        let r = nil2(&f).check_identity(Identity::Anticommutative, &Options::default());
        assert!(!r.passed);
        assert_reproduces(&nil2(&f), &r);
    }

    #[test]
    fn sampled_over_rationals() {
        let f = Field::rationals();
        let m = mat2(&f);
        let r = m.check_identity(Identity::MiddleMoufang, &Options::default());
        assert!(r.passed);
        assert_eq!(r.provenance, Provenance::Sampled);
    }

    #[test]
    fn projective_points_cover_lines() {
        let f = Field::prime(3).unwrap();
        let a = Algebra::new(&f, 3, []).unwrap();
        assert_eq!(a.projective_points().count(), (27 - 1) / 2);
    }

    #[test]
    fn names_round_trip() {
        for id in Identity::ALL {
            assert_eq!(id.name().parse::<Identity>().unwrap(), id);
        }
        assert!("moufang".parse::<Identity>().is_err());
    }
}
