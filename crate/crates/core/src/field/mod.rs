//! Exact scalars: prime fields GF(p), the rationals, and the bivariate
//! rational-function field GF(p)(s,t).
//!
//! A [`Field`] is a validated handle; [`FieldElement`]s carry enough data
//! (the modulus, for the finite families) to do arithmetic on their own, so
//! the usual operators work on references. Mixing elements of different
//! fields in an operator is a programming error and panics; [`Field::eq`]
//! is the checked comparison.

mod modp;
pub mod poly2;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
pub use poly2::Poly2;

/// Serializable description of a field, as it appears in algebra files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldDescriptor {
    Prime {
        p: u64,
    },
    Rationals,
    Ratfun2 {
        p: u64,
        #[serde(default = "default_vars")]
        vars: [String; 2],
    },
}

fn default_vars() -> [String; 2] {
    ["s".to_string(), "t".to_string()]
}

impl FromStr for FieldDescriptor {
    type Err = Error;

    /// Accepts `gf<p>`, `GF(<p>)`, `q`, `rationals`, and `gf<p>(s,t)`.
    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = norm.to_ascii_lowercase();
        if lower == "q" || lower == "rationals" || lower == "qq" {
            return Ok(FieldDescriptor::Rationals);
        }
        let bad = || Error::Format(format!("unrecognized field `{s}`"));
        if !lower.starts_with("gf") {
            return Err(bad());
        }
        // ASCII lowercasing keeps byte offsets, so `norm` and `lower` align.
        let mut pos = 2;
        let p_str = if lower[pos..].starts_with('(') {
            let close = lower[pos..].find(')').ok_or_else(bad)? + pos;
            let inner = &lower[pos + 1..close];
            pos = close + 1;
            inner
        } else {
            let len = lower[pos..].chars().take_while(char::is_ascii_digit).count();
            let digits = &lower[pos..pos + len];
            pos += len;
            digits
        };
        let p: u64 = p_str.parse().map_err(|_| bad())?;
        let rest = &norm[pos..];
        if rest.is_empty() {
            return Ok(FieldDescriptor::Prime { p });
        }
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let names: Vec<&str> = inner.split(',').collect();
        if names.len() != 2 || names.iter().any(|n| n.is_empty()) {
            return Err(bad());
        }
        Ok(FieldDescriptor::Ratfun2 {
            p,
            vars: [names[0].to_string(), names[1].to_string()],
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Prime(u64),
    Rationals,
    RatFun2 { p: u64, vars: Arc<[String; 2]> },
}

/// Validated field handle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    kind: Kind,
}

/// Quotient of two bivariate polynomials over GF(p). Not kept in lowest
/// terms; only cheap cancellations are applied.
#[derive(Clone, Debug)]
pub struct RatFun {
    num: Poly2,
    den: Poly2,
}

impl RatFun {
    pub fn numerator(&self) -> &Poly2 {
        &self.num
    }

    pub fn denominator(&self) -> &Poly2 {
        &self.den
    }

    fn new(num: Poly2, den: Poly2) -> Self {
        debug_assert!(!den.is_zero());
        let mut r = RatFun { num, den };
        r.normalize();
        r
    }

    fn normalize(&mut self) {
        let p = self.num.modulus();
        if self.num.is_zero() {
            self.den = Poly2::one(p);
            return;
        }
        if let (Some(a), Some(b)) = (self.num.monomial_content(), self.den.monomial_content()) {
            let common = (a.0.min(b.0), a.1.min(b.1));
            if common != (0, 0) {
                self.num = self.num.shift_down(common);
                self.den = self.den.shift_down(common);
            }
        }
        if let Some(c) = self.den.as_constant() {
            if c != 1 {
                self.num = self.num.scale(modp::inv(c, p));
                self.den = Poly2::one(p);
            }
            return;
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            self.num = q;
            self.den = Poly2::one(p);
            return;
        }
        if let Some(q) = self.den.div_exact(&self.num) {
            self.num = Poly2::one(p);
            self.den = q;
            return;
        }
        // Monic denominator.
        if let Some((_, lc)) = self.den.leading() {
            if lc != 1 {
                let li = modp::inv(lc, p);
                self.num = self.num.scale(li);
                self.den = self.den.scale(li);
            }
        }
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Gf { v: u64, p: u64 },
    Q(BigRational),
    RatFun(Box<RatFun>),
}

/// An exact scalar in one of the three supported field families.
#[derive(Clone, Debug)]
pub struct FieldElement(Repr);

impl Field {
    pub fn new(desc: &FieldDescriptor) -> Result<Field> {
        match desc {
            FieldDescriptor::Prime { p } => Field::prime(*p),
            FieldDescriptor::Rationals => Ok(Field::rationals()),
            FieldDescriptor::Ratfun2 { p, vars } => Field::ratfun2(*p, vars.clone()),
        }
    }

    pub fn prime(p: u64) -> Result<Field> {
        if !modp::is_prime(p) || p >= 1 << 62 {
            return Err(Error::NotPrime(p));
        }
        Ok(Field { kind: Kind::Prime(p) })
    }

    pub fn rationals() -> Field {
        Field { kind: Kind::Rationals }
    }

    pub fn ratfun2(p: u64, vars: [String; 2]) -> Result<Field> {
        if !modp::is_prime(p) || p >= 1 << 62 {
            return Err(Error::NotPrime(p));
        }
        Ok(Field {
            kind: Kind::RatFun2 {
                p,
                vars: Arc::new(vars),
            },
        })
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        match &self.kind {
            Kind::Prime(p) => FieldDescriptor::Prime { p: *p },
            Kind::Rationals => FieldDescriptor::Rationals,
            Kind::RatFun2 { p, vars } => FieldDescriptor::Ratfun2 {
                p: *p,
                vars: (**vars).clone(),
            },
        }
    }

    pub fn characteristic(&self) -> u64 {
        match &self.kind {
            Kind::Prime(p) | Kind::RatFun2 { p, .. } => *p,
            Kind::Rationals => 0,
        }
    }

    /// Number of elements for finite fields.
    pub fn order(&self) -> Option<u64> {
        match &self.kind {
            Kind::Prime(p) => Some(*p),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn is_rationals(&self) -> bool {
        matches!(self.kind, Kind::Rationals)
    }

    pub fn is_ratfun(&self) -> bool {
        matches!(self.kind, Kind::RatFun2 { .. })
    }

    pub fn var_names(&self) -> Option<&[String; 2]> {
        match &self.kind {
            Kind::RatFun2 { vars, .. } => Some(vars),
            _ => None,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.int(0)
    }

    pub fn one(&self) -> FieldElement {
        self.int(1)
    }

    /// Image of an integer under the canonical map Z -> F.
    pub fn int(&self, n: i64) -> FieldElement {
        FieldElement(match &self.kind {
            Kind::Prime(p) => Repr::Gf {
                v: modp::from_i64(n, *p),
                p: *p,
            },
            Kind::Rationals => Repr::Q(BigRational::from_integer(BigInt::from(n))),
            Kind::RatFun2 { p, .. } => Repr::RatFun(Box::new(RatFun {
                num: Poly2::constant(*p, modp::from_i64(n, *p)),
                den: Poly2::one(*p),
            })),
        })
    }

    /// The rational number `num/den`; only valid over the rationals.
    pub fn rational(&self, num: i64, den: i64) -> Result<FieldElement> {
        if !self.is_rationals() {
            return Err(Error::FieldMismatch);
        }
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElement(Repr::Q(BigRational::new(num.into(), den.into()))))
    }

    /// The generator `s` (index 0) or `t` (index 1) of GF(p)(s,t).
    pub fn var(&self, index: usize) -> Result<FieldElement> {
        match &self.kind {
            Kind::RatFun2 { p, .. } if index < 2 => {
                let e = if index == 0 { (1, 0) } else { (0, 1) };
                Ok(self.ratfun(Poly2::monomial(*p, e, 1), Poly2::one(*p))?)
            }
            Kind::RatFun2 { .. } => Err(Error::IndexOutOfRange { index, dim: 2 }),
            _ => Err(Error::FieldMismatch),
        }
    }

    pub fn ratfun(&self, num: Poly2, den: Poly2) -> Result<FieldElement> {
        match &self.kind {
            Kind::RatFun2 { p, .. } if num.modulus() == *p && den.modulus() == *p => {
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(FieldElement(Repr::RatFun(Box::new(RatFun::new(num, den)))))
            }
            _ => Err(Error::FieldMismatch),
        }
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        match (&self.kind, &x.0) {
            (Kind::Prime(p), Repr::Gf { p: q, .. }) => p == q,
            (Kind::Rationals, Repr::Q(_)) => true,
            (Kind::RatFun2 { p, .. }, Repr::RatFun(r)) => r.num.modulus() == *p,
            _ => false,
        }
    }

    /// Equality test that rejects elements of different fields.
    pub fn eq(&self, a: &FieldElement, b: &FieldElement) -> Result<bool> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::FieldMismatch);
        }
        Ok(a == b)
    }

    /// `add`, `neg` and `mul` never fail; `inv` reports division by zero.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if !self.contains(a) {
            return Err(Error::FieldMismatch);
        }
        a.inv()
    }

    /// Every element exactly once, in increasing residue order.
    pub fn enumerate(&self) -> Result<impl Iterator<Item = FieldElement> + '_> {
        match self.kind {
            Kind::Prime(p) => Ok((0..p).map(move |v| FieldElement(Repr::Gf { v, p }))),
            _ => Err(Error::InfiniteField(self.to_string())),
        }
    }

    /// Deterministic pseudo-random element with small height, used by the
    /// sampling checks.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        match &self.kind {
            Kind::Prime(p) => FieldElement(Repr::Gf {
                v: rng.gen_range(0..*p),
                p: *p,
            }),
            Kind::Rationals => {
                let num: i64 = rng.gen_range(-9..=9);
                let den: i64 = rng.gen_range(1..=6);
                FieldElement(Repr::Q(BigRational::new(num.into(), den.into())))
            }
            Kind::RatFun2 { p, .. } => {
                let num = random_poly(rng, *p, 3);
                let mut den = if rng.gen_bool(0.5) {
                    random_poly(rng, *p, 2)
                } else {
                    Poly2::one(*p)
                };
                if den.is_zero() {
                    den = Poly2::one(*p);
                }
                FieldElement(Repr::RatFun(Box::new(RatFun::new(num, den))))
            }
        }
    }

    /// Textual encoding used by algebra files: decimal residue strings for
    /// GF(p), `"num/den"` or `"int"` for rationals, and a `{"num","den"}`
    /// object of monomial exponent lists for rational functions.
    pub fn encode(&self, x: &FieldElement) -> Value {
        match &x.0 {
            Repr::Gf { v, .. } => Value::String(v.to_string()),
            Repr::Q(q) => Value::String(format_rational(q)),
            Repr::RatFun(r) => {
                let p = r.num.modulus();
                let enc = |poly: &Poly2| -> Value {
                    Value::Array(
                        poly.terms()
                            .map(|((i, j), c)| {
                                if p == 2 {
                                    json!([i, j])
                                } else {
                                    json!({"e": [i, j], "c": c})
                                }
                            })
                            .collect(),
                    )
                };
                json!({"num": enc(&r.num), "den": enc(&r.den)})
            }
        }
    }

    pub fn decode(&self, v: &Value) -> Result<FieldElement> {
        match &self.kind {
            Kind::Prime(p) => {
                let n: i128 = match v {
                    Value::String(s) => s
                        .trim()
                        .parse()
                        .map_err(|_| Error::Format(format!("bad residue `{s}`")))?,
                    Value::Number(n) => n.as_i64().ok_or_else(|| Error::Format(format!("bad residue {n}")))? as i128,
                    other => return Err(Error::Format(format!("bad residue {other}"))),
                };
                let r = n.rem_euclid(*p as i128) as u64;
                Ok(FieldElement(Repr::Gf { v: r, p: *p }))
            }
            Kind::Rationals => {
                let s = match v {
                    Value::String(s) => s.clone(),
                    Value::Number(n) => n.to_string(),
                    other => return Err(Error::Format(format!("bad rational {other}"))),
                };
                parse_rational(&s).map(|q| FieldElement(Repr::Q(q)))
            }
            Kind::RatFun2 { p, .. } => {
                let p = *p;
                let obj = v
                    .as_object()
                    .ok_or_else(|| Error::Format(format!("expected {{num, den}} object, got {v}")))?;
                let dec = |key: &str, default_one: bool| -> Result<Poly2> {
                    let Some(list) = obj.get(key) else {
                        return if default_one {
                            Ok(Poly2::one(p))
                        } else {
                            Err(Error::Format(format!("missing `{key}`")))
                        };
                    };
                    let arr = list
                        .as_array()
                        .ok_or_else(|| Error::Format(format!("`{key}` must be a list of monomials")))?;
                    let mut terms = Vec::with_capacity(arr.len());
                    for m in arr {
                        terms.push(decode_monomial(m, p)?);
                    }
                    Ok(Poly2::from_terms(p, terms))
                };
                let num = dec("num", false)?;
                let den = dec("den", true)?;
                self.ratfun(num, den)
            }
        }
    }

    pub fn format(&self, x: &FieldElement) -> String {
        match (&x.0, self.var_names()) {
            (Repr::RatFun(r), Some(vars)) => format_ratfun(r, vars),
            _ => x.to_string(),
        }
    }
}

impl Field {
    /// Like [`Field::random`], but rational functions come out as polynomials.
    pub fn random_integral<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        match &self.kind {
            Kind::RatFun2 { p, .. } => FieldElement(Repr::RatFun(Box::new(RatFun::new(
                random_poly(rng, *p, 3),
                Poly2::one(*p),
            )))),
            _ => self.random(rng),
        }
    }
}

fn random_poly<R: Rng + ?Sized>(rng: &mut R, p: u64, terms: usize) -> Poly2 {
    Poly2::from_terms(
        p,
        (0..terms).map(|_| ((rng.gen_range(0..3), rng.gen_range(0..3)), rng.gen_range(1..p))),
    )
}

fn decode_monomial(m: &Value, p: u64) -> Result<(poly2::Exponent, u64)> {
    let bad = || Error::Format(format!("bad monomial {m}"));
    let exps = |e: &Value| -> Result<(u32, u32)> {
        let arr = e.as_array().ok_or_else(bad)?;
        if arr.len() < 2 {
            return Err(bad());
        }
        let i = arr[0].as_u64().ok_or_else(bad)? as u32;
        let j = arr[1].as_u64().ok_or_else(bad)? as u32;
        Ok((i, j))
    };
    let coef = |c: &Value| -> Result<u64> {
        let n = match c {
            Value::Number(n) => n.as_i64().ok_or_else(bad)?,
            Value::String(s) => s.trim().parse().map_err(|_| bad())?,
            _ => return Err(bad()),
        };
        Ok(modp::from_i64(n, p))
    };
    match m {
        Value::Array(arr) => {
            let e = exps(m)?;
            let c = match arr.get(2) {
                Some(c) => coef(c)?,
                None => 1,
            };
            Ok((e, c))
        }
        Value::Object(o) => {
            let e = exps(o.get("e").ok_or_else(bad)?)?;
            let c = match o.get("c") {
                Some(c) => coef(c)?,
                None => 1,
            };
            Ok((e, c))
        }
        _ => Err(bad()),
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Format(format!("bad rational `{s}`"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn format_ratfun(r: &RatFun, vars: &[String; 2]) -> String {
    let num = r.num.display_with(vars).to_string();
    if r.den.as_constant() == Some(1) {
        if r.num.len() > 1 {
            format!("({num})")
        } else {
            num
        }
    } else {
        format!("({num})/({})", r.den.display_with(vars))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Prime(p) => write!(f, "GF({p})"),
            Kind::Rationals => write!(f, "Q"),
            Kind::RatFun2 { p, vars } => write!(f, "GF({p})({},{})", vars[0], vars[1]),
        }
    }
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Gf { v, .. } => *v == 0,
            Repr::Q(q) => q.is_zero(),
            Repr::RatFun(r) => r.num.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Gf { v, .. } => *v == 1,
            Repr::Q(q) => q.is_one(),
            Repr::RatFun(r) => r.num == r.den,
        }
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElement(match &self.0 {
            Repr::Gf { v, p } => Repr::Gf {
                v: modp::inv(*v, *p),
                p: *p,
            },
            Repr::Q(q) => Repr::Q(q.recip()),
            Repr::RatFun(r) => Repr::RatFun(Box::new(RatFun::new(r.den.clone(), r.num.clone()))),
        }))
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement> {
        Ok(self * &other.inv()?)
    }

    /// `self^n` for `n >= 0`.
    pub fn pow(&self, mut n: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    pub fn zero_like(&self) -> FieldElement {
        self.int_like(0)
    }

    pub fn one_like(&self) -> FieldElement {
        self.int_like(1)
    }

    fn int_like(&self, n: i64) -> FieldElement {
        FieldElement(match &self.0 {
            Repr::Gf { p, .. } => Repr::Gf {
                v: modp::from_i64(n, *p),
                p: *p,
            },
            Repr::Q(_) => Repr::Q(BigRational::from_integer(n.into())),
            Repr::RatFun(r) => {
                let p = r.num.modulus();
                Repr::RatFun(Box::new(RatFun {
                    num: Poly2::constant(p, modp::from_i64(n, p)),
                    den: Poly2::one(p),
                }))
            }
        })
    }

    /// Multiplies by an integer.
    pub fn times(&self, n: i64) -> FieldElement {
        self * &self.int_like(n)
    }

    /// Residue for GF(p) elements.
    pub fn residue(&self) -> Option<u64> {
        match &self.0 {
            Repr::Gf { v, .. } => Some(*v),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Q(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_ratfun(&self) -> Option<&RatFun> {
        match &self.0 {
            Repr::RatFun(r) => Some(r),
            _ => None,
        }
    }

    /// Sign for rationals (`-1`, `0`, `1`); `None` for the other families.
    pub fn signum(&self) -> Option<i32> {
        self.as_rational().map(|q| q.signum().to_i32().unwrap_or(0))
    }

    /// Total term count of numerator and denominator; 1 for other families.
    pub fn size(&self) -> usize {
        match &self.0 {
            Repr::RatFun(r) => r.num.len() + r.den.len(),
            _ => 1,
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Gf { v, p }, Repr::Gf { v: w, p: q }) => v == w && p == q,
            (Repr::Q(a), Repr::Q(b)) => a == b,
            (Repr::RatFun(a), Repr::RatFun(b)) => {
                a.num.modulus() == b.num.modulus() && a.num.mul(&b.den) == b.num.mul(&a.den)
            }
            _ => false,
        }
    }
}

impl Eq for FieldElement {}

fn mismatch() -> ! {
    panic!("arithmetic on elements of different fields")
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        FieldElement(match (&self.0, &rhs.0) {
            (Repr::Gf { v, p }, Repr::Gf { v: w, p: q }) if p == q => Repr::Gf {
                v: modp::add(*v, *w, *p),
                p: *p,
            },
            (Repr::Q(a), Repr::Q(b)) => Repr::Q(a + b),
            (Repr::RatFun(a), Repr::RatFun(b)) => {
                if a.num.is_zero() {
                    return rhs.clone();
                }
                if b.num.is_zero() {
                    return self.clone();
                }
                let r = if a.den == b.den {
                    RatFun::new(a.num.add(&b.num), a.den.clone())
                } else {
                    RatFun::new(a.num.mul(&b.den).add(&b.num.mul(&a.den)), a.den.mul(&b.den))
                };
                Repr::RatFun(Box::new(r))
            }
            _ => mismatch(),
        })
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement(match &self.0 {
            Repr::Gf { v, p } => Repr::Gf {
                v: modp::neg(*v, *p),
                p: *p,
            },
            Repr::Q(a) => Repr::Q(-a),
            Repr::RatFun(r) => Repr::RatFun(Box::new(RatFun {
                num: r.num.neg(),
                den: r.den.clone(),
            })),
        })
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        match (&self.0, &rhs.0) {
            (Repr::Gf { v, p }, Repr::Gf { v: w, p: q }) if p == q => FieldElement(Repr::Gf {
                v: modp::sub(*v, *w, *p),
                p: *p,
            }),
            (Repr::Q(a), Repr::Q(b)) => FieldElement(Repr::Q(a - b)),
            _ => self + &(-rhs),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        FieldElement(match (&self.0, &rhs.0) {
            (Repr::Gf { v, p }, Repr::Gf { v: w, p: q }) if p == q => Repr::Gf {
                v: modp::mul(*v, *w, *p),
                p: *p,
            },
            (Repr::Q(a), Repr::Q(b)) => Repr::Q(a * b),
            (Repr::RatFun(a), Repr::RatFun(b)) => {
                if a.num.is_zero() || b.num.is_zero() {
                    return self.zero_like();
                }
                if let Some(c) = a.num.as_constant().filter(|_| a.den.as_constant() == Some(1)) {
                    return FieldElement(Repr::RatFun(Box::new(RatFun {
                        num: b.num.scale(c),
                        den: b.den.clone(),
                    })));
                }
                if let Some(c) = b.num.as_constant().filter(|_| b.den.as_constant() == Some(1)) {
                    return FieldElement(Repr::RatFun(Box::new(RatFun {
                        num: a.num.scale(c),
                        den: a.den.clone(),
                    })));
                }
                Repr::RatFun(Box::new(RatFun::new(a.num.mul(&b.num), a.den.mul(&b.den))))
            }
            _ => mismatch(),
        })
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Gf { v, .. } => write!(f, "{v}"),
            Repr::Q(q) => write!(f, "{}", format_rational(q)),
            Repr::RatFun(r) => write!(f, "{}", format_ratfun(r, &default_vars())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf2st() -> Field {
        Field::ratfun2(2, default_vars()).unwrap()
    }

    #[test]
    fn make_field_examples() {
        assert_eq!(Field::prime(3).unwrap().characteristic(), 3);
        assert_eq!(Field::rationals().characteristic(), 0);
        assert_eq!(Field::prime(4), Err(Error::NotPrime(4)));
        assert_eq!(Field::prime(1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn arith_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(&f3.int(2) + &f3.int(2), f3.int(1));
        let q = Field::rationals();
        assert_eq!(q.inv(&q.rational(2, 3).unwrap()).unwrap(), q.rational(3, 2).unwrap());
        assert_eq!(q.inv(&q.zero()), Err(Error::DivisionByZero));
        let k = gf2st();
        let s = k.var(0).unwrap();
        let t = k.var(1).unwrap();
        let s_over_t = s.checked_div(&t).unwrap();
        let t_over_s = t.checked_div(&s).unwrap();
        assert!((&s_over_t * &t_over_s).is_one());
        assert_eq!(&s_over_t * &t_over_s, k.one());
    }

    #[test]
    fn eq_examples() {
        let k = gf2st();
        let s = k.var(0).unwrap();
        let t = k.var(1).unwrap();
        let a = Poly2::monomial(2, (1, 0), 1);
        let b = Poly2::monomial(2, (0, 1), 1);
        // s/t vs (s t)/t^2, built without cancellation
        let lhs = FieldElement(Repr::RatFun(Box::new(RatFun {
            num: a.clone(),
            den: b.clone(),
        })));
        let rhs = FieldElement(Repr::RatFun(Box::new(RatFun {
            num: a.mul(&b),
            den: b.mul(&b),
        })));
        assert!(k.eq(&lhs, &rhs).unwrap());
        assert!(!k.eq(&s, &t).unwrap());
        let q = Field::rationals();
        assert!(q.eq(&q.rational(2, 4).unwrap(), &q.rational(1, 2).unwrap()).unwrap());
        assert_eq!(q.eq(&q.one(), &k.one()), Err(Error::FieldMismatch));
    }

    #[test]
    fn enumerate_examples() {
        let f2 = Field::prime(2).unwrap();
        let all: Vec<_> = f2.enumerate().unwrap().collect();
        assert_eq!(all, vec![f2.zero(), f2.one()]);
        assert_eq!(Field::prime(3).unwrap().enumerate().unwrap().count(), 3);
        assert!(matches!(
            Field::rationals().enumerate().map(|_| ()),
            Err(Error::InfiniteField(_))
        ));
    }

    #[test]
    fn characteristic_is_additive_order() {
        for p in [2u64, 3, 5, 7, 11] {
            let f = Field::prime(p).unwrap();
            let mut acc = f.zero();
            for n in 1..=p {
                acc = &acc + &f.one();
                assert_eq!(acc.is_zero(), n == p, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn exhaustive_axioms_small_primes() {
        for p in [2u64, 3] {
            let f = Field::prime(p).unwrap();
            let els: Vec<_> = f.enumerate().unwrap().collect();
            for a in &els {
                if !a.is_zero() {
                    assert!((a * &a.inv().unwrap()).is_one());
                }
                for b in &els {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    for c in &els {
                        assert_eq!(&(a + b) + c, a + &(b + c));
                        assert_eq!(&(a * b) * c, a * &(b * c));
                        assert_eq!(a * &(b + c), &(a * b) + &(a * c));
                    }
                }
            }
        }
    }

    #[test]
    fn sampled_axioms_other_fields() {
        let fields = [
            Field::prime(101).unwrap(),
            Field::rationals(),
            gf2st(),
            Field::ratfun2(3, default_vars()).unwrap(),
        ];
        for f in &fields {
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            for _ in 0..128 {
                let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
                assert_eq!(&(&a + &b) + &c, &a + &(&b + &c), "{f}");
                assert_eq!(&(&a * &b) * &c, &a * &(&b * &c), "{f}");
                assert_eq!(&a * &b, &b * &a, "{f}");
                assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c), "{f}");
                assert!((&a - &a).is_zero());
                if !a.is_zero() {
                    assert!((&a * &a.inv().unwrap()).is_one(), "{f}: {a}");
                }
            }
        }
    }

    #[test]
    fn ratfun_equality_is_a_congruence() {
        let f = gf2st();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..128 {
            let a = f.random(&mut rng);
            let c = f.random(&mut rng);
            let k = f.random(&mut rng);
            let k = if k.is_zero() { f.one() } else { k };
            // b equals a but is stored with an extra factor k/k
            let ar = a.as_ratfun().unwrap();
            let kr = k.as_ratfun().unwrap();
            let b = FieldElement(Repr::RatFun(Box::new(RatFun {
                num: ar.num.mul(&kr.num).mul(&kr.den),
                den: ar.den.mul(&kr.num).mul(&kr.den),
            })));
            assert_eq!(a, b);
            assert_eq!(b, a);
            assert_eq!(&a + &c, &b + &c);
            assert_eq!(&a * &c, &b * &c);
        }
    }

    #[test]
    fn encoding_round_trip_examples() {
        let q = Field::rationals();
        assert_eq!(q.encode(&q.rational(-3, 6).unwrap()), json!("-1/2"));
        assert_eq!(q.decode(&json!("4")).unwrap(), q.int(4));
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.decode(&json!("-1")).unwrap(), f5.int(4));
        assert_eq!(f5.encode(&f5.int(3)), json!("3"));
        let k = gf2st();
        let x = k.var(0).unwrap().checked_div(&k.var(1).unwrap()).unwrap();
        let v = k.encode(&x);
        assert_eq!(v, json!({"num": [[1, 0]], "den": [[0, 1]]}));
        assert_eq!(k.decode(&v).unwrap(), x);
        let k3 = Field::ratfun2(3, default_vars()).unwrap();
        let y = k3.var(0).unwrap().times(2);
        assert_eq!(k3.decode(&k3.encode(&y)).unwrap(), y);
        assert!(k.decode(&json!({"num": [[0, 0]], "den": []})).is_err());
    }

    #[test]
    fn descriptor_parsing() {
        assert_eq!(
            "gf3".parse::<FieldDescriptor>().unwrap(),
            FieldDescriptor::Prime { p: 3 }
        );
        assert_eq!(
            "GF(5)".parse::<FieldDescriptor>().unwrap(),
            FieldDescriptor::Prime { p: 5 }
        );
        assert_eq!("Q".parse::<FieldDescriptor>().unwrap(), FieldDescriptor::Rationals);
        assert_eq!(
            "gf2(s,t)".parse::<FieldDescriptor>().unwrap(),
            FieldDescriptor::Ratfun2 {
                p: 2,
                vars: default_vars()
            }
        );
        assert_eq!(
            "GF(2)(a,b)".parse::<FieldDescriptor>().unwrap(),
            FieldDescriptor::Ratfun2 {
                p: 2,
                vars: ["a".into(), "b".into()]
            }
        );
        assert!("gfx".parse::<FieldDescriptor>().is_err());
        let d: FieldDescriptor = serde_json::from_value(json!({"kind": "ratfun2", "p": 2})).unwrap();
        assert_eq!(
            d,
            FieldDescriptor::Ratfun2 {
                p: 2,
                vars: default_vars()
            }
        );
    }
}
