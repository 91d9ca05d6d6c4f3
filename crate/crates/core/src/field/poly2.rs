//! Sparse bivariate polynomials over GF(p).

use std::cell::Cell;
use std::collections::BTreeMap;
use std::fmt;

use super::modp;

/// Default cap on the number of stored terms of any single polynomial.
pub const DEFAULT_TERM_CAP: usize = 1 << 16;

thread_local! {
    static TERM_CAP: Cell<usize> = const { Cell::new(DEFAULT_TERM_CAP) };
}

/// Sets the term cap for the current thread. Arithmetic that produces a
/// polynomial with more terms than the cap panics with a diagnostic.
pub fn set_term_cap(cap: usize) {
    TERM_CAP.with(|c| c.set(cap.max(1)));
}

pub fn term_cap() -> usize {
    TERM_CAP.with(Cell::get)
}

/// Exponent pair `(i, j)` of the monomial `s^i t^j`.
pub type Exponent = (u32, u32);

/// Polynomial in two variables with coefficients in GF(p). Terms are kept
/// sorted lexicographically by exponent pair; zero coefficients are never
/// stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly2 {
    p: u64,
    terms: BTreeMap<Exponent, u64>,
}

impl Poly2 {
    pub fn zero(p: u64) -> Self {
        Poly2 {
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::monomial(p, (0, 0), c)
    }

    pub fn one(p: u64) -> Self {
        Self::constant(p, 1)
    }

    pub fn monomial(p: u64, e: Exponent, c: u64) -> Self {
        let mut out = Self::zero(p);
        let c = c % p;
        if c != 0 {
            out.terms.insert(e, c);
        }
        out
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing
    /// repeated exponents.
    pub fn from_terms(p: u64, terms: impl IntoIterator<Item = (Exponent, u64)>) -> Self {
        let mut out = Self::zero(p);
        for (e, c) in terms {
            out.add_term(e, c % p);
        }
        out
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponent, u64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    /// Returns `Some(c)` when the polynomial is the constant `c` (including 0).
    pub fn as_constant(&self) -> Option<u64> {
        match self.terms.len() {
            0 => Some(0),
            1 => self.terms.get(&(0, 0)).copied(),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(Exponent, u64)> {
        self.terms.iter().next_back().map(|(&e, &c)| (e, c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    fn add_term(&mut self, e: Exponent, c: u64) {
        if c == 0 {
            return;
        }
        let p = self.p;
        let slot = self.terms.entry(e).or_insert(0);
        *slot = modp::add(*slot, c, p);
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    fn check_cap(&self) {
        let cap = term_cap();
        if self.terms.len() > cap {
            panic!(
                "ratfun2 size guard: polynomial grew to {} terms (cap {cap}); \
                 unreduced fraction growth aborted",
                self.terms.len()
            );
        }
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        debug_assert_eq!(self.p, other.p);
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out.check_cap();
        out
    }

    pub fn neg(&self) -> Poly2 {
        Poly2 {
            p: self.p,
            terms: self.terms.iter().map(|(&e, &c)| (e, modp::neg(c, self.p))).collect(),
        }
    }

    pub fn sub(&self, other: &Poly2) -> Poly2 {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> Poly2 {
        let c = c % self.p;
        if c == 0 {
            return Self::zero(self.p);
        }
        Poly2 {
            p: self.p,
            terms: self.terms.iter().map(|(&e, &v)| (e, modp::mul(v, c, self.p))).collect(),
        }
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        debug_assert_eq!(self.p, other.p);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p;
        let mut out = Self::zero(p);
        for (&(a, b), &c) in &self.terms {
            for (&(x, y), &d) in &other.terms {
                out.add_term((a + x, b + y), modp::mul(c, d, p));
            }
        }
        out.check_cap();
        out
    }

    /// Multiplies by the monomial `c·s^i t^j`.
    pub fn mul_monomial(&self, e: Exponent, c: u64) -> Poly2 {
        let c = c % self.p;
        if c == 0 {
            return Self::zero(self.p);
        }
        Poly2 {
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), &v)| ((i + e.0, j + e.1), modp::mul(v, c, self.p)))
                .collect(),
        }
    }

    /// Componentwise minimum exponent over all terms: the largest monomial
    /// dividing the polynomial. `None` for the zero polynomial.
    pub fn monomial_content(&self) -> Option<Exponent> {
        let mut it = self.terms.keys();
        let first = *it.next()?;
        Some(it.fold(first, |(a, b), &(i, j)| (a.min(i), b.min(j))))
    }

    /// Divides by the monomial `s^i t^j`, which must divide every term.
    pub fn shift_down(&self, e: Exponent) -> Poly2 {
        Poly2 {
            p: self.p,
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), &c)| {
                    debug_assert!(i >= e.0 && j >= e.1);
                    ((i - e.0, j - e.1), c)
                })
                .collect(),
        }
    }

    /// Exact division: returns `q` with `self = q · divisor`, or `None` when
    /// `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly2) -> Option<Poly2> {
        let (lead_e, lead_c) = divisor.leading()?;
        let p = self.p;
        let lead_inv = modp::inv(lead_c, p);
        let mut rem = self.clone();
        let mut quot = Self::zero(p);
        while let Some((e, c)) = rem.leading() {
            if e.0 < lead_e.0 || e.1 < lead_e.1 {
                return None;
            }
            let qe = (e.0 - lead_e.0, e.1 - lead_e.1);
            let qc = modp::mul(c, lead_inv, p);
            quot.add_term(qe, qc);
            rem = rem.sub(&divisor.mul_monomial(qe, qc));
        }
        Some(quot)
    }

    pub fn eval(&self, s: u64, t: u64) -> u64 {
        let p = self.p;
        self.terms.iter().fold(0, |acc, (&(i, j), &c)| {
            let m = modp::mul(modp::pow(s, i as u64, p), modp::pow(t, j as u64, p), p);
            modp::add(acc, modp::mul(c, m, p), p)
        })
    }

    pub fn display_with<'a>(&'a self, vars: &'a [String; 2]) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, vars }
    }
}

struct PolyDisplay<'a> {
    poly: &'a Poly2,
    vars: &'a [String; 2],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), &c) in self.poly.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut parts = Vec::new();
            if c != 1 || (i == 0 && j == 0) {
                parts.push(c.to_string());
            }
            for (name, e) in self.vars.iter().zip([i, j]) {
                match e {
                    0 => {}
                    1 => parts.push(name.clone()),
                    _ => parts.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
