//! Finite-dimensional algebras given by structure constants
//! `e_i·e_j = Σ_k c_ij^k e_k`.

mod identities;
mod subspaces;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::{Matrix, Vector};
use crate::options::bounded_pow;

pub use identities::{Identity, IdentityReport, IdentityWitness};
pub use subspaces::{Closure, PowerChain, SubspaceKind};

/// Coefficient vector over the basis of an algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element(Vector);

impl Element {
    pub fn new(coords: Vector) -> Element {
        Element(coords)
    }

    pub fn zero(field: &Field, dim: usize) -> Element {
        Element(vec![field.zero(); dim])
    }

    pub fn basis(field: &Field, dim: usize, i: usize) -> Element {
        let mut v = vec![field.zero(); dim];
        v[i] = field.one();
        Element(v)
    }

    pub fn from_ints(field: &Field, xs: &[i64]) -> Element {
        Element(xs.iter().map(|&x| field.int(x)).collect())
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn into_coords(self) -> Vector {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(FieldElement::is_zero)
    }

    pub fn scale(&self, c: &FieldElement) -> Element {
        Element(self.0.iter().map(|x| x * c).collect())
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, c: &FieldElement, other: &Element) -> Element {
        Element(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| if b.is_zero() { a.clone() } else { a + &(c * b) })
                .collect(),
        )
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        assert_eq!(self.dim(), rhs.dim(), "element dimension");
        Element(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        assert_eq!(self.dim(), rhs.dim(), "element dimension");
        Element(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element(self.0.iter().map(|a| -a).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialProduct {
    /// `[x,y] = xy − yx`
    Commutator,
    /// `(x,y,z) = (xy)z − x(yz)`
    Associator,
    /// `x∘y = xy + yx`
    Jordan,
}

/// Which symmetrized product [`Algebra::derived`] materializes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    /// `a∘b = ab + ba`
    Plus,
    /// `[a,b] = ab − ba`
    Minus,
}

/// Sparse structure-constant algebra. Basis pairs absent from the table
/// multiply to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    field: Field,
    dim: usize,
    /// `table[i*dim + j]` lists `(k, c_ij^k)` with nonzero coefficients,
    /// sorted by `k`.
    table: Vec<Vec<(usize, FieldElement)>>,
    names: Vec<String>,
}

impl Algebra {
    /// Builds an algebra from `(i, j, k, c)` entries meaning `c_ij^k = c`.
    /// Zero coefficients are dropped; a repeated `(i,j,k)` is an error.
    pub fn new(
        field: &Field,
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, FieldElement)>,
    ) -> Result<Algebra> {
        let mut table: Vec<Vec<(usize, FieldElement)>> = vec![Vec::new(); dim * dim];
        for (i, j, k, c) in entries {
            for index in [i, j, k] {
                if index >= dim {
                    return Err(Error::IndexOutOfRange { index, dim });
                }
            }
            if !field.contains(&c) {
                return Err(Error::FieldMismatch);
            }
            let slot = &mut table[i * dim + j];
            if slot.iter().any(|(kk, _)| *kk == k) {
                return Err(Error::DuplicateEntry { i, j, k: Some(k) });
            }
            slot.push((k, c));
        }
        for slot in &mut table {
            slot.retain(|(_, c)| !c.is_zero());
            slot.sort_by_key(|(k, _)| *k);
        }
        Ok(Algebra {
            field: field.clone(),
            dim,
            table,
            names: (0..dim).map(|i| format!("e{i}")).collect(),
        })
    }

    /// Builds the table from a function giving each basis product.
    pub fn from_products(field: &Field, dim: usize, mut product: impl FnMut(usize, usize) -> Element) -> Algebra {
        let mut entries = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                let p = product(i, j);
                assert_eq!(p.dim(), dim, "basis product dimension");
                for (k, c) in p.0.into_iter().enumerate() {
                    if !c.is_zero() {
                        entries.push((i, j, k, c));
                    }
                }
            }
        }
        Algebra::new(field, dim, entries).expect("computed table is well formed")
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Algebra> {
        if names.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: names.len(),
            });
        }
        self.names = names;
        Ok(self)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Index of the basis element with this name.
    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Stored `(k, c)` pairs of `e_i·e_j`.
    pub fn entries(&self, i: usize, j: usize) -> &[(usize, FieldElement)] {
        &self.table[i * self.dim + j]
    }

    pub fn zero(&self) -> Element {
        Element::zero(&self.field, self.dim)
    }

    pub fn basis(&self, i: usize) -> Element {
        Element::basis(&self.field, self.dim, i)
    }

    pub fn basis_elements(&self) -> Vec<Element> {
        (0..self.dim).map(|i| self.basis(i)).collect()
    }

    pub fn element(&self, coords: Vector) -> Result<Element> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: coords.len(),
            });
        }
        Ok(Element(coords))
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Element {
        let mut out = self.zero();
        for (k, c) in self.entries(i, j) {
            out.0[*k] = c.clone();
        }
        out
    }

    /// Bilinear extension of the table. Panics on dimension mismatch; see
    /// [`Algebra::try_mul`].
    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        assert_eq!(x.dim(), self.dim, "left factor dimension");
        assert_eq!(y.dim(), self.dim, "right factor dimension");
        let mut out = vec![self.field.zero(); self.dim];
        for (i, xi) in x.0.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.0.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let entries = &self.table[i * self.dim + j];
                if entries.is_empty() {
                    continue;
                }
                let xy = xi * yj;
                for (k, c) in entries {
                    out[*k] = &out[*k] + &(&xy * c);
                }
            }
        }
        Element(out)
    }

    pub fn try_mul(&self, x: &Element, y: &Element) -> Result<Element> {
        for e in [x, y] {
            if e.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: e.dim(),
                });
            }
        }
        Ok(self.mul(x, y))
    }

    pub fn square(&self, x: &Element) -> Element {
        self.mul(x, x)
    }

    pub fn commutator(&self, x: &Element, y: &Element) -> Element {
        &self.mul(x, y) - &self.mul(y, x)
    }

    pub fn associator(&self, x: &Element, y: &Element, z: &Element) -> Element {
        &self.mul(&self.mul(x, y), z) - &self.mul(x, &self.mul(y, z))
    }

    pub fn jordan(&self, x: &Element, y: &Element) -> Element {
        &self.mul(x, y) + &self.mul(y, x)
    }

    pub fn special_product(&self, kind: SpecialProduct, args: &[Element]) -> Result<Element> {
        let expected = match kind {
            SpecialProduct::Associator => 3,
            _ => 2,
        };
        if args.len() != expected {
            return Err(Error::Arity {
                expected,
                got: args.len(),
            });
        }
        for a in args {
            if a.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: a.dim(),
                });
            }
        }
        Ok(match kind {
            SpecialProduct::Commutator => self.commutator(&args[0], &args[1]),
            SpecialProduct::Associator => self.associator(&args[0], &args[1], &args[2]),
            SpecialProduct::Jordan => self.jordan(&args[0], &args[1]),
        })
    }

    /// `(…((x_1 x_2) x_3) …) x_n`.
    pub fn left_normed(&self, xs: &[Element]) -> Result<Element> {
        let (first, rest) = xs.split_first().ok_or(Error::EmptyProduct)?;
        let mut acc = first.clone();
        for x in rest {
            acc = self.try_mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// Matrix of `L_a: x ↦ a·x` (side `Left`) or `R_a: x ↦ x·a`; column `j`
    /// is the image of `e_j`.
    pub fn mult_operator(&self, side: Side, a: &Element) -> Matrix {
        let d = self.dim;
        let mut m = Matrix::zeros(&self.field, d, d);
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for j in 0..d {
                let entries = match side {
                    Side::Left => self.entries(i, j),
                    Side::Right => self.entries(j, i),
                };
                for (k, c) in entries {
                    m[(*k, j)] = &m[(*k, j)] + &(ai * c);
                }
            }
        }
        m
    }

    pub fn left_mul(&self, a: &Element) -> Matrix {
        self.mult_operator(Side::Left, a)
    }

    pub fn right_mul(&self, a: &Element) -> Matrix {
        self.mult_operator(Side::Right, a)
    }

    /// The two-sided unit, if one exists.
    pub fn find_unit(&self) -> Option<Element> {
        let d = self.dim;
        // Unknown u = Σ u_m e_m; rows: (u·e_i)_k = δ_ik and (e_i·u)_k = δ_ik.
        let mut m = Matrix::zeros(&self.field, 2 * d * d, d);
        let mut rhs = vec![self.field.zero(); 2 * d * d];
        for i in 0..d {
            for mm in 0..d {
                for (k, c) in self.entries(mm, i) {
                    m[(i * d + k, mm)] = c.clone();
                }
                for (k, c) in self.entries(i, mm) {
                    m[(d * d + i * d + k, mm)] = c.clone();
                }
            }
            rhs[i * d + i] = self.field.one();
            rhs[d * d + i * d + i] = self.field.one();
        }
        m.solve(&rhs).map(Element)
    }

    pub fn is_unital(&self) -> bool {
        self.find_unit().is_some()
    }

    /// Two-sided inverse: some `y` with `x·y = y·x = 1`.
    pub fn invert_element(&self, x: &Element) -> Result<Option<Element>> {
        let unit = self.find_unit().ok_or(Error::NotUnital)?;
        Ok(self.invert_with_unit(x, &unit))
    }

    pub(crate) fn invert_with_unit(&self, x: &Element, unit: &Element) -> Option<Element> {
        let l = self.left_mul(x);
        let r = self.right_mul(x);
        let stacked = l.stack(&r);
        let mut rhs = unit.0.clone();
        rhs.extend(unit.0.iter().cloned());
        stacked.solve(&rhs).map(Element)
    }

    /// Same space with product `ab + ba` (`Plus`) or `ab − ba` (`Minus`).
    pub fn derived(&self, sign: Sign) -> Algebra {
        let derived = Algebra::from_products(&self.field, self.dim, |i, j| {
            let (a, b) = (self.basis_product(i, j), self.basis_product(j, i));
            match sign {
                Sign::Plus => &a + &b,
                Sign::Minus => &a - &b,
            }
        });
        Algebra {
            names: self.names.clone(),
            ..derived
        }
    }

    /// The algebra with basis reindexed: new basis element `n` is old basis
    /// element `perm[n]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Algebra> {
        let d = self.dim;
        let mut seen = vec![false; d];
        if perm.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: perm.len(),
            });
        }
        for &p in perm {
            if p >= d || seen[p] {
                return Err(Error::InvalidParams("not a permutation".into()));
            }
            seen[p] = true;
        }
        let mut inverse = vec![0; d];
        for (n, &o) in perm.iter().enumerate() {
            inverse[o] = n;
        }
        let mut entries = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for (k, c) in self.entries(perm[i], perm[j]) {
                    entries.push((i, j, inverse[*k], c.clone()));
                }
            }
        }
        Algebra::new(&self.field, d, entries)?.with_names(perm.iter().map(|&o| self.names[o].clone()).collect())
    }

    /// `q^d` for finite fields, when at most `cap`.
    pub fn element_count(&self, cap: u64) -> Option<u64> {
        bounded_pow(self.field.order()?, self.dim, cap)
    }

    /// Element number `index` in the enumeration order: base-`q` digits of
    /// `index`, least significant digit on basis element 0.
    pub fn element_at(&self, mut index: u64) -> Option<Element> {
        let q = self.field.order()?;
        let mut coords = Vec::with_capacity(self.dim);
        for _ in 0..self.dim {
            coords.push(self.field.int((index % q) as i64));
            index /= q;
        }
        Some(Element(coords))
    }

    /// All elements (zero first) when the field is finite and there are at
    /// most `cap` of them.
    pub fn elements(&self, cap: u64) -> Result<impl Iterator<Item = Element> + '_> {
        if !self.field.is_finite() {
            return Err(Error::InfiniteField(self.field.to_string()));
        }
        let count = self
            .element_count(cap)
            .ok_or_else(|| Error::Precondition(format!("more than {cap} elements to enumerate")))?;
        Ok((0..count).map(move |i| self.element_at(i).expect("finite field")))
    }

    /// Over rational function fields the coordinates are polynomials; every
    /// element is a scalar multiple of one of these.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        Element((0..self.dim).map(|_| self.field.random_integral(rng)).collect())
    }

    /// Human-readable form such as `2*e0 + u1`.
    pub fn format_element(&self, x: &Element) -> String {
        let terms: Vec<String> =
            x.0.iter()
                .zip(&self.names)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, n)| {
                    if c.is_one() {
                        n.clone()
                    } else {
                        format!("{}*{}", self.field.format(c), n)
                    }
                })
                .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    /// Coordinates as a JSON array of element encodings.
    pub fn encode_element(&self, x: &Element) -> serde_json::Value {
        serde_json::Value::Array(x.0.iter().map(|c| self.field.encode(c)).collect())
    }

    pub fn encode_matrix(&self, m: &Matrix) -> serde_json::Value {
        serde_json::Value::Array(
            (0..m.rows())
                .map(|r| serde_json::Value::Array(m.row(r).iter().map(|c| self.field.encode(c)).collect()))
                .collect(),
        )
    }

    pub fn decode_matrix(&self, v: &serde_json::Value) -> Result<Matrix> {
        let rows = v
            .as_array()
            .ok_or_else(|| Error::Format("map must be an array of rows".into()))?;
        if rows.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rows.len(),
            });
        }
        let mut out = Vec::with_capacity(self.dim);
        for (r, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Format(format!("map row {r} must be an array")))?;
            if row.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: row.len(),
                });
            }
            out.push(row.iter().map(|c| self.field.decode(c)).collect::<Result<Vec<_>>>()?);
        }
        Matrix::from_rows(&self.field, out)
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algebra of dimension {} over {}", self.dim, self.field)?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let p = self.basis_product(i, j);
                if !p.is_zero() {
                    writeln!(f, "  {}*{} = {}", self.names[i], self.names[j], self.format_element(&p))?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// `e² = f` over the given field, basis (e, f).
    pub(crate) fn nil2(field: &Field) -> Algebra {
        Algebra::new(field, 2, [(0, 0, 1, field.one())])
            .unwrap()
            .with_names(vec!["e".into(), "f".into()])
            .unwrap()
    }

    /// 2×2 matrices, basis (E11, E12, E21, E22).
    pub(crate) fn mat2(field: &Field) -> Algebra {
        let idx = |r: usize, c: usize| 2 * r + c;
        let mut entries = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    entries.push((idx(a, b), idx(b, c), idx(a, c), field.one()));
                }
            }
        }
        Algebra::new(field, 4, entries).unwrap()
    }

    #[test]
    fn make_algebra_examples() {
        let f = Field::prime(3).unwrap();
        let z = Algebra::new(&f, 2, []).unwrap();
        assert!(z.mul(&z.basis(0), &z.basis(1)).is_zero());
        assert_eq!(
            Algebra::new(&f, 8, [(0, 0, 9, f.one())]),
            Err(Error::IndexOutOfRange { index: 9, dim: 8 })
        );
        assert_eq!(
            Algebra::new(&f, 2, [(0, 0, 1, f.one()), (0, 0, 1, f.one())]),
            Err(Error::DuplicateEntry { i: 0, j: 0, k: Some(1) })
        );
    }

    #[test]
    fn operators_on_nil2() {
        let q = Field::rationals();
        let a = nil2(&q);
        assert!(a.left_mul(&a.basis(1)).is_zero());
        assert!(a.find_unit().is_none());
        let z = Algebra::new(&q, 2, []).unwrap();
        assert!(z.find_unit().is_none());
        assert_eq!(a.left_normed(&[a.basis(0)]).unwrap(), a.basis(0));
        assert!(a.left_normed(&[a.basis(0), a.basis(0), a.basis(0)]).unwrap().is_zero());
        assert_eq!(a.left_normed(&[]), Err(Error::EmptyProduct));
        assert!(matches!(a.invert_element(&a.basis(0)), Err(Error::NotUnital)));
    }

    #[test]
    fn matrices_unit_and_inverse() {
        let f = Field::prime(3).unwrap();
        let m = mat2(&f);
        let one = m.find_unit().unwrap();
        assert_eq!(one, Element::from_ints(&f, &[1, 0, 0, 1]));
        assert_eq!(m.left_mul(&one), Matrix::identity(&f, 4));
        let x = Element::from_ints(&f, &[1, 1, 0, 1]);
        let y = m.invert_element(&x).unwrap().unwrap();
        assert_eq!(y, Element::from_ints(&f, &[1, 2, 0, 1]));
        assert_eq!(m.invert_element(&y).unwrap().unwrap(), x);
        assert_eq!(m.invert_element(&m.basis(0)).unwrap(), None);
    }

    #[test]
    fn special_products_and_arity() {
        let f = Field::prime(5).unwrap();
        let m = mat2(&f);
        let x = m.basis(1);
        assert!(m.commutator(&x, &x).is_zero());
        assert_eq!(
            m.special_product(SpecialProduct::Associator, &[x.clone(), x.clone()]),
            Err(Error::Arity { expected: 3, got: 2 })
        );
        let j = m
            .special_product(SpecialProduct::Jordan, &[m.basis(1), m.basis(2)])
            .unwrap();
        assert_eq!(j, m.find_unit().unwrap());
    }

    #[test]
    fn derived_algebras() {
        let q = Field::rationals();
        let comm = nil2(&q);
        let minus = comm.derived(Sign::Minus);
        assert!((0..2).all(|i| (0..2).all(|j| minus.entries(i, j).is_empty())));
        let plus = comm.derived(Sign::Plus);
        assert_eq!(plus.basis_product(0, 0), Element::from_ints(&q, &[0, 2]));
    }

    #[test]
    fn permutation_relabels() {
        let q = Field::rationals();
        let a = nil2(&q);
        let p = a.permuted(&[1, 0]).unwrap();
        assert_eq!(p.basis_product(1, 1), p.basis(0));
        assert_eq!(p.names(), ["f", "e"]);
        assert!(a.permuted(&[0, 0]).is_err());
    }

    #[test]
    fn enumeration_order() {
        let f = Field::prime(3).unwrap();
        let a = Algebra::new(&f, 2, []).unwrap();
        let all: Vec<_> = a.elements(100).unwrap().collect();
        assert_eq!(all.len(), 9);
        assert!(all[0].is_zero());
        assert_eq!(all[1], a.basis(0));
        assert_eq!(all[3], a.basis(1));
        assert!(a.elements(5).is_err());
    }
}
