//! Distinguished subspaces: nucleus, centers, products, generated
//! subalgebras and ideals, and the power chain.

use std::fmt;
use std::str::FromStr;

use super::{Algebra, Element};
use crate::error::{Error, Result};
use crate::linalg::{EchelonBasis, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubspaceKind {
    Nucleus,
    CommutativeCenter,
    Center,
    Annihilator,
}

impl SubspaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SubspaceKind::Nucleus => "nucleus",
            SubspaceKind::CommutativeCenter => "commutative-center",
            SubspaceKind::Center => "center",
            SubspaceKind::Annihilator => "annihilator",
        }
    }
}

impl FromStr for SubspaceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<SubspaceKind> {
        [
            SubspaceKind::Nucleus,
            SubspaceKind::CommutativeCenter,
            SubspaceKind::Center,
            SubspaceKind::Annihilator,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| Error::InvalidParams(format!("unknown subspace kind {s:?}")))
    }
}

/// `A = A^1 ⊇ A^2 ⊇ …` with `A^n = Σ_{i+j=n} A^i A^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerChain {
    /// `powers[n-1] = A^n`. Ends with the zero space when nilpotent, else
    /// with the plateau that proves the chain never reaches zero.
    pub powers: Vec<Subspace>,
    /// Least `s` with `A^s = 0`.
    pub index: Option<usize>,
}

impl PowerChain {
    pub fn dims(&self) -> Vec<usize> {
        self.powers.iter().map(Subspace::dim).collect()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.index.is_some()
    }

    /// `A^n`, which is zero beyond the stored range of a nilpotent chain.
    pub fn power(&self, n: usize) -> Option<&Subspace> {
        match self.index {
            Some(s) if n >= s => self.powers.last(),
            _ => self.powers.get(n.checked_sub(1)?),
        }
    }
}

impl fmt::Display for PowerChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dims().iter().map(usize::to_string).collect();
        write!(f, "dims ({})", dims.join(","))?;
        match self.index {
            Some(s) => write!(f, ", nilpotency index {s}"),
            None => write!(f, ", not nilpotent"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    Subalgebra,
    Ideal,
}

impl Algebra {
    /// Elements `z` with `conditions(z)` all zero, where `conditions` is
    /// linear in `z`.
    fn linear_kernel(&self, conditions: impl Fn(&Element) -> Vec<Element>) -> Subspace {
        let d = self.dim();
        let images: Vec<Vec<Element>> = (0..d).map(|m| conditions(&self.basis(m))).collect();
        let mut rows = EchelonBasis::new(self.field(), d);
        let blocks = images.first().map_or(0, Vec::len);
        'outer: for b in 0..blocks {
            for k in 0..d {
                let row: Vec<_> = images.iter().map(|img| img[b].coords()[k].clone()).collect();
                if row.iter().all(|c| c.is_zero()) {
                    continue;
                }
                rows.insert(row);
                if rows.is_full() {
                    break 'outer;
                }
            }
        }
        rows.kernel()
    }

    pub fn special_subspace(&self, kind: SubspaceKind) -> Subspace {
        let basis = self.basis_elements();
        match kind {
            SubspaceKind::Nucleus => self.linear_kernel(|n| {
                let mut out = Vec::new();
                for x in &basis {
                    for y in &basis {
                        out.push(self.associator(n, x, y));
                        out.push(self.associator(x, n, y));
                        out.push(self.associator(x, y, n));
                    }
                }
                out
            }),
            SubspaceKind::CommutativeCenter => {
                self.linear_kernel(|k| basis.iter().map(|x| self.commutator(k, x)).collect())
            }
            SubspaceKind::Center => self
                .special_subspace(SubspaceKind::Nucleus)
                .intersect(&self.special_subspace(SubspaceKind::CommutativeCenter))
                .expect("same ambient space"),
            SubspaceKind::Annihilator => {
                self.linear_kernel(|a| basis.iter().flat_map(|x| [self.mul(a, x), self.mul(x, a)]).collect())
            }
        }
    }

    fn check_ambient(&self, s: &Subspace) -> Result<()> {
        if s.ambient() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: s.ambient(),
            });
        }
        Ok(())
    }

    /// Span of all products `u·v` with `u ∈ U`, `v ∈ V`.
    pub fn subspace_product(&self, u: &Subspace, v: &Subspace) -> Result<Subspace> {
        self.check_ambient(u)?;
        self.check_ambient(v)?;
        let mut out = EchelonBasis::new(self.field(), self.dim());
        for x in u.basis() {
            let x = Element::new(x.clone());
            for y in v.basis() {
                out.insert(self.mul(&x, &Element::new(y.clone())).into_coords());
                if out.is_full() {
                    return Ok(out.into_subspace());
                }
            }
        }
        Ok(out.into_subspace())
    }

    pub fn span(&self, elements: &[Element]) -> Subspace {
        let vs: Vec<_> = elements.iter().map(|e| e.coords().to_vec()).collect();
        Subspace::span(self.field(), self.dim(), &vs)
    }

    /// Smallest subalgebra or ideal containing `gens`.
    pub fn generated(&self, kind: Closure, gens: &[Element]) -> Result<Subspace> {
        for g in gens {
            if g.dim() != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    got: g.dim(),
                });
            }
        }
        let mut current = self.span(gens);
        let full = Subspace::full(self.field(), self.dim());
        loop {
            let with = match kind {
                Closure::Subalgebra => current.clone(),
                Closure::Ideal => full.clone(),
            };
            let next = current
                .sum(&self.subspace_product(&current, &with)?)?
                .sum(&self.subspace_product(&with, &current)?)?;
            if next.dim() == current.dim() {
                return Ok(current);
            }
            current = next;
        }
    }

    /// The subalgebra spanned by `basis` as an algebra in its own right.
    pub fn restrict(&self, basis: &[Element], names: Vec<String>) -> Result<Algebra> {
        let columns: Vec<_> = basis.iter().map(|b| b.coords().to_vec()).collect();
        let m = crate::linalg::Matrix::from_columns(self.field(), self.dim(), &columns);
        if m.rank() != basis.len() {
            return Err(Error::Precondition("restriction basis is dependent".into()));
        }
        let k = basis.len();
        let mut entries = Vec::new();
        for i in 0..k {
            for j in 0..k {
                let p = self.mul(&basis[i], &basis[j]);
                let c = m
                    .solve(p.coords())
                    .ok_or_else(|| Error::Precondition("span is not closed under multiplication".into()))?;
                for (l, cl) in c.into_iter().enumerate() {
                    if !cl.is_zero() {
                        entries.push((i, j, l, cl));
                    }
                }
            }
        }
        Algebra::new(self.field(), k, entries)?.with_names(names)
    }

    pub fn power_chain(&self) -> PowerChain {
        let full = Subspace::full(self.field(), self.dim());
        let mut powers = vec![full];
        let mut plateau = 1;
        loop {
            let n = powers.len() + 1;
            let mut next = Subspace::zero(self.field(), self.dim());
            for i in 1..n {
                let p = self
                    .subspace_product(&powers[i - 1], &powers[n - i - 1])
                    .expect("same ambient space");
                next = next.sum(&p).expect("same ambient space");
            }
            let zero = next.is_zero();
            if next.dim() != powers[n - 2].dim() {
                plateau = n;
            }
            powers.push(next);
            if zero {
                return PowerChain { powers, index: Some(n) };
            }
            // Once A^m = … = A^{2m}, every later power equals A^m.
            if n >= 2 * plateau && n > plateau {
                return PowerChain { powers, index: None };
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{mat2, nil2};
    use super::*;
    use crate::field::Field;

    #[test]
    fn subspaces_of_small_algebras() {
        let f = Field::prime(3).unwrap();
        let z = Algebra::new(&f, 2, []).unwrap();
        assert_eq!(z.special_subspace(SubspaceKind::Annihilator).dim(), 2);
        let m = mat2(&f);
        assert_eq!(m.special_subspace(SubspaceKind::Nucleus).dim(), 4);
        let center = m.special_subspace(SubspaceKind::Center);
        assert_eq!(center, m.span(&[m.find_unit().unwrap()]));
        assert_eq!(m.special_subspace(SubspaceKind::CommutativeCenter).dim(), 1);
    }

    #[test]
    fn products_and_closures() {
        let q = Field::rationals();
        let a = nil2(&q);
        let full = Subspace::full(&q, 2);
        assert_eq!(a.subspace_product(&full, &full).unwrap(), a.span(&[a.basis(1)]));
        assert_eq!(
            a.generated(Closure::Ideal, &[a.basis(1)]).unwrap(),
            a.span(&[a.basis(1)])
        );
        assert_eq!(a.generated(Closure::Subalgebra, &[a.basis(0)]).unwrap().dim(), 2);
        let m = mat2(&q);
        let one = m.find_unit().unwrap();
        let unit_line = m.span(std::slice::from_ref(&one));
        assert_eq!(m.subspace_product(&unit_line, &unit_line).unwrap(), unit_line);
        assert_eq!(m.generated(Closure::Subalgebra, &[one]).unwrap(), unit_line);
        assert_eq!(m.generated(Closure::Ideal, &[m.basis(1)]).unwrap().dim(), 4);
    }

    #[test]
    fn power_chains() {
        let q = Field::rationals();
        let z = Algebra::new(&q, 3, []).unwrap();
        let c = z.power_chain();
        assert_eq!((c.dims(), c.index), (vec![3, 0], Some(2)));
        let c = nil2(&q).power_chain();
        assert_eq!((c.dims(), c.index), (vec![2, 1, 0], Some(3)));
        assert!(c.power(7).unwrap().is_zero());
        let c = mat2(&q).power_chain();
        assert_eq!(c.index, None);
        assert_eq!(c.dims(), vec![4, 4]);
    }

    #[test]
    fn plateau_that_later_drops_is_not_final() {
        // a² = b, b·a = c: A² = <b,c>, A³ = <c>, A⁴ = 0.
        let q = Field::rationals();
        let a = Algebra::new(&q, 3, [(0, 0, 1, q.one()), (1, 0, 2, q.one())]).unwrap();
        let c = a.power_chain();
        assert_eq!((c.dims(), c.index), (vec![3, 2, 1, 0], Some(4)));
    }
}
