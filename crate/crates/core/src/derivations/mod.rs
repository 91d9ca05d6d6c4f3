//! Derivation-type operator spaces.
//!
//! A linear map `D` is a coordinate vector of length `d²`, entry `D[r][c]`
//! at index `r*d + c`; column `c` is the image of `e_c`. Every space is the
//! kernel of linear conditions assembled over basis tuples.

mod invertibility;
mod lemma22;

use std::fmt;

use serde_json::{json, Value};

use crate::algebra::{Algebra, Element, Side};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::linalg::{EchelonBasis, Matrix, Subspace};

pub use invertibility::{
    square_class_independent, Anisotropy, InvertibilityVerdict, InvertibleValuesVerdict, NoInverseReason,
    NormCertificate, ValuesMode,
};
pub use lemma22::{lemma22_case1, lemma22_case2, Lemma22};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceLabel {
    Derivations,
    Leibniz(usize),
    Quasiderivations,
    MultLieAlgebra,
}

impl fmt::Display for SpaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceLabel::Derivations => write!(f, "derivations"),
            SpaceLabel::Leibniz(n) => write!(f, "leibniz({n})"),
            SpaceLabel::Quasiderivations => write!(f, "quasiderivations"),
            SpaceLabel::MultLieAlgebra => write!(f, "mult-lie-algebra"),
        }
    }
}

/// A subspace of `End(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSpace {
    pub label: SpaceLabel,
    dim: usize,
    space: Subspace,
}

impl OperatorSpace {
    pub fn new(label: SpaceLabel, algebra_dim: usize, space: Subspace) -> OperatorSpace {
        assert_eq!(space.ambient(), algebra_dim * algebra_dim, "operator space ambient");
        OperatorSpace {
            label,
            dim: algebra_dim,
            space,
        }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn algebra_dim(&self) -> usize {
        self.dim
    }

    pub fn subspace(&self) -> &Subspace {
        &self.space
    }

    pub fn maps(&self) -> Vec<Matrix> {
        self.space
            .basis()
            .iter()
            .map(|v| Matrix::from_flat(self.space.field(), self.dim, self.dim, v.clone()))
            .collect()
    }

    pub fn contains(&self, map: &Matrix) -> bool {
        map.rows() == self.dim && map.cols() == self.dim && self.space.contains(map.flat()).expect("ambient matches")
    }

    /// `Σ c_i M_i` over the stored basis.
    pub fn combination(&self, coeffs: &[FieldElement]) -> Matrix {
        let field = self.space.field();
        let mut flat = vec![field.zero(); self.dim * self.dim];
        for (c, v) in coeffs.iter().zip(self.space.basis()) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in flat.iter_mut().zip(v) {
                if !y.is_zero() {
                    *x = &*x + &(c * y);
                }
            }
        }
        Matrix::from_flat(field, self.dim, self.dim, flat)
    }

    pub fn to_json(&self, a: &Algebra) -> Value {
        json!({
            "label": self.label.to_string(),
            "dim": self.dim(),
            "basis": self.maps().iter().map(|m| a.encode_matrix(m)).collect::<Vec<_>>(),
        })
    }
}

/// First basis tuple where a Leibniz-type law fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizWitness {
    pub tuple: Vec<usize>,
    pub lhs: Element,
    pub rhs: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizCheck {
    pub holds: bool,
    pub tuples: u64,
    pub witness: Option<LeibnizWitness>,
}

impl LeibnizCheck {
    pub fn witness_json(&self, a: &Algebra) -> Option<Value> {
        self.witness.as_ref().map(|w| {
            json!({
                "tuple": w.tuple.iter().map(|&i| a.names()[i].clone()).collect::<Vec<_>>(),
                "lhs": a.encode_element(&w.lhs),
                "rhs": a.encode_element(&w.rhs),
            })
        })
    }
}

fn apply(m: &Matrix, x: &Element) -> Element {
    Element::new(m.mul_vec(x.coords()))
}

/// Basis tuples of length `n`, first coordinate most significant.
fn tuples(d: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = d.checked_pow(n as u32).expect("tuple count overflows");
    (0..total).map(move |mut k| {
        let mut t = vec![0; n];
        for slot in t.iter_mut().rev() {
            *slot = k % d;
            k /= d;
        }
        t
    })
}

impl Algebra {
    /// `[x_1, …, x_n]` with `x_t` replaced by `sub` in position `pos`.
    fn normed_with(&self, tuple: &[usize], pos: usize, sub: &Element) -> Element {
        let mut acc = if pos == 0 { sub.clone() } else { self.basis(tuple[0]) };
        for (t, &i) in tuple.iter().enumerate().skip(1) {
            if acc.is_zero() {
                return acc;
            }
            acc = if t == pos {
                self.mul(&acc, sub)
            } else {
                self.mul(&acc, &self.basis(i))
            };
        }
        acc
    }

    fn normed(&self, tuple: &[usize]) -> Element {
        self.normed_with(tuple, 0, &self.basis(tuple[0]))
    }

    /// Linear conditions `φ([x_1…x_n]) − Σ_t [x_1…φ(x_t)…x_n] = 0` on basis
    /// tuples, as rows over the `d²` map coordinates.
    fn leibniz_conditions(&self, n: usize) -> EchelonBasis {
        let d = self.dim();
        let field = self.field();
        let mut rows = EchelonBasis::new(field, d * d);
        for tuple in tuples(d, n) {
            let mut block = vec![vec![field.zero(); d * d]; d];
            let p = self.normed(&tuple);
            for (k, pk) in p.coords().iter().enumerate() {
                if !pk.is_zero() {
                    for (s, row) in block.iter_mut().enumerate() {
                        row[s * d + k] = &row[s * d + k] + pk;
                    }
                }
            }
            for (t, &it) in tuple.iter().enumerate() {
                for r in 0..d {
                    let q = self.normed_with(&tuple, t, &self.basis(r));
                    for (s, qs) in q.coords().iter().enumerate() {
                        if !qs.is_zero() {
                            let idx = r * d + it;
                            block[s][idx] = &block[s][idx] - qs;
                        }
                    }
                }
            }
            for row in block {
                if row.iter().any(|c| !c.is_zero()) {
                    rows.insert(row);
                }
            }
            if rows.is_full() {
                break;
            }
        }
        rows
    }

    pub fn derivation_space(&self) -> OperatorSpace {
        OperatorSpace::new(SpaceLabel::Derivations, self.dim(), self.leibniz_conditions(2).kernel())
    }

    pub fn leibniz_space(&self, n: usize) -> Result<OperatorSpace> {
        if n < 2 {
            return Err(Error::InvalidOrder(n));
        }
        Ok(OperatorSpace::new(
            SpaceLabel::Leibniz(n),
            self.dim(),
            self.leibniz_conditions(n).kernel(),
        ))
    }

    /// All `f` admitting some `Q` with `Q(xy) = f(x)y + x f(y)`. Unknowns are
    /// `f` (first `d²`) and `Q` (next `d²`); the kernel is projected to `f`.
    pub fn quasider_space(&self) -> OperatorSpace {
        let d = self.dim();
        let dd = d * d;
        let field = self.field();
        let mut rows = EchelonBasis::new(field, 2 * dd);
        for i in 0..d {
            for j in 0..d {
                let mut block = vec![vec![field.zero(); 2 * dd]; d];
                for (k, c) in self.entries(i, j) {
                    for (s, row) in block.iter_mut().enumerate() {
                        row[dd + s * d + k] = c.clone();
                    }
                }
                for r in 0..d {
                    for (s, c) in self.entries(r, j) {
                        block[*s][r * d + i] = &block[*s][r * d + i] - c;
                    }
                    for (s, c) in self.entries(i, r) {
                        block[*s][r * d + j] = &block[*s][r * d + j] - c;
                    }
                }
                for row in block {
                    if row.iter().any(|c| !c.is_zero()) {
                        rows.insert(row);
                    }
                }
            }
        }
        let kernel = rows.kernel();
        let projected: Vec<_> = kernel.basis().iter().map(|v| v[..dd].to_vec()).collect();
        OperatorSpace::new(SpaceLabel::Quasiderivations, d, Subspace::span(field, dd, &projected))
    }

    /// Some `Q` with `Q(xy) = f(x)y + x f(y)`, if `f` is a quasiderivation.
    pub fn quasider_witness(&self, f: &Matrix) -> Option<Matrix> {
        let d = self.dim();
        let field = self.field();
        let images: Vec<Element> = (0..d).map(|i| apply(f, &self.basis(i))).collect();
        // Rows (i, j, s): Σ_k c_ij^k Q[s][k] = (f(e_i)e_j + e_i f(e_j))_s.
        let mut m = Matrix::zeros(field, d * d * d, d * d);
        let mut rhs = Vec::with_capacity(d * d * d);
        for i in 0..d {
            for j in 0..d {
                let target = &self.mul(&images[i], &self.basis(j)) + &self.mul(&self.basis(i), &images[j]);
                for s in 0..d {
                    let row = (i * d + j) * d + s;
                    for (k, c) in self.entries(i, j) {
                        m[(row, s * d + k)] = c.clone();
                    }
                    rhs.push(target.coords()[s].clone());
                }
            }
        }
        m.solve(&rhs).map(|q| Matrix::from_flat(field, d, d, q))
    }

    pub fn qder_equals_end(&self) -> bool {
        self.quasider_space().dim() == self.dim() * self.dim()
    }

    /// Lie closure of `{L_{e_i}, R_{e_i}}` under commutators.
    pub fn mult_lie_algebra(&self) -> OperatorSpace {
        let d = self.dim();
        let mut echelon = EchelonBasis::new(self.field(), d * d);
        let mut maps: Vec<Matrix> = Vec::new();
        let push = |m: Matrix, echelon: &mut EchelonBasis, maps: &mut Vec<Matrix>| {
            if !m.is_zero() && echelon.insert(m.flat().to_vec()) {
                maps.push(m);
            }
        };
        for i in 0..d {
            for side in [Side::Left, Side::Right] {
                push(self.mult_operator(side, &self.basis(i)), &mut echelon, &mut maps);
            }
        }
        let mut k = 0;
        while k < maps.len() && !echelon.is_full() {
            for j in 0..k {
                let c = maps[k].commutator(&maps[j]);
                push(c, &mut echelon, &mut maps);
            }
            k += 1;
        }
        OperatorSpace::new(SpaceLabel::MultLieAlgebra, d, echelon.into_subspace())
    }

    /// Exact check of the order-`n` Leibniz law on all `dⁿ` basis tuples.
    pub fn is_leibniz(&self, phi: &Matrix, n: usize) -> Result<LeibnizCheck> {
        if n < 2 {
            return Err(Error::InvalidOrder(n));
        }
        self.check_map(phi)?;
        let images: Vec<Element> = (0..self.dim()).map(|i| apply(phi, &self.basis(i))).collect();
        let mut count = 0;
        for tuple in tuples(self.dim(), n) {
            count += 1;
            let lhs = apply(phi, &self.normed(&tuple));
            let mut rhs = self.zero();
            for (t, &it) in tuple.iter().enumerate() {
                rhs = &rhs + &self.normed_with(&tuple, t, &images[it]);
            }
            if lhs != rhs {
                return Ok(LeibnizCheck {
                    holds: false,
                    tuples: count,
                    witness: Some(LeibnizWitness { tuple, lhs, rhs }),
                });
            }
        }
        Ok(LeibnizCheck {
            holds: true,
            tuples: count,
            witness: None,
        })
    }

    pub fn is_derivation(&self, map: &Matrix) -> Result<LeibnizCheck> {
        self.is_leibniz(map, 2)
    }

    pub(crate) fn check_map(&self, map: &Matrix) -> Result<()> {
        if map.rows() != self.dim() || map.cols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: if map.rows() != self.dim() {
                    map.rows()
                } else {
                    map.cols()
                },
            });
        }
        if map.field() != self.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Errors unless `map` is a derivation.
    pub(crate) fn require_derivation(&self, map: &Matrix) -> Result<()> {
        let check = self.is_derivation(map)?;
        match check.witness {
            None => Ok(()),
            Some(w) => Err(Error::NotDerivation(format!(
                "law fails on ({}, {})",
                self.names()[w.tuple[0]],
                self.names()[w.tuple[1]]
            ))),
        }
    }

    /// Whether a derivation lies in the multiplication Lie algebra.
    pub fn is_inner(&self, map: &Matrix) -> Result<bool> {
        self.require_derivation(map)?;
        Ok(self.mult_lie_algebra().contains(map))
    }

    /// Invertible Leibniz-derivation of a nilpotent algebra with index `s`:
    /// `n = ⌊s/2⌋ + 1`, identity on a complement `W` of `A^n` and
    /// multiplication by `n` on `A^n`.
    pub fn moens_construction(&self) -> Result<Moens> {
        let chain = self.power_chain();
        let s = chain.index.ok_or(Error::NotNilpotent)?;
        let n = s / 2 + 1;
        let an = chain.power(n).expect("power in range").clone();
        let complement = an.standard_complement();
        let d = self.dim();
        let field = self.field();
        let mut columns: Vec<_> = an.basis().to_vec();
        let mut scales = vec![field.int(n as i64); an.dim()];
        for &c in &complement {
            columns.push(self.basis(c).into_coords());
            scales.push(field.one());
        }
        let p = Matrix::from_columns(field, d, &columns);
        let diag = Matrix::from_fn(
            field,
            d,
            d,
            |r, c| if r == c { scales[r].clone() } else { field.zero() },
        );
        let phi = p.mul(&diag).mul(&p.inverse().expect("basis of A"));
        let p_char = field.characteristic();
        let degeneracy = if p_char > 0 && (n as u64).is_multiple_of(p_char) {
            Some(format!(
                "characteristic {p_char} divides n = {n}: the map vanishes on A^{n}"
            ))
        } else if p_char > 0 && (n as u64 - 1).is_multiple_of(p_char) {
            Some(format!(
                "n = {n} is 1 in characteristic {p_char}: the map is the identity"
            ))
        } else {
            None
        };
        let leibniz = self.is_leibniz(&phi, n)?;
        Ok(Moens {
            invertible: phi.is_invertible(),
            phi,
            order: n,
            nilpotency_index: s,
            complement,
            degeneracy,
            leibniz,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moens {
    pub phi: Matrix,
    pub order: usize,
    pub nilpotency_index: usize,
    /// Standard basis indices spanning `W`.
    pub complement: Vec<usize>,
    pub invertible: bool,
    /// Set when the characteristic collapses the construction.
    pub degeneracy: Option<String>,
    pub leibniz: LeibnizCheck,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::{mat2, nil2};
    use crate::cayley_dickson::QuadraticAlgebra;
    use crate::field::Field;

    fn upper3(f: &Field) -> Algebra {
        // E12, E13, E23 with E12·E23 = E13
        Algebra::new(f, 3, [(0, 2, 1, f.one())]).unwrap()
    }

    #[test]
    fn derivation_space_examples() {
        let q = Field::rationals();
        assert_eq!(Algebra::new(&q, 2, []).unwrap().derivation_space().dim(), 4);
        let field1 = Algebra::new(&q, 1, [(0, 0, 0, q.one())]).unwrap();
        assert_eq!(field1.derivation_space().dim(), 0);
        let a = nil2(&q);
        let der = a.derivation_space();
        assert_eq!(der.dim(), 2);
        for m in der.maps() {
            assert!(a.is_derivation(&m).unwrap().holds);
        }
        assert_eq!(a.leibniz_space(2).unwrap().subspace(), der.subspace());
        assert_eq!(a.leibniz_space(1), Err(Error::InvalidOrder(1)));
    }

    #[test]
    fn zorn_derivations_kill_unit() {
        let q = Field::rationals();
        let z = QuadraticAlgebra::zorn(&q);
        let der = z.algebra().derivation_space();
        assert_eq!(der.dim(), 14);
        for m in der.maps() {
            assert!(m.mul_vec(z.unit().coords()).iter().all(FieldElement::is_zero));
        }
    }

    #[test]
    fn quasiderivations() {
        let f = Field::prime(5).unwrap();
        let field1 = Algebra::new(&f, 1, [(0, 0, 0, f.one())]).unwrap();
        assert!(field1.qder_equals_end());
        assert!(Algebra::new(&f, 2, []).unwrap().qder_equals_end());
        let a = nil2(&f);
        let qd = a.quasider_space();
        assert!(a.derivation_space().subspace().is_subspace_of(qd.subspace()).unwrap());
        for m in qd.maps() {
            let qm = a.quasider_witness(&m).expect("witness");
            for i in 0..2 {
                for j in 0..2 {
                    let (x, y) = (a.basis(i), a.basis(j));
                    let lhs = apply(&qm, &a.mul(&x, &y));
                    let rhs = &a.mul(&apply(&m, &x), &y) + &a.mul(&x, &apply(&m, &y));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn mult_lie_algebra_examples() {
        let q = Field::rationals();
        let field1 = Algebra::new(&q, 1, [(0, 0, 0, q.one())]).unwrap();
        assert_eq!(field1.mult_lie_algebra().dim(), 1);
        assert_eq!(Algebra::new(&q, 3, []).unwrap().mult_lie_algebra().dim(), 0);
        assert_eq!(nil2(&q).mult_lie_algebra().dim(), 1);
    }

    #[test]
    fn inner_derivations_of_matrices() {
        let f = Field::prime(3).unwrap();
        let m = mat2(&f);
        let a = m.basis(1);
        let ad = m.left_mul(&a).sub(&m.right_mul(&a));
        assert!(m.is_inner(&ad).unwrap());
        assert!(m.is_inner(&Matrix::zeros(&f, 4, 4)).unwrap());
        assert!(matches!(
            m.is_inner(&Matrix::identity(&f, 4)),
            Err(Error::NotDerivation(_))
        ));
    }

    #[test]
    fn leibniz_checks_on_nil2() {
        let q = Field::rationals();
        let a = nil2(&q);
        let moens = Matrix::from_rows(&q, vec![vec![q.one(), q.zero()], vec![q.zero(), q.int(2)]]).unwrap();
        assert!(a.is_leibniz(&moens, 2).unwrap().holds);
        let id = a.is_leibniz(&Matrix::identity(&q, 2), 2).unwrap();
        assert!(!id.holds);
        let w = id.witness.unwrap();
        assert_eq!(w.tuple, vec![0, 0]);
        assert_eq!(w.lhs, a.basis(1));
        assert_eq!(w.rhs, a.basis(1).scale(&q.int(2)));
    }

    #[test]
    fn moens_examples() {
        let q = Field::rationals();
        let m = nil2(&q).moens_construction().unwrap();
        assert_eq!((m.nilpotency_index, m.order), (3, 2));
        assert!(m.invertible && m.leibniz.holds && m.degeneracy.is_none());
        assert_eq!(m.phi[(1, 1)], q.int(2));
        assert_eq!(m.phi[(0, 0)], q.one());
        let u = upper3(&q).moens_construction().unwrap();
        assert!(u.invertible && u.leibniz.holds);
        let z = QuadraticAlgebra::zorn(&q);
        assert_eq!(z.algebra().moens_construction(), Err(Error::NotNilpotent));
    }

    #[test]
    fn moens_degenerates_in_small_characteristic() {
        let f = Field::prime(2).unwrap();
        let m = nil2(&f).moens_construction().unwrap();
        assert!(!m.invertible);
        assert!(m.degeneracy.is_some());
    }
}
