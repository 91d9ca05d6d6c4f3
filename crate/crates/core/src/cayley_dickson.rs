//! Quadratic algebras: trace, norm and polar form, the Zorn vector-matrix
//! model of the split octonions, and Cayley-Dickson doubling.

use rand::Rng;

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::linalg::{Matrix, Subspace};
use crate::options::Options;
use crate::report::Provenance;

/// `n(x) = Σ_{i≤j} q_ij x_i x_j`. Stored upper-triangular so that it is
/// meaningful in characteristic 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    field: Field,
    dim: usize,
    /// Row-major `dim × dim`; entries below the diagonal are zero.
    q: Vec<FieldElement>,
}

impl QuadraticForm {
    pub fn zero(field: &Field, dim: usize) -> QuadraticForm {
        QuadraticForm {
            field: field.clone(),
            dim,
            q: vec![field.zero(); dim * dim],
        }
    }

    /// Diagonal form `Σ c_i x_i²`.
    pub fn diagonal(field: &Field, coeffs: &[FieldElement]) -> QuadraticForm {
        let mut q = QuadraticForm::zero(field, coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            q.set(i, i, c.clone());
        }
        q
    }

    /// Sets the coefficient of `x_i x_j`.
    pub fn set(&mut self, i: usize, j: usize, c: FieldElement) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.q[i * self.dim + j] = c;
    }

    pub fn coeff(&self, i: usize, j: usize) -> &FieldElement {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        &self.q[i * self.dim + j]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[FieldElement]) -> FieldElement {
        let mut acc = self.field.zero();
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in i..self.dim {
                let c = &self.q[i * self.dim + j];
                if !c.is_zero() && !x[j].is_zero() {
                    acc = &acc + &(&(c * &x[i]) * &x[j]);
                }
            }
        }
        acc
    }

    /// Gram matrix of `f(x,y) = n(x+y) − n(x) − n(y)`.
    pub fn polar(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.dim, self.dim, |i, j| {
            if i == j {
                self.coeff(i, i).times(2)
            } else {
                self.coeff(i, j).clone()
            }
        })
    }

    /// `a·n_self ⊕ b·n_other` on the concatenated coordinates.
    fn direct_sum(&self, a: &FieldElement, other: &QuadraticForm, b: &FieldElement) -> QuadraticForm {
        let d = self.dim + other.dim;
        let mut out = QuadraticForm::zero(&self.field, d);
        for i in 0..self.dim {
            for j in i..self.dim {
                out.set(i, j, a * self.coeff(i, j));
            }
        }
        for i in 0..other.dim {
            for j in i..other.dim {
                out.set(self.dim + i, self.dim + j, b * other.coeff(i, j));
            }
        }
        out
    }
}

/// An algebra with a linear involution `σ`: `σ² = 1` and
/// `σ(xy) = σ(y)σ(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutiveAlgebra {
    algebra: Algebra,
    involution: Matrix,
}

impl InvolutiveAlgebra {
    pub fn new(algebra: Algebra, involution: Matrix) -> Result<InvolutiveAlgebra> {
        let d = algebra.dim();
        if involution.rows() != d || involution.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: involution.rows(),
            });
        }
        if involution.mul(&involution) != Matrix::identity(algebra.field(), d) {
            return Err(Error::Precondition("involution does not square to the identity".into()));
        }
        let s = |x: &Element| Element::new(involution.mul_vec(x.coords()));
        for i in 0..d {
            for j in 0..d {
                let (ei, ej) = (algebra.basis(i), algebra.basis(j));
                if s(&algebra.mul(&ei, &ej)) != algebra.mul(&s(&ej), &s(&ei)) {
                    return Err(Error::Precondition(format!(
                        "involution is not an anti-automorphism on ({}, {})",
                        algebra.names()[i],
                        algebra.names()[j]
                    )));
                }
            }
        }
        Ok(InvolutiveAlgebra { algebra, involution })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn involution(&self) -> &Matrix {
        &self.involution
    }

    pub fn apply(&self, x: &Element) -> Element {
        Element::new(self.involution.mul_vec(x.coords()))
    }

    /// `B ⊕ vB` with `(a1+vb1)(a2+vb2) = (a1a2 + γ b2 b̄1) + v(ā1 b2 + a2 b1)`
    /// and involution `a + vb ↦ ā − vb`.
    pub fn double(&self, gamma: &FieldElement) -> Result<InvolutiveAlgebra> {
        let b = &self.algebra;
        let field = b.field();
        if !field.contains(gamma) {
            return Err(Error::FieldMismatch);
        }
        if gamma.is_zero() {
            return Err(Error::InvalidParams("doubling parameter must be nonzero".into()));
        }
        let d = b.dim();
        let basis = b.basis_elements();
        let conj: Vec<Element> = basis.iter().map(|e| self.apply(e)).collect();
        let lower = |x: &Element| {
            let mut c = x.coords().to_vec();
            c.extend(std::iter::repeat_n(field.zero(), d));
            Element::new(c)
        };
        let upper = |x: &Element| {
            let mut c = vec![field.zero(); d];
            c.extend(x.coords().iter().cloned());
            Element::new(c)
        };
        let algebra = Algebra::from_products(field, 2 * d, |i, j| match (i < d, j < d) {
            (true, true) => lower(&b.mul(&basis[i], &basis[j])),
            (true, false) => upper(&b.mul(&conj[i], &basis[j - d])),
            (false, true) => upper(&b.mul(&basis[j], &basis[i - d])),
            (false, false) => lower(&b.mul(&basis[j - d], &conj[i - d]).scale(gamma)),
        });
        let level = d.trailing_zeros() + 1;
        let mut names = b.names().to_vec();
        for n in b.names() {
            names.push(if n == "1" {
                format!("v{level}")
            } else {
                format!("v{level}{n}")
            });
        }
        let algebra = algebra.with_names(names)?;
        let involution = Matrix::from_fn(field, 2 * d, 2 * d, |r, c| match (r < d, c < d) {
            (true, true) => self.involution[(r, c)].clone(),
            (false, false) if r == c => -field.one(),
            _ => field.zero(),
        });
        Ok(InvolutiveAlgebra { algebra, involution })
    }
}

/// A unital algebra with `x² − t(x)x + n(x)·1 = 0` for every `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticAlgebra {
    algebra: Algebra,
    unit: Element,
    trace: Vec<FieldElement>,
    norm: QuadraticForm,
    polar: Matrix,
}

/// Result of a search for `x ≠ 0` with `n(x) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Isotropic {
    Found { witness: Element, provenance: Provenance },
    NoneFound { provenance: Provenance, tried: u64 },
}

impl QuadraticAlgebra {
    /// Validates the quadratic relation from basis data: its diagonal terms
    /// `e_i² − t_i e_i + q_ii·1` and its polarization on pairs, which
    /// together are equivalent to the relation for all `x` in any
    /// characteristic.
    pub fn new(algebra: Algebra, trace: Vec<FieldElement>, norm: QuadraticForm) -> Result<QuadraticAlgebra> {
        let d = algebra.dim();
        for len in [trace.len(), norm.dim()] {
            if len != d {
                return Err(Error::DimensionMismatch { expected: d, got: len });
            }
        }
        let unit = algebra.find_unit().ok_or(Error::NotUnital)?;
        let polar = norm.polar();
        let qa = QuadraticAlgebra {
            algebra,
            unit,
            trace,
            norm,
            polar,
        };
        let field = qa.algebra.field();
        if qa.trace(&qa.unit) != field.int(2) || !qa.norm(&qa.unit).is_one() {
            return Err(Error::Precondition("need t(1) = 2 and n(1) = 1".into()));
        }
        for i in 0..d {
            let ei = qa.algebra.basis(i);
            if !qa.quadratic_residual(&ei).is_zero() {
                return Err(Error::Precondition(format!(
                    "quadratic relation fails at {}",
                    qa.algebra.names()[i]
                )));
            }
            for j in i + 1..d {
                if !qa.polar_residual(&ei, &qa.algebra.basis(j)).is_zero() {
                    return Err(Error::Precondition(format!(
                        "linearized quadratic relation fails at ({}, {})",
                        qa.algebra.names()[i],
                        qa.algebra.names()[j]
                    )));
                }
            }
        }
        Ok(qa)
    }

    /// The ground field as a one-dimensional algebra: `t(a) = 2a`, `n(a) = a²`.
    pub fn ground(field: &Field) -> QuadraticAlgebra {
        let a = Algebra::new(field, 1, [(0, 0, 0, field.one())])
            .and_then(|a| a.with_names(vec!["1".into()]))
            .expect("one-dimensional table");
        QuadraticAlgebra::new(a, vec![field.int(2)], QuadraticForm::diagonal(field, &[field.one()]))
            .expect("ground field is quadratic")
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn field(&self) -> &Field {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn unit(&self) -> &Element {
        &self.unit
    }

    pub fn trace_covector(&self) -> &[FieldElement] {
        &self.trace
    }

    pub fn norm_form(&self) -> &QuadraticForm {
        &self.norm
    }

    /// Gram matrix of the polar form `f`.
    pub fn polar_matrix(&self) -> &Matrix {
        &self.polar
    }

    pub fn trace(&self, x: &Element) -> FieldElement {
        x.coords()
            .iter()
            .zip(&self.trace)
            .fold(self.field().zero(), |acc, (a, b)| &acc + &(a * b))
    }

    pub fn norm(&self, x: &Element) -> FieldElement {
        self.norm.eval(x.coords())
    }

    /// `x̄ = t(x)·1 − x`.
    pub fn conjugate(&self, x: &Element) -> Element {
        &self.unit.scale(&self.trace(x)) - x
    }

    /// `(t(x), n(x), x̄)`.
    pub fn quadratic_data(&self, x: &Element) -> (FieldElement, FieldElement, Element) {
        (self.trace(x), self.norm(x), self.conjugate(x))
    }

    /// `f(x, y) = n(x+y) − n(x) − n(y)`.
    pub fn bilinear(&self, x: &Element, y: &Element) -> FieldElement {
        let fy = self.polar.mul_vec(y.coords());
        x.coords()
            .iter()
            .zip(&fy)
            .fold(self.field().zero(), |acc, (a, b)| &acc + &(a * b))
    }

    /// `x² − t(x)x + n(x)·1`.
    pub fn quadratic_residual(&self, x: &Element) -> Element {
        let a = &self.algebra;
        (&a.square(x) - &x.scale(&self.trace(x))).add_scaled(&self.norm(x), &self.unit)
    }

    /// `x∘y − t(x)y − t(y)x + f(x,y)·1`, the linearization of the quadratic
    /// relation.
    pub fn polar_residual(&self, x: &Element, y: &Element) -> Element {
        let a = &self.algebra;
        let r = &(&a.jordan(x, y) - &y.scale(&self.trace(x))) - &x.scale(&self.trace(y));
        r.add_scaled(&self.bilinear(x, y), &self.unit)
    }

    /// `f(xy, zw) + f(xw, yz) − f(x,z) f(y,w)`.
    pub fn composition_residual(&self, x: &Element, y: &Element, z: &Element, w: &Element) -> FieldElement {
        let a = &self.algebra;
        let lhs = &self.bilinear(&a.mul(x, y), &a.mul(z, w)) + &self.bilinear(&a.mul(x, w), &a.mul(z, y));
        &lhs - &(&self.bilinear(x, z) * &self.bilinear(y, w))
    }

    /// `{x : f(x, m) = 0 for all m ∈ M}`.
    pub fn orthocomplement(&self, m: &Subspace) -> Result<Subspace> {
        if m.ambient() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: m.ambient(),
            });
        }
        let rows: Vec<_> = m.basis().iter().map(|v| self.polar.mul_vec(v)).collect();
        Ok(Subspace::span(self.field(), self.dim(), &rows).annihilator())
    }

    /// `n(x)⁻¹ x̄` when `n(x) ≠ 0`.
    pub fn cd_inverse(&self, x: &Element) -> Option<Element> {
        let n = self.norm(x);
        let inv = n.inv().ok()?;
        Some(self.conjugate(x).scale(&inv))
    }

    pub fn involutive(&self) -> InvolutiveAlgebra {
        let d = self.dim();
        let columns: Vec<_> = (0..d)
            .map(|i| self.conjugate(&self.algebra.basis(i)).into_coords())
            .collect();
        InvolutiveAlgebra {
            algebra: self.algebra.clone(),
            involution: Matrix::from_columns(self.field(), d, &columns),
        }
    }

    /// Cayley-Dickson double with conjugation as the involution;
    /// `t(a+vb) = t(a)` and `n(a+vb) = n(a) − γ n(b)`.
    pub fn double(&self, gamma: &FieldElement) -> Result<QuadraticAlgebra> {
        let doubled = self.involutive().double(gamma)?;
        let field = self.field();
        let mut trace = self.trace.clone();
        trace.extend(std::iter::repeat_n(field.zero(), self.dim()));
        let norm = self.norm.direct_sum(&field.one(), &self.norm, &-gamma);
        QuadraticAlgebra::new(doubled.algebra, trace, norm)
    }

    /// Repeated doubling of the ground field.
    pub fn tower(field: &Field, gammas: &[FieldElement]) -> Result<QuadraticAlgebra> {
        gammas
            .iter()
            .try_fold(QuadraticAlgebra::ground(field), |acc, g| acc.double(g))
    }

    /// Split octonions as Zorn vector matrices `(α, u; v, β)` in the basis
    /// `(E11, E22, u1, u2, u3, v1, v2, v3)`, with
    /// `(α,u;v,β)(γ,t;w,δ) = (αγ+(u,w), αt+δu−v×w; γv+βw+u×t, βδ+(v,t))`.
    pub fn zorn(field: &Field) -> QuadraticAlgebra {
        let algebra = Algebra::from_products(field, 8, |i, j| {
            let x = Element::basis(field, 8, i);
            let y = Element::basis(field, 8, j);
            Element::new(zorn_product(x.coords(), y.coords()))
        });
        let names = ["E11", "E22", "u1", "u2", "u3", "v1", "v2", "v3"];
        let algebra = algebra
            .with_names(names.iter().map(|s| s.to_string()).collect())
            .expect("eight names");
        let mut trace = vec![field.zero(); 8];
        trace[0] = field.one();
        trace[1] = field.one();
        let mut norm = QuadraticForm::zero(field, 8);
        norm.set(0, 1, field.one());
        for i in 0..3 {
            norm.set(2 + i, 5 + i, -field.one());
        }
        QuadraticAlgebra::new(algebra, trace, norm).expect("Zorn algebra is quadratic")
    }

    /// First `x ≠ 0` with `n(x) = 0`: by enumeration when the algebra has
    /// at most `opts.enum_cap` elements, else among `e_i`, `e_i ± e_j` and
    /// then random samples.
    pub fn find_isotropic(&self, opts: &Options) -> Isotropic {
        let a = &self.algebra;
        if let Some(count) = a.element_count(opts.enum_cap) {
            for n in 1..count {
                let x = a.element_at(n).expect("finite field");
                if self.norm(&x).is_zero() {
                    return Isotropic::Found {
                        witness: x,
                        provenance: Provenance::Exhaustive,
                    };
                }
            }
            return Isotropic::NoneFound {
                provenance: Provenance::Exhaustive,
                tried: count - 1,
            };
        }
        let d = self.dim();
        let mut small = a.basis_elements();
        for i in 0..d {
            for j in i + 1..d {
                small.push(&a.basis(i) + &a.basis(j));
                small.push(&a.basis(i) - &a.basis(j));
            }
        }
        if let Some(x) = small.into_iter().find(|x| self.norm(x).is_zero()) {
            return Isotropic::Found {
                witness: x,
                provenance: Provenance::Certified,
            };
        }
        let mut rng = opts.rng();
        for _ in 0..opts.samples {
            let x = a.random_element(&mut rng);
            if !x.is_zero() && self.norm(&x).is_zero() {
                return Isotropic::Found {
                    witness: x,
                    provenance: Provenance::Sampled,
                };
            }
        }
        Isotropic::NoneFound {
            provenance: Provenance::Sampled,
            tried: opts.samples as u64,
        }
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        self.algebra.random_element(rng)
    }
}

fn dot(a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    let mut acc = a[0].zero_like();
    for (x, y) in a.iter().zip(b) {
        acc = &acc + &(x * y);
    }
    acc
}

fn cross(a: &[FieldElement], b: &[FieldElement]) -> [FieldElement; 3] {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

/// The Zorn vector-matrix product on 8-coordinate vectors.
pub fn zorn_product(x: &[FieldElement], y: &[FieldElement]) -> Vec<FieldElement> {
    let (alpha, beta, u, v) = (&x[0], &x[1], &x[2..5], &x[5..8]);
    let (gamma, delta, t, w) = (&y[0], &y[1], &y[2..5], &y[5..8]);
    let vw = cross(v, w);
    let ut = cross(u, t);
    let mut out = Vec::with_capacity(8);
    out.push(&(alpha * gamma) + &dot(u, w));
    out.push(&(beta * delta) + &dot(v, t));
    for k in 0..3 {
        out.push(&(&(alpha * &t[k]) + &(delta * &u[k])) - &vw[k]);
    }
    for k in 0..3 {
        out.push(&(&(gamma * &v[k]) + &(beta * &w[k])) + &ut[k]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Identity;

    fn el(f: &Field, xs: &[i64]) -> Element {
        Element::from_ints(f, xs)
    }

    #[test]
    fn zorn_basics() {
        let f = Field::prime(3).unwrap();
        let z = QuadraticAlgebra::zorn(&f);
        assert_eq!(z.dim(), 8);
        assert_eq!(z.unit(), &el(&f, &[1, 1, 0, 0, 0, 0, 0, 0]));
        assert_eq!(z.norm(&el(&f, &[2, 2, 0, 0, 0, 0, 0, 0])), f.one());
        assert_eq!(z.trace(&el(&f, &[1, 2, 1, 0, 0, 0, 0, 0])), f.zero());
        let a = z.algebra();
        // u1·v1 = E11; diag(α,β)·diag(γ,δ) = diag(αγ, βδ)
        assert_eq!(a.mul(&a.basis(2), &a.basis(5)), a.basis(0));
        assert_eq!(
            a.mul(&el(&f, &[1, 2, 0, 0, 0, 0, 0, 0]), &el(&f, &[2, 2, 0, 0, 0, 0, 0, 0])),
            el(&f, &[2, 1, 0, 0, 0, 0, 0, 0])
        );
        assert_eq!(a.left_mul(&a.basis(0)).rank(), 4);
        let x = el(&f, &[1, 2, 0, 0, 0, 0, 0, 0]);
        assert_eq!(a.invert_element(&x).unwrap(), Some(x.clone()));
        assert_eq!(z.cd_inverse(&x), Some(x));
        assert_eq!(z.cd_inverse(&a.basis(0)), None);
        assert_eq!(a.invert_element(&a.basis(0)).unwrap(), None);
        assert_eq!(
            z.conjugate(&el(&f, &[1, 2, 0, 0, 0, 0, 0, 0])),
            el(&f, &[2, 1, 0, 0, 0, 0, 0, 0])
        );
    }

    #[test]
    fn zorn_special_products() {
        let f = Field::rationals();
        let z = QuadraticAlgebra::zorn(&f);
        let a = z.algebra();
        let (u1, u2, v1, v2) = (a.basis(2), a.basis(3), a.basis(5), a.basis(6));
        assert_eq!(a.associator(&u1, &u2, &v2), u1);
        assert_eq!(a.jordan(&u1, &v1), *z.unit());
        assert_eq!(z.bilinear(&u1, &v1), -f.one());
        assert_eq!(z.bilinear(z.unit(), z.unit()), f.int(2));
    }

    #[test]
    fn zorn_polar_nondegenerate() {
        let f = Field::prime(5).unwrap();
        let z = QuadraticAlgebra::zorn(&f);
        assert_eq!(z.polar_matrix().rank(), 8);
        let one = z.algebra().span(&[z.unit().clone()]);
        assert_eq!(z.orthocomplement(&one).unwrap().dim(), 7);
        assert!(z.orthocomplement(&Subspace::full(&f, 8)).unwrap().is_zero());
    }

    #[test]
    fn doubling_examples() {
        let q = Field::rationals();
        let c = QuadraticAlgebra::tower(&q, &[q.int(-1)]).unwrap();
        let a = c.algebra();
        assert_eq!(a.square(&a.basis(1)), a.basis(0).scale(&q.int(-1)));
        assert!(a.check_identity(Identity::Commutative, &Options::default()).passed);

        let h = QuadraticAlgebra::tower(&q, &[q.int(-1), q.int(-1)]).unwrap();
        assert_eq!(h.algebra().names(), ["1", "v1", "v2", "v2v1"]);
        assert!(
            h.algebra()
                .check_identity(Identity::Associative, &Options::default())
                .passed
        );
        assert!(
            !h.algebra()
                .check_identity(Identity::Commutative, &Options::default())
                .passed
        );

        let o = h.double(&q.one()).unwrap();
        assert_eq!(o.dim(), 8);
        let one_plus_v = &o.algebra().basis(0) + &o.algebra().basis(4);
        assert!(o.norm(&one_plus_v).is_zero());
        assert!(
            !o.algebra()
                .check_identity(Identity::Associative, &Options::default())
                .passed
        );
        assert!(
            o.algebra()
                .check_identity(Identity::LeftAlternative, &Options::default())
                .passed
        );
        assert!(h.double(&q.zero()).is_err());
    }

    #[test]
    fn involution_is_validated() {
        let q = Field::rationals();
        let h = QuadraticAlgebra::tower(&q, &[q.int(-1), q.int(-1)]).unwrap();
        let inv = h.involutive();
        assert!(InvolutiveAlgebra::new(h.algebra().clone(), inv.involution().clone()).is_ok());
        // The identity map reverses products only in commutative algebras.
        assert!(InvolutiveAlgebra::new(h.algebra().clone(), Matrix::identity(&q, 4)).is_err());
    }

    #[test]
    fn isotropic_search() {
        let f2 = Field::prime(2).unwrap();
        let z = QuadraticAlgebra::zorn(&f2);
        match z.find_isotropic(&Options::default()) {
            Isotropic::Found { witness, provenance } => {
                assert_eq!(witness, z.algebra().basis(0));
                assert_eq!(provenance, Provenance::Exhaustive);
            }
            other => panic!("{other:?}"),
        }
        let q = Field::rationals();
        let h = QuadraticAlgebra::tower(&q, &[q.int(-1), q.int(-1)]).unwrap();
        assert!(matches!(
            h.find_isotropic(&Options::default()),
            Isotropic::NoneFound {
                provenance: Provenance::Sampled,
                ..
            }
        ));
    }

    #[test]
    fn char_two_norm_is_not_symmetric_matrix() {
        let f2 = Field::prime(2).unwrap();
        let g = QuadraticAlgebra::ground(&f2);
        assert!(g.polar_matrix().is_zero());
        assert_eq!(g.norm(g.unit()), f2.one());
    }
}
