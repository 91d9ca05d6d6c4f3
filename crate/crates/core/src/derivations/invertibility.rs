//! Searching operator spaces for invertible maps, and checking that every
//! nonzero value of a derivation is invertible.

use serde_json::{json, Value};

use super::{apply, OperatorSpace};
use crate::algebra::{Algebra, Element};
use crate::cayley_dickson::{QuadraticAlgebra, QuadraticForm};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, Poly2};
use crate::linalg::{Matrix, Subspace};
use crate::options::{bounded_pow, Options};
use crate::report::Provenance;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NoInverseReason {
    /// The space has no nonzero maps.
    ZeroSpace,
    /// A nonzero vector killed by every basis map.
    CommonKernel(Vec<FieldElement>),
    /// Every combination was tried.
    Exhausted { tried: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvertibilityVerdict {
    Witness { map: Matrix, provenance: Provenance },
    NoneCertified(NoInverseReason),
    Inconclusive { samples: usize },
}

impl InvertibilityVerdict {
    pub fn has_witness(&self) -> bool {
        matches!(self, InvertibilityVerdict::Witness { .. })
    }

    /// Absence of invertible maps was proved.
    pub fn is_none_certified(&self) -> bool {
        matches!(self, InvertibilityVerdict::NoneCertified(_))
    }

    pub fn provenance(&self) -> Provenance {
        match self {
            InvertibilityVerdict::Witness { provenance, .. } => *provenance,
            InvertibilityVerdict::NoneCertified(NoInverseReason::Exhausted { .. }) => Provenance::Exhaustive,
            InvertibilityVerdict::NoneCertified(_) => Provenance::Certified,
            InvertibilityVerdict::Inconclusive { .. } => Provenance::Sampled,
        }
    }

    pub fn to_json(&self, a: &Algebra) -> Value {
        match self {
            InvertibilityVerdict::Witness { map, .. } => json!({"witness": a.encode_matrix(map)}),
            InvertibilityVerdict::NoneCertified(NoInverseReason::ZeroSpace) => json!({"none": "zero-space"}),
            InvertibilityVerdict::NoneCertified(NoInverseReason::CommonKernel(v)) => {
                json!({"none": "common-kernel", "vector": a.encode_element(&Element::new(v.clone()))})
            }
            InvertibilityVerdict::NoneCertified(NoInverseReason::Exhausted { tried }) => {
                json!({"none": "exhausted", "tried": tried})
            }
            InvertibilityVerdict::Inconclusive { samples } => json!({"inconclusive": samples}),
        }
    }
}

impl OperatorSpace {
    /// Common kernel, then exhaustive scan of combinations over a small
    /// finite field, then random combinations.
    pub fn invertible_element(&self, opts: &Options) -> InvertibilityVerdict {
        if self.dim() == 0 {
            return InvertibilityVerdict::NoneCertified(NoInverseReason::ZeroSpace);
        }
        let maps = self.maps();
        let stacked = maps.iter().skip(1).fold(maps[0].clone(), |acc, m| acc.stack(m));
        if let Some(v) = stacked.kernel().basis().first() {
            return InvertibilityVerdict::NoneCertified(NoInverseReason::CommonKernel(v.clone()));
        }
        self.search_combinations(opts)
    }

    /// Scans combinations of the basis maps for a full-rank one, without the
    /// common-kernel shortcut.
    pub fn search_combinations(&self, opts: &Options) -> InvertibilityVerdict {
        if self.dim() == 0 {
            return InvertibilityVerdict::NoneCertified(NoInverseReason::ZeroSpace);
        }
        let field = self.subspace().field().clone();
        let k = self.dim();
        if let Some(q) = field.order() {
            if let Some(count) = bounded_pow(q, k, opts.enum_cap) {
                for n in 1..count {
                    let mut m = n;
                    let coeffs: Vec<_> = (0..k)
                        .map(|_| {
                            let c = field.int((m % q) as i64);
                            m /= q;
                            c
                        })
                        .collect();
                    let map = self.combination(&coeffs);
                    if map.is_invertible() {
                        return InvertibilityVerdict::Witness {
                            map,
                            provenance: Provenance::Exhaustive,
                        };
                    }
                }
                return InvertibilityVerdict::NoneCertified(NoInverseReason::Exhausted { tried: count - 1 });
            }
        }
        let mut rng = opts.rng();
        for _ in 0..opts.samples {
            let coeffs: Vec<_> = (0..k).map(|_| field.random(&mut rng)).collect();
            let map = self.combination(&coeffs);
            if map.is_invertible() {
                return InvertibilityVerdict::Witness {
                    map,
                    provenance: Provenance::Sampled,
                };
            }
        }
        InvertibilityVerdict::Inconclusive { samples: opts.samples }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValuesMode {
    Exhaustive,
    NormCertificate,
    Sample,
}

impl std::str::FromStr for ValuesMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<ValuesMode> {
        match s {
            "exhaustive" => Ok(ValuesMode::Exhaustive),
            "norm-certificate" => Ok(ValuesMode::NormCertificate),
            "sample" => Ok(ValuesMode::Sample),
            _ => Err(Error::InvalidParams(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvertibleValuesVerdict {
    PassExhaustive {
        values: u64,
    },
    PassCertified {
        identity: String,
        anisotropy: Anisotropy,
        samples: usize,
    },
    PassSampled {
        samples: usize,
    },
    Fail {
        x: Element,
        value: Element,
    },
    NotApplicable(String),
}

impl InvertibleValuesVerdict {
    pub fn passed(&self) -> bool {
        matches!(
            self,
            InvertibleValuesVerdict::PassExhaustive { .. }
                | InvertibleValuesVerdict::PassCertified { .. }
                | InvertibleValuesVerdict::PassSampled { .. }
        )
    }

    pub fn provenance(&self) -> Provenance {
        match self {
            InvertibleValuesVerdict::PassExhaustive { .. } => Provenance::Exhaustive,
            InvertibleValuesVerdict::PassCertified { anisotropy, .. } => anisotropy.provenance(),
            InvertibleValuesVerdict::Fail { .. } | InvertibleValuesVerdict::NotApplicable(_) => Provenance::Certified,
            InvertibleValuesVerdict::PassSampled { .. } => Provenance::Sampled,
        }
    }

    pub fn to_json(&self, a: &Algebra) -> Value {
        match self {
            InvertibleValuesVerdict::PassExhaustive { values } => json!({"pass": "exhaustive", "values": values}),
            InvertibleValuesVerdict::PassCertified {
                identity,
                anisotropy,
                samples,
            } => json!({
                "pass": "certified",
                "identity": identity,
                "anisotropy": anisotropy.describe(),
                "samples": samples,
            }),
            InvertibleValuesVerdict::PassSampled { samples } => json!({"pass": "sampled", "samples": samples}),
            InvertibleValuesVerdict::Fail { x, value } => json!({
                "x": a.encode_element(x),
                "d(x)": a.encode_element(value),
            }),
            InvertibleValuesVerdict::NotApplicable(why) => json!({"not-applicable": why}),
        }
    }
}

/// How the anisotropy of the factor form was established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Anisotropy {
    /// Diagonal with positive coefficients over the rationals.
    PositiveDefinite,
    /// Every nonzero vector checked over a finite field.
    Enumerated { vectors: u64 },
    /// Diagonal over `GF(2)(s,t)` with coefficients independent over the
    /// squares, among polynomials of bounded degree.
    SquareClasses { degree_cap: u32 },
    /// Only random vectors were checked.
    Sampled { samples: usize },
}

impl Anisotropy {
    pub fn provenance(&self) -> Provenance {
        match self {
            Anisotropy::PositiveDefinite => Provenance::Certified,
            Anisotropy::Enumerated { .. } => Provenance::Exhaustive,
            Anisotropy::SquareClasses { .. } | Anisotropy::Sampled { .. } => Provenance::Sampled,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Anisotropy::PositiveDefinite => "positive definite diagonal form".into(),
            Anisotropy::Enumerated { vectors } => format!("{vectors} nonzero vectors enumerated"),
            Anisotropy::SquareClasses { degree_cap } => {
                format!("diagonal coefficients independent over squares up to degree {degree_cap}")
            }
            Anisotropy::Sampled { samples } => format!("{samples} random vectors"),
        }
    }
}

/// Claims `n(d(z)) = factor · form(projection · z)` for every `z`, so that
/// `d(z)` is invertible whenever `projection · z ≠ 0`, provided `form` is
/// anisotropic and `factor ≠ 0`. Also claims `d(z) = 0` iff
/// `projection · z = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormCertificate {
    pub projection: Matrix,
    pub form: QuadraticForm,
    pub factor: FieldElement,
    pub description: String,
}

impl NormCertificate {
    /// Exact comparison of `n ∘ d` with `factor · form ∘ projection` as
    /// quadratic forms, coefficient by coefficient.
    pub fn factorization_holds(&self, c: &QuadraticAlgebra, d: &Matrix) -> bool {
        let dim = c.dim();
        let a = c.algebra();
        let images: Vec<Element> = (0..dim).map(|i| apply(d, &a.basis(i))).collect();
        let projected: Vec<Vec<FieldElement>> = (0..dim).map(|i| self.projection.column(i)).collect();
        let form_polar = |x: &[FieldElement], y: &[FieldElement]| {
            let sum: Vec<_> = x.iter().zip(y).map(|(a, b)| a + b).collect();
            &(&self.form.eval(&sum) - &self.form.eval(x)) - &self.form.eval(y)
        };
        for i in 0..dim {
            if c.norm(&images[i]) != &self.factor * &self.form.eval(&projected[i]) {
                return false;
            }
            for j in i + 1..dim {
                if c.bilinear(&images[i], &images[j]) != &self.factor * &form_polar(&projected[i], &projected[j]) {
                    return false;
                }
            }
        }
        // d(z) = 0 iff projection·z = 0 means the kernels coincide.
        d.kernel() == self.projection.kernel()
    }

    pub fn anisotropy(&self, field: &Field, opts: &Options) -> Option<Anisotropy> {
        let k = self.form.dim();
        let diagonal = (0..k).all(|i| (i + 1..k).all(|j| self.form.coeff(i, j).is_zero()));
        let diag: Vec<FieldElement> = (0..k).map(|i| self.form.coeff(i, i).clone()).collect();
        if field.is_rationals() && diagonal {
            return diag
                .iter()
                .all(|c| c.signum() == Some(1))
                .then_some(Anisotropy::PositiveDefinite);
        }
        if let Some(q) = field.order() {
            if let Some(count) = bounded_pow(q, k, opts.enum_cap) {
                for n in 1..count {
                    let mut m = n;
                    let v: Vec<_> = (0..k)
                        .map(|_| {
                            let c = field.int((m % q) as i64);
                            m /= q;
                            c
                        })
                        .collect();
                    if self.form.eval(&v).is_zero() {
                        return None;
                    }
                }
                return Some(Anisotropy::Enumerated { vectors: count - 1 });
            }
        }
        if field.is_ratfun() && field.characteristic() == 2 && diagonal {
            const CAP: u32 = 8;
            return square_class_independent(&diag, CAP).then_some(Anisotropy::SquareClasses { degree_cap: CAP });
        }
        let mut rng = opts.rng();
        for _ in 0..opts.samples {
            let v: Vec<_> = (0..k).map(|_| field.random(&mut rng)).collect();
            if v.iter().any(|c| !c.is_zero()) && self.form.eval(&v).is_zero() {
                return None;
            }
        }
        Some(Anisotropy::Sampled { samples: opts.samples })
    }
}

/// Over `GF(2)(s,t)`: no nontrivial `Σ κ_i c_i² = 0` with polynomial `c_i`
/// of total degree at most `cap`. Writing `κ_i = a_i/b_i`, a relation for
/// `κ` is one for `p_i = a_i b_i` (substitute `c_i ↦ c_i/b_i` and clear
/// denominators), and over `GF(2)` the map `(c_i) ↦ Σ p_i c_i²` is linear
/// in the coefficients of the `c_i`.
pub fn square_class_independent(kappa: &[FieldElement], cap: u32) -> bool {
    let Some(first) = kappa.first().and_then(FieldElement::as_ratfun) else {
        return false;
    };
    let p = first.numerator().modulus();
    if p != 2 {
        return false;
    }
    let mut polys = Vec::new();
    for k in kappa {
        match k.as_ratfun() {
            Some(r) if !r.numerator().is_zero() => polys.push(r.numerator().mul(r.denominator())),
            _ => return false,
        }
    }
    let monomials: Vec<(u32, u32)> = (0..=cap).flat_map(|i| (0..=cap - i).map(move |j| (i, j))).collect();
    let mut columns: Vec<Poly2> = Vec::new();
    for poly in &polys {
        for &(i, j) in &monomials {
            columns.push(poly.mul_monomial((2 * i, 2 * j), 1));
        }
    }
    let mut index = std::collections::BTreeMap::new();
    for col in &columns {
        for (e, _) in col.terms() {
            let next = index.len();
            index.entry(e).or_insert(next);
        }
    }
    let gf2 = Field::prime(2).expect("2 is prime");
    let rows = index.len();
    let vectors: Vec<Vec<FieldElement>> = columns
        .iter()
        .map(|col| {
            let mut v = vec![gf2.zero(); rows];
            for (e, _) in col.terms() {
                v[index[&e]] = gf2.one();
            }
            v
        })
        .collect();
    Subspace::span(&gf2, rows, &vectors).dim() == columns.len()
}

impl Algebra {
    /// Whether every nonzero value of the derivation `d` is invertible.
    pub fn invertible_values(
        &self,
        d: &Matrix,
        mode: ValuesMode,
        certificate: Option<(&QuadraticAlgebra, &NormCertificate)>,
        opts: &Options,
    ) -> Result<InvertibleValuesVerdict> {
        let unit = self.find_unit().ok_or(Error::NotUnital)?;
        self.check_map(d)?;
        if d.is_zero() {
            return Err(Error::ZeroDerivation);
        }
        self.require_derivation(d)?;
        let bad = |x: &Element| {
            let y = apply(d, x);
            (!y.is_zero() && self.invert_with_unit(&y, &unit).is_none()).then_some(y)
        };
        match mode {
            ValuesMode::Exhaustive => {
                // Values range over the image; enumerate it and pull back.
                let image = Subspace::span(self.field(), self.dim(), &d.transpose().to_rows());
                let Some(q) = self.field().order() else {
                    return Ok(InvertibleValuesVerdict::NotApplicable("infinite field".into()));
                };
                let Some(count) = bounded_pow(q, image.dim(), opts.enum_cap) else {
                    return Ok(InvertibleValuesVerdict::NotApplicable(format!(
                        "more than {} values",
                        opts.enum_cap
                    )));
                };
                let field = self.field();
                for n in 1..count {
                    let mut m = n;
                    let mut y = self.zero();
                    for b in image.basis() {
                        let c = field.int((m % q) as i64);
                        m /= q;
                        y = y.add_scaled(&c, &Element::new(b.clone()));
                    }
                    if self.invert_with_unit(&y, &unit).is_none() {
                        let x = Element::new(d.solve(y.coords()).expect("value in the image"));
                        return Ok(InvertibleValuesVerdict::Fail { x, value: y });
                    }
                }
                Ok(InvertibleValuesVerdict::PassExhaustive { values: count - 1 })
            }
            ValuesMode::NormCertificate => {
                let Some((c, cert)) = certificate else {
                    return Ok(InvertibleValuesVerdict::NotApplicable("no norm certificate".into()));
                };
                if c.algebra() != self {
                    return Err(Error::Precondition("certificate belongs to another algebra".into()));
                }
                if cert.factor.is_zero() || !cert.factorization_holds(c, d) {
                    return Ok(InvertibleValuesVerdict::NotApplicable(
                        "factorization does not hold".into(),
                    ));
                }
                let Some(anisotropy) = cert.anisotropy(self.field(), opts) else {
                    return Ok(InvertibleValuesVerdict::NotApplicable(
                        "factor form is isotropic".into(),
                    ));
                };
                let mut rng = opts.rng();
                for _ in 0..opts.samples {
                    let x = self.random_element(&mut rng);
                    let px = cert.projection.mul_vec(x.coords());
                    let y = apply(d, &x);
                    if c.norm(&y) != &cert.factor * &cert.form.eval(&px) {
                        return Ok(InvertibleValuesVerdict::NotApplicable(
                            "sampled factorization mismatch".into(),
                        ));
                    }
                    // y ybar = ybar y = n(y)1, so n(y) != 0 exhibits the inverse n(y)^-1 ybar.
                    let n = c.norm(&y);
                    let bar = c.conjugate(&y);
                    let nu = unit.scale(&n);
                    if !y.is_zero() && (n.is_zero() || self.mul(&y, &bar) != nu || self.mul(&bar, &y) != nu) {
                        return Ok(InvertibleValuesVerdict::Fail { x, value: y });
                    }
                }
                Ok(InvertibleValuesVerdict::PassCertified {
                    identity: cert.description.clone(),
                    anisotropy,
                    samples: opts.samples,
                })
            }
            ValuesMode::Sample => {
                let mut rng = opts.rng();
                for _ in 0..opts.samples {
                    let x = self.random_element(&mut rng);
                    if let Some(value) = bad(&x) {
                        return Ok(InvertibleValuesVerdict::Fail { x, value });
                    }
                }
                Ok(InvertibleValuesVerdict::PassSampled { samples: opts.samples })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tests::{mat2, nil2};

    #[test]
    fn invertibility_pipeline() {
        let f = Field::prime(3).unwrap();
        let z = QuadraticAlgebra::zorn(&f);
        let der = z.algebra().derivation_space();
        match der.invertible_element(&Options::default()) {
            InvertibilityVerdict::NoneCertified(NoInverseReason::CommonKernel(v)) => {
                assert!(z.algebra().span(&[z.unit().clone()]).contains(&v).unwrap());
            }
            other => panic!("{other:?}"),
        }
        let v = nil2(&f).derivation_space().invertible_element(&Options::default());
        assert!(v.has_witness());
        let zero = OperatorSpace::new(super::super::SpaceLabel::Derivations, 2, Subspace::zero(&f, 4));
        assert_eq!(
            zero.invertible_element(&Options::default()),
            InvertibilityVerdict::NoneCertified(NoInverseReason::ZeroSpace)
        );
    }

    #[test]
    fn inner_derivation_of_matrices_has_singular_values() {
        let f = Field::prime(3).unwrap();
        let m = mat2(&f);
        let a = m.basis(1);
        let ad = m.left_mul(&a).sub(&m.right_mul(&a));
        let v = m
            .invertible_values(&ad, ValuesMode::Exhaustive, None, &Options::default())
            .unwrap();
        match v {
            InvertibleValuesVerdict::Fail { x, value } => {
                assert_eq!(apply(&ad, &x), value);
                assert!(m.invert_element(&value).unwrap().is_none());
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            m.invertible_values(&Matrix::zeros(&f, 4, 4), ValuesMode::Sample, None, &Options::default()),
            Err(Error::ZeroDerivation)
        );
        assert_eq!(
            nil2(&f).invertible_values(&ad, ValuesMode::Sample, None, &Options::default()),
            Err(Error::NotUnital)
        );
    }

    #[test]
    fn square_classes() {
        let f = Field::ratfun2(2, ["s".into(), "t".into()]).unwrap();
        let (s, t) = (f.var(0).unwrap(), f.var(1).unwrap());
        let kappa = [f.one(), s.clone(), t.clone(), &s * &t];
        assert!(square_class_independent(&kappa, 4));
        // s and s·t² lie in the same square class.
        let dependent = [f.one(), s.clone(), &s * &(&t * &t)];
        assert!(!square_class_independent(&dependent, 4));
        // 1/s = s · (1/s)²
        let inv = [s.inv().unwrap(), s];
        assert!(!square_class_independent(&inv, 4));
    }
}
