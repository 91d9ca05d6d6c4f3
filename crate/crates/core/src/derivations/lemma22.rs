//! Derivations with invertible values on Cayley-Dickson algebras.
//!
//! Case I: `C = B ⊕ vB` a double and `u ∈ B` with `t(u) = 0`; the map is
//! `d(a + vb) = v(bu)`. Case II: characteristic 2, `B = B^⊥` a subalgebra
//! and `x ∉ B` with `t(x) = 0`, `C = B ⊕ xB`; the map is `d(a + xb) = b`.

use super::invertibility::NormCertificate;
use crate::algebra::Element;
use crate::cayley_dickson::{QuadraticAlgebra, QuadraticForm};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::linalg::{Matrix, Subspace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma22 {
    pub algebra: QuadraticAlgebra,
    pub map: Matrix,
    /// `B`, which is also the kernel of the map.
    pub base: Subspace,
    /// Case I: `u`. Case II: the chosen `x`.
    pub parameter: Element,
    pub certificate: NormCertificate,
}

/// Case I on the double of `base` by `gamma`.
pub fn lemma22_case1(base: &QuadraticAlgebra, gamma: &FieldElement, u: &Element) -> Result<Lemma22> {
    let db = base.dim();
    if u.dim() != db {
        return Err(Error::DimensionMismatch {
            expected: db,
            got: u.dim(),
        });
    }
    if !base.trace(u).is_zero() {
        return Err(Error::Precondition("t(u) must be zero".into()));
    }
    if u.is_zero() {
        return Err(Error::Precondition("u must be nonzero".into()));
    }
    let c = base.double(gamma)?;
    let field = c.field().clone();
    let ru = base.algebra().right_mul(u);
    let map = Matrix::from_fn(&field, 2 * db, 2 * db, |r, col| {
        if r >= db && col >= db {
            ru[(r - db, col - db)].clone()
        } else {
            field.zero()
        }
    });
    c.algebra().require_derivation(&map)?;
    let projection = Matrix::from_fn(&field, db, 2 * db, |r, col| {
        if col == db + r {
            field.one()
        } else {
            field.zero()
        }
    });
    let lower: Vec<_> = (0..db).map(|i| c.algebra().basis(i).into_coords()).collect();
    let certificate = NormCertificate {
        projection,
        form: base.norm_form().clone(),
        factor: &(-gamma) * &base.norm(u),
        description: "n(d(a+vb)) = -gamma n(b) n(u)".into(),
    };
    Ok(Lemma22 {
        base: Subspace::span(&field, 2 * db, &lower),
        algebra: c,
        map,
        parameter: u.clone(),
        certificate,
    })
}

/// Case II with `x` the first standard basis vector of trace zero outside
/// `base`.
pub fn lemma22_case2(c: &QuadraticAlgebra, base: &Subspace) -> Result<Lemma22> {
    let field = c.field().clone();
    let d = c.dim();
    if field.characteristic() != 2 {
        return Err(Error::Precondition("case II needs characteristic 2".into()));
    }
    if base.ambient() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: base.ambient(),
        });
    }
    if c.orthocomplement(base)? != *base {
        return Err(Error::Precondition("B is not its own orthogonal complement".into()));
    }
    let a = c.algebra();
    let x = (0..d)
        .map(|i| a.basis(i))
        .find(|e| c.trace(e).is_zero() && !base.contains(e.coords()).expect("ambient matches"))
        .ok_or_else(|| Error::Precondition("no trace-zero basis vector outside B".into()))?;
    let bs: Vec<Element> = base.basis().iter().map(|v| Element::new(v.clone())).collect();
    let k = bs.len();
    let mut columns: Vec<_> = bs.iter().map(|b| b.coords().to_vec()).collect();
    columns.extend(bs.iter().map(|b| a.mul(&x, b).into_coords()));
    let p = Matrix::from_columns(&field, d, &columns);
    let p_inv = p
        .inverse()
        .filter(|_| 2 * k == d)
        .ok_or_else(|| Error::Precondition("C is not B + xB".into()))?;
    let projection = Matrix::from_fn(&field, k, d, |r, col| p_inv[(k + r, col)].clone());
    let map = Matrix::from_columns(&field, d, &columns[..k]).mul(&projection);
    a.require_derivation(&map)?;
    let mut form = QuadraticForm::zero(&field, k);
    for i in 0..k {
        form.set(i, i, c.norm(&bs[i]));
        for j in i + 1..k {
            form.set(i, j, c.bilinear(&bs[i], &bs[j]));
        }
    }
    let certificate = NormCertificate {
        projection,
        form,
        factor: field.one(),
        description: "n(d(a+xb)) = n(b)".into(),
    };
    Ok(Lemma22 {
        algebra: c.clone(),
        map,
        base: base.clone(),
        parameter: x,
        certificate,
    })
}
