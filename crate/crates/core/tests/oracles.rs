mod support;

use altder::catalog::{self, Params};
use altder::{Algebra, Element, Field, Identity, Options, QuadraticAlgebra};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::*;

const BIG_P: u64 = 1_000_003;

fn gf(p: u64) -> Field {
    Field::prime(p).unwrap()
}

fn residues(x: &Element) -> [u64; 8] {
    let mut out = [0; 8];
    for (o, c) in out.iter_mut().zip(x.coords()) {
        *o = c.residue().unwrap();
    }
    out
}

#[test]
fn zorn_table_matches_direct_formula() {
    for p in [2, 3, 5, 7] {
        let z = QuadraticAlgebra::zorn(&gf(p));
        let a = z.algebra();
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        for _ in 0..200 {
            let x = a.random_element(&mut rng);
            let y = a.random_element(&mut rng);
            let (rx, ry) = (residues(&x), residues(&y));
            assert_eq!(residues(&a.mul(&x, &y)), zorn_mul(&rx, &ry, p));
            assert_eq!(z.norm(&x).residue().unwrap(), zorn_norm(&rx, p));
        }
    }
}

#[test]
fn zorn_derivations_dense_oracle() {
    let q = QuadraticAlgebra::zorn(&Field::rationals());
    let lib = q.algebra().derivation_space().dim();
    assert_eq!(lib, 14);
    let c = table_mod_p(q.algebra(), BIG_P);
    for (a, b) in [(1, 0), (5, 3), (13, 7), (37, 11)] {
        assert_eq!(der_dim(&c, BIG_P, &affine_perm(64, a, b)), lib);
    }
}

#[test]
fn derivation_dims_agree_across_catalog() {
    for name in [
        "remark22",
        "mat2",
        "upper3",
        "trivial-nilpotent",
        "zero2",
        "field1",
        "lemma23-Dx",
    ] {
        let inst = catalog::build(name, &Params::default()).unwrap();
        let a = &inst.algebra;
        let p = a.field().characteristic();
        let p = if p == 0 { BIG_P } else { p };
        let c = table_mod_p(a, p);
        let n = a.dim() * a.dim();
        let perm = affine_perm(n, if n.is_multiple_of(7) { 1 } else { 7 }, 3 % n.max(1));
        assert_eq!(der_dim(&c, p, &perm), a.derivation_space().dim(), "{name}");
    }
}

#[test]
fn zorn_gf5_quasiderivations_dense_oracle() {
    let z = QuadraticAlgebra::zorn(&gf(5));
    let lib = z.algebra().quasider_space().dim();
    assert_eq!(lib, 15);
    let c = table_mod_p(z.algebra(), 5);
    assert_eq!(qder_dim(&c, 5, &affine_perm(128, 37, 11)), 15);
    assert_eq!(qder_dim(&c, 5, &affine_perm(128, 1, 0)), 15);
}

#[test]
fn small_quasiderivation_dims() {
    for (name, expected) in [("field1", 1), ("zero2", 4), ("trivial-nilpotent", 3)] {
        let params = Params {
            field: Some("gf5".parse().unwrap()),
            ..Params::default()
        };
        let a = catalog::build(name, &params).unwrap().algebra;
        let c = table_mod_p(&a, 5);
        let n = 2 * a.dim() * a.dim();
        assert_eq!(
            qder_dim(&c, 5, &affine_perm(n, 1, 0)),
            a.quasider_space().dim(),
            "{name}"
        );
        assert_eq!(a.quasider_space().dim(), expected, "{name}");
    }
}

/// Powers straight from the definition, spanning all products `A^i A^j`.
fn power_dims_naive(a: &Algebra) -> Vec<usize> {
    let p = a.field().characteristic();
    let c = table_mod_p(a, p);
    let d = a.dim();
    let product = |u: &[Vec<u64>], v: &[Vec<u64>]| -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        for x in u {
            for y in v {
                let mut z = vec![0; d];
                for i in 0..d {
                    for j in 0..d {
                        let s = mul(x[i], y[j], p);
                        if s == 0 {
                            continue;
                        }
                        for k in 0..d {
                            z[k] = (z[k] + mul(s, c[i][j][k], p)) % p;
                        }
                    }
                }
                out.push(z);
            }
        }
        out
    };
    let mut powers: Vec<Vec<Vec<u64>>> = vec![
        vec![],
        (0..d).map(|i| (0..d).map(|j| u64::from(i == j)).collect()).collect(),
    ];
    let mut dims = vec![d];
    for n in 2..=d + 1 {
        let mut gens = Vec::new();
        for i in 1..n {
            gens.extend(product(&powers[i], &powers[n - i]));
        }
        let r = if gens.is_empty() { 0 } else { rank(gens.clone(), p) };
        dims.push(r);
        powers.push(gens);
        if r == 0 {
            break;
        }
    }
    dims
}

#[test]
fn remark22_power_chain_naive() {
    let a = catalog::remark22(&gf(3));
    assert_eq!(power_dims_naive(&a), vec![7, 4, 2, 1, 0]);
    assert_eq!(a.power_chain().dims(), vec![7, 4, 2, 1, 0]);
}

#[test]
fn alternative_verdicts_match_exhaustive_on_zorn() {
    // (x, x, y) is linear in y, so y over the basis and x over all elements is exhaustive.
    let opts = Options::default();
    for p in [2, 3] {
        let z = QuadraticAlgebra::zorn(&gf(p));
        let a = z.algebra();
        let mut left = true;
        let mut right = true;
        for x in a.elements(1 << 16).unwrap() {
            for y in a.basis_elements() {
                left &= a.associator(&x, &x, &y).is_zero();
                right &= a.associator(&y, &x, &x).is_zero();
            }
        }
        assert_eq!(a.check_identity(Identity::LeftAlternative, &opts).passed, left);
        assert_eq!(a.check_identity(Identity::RightAlternative, &opts).passed, right);
        assert!(left && right);
    }
}

#[test]
fn associator_alternates_on_zorn_basis() {
    let a = QuadraticAlgebra::zorn(&gf(3)).algebra().clone();
    let e = a.basis_elements();
    for x in &e {
        for y in &e {
            for z in &e {
                let base = a.associator(x, y, z);
                assert_eq!(a.associator(y, x, z), -&base);
                assert_eq!(a.associator(x, z, y), -&base);
                assert_eq!(a.associator(z, y, x), -&base);
            }
        }
    }
}

#[test]
fn tower_and_zorn_look_alike() {
    let q = Field::rationals();
    let m = -q.one();
    let tower = QuadraticAlgebra::tower(&q, &[m.clone(), m, q.one()]).unwrap();
    let zorn = QuadraticAlgebra::zorn(&q);
    let opts = Options::default();
    for id in [
        Identity::LeftAlternative,
        Identity::RightAlternative,
        Identity::Flexible,
        Identity::MiddleMoufang,
        Identity::Associative,
        Identity::Commutative,
    ] {
        assert_eq!(
            tower.algebra().check_identity(id, &opts).passed,
            zorn.algebra().check_identity(id, &opts).passed,
            "{id}"
        );
    }
    assert_eq!(tower.algebra().derivation_space().dim(), 14);
    for c in [&tower, &zorn] {
        assert!(matches!(
            c.find_isotropic(&opts),
            altder::cayley_dickson::Isotropic::Found { .. }
        ));
    }
}

#[test]
fn inverses_agree_with_norm_everywhere() {
    let z = QuadraticAlgebra::zorn(&gf(3));
    let a = z.algebra();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for x in a.elements(1 << 16).unwrap().filter(|_| rng.gen_bool(0.2)) {
        let norm = zorn_norm(&residues(&x), 3);
        let inv = a.invert_element(&x).unwrap();
        assert_eq!(inv.is_some(), norm != 0);
        if let Some(y) = inv {
            let ny = zorn_norm(&residues(&y), 3);
            assert_eq!(mul(norm, ny, 3), 1);
        }
    }
}
