use std::sync::Arc;

use mtcdef::category::gen_sl2k;
use mtcdef::frobenius::{endomorphism_algebra, solve_haploid_algebra, trivial_algebra, FrobeniusAlgebra};
use mtcdef::homspace::{Cat, SSObject};
use mtcdef::invariants::*;
use mtcdef::multimodule::{check_multimodule, MultiModule, Sign};
use mtcdef::CycScalar;

fn obj(s: &str) -> SSObject {
    SSObject::parse(s).unwrap()
}

fn k16() -> Cat {
    Cat::new(gen_sl2k(16))
}

fn haploid(cat: &Cat, s: &str) -> Arc<FrobeniusAlgebra> {
    Arc::new(solve_haploid_algebra(cat, &obj(s)).unwrap().remove(0))
}

fn int(cat: &Cat, v: i64) -> CycScalar {
    CycScalar::from_i64(cat.conductor(), v)
}

#[test]
fn centers() {
    let cat = k16();
    let one = trivial_algebra(&cat);
    let c = center_projector(&cat, &one, Side::Left).unwrap();
    assert_eq!(c.projector, cat.id(&one.obj));
    assert_eq!(c.multiplicities.get(&0), Some(&1));
    assert_eq!(c.qdim, cat.one());
    for s in ["0+16", "0+8+16"] {
        let a = haploid(&cat, s);
        for side in [Side::Left, Side::Right] {
            let c = center_projector(&cat, &a, side).unwrap();
            assert_eq!(c.object(), obj("0+16"), "{s} {side}");
            assert_eq!(c.qdim, int(&cat, 2));
        }
    }
}

#[test]
fn left_and_right_centers_agree_in_dimension() {
    let cat = Cat::new(gen_sl2k(3));
    let e = endomorphism_algebra(&cat, &obj("1")).unwrap();
    let l = center_projector(&cat, &e, Side::Left).unwrap();
    let r = center_projector(&cat, &e, Side::Right).unwrap();
    assert_eq!(l.qdim, r.qdim);
    let cat2 = Cat::new(gen_sl2k(2));
    let f = solve_haploid_algebra(&cat2, &obj("0+2")).unwrap().remove(0);
    let l = center_projector(&cat2, &f, Side::Left).unwrap();
    let r = center_projector(&cat2, &f, Side::Right).unwrap();
    assert_eq!(l.qdim, r.qdim);
    assert_eq!(l.qdim, cat2.one());
}

#[test]
fn alpha_induction() {
    let cat = k16();
    let one = Arc::new(trivial_algebra(&cat));
    let a = haploid(&cat, "0+16");
    let reg = alpha_bimodule(&cat, &a, 0, Sign::Plus).unwrap();
    assert_eq!(reg.actions[0].rho, cat.tensor(&a.mu, &cat.id(&[obj("0")])));
    for sign in [Sign::Plus, Sign::Minus] {
        let m = alpha_bimodule(&cat, &a, 8, sign).unwrap();
        assert!(check_multimodule(&cat, &m).unwrap().passed());
        let u = alpha_bimodule(&cat, &one, 5, sign).unwrap();
        assert_eq!(u.obj, vec![obj("0"), obj("5")]);
    }
    let _ = MultiModule::bare(vec![]);
}

#[test]
fn full_center_of_the_unit_is_the_identity() {
    let cat = k16();
    let z = full_center_matrix(&cat, &Arc::new(trivial_algebra(&cat))).unwrap();
    for i in 0..17 {
        for j in 0..17 {
            assert_eq!(z.z[i][j], (i == j) as usize);
        }
    }
    assert_eq!(z.trace(), 17);
}

#[test]
fn d10_full_center_is_the_d_series_invariant() {
    let cat = k16();
    let a = haploid(&cat, "0+16");
    let z = full_center_matrix(&cat, &a).unwrap();
    assert_eq!(z.z, d_series_invariant(16).unwrap());
    assert_eq!(z.trace(), 10);
}

#[test]
fn table_of_torus_invariants() {
    let cat = k16();
    let rows = [("0", 17, 17, 17), ("0+16", 34, 18, 10), ("0+8+16", 34, 18, 7)];
    for (s, i0, i1, i2) in rows {
        let a = if s == "0" { Arc::new(trivial_algebra(&cat)) } else { haploid(&cat, s) };
        let t = t3_invariants(&cat, &a).unwrap();
        assert_eq!(t.iota0_plus, int(&cat, i0), "{s}");
        assert_eq!(t.iota0_minus, int(&cat, i0), "{s}");
        assert_eq!((t.iota1_plus, t.iota1_minus, t.iota2), (i1, i1, i2), "{s}");
        let c = center_projector(&cat, &a, Side::Left).unwrap();
        assert_eq!(iota1(&cat, &c), iota1_by_hom_spaces(&cat, &c));
    }
}

#[test]
fn gauge_independence() {
    let cat = k16();
    let sols = solve_haploid_algebra(&cat, &obj("0+8+16")).unwrap();
    let first = t3_invariants(&cat, &Arc::new(sols[0].clone())).unwrap();
    for a in sols.into_iter().skip(1) {
        assert_eq!(t3_invariants(&cat, &Arc::new(a)).unwrap(), first);
    }
}

#[test]
fn embedded_spheres() {
    let cat = k16();
    let one = trivial_algebra(&cat);
    let a = haploid(&cat, "0+16");
    assert_eq!(sphere_embedding_invariant(&cat, &one, Manifold::T3), int(&cat, 17));
    assert_eq!(sphere_embedding_invariant(&cat, &a, Manifold::T3), int(&cat, 34));
    assert_eq!(sphere_embedding_invariant(&cat, &a, Manifold::S2xS1), int(&cat, 2));
    assert!("S3".parse::<Manifold>().is_err());
    assert_eq!("t3".parse::<Manifold>().unwrap(), Manifold::T3);
}
