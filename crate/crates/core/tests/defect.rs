use std::sync::Arc;

use mtcdef::category::gen_sl2k;
use mtcdef::defect::*;
use mtcdef::diagram::{evaluate_closed, hopf_link, loop_diagram};
use mtcdef::frobenius::{endomorphism_algebra, solve_haploid_algebra, trivial_algebra, FrobeniusAlgebra};
use mtcdef::homspace::{Cat, SSObject};
use mtcdef::multimodule::*;

fn obj(s: &str) -> SSObject {
    SSObject::parse(s).unwrap()
}

fn haploid(cat: &Cat, s: &str) -> Arc<FrobeniusAlgebra> {
    Arc::new(solve_haploid_algebra(cat, &obj(s)).unwrap().remove(0))
}

#[test]
fn platonic_spheres() {
    for t in [Triangulation::tetrahedron(), Triangulation::octahedron()] {
        assert!(t.validate().unwrap());
        assert_eq!(t.euler_characteristic(), 2);
    }
    let mut bad = Triangulation::tetrahedron();
    bad.triangles[0] = [0, 1, 2];
    assert!(bad.validate().is_err());
    assert!(!Triangulation::single_triangle().validate().unwrap());
}

#[test]
fn pachner_moves() {
    let t = Triangulation::tetrahedron();
    let s = t.pachner_13(0).unwrap();
    assert_eq!(s.triangles.len(), 6);
    assert!(s.validate().unwrap());
    assert_eq!(s.pachner_31(4).unwrap().normalized(), t.normalized());
    // the tetrahedron has no flippable edge
    assert!(t.pachner_22(0, 1).is_err());
    let o = Triangulation::octahedron();
    let f = o.pachner_22(0, 1).unwrap();
    assert!(f.validate().unwrap());
    assert_ne!(f.normalized(), o.normalized());
    // flipping the new edge back restores the octahedron
    assert_eq!(f.pachner_22(4, 2).unwrap().normalized(), o.normalized());
    for seed in 0..30 {
        let r = random_sphere(seed, 12, 12);
        assert!(r.validate().unwrap(), "seed {seed}");
        assert_eq!(r.euler_characteristic(), 2, "seed {seed}");
    }
}

#[test]
fn closed_networks_give_the_dimension() {
    let cat = Cat::new(gen_sl2k(16));
    let one = trivial_algebra(&cat);
    let d10 = haploid(&cat, "0+16");
    for a in [&one, &*d10] {
        for t in [Triangulation::tetrahedron(), Triangulation::octahedron()] {
            assert_eq!(evaluate_closed_network(&cat, a, &t).unwrap(), a.dim(&cat));
        }
    }
}

#[test]
fn pachner_invariance() {
    let cat = Cat::new(gen_sl2k(16));
    let d10 = haploid(&cat, "0+16");
    let dim = d10.dim(&cat);
    for seed in 0..20 {
        let t = random_sphere(seed, 8, 12);
        assert_eq!(evaluate_closed_network(&cat, &d10, &t).unwrap(), dim, "seed {seed}");
    }
}

#[test]
fn non_haploid_network() {
    let cat = Cat::new(gen_sl2k(3));
    let a = endomorphism_algebra(&cat, &obj("1")).unwrap();
    let t = Triangulation::octahedron().pachner_13(3).unwrap();
    assert_eq!(evaluate_closed_network(&cat, &a, &t).unwrap(), a.dim(&cat));
}

#[test]
fn patch_boundary() {
    let cat = Cat::new(gen_sl2k(4));
    let a = haploid(&cat, "0+4");
    let mut t = Triangulation::octahedron();
    t.triangles.truncate(4);
    let net = dualize(&cat, &a, &t).unwrap();
    assert_eq!(net.boundary.len(), 4);
    assert_eq!(net.diagram.output.len(), 4);
    assert_eq!(net.mu_vertices + net.delta_vertices, 4);
}

fn regular_sphere(cat: &Cat, a: &Arc<FrobeniusAlgebra>) -> DefectSphereObject {
    let m = MultiModule::regular(cat, a).unwrap();
    let phi = cat.twist(&m.obj, true);
    let c = CyclicStructure { module: m, k: 1, phi };
    DefectSphereObject::new(c.clone(), c).unwrap()
}

#[test]
fn state_space_of_a_one_line_sphere() {
    let cat = Cat::new(gen_sl2k(3));
    let a = Arc::new(endomorphism_algebra(&cat, &obj("1")).unwrap());
    let s = regular_sphere(&cat, &a);
    let p = sphere_projector(&cat, &s, 0, 1).unwrap();
    assert_eq!(p.mul(&p).unwrap(), p);
    assert_eq!(p, module_hom_projector(&cat, &s.south.module, &s.north.module).unwrap());
    let expected = module_hom_dim(&cat, &s.south.module, &s.north.module).unwrap();
    assert_eq!(state_space_dim(&cat, &s).unwrap(), expected);
    // more marked points on the line give the same idempotent
    assert_eq!(sphere_projector(&cat, &s, 0, 3).unwrap(), p);
}

#[test]
fn psi_composes() {
    let cat = Cat::new(gen_sl2k(16));
    let d = haploid(&cat, "0+16");
    let sq = tensor_square(&cat, &MultiModule::regular(&cat, &d).unwrap()).unwrap();
    assert_eq!(sq.module.n(), 2);
    let s = DefectSphereObject::new(sq.clone(), sq).unwrap();
    for (a, b, c) in [(0, 1, 0), (1, 0, 1), (0, 0, 1)] {
        for (m1, m2, m3) in [(1, 1, 1), (1, 3, 2)] {
            let p12 = psi(&cat, &s, m1, m2, a, b, 0).unwrap();
            let p23 = psi(&cat, &s, m2, m3, b, c, 0).unwrap();
            let p13 = psi(&cat, &s, m1, m3, a, c, 0).unwrap();
            let over = psi(&cat, &s, m1, m3, a, c, 1).unwrap();
            let comp = p23.mul(&p12).unwrap();
            assert!(comp == p13 || comp == over, "({a},{b},{c})");
        }
    }
    let id = psi(&cat, &s, 1, 1, 0, 0, 0).unwrap();
    assert_eq!(id.mul(&id).unwrap(), id);
    let dims: Vec<usize> = [0, 1]
        .iter()
        .flat_map(|&st| [1, 3].map(|mk| psi(&cat, &s, mk, mk, st, st, 0).unwrap().rank()))
        .collect();
    assert!(dims.iter().all(|&x| x == dims[0]), "{dims:?}");
    assert!(DefectSphereObject { star: 1, ..s.clone() }.validate().is_ok());
}

#[test]
fn stars_must_sit_between_periods() {
    let cat = Cat::new(gen_sl2k(16));
    let d = haploid(&cat, "0+16");
    let two = MultiModule::regular_two_sided(&cat, &d).unwrap();
    let c = CyclicStructure { phi: cat.id(&two.obj), module: two, k: 2 };
    let s = DefectSphereObject::new(c.clone(), c).unwrap();
    assert!(psi(&cat, &s, 1, 1, 0, 1, 0).is_err());
}

#[test]
fn ribbons_as_defects() {
    let cat = Cat::new(gen_sl2k(4));
    for x in ["1", "2", "0+3"] {
        let x = obj(x);
        for twist in [None, Some(false), Some(true)] {
            let d = loop_diagram(&cat, &x, twist).unwrap();
            let strip = ribbon_as_defect(&cat, &d, RibbonEncoding::Strip).unwrap();
            assert_eq!(evaluate_closed(&cat, &strip).unwrap(), evaluate_closed(&cat, &d).unwrap());
        }
        let y = obj("1");
        let h = hopf_link(&cat, &x, &y).unwrap();
        let strip = ribbon_as_defect(&cat, &h, RibbonEncoding::Strip).unwrap();
        assert_eq!(evaluate_closed(&cat, &strip).unwrap(), evaluate_closed(&cat, &h).unwrap());
    }
    let twisted = loop_diagram(&cat, &obj("1"), Some(false)).unwrap();
    let err = ribbon_as_defect(&cat, &twisted, RibbonEncoding::Bare).unwrap_err();
    assert!(err.to_string().contains("twist"), "{err}");
    let plain = loop_diagram(&cat, &obj("0"), Some(false)).unwrap();
    assert!(ribbon_as_defect(&cat, &plain, RibbonEncoding::Bare).is_ok());
}

#[test]
fn defect_data_rules() {
    let cat = Cat::new(gen_sl2k(4));
    let a = haploid(&cat, "0+4");
    let surfaces = vec![
        SurfaceDatum { algebra: a.clone(), source: 0, target: 1 },
        SurfaceDatum { algebra: a.clone(), source: 1, target: 0 },
    ];
    let two = MultiModule::regular_two_sided(&cat, &a).unwrap();
    let good = LineDatum {
        around: vec![(0, Sign::Plus), (1, Sign::Plus)],
        module: MultiModule { actions: vec![two.actions[0].clone(), two.actions[0].clone()], ..two.clone() },
        reversed: None,
    };
    let data = DefectData { surfaces: surfaces.clone(), lines: vec![good.clone()] };
    validate_defect_data(&cat, &data).unwrap();

    let mismatch = LineDatum { around: vec![(0, Sign::Plus), (1, Sign::Minus)], ..good.clone() };
    let err = validate_defect_data(&cat, &DefectData { surfaces: surfaces.clone(), lines: vec![mismatch] }).unwrap_err();
    assert!(err.to_string().contains("region"), "{err}");

    let rev = reverse_line(&good.around);
    assert_eq!(rev, vec![(1, Sign::Minus), (0, Sign::Minus)]);
    let wrong_rev = LineDatum { reversed: Some(good.around.clone()), ..good.clone() };
    assert!(validate_defect_data(&cat, &DefectData { surfaces: surfaces.clone(), lines: vec![wrong_rev] }).is_err());

    let bare_twisted = LineDatum { around: vec![], module: MultiModule::bare(vec![obj("1")]), reversed: None };
    assert!(validate_defect_data(&cat, &DefectData { surfaces: surfaces.clone(), lines: vec![bare_twisted] }).is_err());
    let bare_ok = LineDatum { around: vec![], module: MultiModule::bare(vec![obj("0")]), reversed: None };
    validate_defect_data(&cat, &DefectData { surfaces, lines: vec![bare_ok] }).unwrap();
}
