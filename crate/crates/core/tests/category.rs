use mtcdef::category::*;
use mtcdef::CycScalar;

#[test]
fn sl2_fusion_and_dimensions() {
    let c = gen_sl2k(16);
    assert_eq!(c.rank(), 17);
    assert!(c.n(8, 16, 8));
    for i in (0..17).filter(|&i| i != 8) {
        assert!(!c.n(i, 16, i), "{i}");
    }
    assert!(c.qdim(16).is_one());
    let c1 = gen_sl2k(1);
    assert_eq!(c1.rank(), 2);
    assert!(c1.qdim(0).is_one() && c1.qdim(1).is_one());
}

#[test]
fn fusion_ring_axioms() {
    for k in 1..=5 {
        let c = gen_sl2k(k);
        let r = c.rank();
        for i in 0..r {
            for j in 0..r {
                assert_eq!(c.n(0, j, i), i == j);
                assert_eq!(c.n(i, j, 0), j == c.dual(i));
                for kk in 0..r {
                    for l in 0..r {
                        let lhs = (0..r).filter(|&e| c.n(i, j, e) && c.n(e, kk, l)).count();
                        let rhs = (0..r).filter(|&f| c.n(j, kk, f) && c.n(i, f, l)).count();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}

#[test]
fn small_levels_pass_every_check() {
    for k in 1..=4 {
        for rep in verify_all(&gen_sl2k(k), PentagonMode::Full) {
            assert!(rep.passed, "k={k}: {rep:?}");
        }
    }
}

#[test]
fn level_sixteen_sampled() {
    let c = gen_sl2k(16);
    let rep = verify_pentagon(&c, PentagonMode::Sampled { count: 2000, seed: 1 });
    assert!(rep.passed);
    assert_eq!(rep.seed, Some(1));
    assert!(verify_hexagon(&c).passed);
    assert!(verify_ribbon(&c).passed);
    assert!(c.theta(0).is_one());
    assert!(verify_modularity(&c).passed);
}

#[test]
fn sampling_is_deterministic() {
    let c = gen_sl2k(5);
    assert_eq!(sample_pentagon_instances(&c, 50, 7), sample_pentagon_instances(&c, 50, 7));
    assert_ne!(sample_pentagon_instances(&c, 50, 7), sample_pentagon_instances(&c, 50, 8));
}

#[test]
fn s_and_t() {
    for k in [1, 2, 3, 4, 16] {
        let c = gen_sl2k(k);
        let s = smatrix(&c);
        let t = tmatrix(&c);
        assert!(s.get(0, 0).is_one());
        for i in 0..c.rank() {
            assert_eq!(s.get(0, i), c.qdim(i));
            assert_eq!(t.get(i, i), c.theta(i));
            for j in 0..c.rank() {
                assert_eq!(s.get(i, j), s.get(j, i));
                assert_eq!(*s.get(i, c.dual(j)), s.get(i, j).conj());
            }
        }
        assert!(!s.determinant().unwrap().is_zero(), "k={k}");
    }
}

#[test]
fn anomaly_sums() {
    let t = anomaly_check(&trivial_category());
    assert!(t.anomaly_free_linear && t.anomaly_free_gauss);
    let c1 = anomaly_check(&gen_sl2k(1));
    // 1 + i and 1 − i
    assert_eq!(c1.p_plus, &CycScalar::one(12) + &CycScalar::root_of_unity(4, 1));
    assert_eq!(c1.p_minus, c1.p_plus.conj());
    assert!(!c1.anomaly_free_linear);
    let c16 = anomaly_check(&gen_sl2k(16));
    assert_eq!(c16.p_minus, c16.p_plus.conj());
    assert_eq!(c16.gauss_minus, c16.gauss_plus.conj());
}

#[test]
fn json_round_trip() {
    let c = gen_sl2k(3);
    let j = c.to_json();
    let text = serde_json::to_string(&j).unwrap();
    let back = MtcData::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text);
    for rep in verify_all(&back, PentagonMode::Full) {
        assert!(rep.passed);
    }
}

#[test]
fn mutations_are_located() {
    let c = gen_sl2k(3);
    let slot = [1, 1, 1, 1, 2, 2];
    let mut m = c.clone();
    m.set_f(slot, &c.f(1, 1, 1, 1, 2, 2) + &c.one()).unwrap();
    let rep = verify_pentagon(&m, PentagonMode::Full);
    assert!(!rep.passed);
    let f = rep.failure.unwrap();
    assert_eq!(f.labels.len(), 9);
    assert_ne!(f.lhs, f.rhs);

    let mut m = gen_sl2k(2);
    let r = m.r(1, 1, 2).clone();
    m.set_r([1, 1, 2], -r).unwrap();
    assert!(!verify_hexagon(&m).passed);

    let mut m = gen_sl2k(2);
    m.set_theta(0, CycScalar::from_i64(m.conductor(), -1)).unwrap();
    assert!(!verify_ribbon(&m).passed);
}
