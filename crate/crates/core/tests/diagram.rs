use mtcdef::category::{gen_sl2k, smatrix};
use mtcdef::diagram::*;
use mtcdef::homspace::{Cat, Morphism, SSObject};
use mtcdef::CycScalar;

fn s(l: usize) -> SSObject {
    SSObject::simple(l)
}

fn up(l: usize) -> Strand {
    Strand::up(s(l))
}

fn braid(cat: &Cat, input: &[Strand], at: usize, inverse: bool) -> SlicedDiagram {
    let mut d = SlicedDiagram::new(input.to_vec());
    d.push_at(cat, at, Generator::Braid { inverse }).unwrap();
    d
}

#[test]
fn empty_and_identity() {
    let cat = Cat::new(gen_sl2k(2));
    let e = SlicedDiagram::default();
    assert!(typecheck(&cat, &e).unwrap().closed);
    assert_eq!(evaluate_closed(&cat, &e).unwrap(), cat.one());
    let d = SlicedDiagram::new(vec![up(1), up(2)]);
    assert_eq!(evaluate(&cat, &d).unwrap(), cat.id(&[s(1), s(2)]));
}

#[test]
fn loops_and_twists() {
    for k in 1..=4 {
        let cat = Cat::new(gen_sl2k(k));
        for i in 0..=k {
            let l = loop_diagram(&cat, &s(i), None).unwrap();
            assert!(typecheck(&cat, &l).unwrap().closed);
            assert_eq!(evaluate_closed(&cat, &l).unwrap(), *cat.qdim(i));
            let t = loop_diagram(&cat, &s(i), Some(false)).unwrap();
            assert_eq!(evaluate_closed(&cat, &t).unwrap(), cat.theta(i) * cat.qdim(i));
        }
    }
}

#[test]
fn reidemeister_two_and_three() {
    for k in 1..=4 {
        let cat = Cat::new(gen_sl2k(k));
        for a in 0..=k {
            for b in 0..=k {
                let input = [up(a), up(b)];
                for inv in [false, true] {
                    let d = braid(&cat, &input, 0, inv);
                    let d2 = d.then(&braid(&cat, &d.output, 0, !inv)).unwrap();
                    assert_eq!(evaluate(&cat, &d2).unwrap(), cat.id(&[s(a), s(b)]));
                }
                for c in 0..=k {
                    let input = vec![up(a), up(b), up(c)];
                    for inv in [false, true] {
                        let mut l = SlicedDiagram::new(input.clone());
                        let mut r = SlicedDiagram::new(input.clone());
                        for at in [0, 1, 0] {
                            l.push_at(&cat, at, Generator::Braid { inverse: inv }).unwrap();
                        }
                        for at in [1, 0, 1] {
                            r.push_at(&cat, at, Generator::Braid { inverse: inv }).unwrap();
                        }
                        assert_eq!(evaluate(&cat, &l).unwrap(), evaluate(&cat, &r).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn framed_reidemeister_one() {
    for k in 1..=4 {
        let cat = Cat::new(gen_sl2k(k));
        for i in 0..=k {
            for inv in [false, true] {
                // strand i, cup on its right, cross with the new strand, cap
                let mut d = SlicedDiagram::new(vec![up(i)]);
                d.push_at(&cat, 1, Generator::Cup { strand: up(i) }).unwrap();
                d.push_at(&cat, 0, Generator::Braid { inverse: inv }).unwrap();
                d.push_at(&cat, 1, Generator::Cap { strand: up(i) }).unwrap();
                assert_eq!(evaluate(&cat, &d).unwrap(), cat.twist(&[s(i)], inv), "k={k} i={i}");
            }
        }
    }
}

#[test]
fn hopf_link_is_s_matrix() {
    let cat = Cat::new(gen_sl2k(16));
    let sm = smatrix(&cat);
    for i in 0..=16 {
        for j in 0..=16 {
            let h = hopf_link(&cat, &s(i), &s(j)).unwrap();
            assert_eq!(&evaluate_closed(&cat, &h).unwrap(), sm.get(i, j), "{i},{j}");
        }
    }
}

#[test]
fn coupon_slides_through_braid() {
    let cat = Cat::new(gen_sl2k(3));
    let x = SSObject::parse("1+2").unwrap();
    let y = SSObject::parse("1+3").unwrap();
    let z = s(2);
    let dim = cat.hom_dim(std::slice::from_ref(&x), std::slice::from_ref(&y));
    let v: Vec<CycScalar> = (0..dim).map(|i| CycScalar::from_i64(cat.conductor(), 2 * i as i64 - 3)).collect();
    let f: Morphism = cat.from_coords(std::slice::from_ref(&x), std::slice::from_ref(&y), &v).unwrap();
    let mut l = SlicedDiagram::new(vec![Strand::up(x.clone()), Strand::up(z.clone())]);
    l.push(&cat, vec![Generator::Coupon { morphism: f.clone() }]).unwrap();
    l.push(&cat, vec![Generator::Braid { inverse: false }]).unwrap();
    let mut r = SlicedDiagram::new(vec![Strand::up(x), Strand::up(z)]);
    r.push(&cat, vec![Generator::Braid { inverse: false }]).unwrap();
    r.push_at(&cat, 1, Generator::Coupon { morphism: f }).unwrap();
    assert_eq!(evaluate(&cat, &l).unwrap(), evaluate(&cat, &r).unwrap());
}

#[test]
fn height_exchange_and_disjoint_union() {
    let cat = Cat::new(gen_sl2k(3));
    let a = loop_diagram(&cat, &s(1), Some(false)).unwrap();
    let b = hopf_link(&cat, &s(2), &s(3)).unwrap();
    let ab = a.beside(&b);
    let ba_heights = {
        // same picture with b's slices first
        let mut d = SlicedDiagram::new(Vec::new());
        for sl in &b.slices {
            d.push(&cat, sl.clone()).unwrap();
        }
        let right = d.output.len();
        for sl in &a.slices {
            let mut row = sl.clone();
            row.extend(std::iter::repeat_n(Generator::Id, right));
            // a sits on the left
            d.slices.push(row);
        }
        d
    };
    let va = evaluate_closed(&cat, &a).unwrap();
    let vb = evaluate_closed(&cat, &b).unwrap();
    assert_eq!(evaluate_closed(&cat, &ab).unwrap(), &va * &vb);
    assert_eq!(evaluate_closed(&cat, &ba_heights).unwrap(), va * vb);
}

#[test]
fn half_twists_pair_up() {
    let cat = Cat::new(gen_sl2k(3));
    let mut d = SlicedDiagram::new(vec![up(1)]);
    d.push(&cat, vec![Generator::HalfTwist { chirality: Chirality::Plus }]).unwrap();
    let err = typecheck(&cat, &d).unwrap_err();
    assert!(err.to_string().contains("odd half-twist count"));
    d.push(&cat, vec![Generator::HalfTwist { chirality: Chirality::Plus }]).unwrap();
    assert_eq!(evaluate(&cat, &d).unwrap(), cat.twist(&[s(1)], false));
    let mut e = SlicedDiagram::new(vec![up(1)]);
    e.push(&cat, vec![Generator::HalfTwist { chirality: Chirality::Minus }]).unwrap();
    e.push(&cat, vec![Generator::HalfTwist { chirality: Chirality::Minus }]).unwrap();
    assert_eq!(evaluate(&cat, &e).unwrap(), cat.twist(&[s(1)], true));
    let mut f = SlicedDiagram::new(vec![up(1)]);
    f.push(&cat, vec![Generator::HalfTwist { chirality: Chirality::Minus }]).unwrap();
    f.push(&cat, vec![Generator::HalfTwist { chirality: Chirality::Plus }]).unwrap();
    assert_eq!(evaluate(&cat, &f).unwrap(), cat.id(&[s(1)]));
    // a pair on a closed loop, separated by a cap and cup
    let mut g = SlicedDiagram::new(Vec::new());
    g.push(&cat, vec![Generator::Cup { strand: up(2) }]).unwrap();
    g.push(&cat, vec![Generator::HalfTwist { chirality: Chirality::Plus }, Generator::HalfTwist { chirality: Chirality::Minus }]).unwrap();
    g.push(&cat, vec![Generator::Cap { strand: up(2) }]).unwrap();
    let v = evaluate_closed(&cat, &g).unwrap();
    // the marker on the downward strand counts with reversed chirality
    assert_eq!(v, cat.theta(2) * cat.qdim(2));
}

#[test]
fn json_round_trip() {
    let cat = Cat::new(gen_sl2k(2));
    let h = hopf_link(&cat, &s(1), &s(2)).unwrap();
    let txt = serde_json::to_string(&h).unwrap();
    let back: SlicedDiagram = serde_json::from_str(&txt).unwrap();
    assert_eq!(evaluate_closed(&cat, &back).unwrap(), evaluate_closed(&cat, &h).unwrap());
}

#[test]
fn type_errors_are_located() {
    let cat = Cat::new(gen_sl2k(2));
    let mut d = SlicedDiagram::new(vec![up(1), up(2)]);
    d.slices.push(vec![Generator::Cap { strand: up(1) }]);
    let e = typecheck(&cat, &d).unwrap_err().to_string();
    assert!(e.contains("slice 0"), "{e}");
}
