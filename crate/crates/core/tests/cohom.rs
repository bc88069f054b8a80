mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::*;
use fusionkit::cohom::*;
use fusionkit::fusion::{classify, FusionSystem};
use proptest::prelude::*;

const CATALOG: &[(&str, u32)] = &[
    ("s4.gens", 2),
    ("a4.gens", 2),
    ("a5.gens", 2),
    ("d8.gens", 2),
    ("q8.gens", 2),
    ("gl23.gens", 2),
    ("s3.gens", 3),
    ("a4.gens", 3),
    ("dic3.gens", 3),
    ("s3xs3.gens", 3),
    ("s3xc2.gens", 2),
];

fn data(name: &str, p: u32) -> CohomData {
    let f = Arc::new(FusionSystem::build(catalog(name), p).unwrap());
    let c = classify(&f).unwrap();
    compute(f, c.centric()).unwrap()
}

/// Inn(Q)-orbits on the maps P -> Q induced by conjugation in G, with raw permutations.
fn naive_orbit_count(g: &fusionkit::grp::FiniteGroup, p: &BTreeSet<P>, q: &BTreeSet<P>) -> usize {
    let all: Vec<P> = g.all().map(|x| raw(g, x)).collect();
    let pl: Vec<P> = p.iter().cloned().collect();
    let maps: BTreeSet<Vec<P>> = all
        .iter()
        .filter(|x| pl.iter().all(|y| q.contains(&p_conj(x, y))))
        .map(|x| pl.iter().map(|y| p_conj(x, y)).collect())
        .collect();
    let orbits: BTreeSet<Vec<P>> = maps
        .iter()
        .map(|m| q.iter().map(|c| m.iter().map(|y| p_conj(c, y)).collect::<Vec<P>>()).min().unwrap())
        .collect();
    orbits.len()
}

#[test]
fn orbit_counts_match_naive_enumeration() {
    for &(name, p) in CATALOG {
        let d = data(name, p);
        let o = &d.orbit;
        let f = o.fusion();
        let g = f.group();
        for a in 0..o.num_objects() {
            for b in 0..o.num_objects() {
                let pa = raw_set(g, f.sub(o.objects()[a]));
                let pb = raw_set(g, f.sub(o.objects()[b]));
                assert_eq!(o.hom(a, b).len(), naive_orbit_count(g, &pa, &pb), "{name}");
            }
        }
    }
}

#[test]
fn s4_orbit_sets() {
    let d = data("s4.gens", 2);
    let o = &d.orbit;
    let f = o.fusion();
    let g = f.group();
    let v4n = o.obj_of(f.sub_id(&sub(g, &["(1,2)(3,4)", "(1,3)(2,4)"])).unwrap()).unwrap();
    // |Out_F(V4)| = |N_G(V4)/C_G(V4)| since V4 is abelian
    let v = f.sub(o.objects()[v4n]);
    let out = g.normalizer(&g.whole(), v).order() / g.centralizer(&g.whole(), v).order();
    assert_eq!(o.hom(v4n, v4n).len(), out);
    assert_eq!(out, 6);
    let c4 = (0..o.num_objects())
        .find(|&i| {
            let h = f.sub(o.objects()[i]);
            h.order() == 4 && g.exponent(h) == 4
        })
        .unwrap();
    let s = o.sylow_obj();
    let pa = raw_set(g, f.sub(o.objects()[c4]));
    let ps = raw_set(g, f.sylow());
    assert_eq!(o.hom(c4, s).len(), naive_orbit_count(g, &pa, &ps));
    assert_eq!(o.hom(c4, s).len(), 1);
    assert_eq!(o.num_objects(), 4);
}

#[test]
fn one_object_cases() {
    for (name, p, order) in [("c2.gens", 2u32, 2usize), ("c6.gens", 3, 3)] {
        let d = data(name, p);
        assert_eq!(d.orbit.num_objects(), 1);
        assert_eq!(d.orbit.num_morphisms(), 1);
        assert_eq!(d.lim1.z1_order, 1);
        assert_eq!(d.lim1.lim1.order(), 1);
        assert_eq!(d.lim0.elements.len(), order);
        let zero = vec![0i128; d.lim1.z1.moduli.len()];
        assert_eq!(brute_z1hat(&d.orbit, &d.center, BRUTE_BOUND).unwrap(), vec![zero]);
    }
}

#[test]
fn center_functor_is_functorial() {
    for &(name, p) in CATALOG {
        let d = data(name, p);
        d.center.verify(&d.orbit).unwrap();
    }
}

/// Z(F) by definition: central elements of S fixed by every conjugation between centric subgroups.
fn naive_center_of_fusion(name: &str, p: u32) -> BTreeSet<P> {
    let f = FusionSystem::build(catalog(name), p).unwrap();
    let c = classify(&f).unwrap();
    let g = f.group();
    let all: Vec<P> = g.all().map(|x| raw(g, x)).collect();
    let s = raw_set(g, f.sylow());
    let zs: Vec<P> = s.iter().filter(|z| s.iter().all(|y| p_mul(z, y) == p_mul(y, z))).cloned().collect();
    let centric: Vec<BTreeSet<P>> = c.centric().into_iter().map(|q| raw_set(g, f.sub(q))).collect();
    zs.into_iter()
        .filter(|z| {
            centric.iter().filter(|q| q.contains(z)).all(|q| {
                all.iter().filter(|x| q.iter().all(|y| s.contains(&p_conj(x, y)))).all(|x| p_conj(x, z) == *z)
            })
        })
        .collect()
}

#[test]
fn lim0_is_center_of_fusion_system() {
    for &(name, p) in CATALOG {
        let d = data(name, p);
        let g = d.orbit.fusion().group().clone();
        let ours: BTreeSet<P> = d.lim0.elements.iter().map(|&x| raw(&g, x)).collect();
        assert_eq!(ours, naive_center_of_fusion(name, p), "{name}");
    }
    assert_eq!(data("s4.gens", 2).lim0.elements.len(), 1);
    // the central C2 factor of S3 x C2 survives
    let d = data("s3xc2.gens", 2);
    let g = d.orbit.fusion().group().clone();
    assert!(d.lim0.elements.contains(&elem(&g, "(4,5)")));
}

#[test]
fn coboundaries() {
    let d = data("s4.gens", 2);
    let (o, zf) = (&d.orbit, &d.center);
    let ch = Cochains::new(o, zf);
    let zero0 = vec![0i128; ch.moduli0.len()];
    assert!(coboundary(o, zf, &ch, &zero0).iter().all(|&x| x == 0));
    let g = o.fusion().group();
    let zs = g.center(o.fusion().sylow());
    assert_eq!(zs.order(), 2);
    let z = zs.members()[1];
    let du = coboundary(o, zf, &ch, &ch.constant(zf, z));
    // the central involution is moved by an automorphism of V4, so du_z is nonzero
    assert!(du.iter().any(|&x| x != 0));
    assert!(ch.is_normalized(o, zf, &du));
    assert!(ch.is_cocycle(o, zf, &du));
    assert!(d.lim1.z1.contains(&du).unwrap());
}

#[test]
fn snf_matches_brute_force() {
    let mut compared = 0;
    for &(name, p) in CATALOG {
        let d = data(name, p);
        match brute_z1hat(&d.orbit, &d.center, BRUTE_BOUND) {
            Ok(set) => {
                let snf = d.lim1.z1_elements().unwrap();
                assert_eq!(set, snf, "{name}");
                assert_eq!(set.len() as u128, d.lim1.z1_order);
                let ch = Cochains::new(&d.orbit, &d.center);
                for t in &set {
                    assert!(ch.is_cocycle(&d.orbit, &d.center, t));
                }
                compared += 1;
            }
            Err(fusionkit::Error::SearchSpaceTooLarge { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
    assert!(compared >= 8);
}

#[test]
fn corrupted_functor_data_is_flagged() {
    let d = data("s4.gens", 2);
    let o = &d.orbit;
    let mut flagged = 0;
    for m in 0..o.num_morphisms() {
        let mor = o.morphism(m);
        if mor.inclusion || d.center.rank(mor.target) == 0 {
            continue;
        }
        let mut bad = d.center.clone();
        for x in bad.maps[m][0].iter_mut() {
            *x = 0;
        }
        assert!(bad.verify(o).is_err());
        let snf = z1_lattice(o, &bad).unwrap().structure().unwrap().enumerate();
        let brute = brute_z1hat(o, &bad, BRUTE_BOUND).unwrap();
        if snf != brute {
            flagged += 1;
        }
    }
    assert!(flagged > 0);
}

#[test]
fn sequence_checks_and_exponent() {
    for &(name, p) in CATALOG {
        let d = data(name, p);
        let r = d.report(false).unwrap();
        for c in &r.checks {
            assert!(c.pass, "{name}: {} {:?}", c.name, c.witness);
        }
        let k = k_of(p) as u128;
        assert_eq!(k % d.lim1.lim1.exponent(), 0);
        if p == 3 {
            assert_eq!(d.lim1.lim1.order(), 1, "{name}");
        }
    }
}

#[test]
fn s4_values() {
    let d = data("s4.gens", 2);
    // Z(S) = C2 and Z(F) = 1 give |B1| = 2
    assert_eq!(d.lim1.b1_order, 2);
    let brute = brute_z1hat(&d.orbit, &d.center, BRUTE_BOUND).unwrap();
    assert_eq!(brute.len() as u128, d.lim1.z1_order);
    assert!(dump_system(&d.orbit, &d.center, &Cochains::new(&d.orbit, &d.center)).starts_with("variables "));
}

#[test]
fn brute_force_bound() {
    let d = data("s4.gens", 2);
    assert!(matches!(
        brute_z1hat(&d.orbit, &d.center, 1),
        Err(fusionkit::Error::SearchSpaceTooLarge { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coboundaries_are_cocycles_and_additive(seed_a in proptest::collection::vec(0i128..8, 64), seed_b in proptest::collection::vec(0i128..8, 64), idx in 0usize..4) {
        let (name, p) = [("s4.gens", 2u32), ("gl23.gens", 2), ("a4.gens", 3), ("q8.gens", 2)][idx];
        let d = data(name, p);
        let (o, zf) = (&d.orbit, &d.center);
        let ch = Cochains::new(o, zf);
        let n = ch.moduli0.len();
        let u: Vec<i128> = (0..n).map(|i| seed_a[i % 64].rem_euclid(ch.moduli0[i])).collect();
        let v: Vec<i128> = (0..n).map(|i| seed_b[i % 64].rem_euclid(ch.moduli0[i])).collect();
        let w: Vec<i128> = (0..n).map(|i| (u[i] + v[i]).rem_euclid(ch.moduli0[i])).collect();
        let (du, dv, dw) = (coboundary(o, zf, &ch, &u), coboundary(o, zf, &ch, &v), coboundary(o, zf, &ch, &w));
        prop_assert!(ch.is_cocycle(o, zf, &du));
        for i in 0..du.len() {
            prop_assert_eq!((du[i] + dv[i]).rem_euclid(ch.moduli1[i]), dw[i]);
        }
    }

    #[test]
    fn lattice_elements_are_cocycles(coeffs in proptest::collection::vec(0i128..4, 8)) {
        let d = data("gl23.gens", 2);
        let ch = Cochains::new(&d.orbit, &d.center);
        let q = d.lim1.z1.structure().unwrap();
        let n = ch.moduli1.len();
        let mut t = vec![0i128; n];
        for (k, g) in q.generators.iter().enumerate() {
            let c = coeffs[k % coeffs.len()];
            for i in 0..n {
                t[i] = (t[i] + c * g[i]).rem_euclid(ch.moduli1[i]);
            }
        }
        prop_assert!(ch.is_cocycle(&d.orbit, &d.center, &t));
        prop_assert!(ch.is_normalized(&d.orbit, &d.center, &t));
    }
}
