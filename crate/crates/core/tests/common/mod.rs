#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;

use fusionkit::grp::parse::load_group;
use fusionkit::grp::{Elem, FiniteGroup, Perm, Subgroup};

pub fn catalog_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("catalog").join(name)
}

pub fn catalog(name: &str) -> Arc<FiniteGroup> {
    Arc::new(load_group(&catalog_path(name), None).unwrap())
}

pub fn group(degree: usize, gens: &[&str]) -> Arc<FiniteGroup> {
    Arc::new(
        FiniteGroup::from_generators(degree, gens.iter().map(|s| Perm::from_cycles(degree, s).unwrap()).collect())
            .unwrap(),
    )
}

pub fn elem(g: &FiniteGroup, cycles: &str) -> Elem {
    g.elem_of(&Perm::from_cycles(g.degree(), cycles).unwrap()).unwrap()
}

pub fn sub(g: &FiniteGroup, gens: &[&str]) -> Subgroup {
    let e: Vec<Elem> = gens.iter().map(|s| elem(g, s)).collect();
    g.closure(&e)
}

// Naive permutation arithmetic on plain vectors, independent of the crate.

pub type P = Vec<usize>;

pub fn p_mul(a: &P, b: &P) -> P {
    b.iter().map(|&i| a[i]).collect()
}

pub fn p_inv(a: &P) -> P {
    let mut r = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        r[x] = i;
    }
    r
}

pub fn p_conj(g: &P, x: &P) -> P {
    p_mul(&p_mul(g, x), &p_inv(g))
}

pub fn p_id(n: usize) -> P {
    (0..n).collect()
}

/// Closure by repeated multiplication until nothing new appears.
pub fn naive_closure(n: usize, gens: &[P]) -> BTreeSet<P> {
    let mut set: BTreeSet<P> = BTreeSet::new();
    set.insert(p_id(n));
    loop {
        let mut new = Vec::new();
        for a in &set {
            for g in gens {
                let c = p_mul(a, g);
                if !set.contains(&c) {
                    new.push(c);
                }
            }
        }
        if new.is_empty() {
            return set;
        }
        set.extend(new);
    }
}

pub fn raw(g: &FiniteGroup, x: Elem) -> P {
    g.perm(x).images().iter().map(|&i| i as usize).collect()
}

pub fn raw_set(g: &FiniteGroup, h: &Subgroup) -> BTreeSet<P> {
    h.members().iter().map(|&x| raw(g, x)).collect()
}

/// All subgroups generated by at most two elements (covers every subgroup of the small groups used).
pub fn naive_subgroups(g: &FiniteGroup) -> BTreeSet<BTreeSet<P>> {
    let elems: Vec<P> = g.all().map(|x| raw(g, x)).collect();
    let n = g.degree();
    let mut out = BTreeSet::new();
    for a in &elems {
        for b in &elems {
            out.insert(naive_closure(n, &[a.clone(), b.clone()]));
        }
    }
    out
}

pub fn naive_is_normal(all: &[P], h: &BTreeSet<P>) -> bool {
    all.iter().all(|g| h.iter().all(|x| h.contains(&p_conj(g, x))))
}

pub fn is_power(mut n: usize, p: usize) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}
