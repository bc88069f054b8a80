use crate::error::{Error, Result};
use crate::grp::group::{Elem, FiniteGroup, Subgroup};
use crate::grp::perm::Perm;

/// Default cap on |G| for automorphism enumeration.
pub const AUT_CAP: usize = 1000;

/// Aut(G) acting on the elements of G.
pub struct AutomorphismGroup {
    /// Automorphisms as permutations of the element indices of the base group.
    pub group: FiniteGroup,
    pub inner: Subgroup,
    inner_of: Vec<Elem>,
    /// Greedy generating tuple of the base group used for the search.
    pub generating_tuple: Vec<Elem>,
}

impl AutomorphismGroup {
    /// Image of `x` under automorphism `a`.
    pub fn apply(&self, a: Elem, x: Elem) -> Elem {
        Elem(self.group.perm(a).image(x.idx()) as u32)
    }

    pub fn inner_of(&self, g: Elem) -> Elem {
        self.inner_of[g.idx()]
    }

    /// Value maps of all automorphisms, in canonical order.
    pub fn value_maps(&self) -> Vec<Vec<Elem>> {
        self.group
            .all()
            .map(|a| self.group.perm(a).images().iter().map(|&x| Elem(x)).collect())
            .collect()
    }

    /// Cosets of Inn(G), one per outer class, each sorted.
    pub fn outer_classes(&self) -> Vec<Vec<Elem>> {
        self.group.left_cosets(&self.group.whole(), &self.inner)
    }

    pub fn out_order(&self) -> usize {
        self.group.order() / self.inner.order()
    }
}

pub fn automorphism_group(g: &FiniteGroup) -> Result<AutomorphismGroup> {
    automorphism_group_capped(g, AUT_CAP)
}

pub fn automorphism_group_capped(g: &FiniteGroup, cap: usize) -> Result<AutomorphismGroup> {
    if g.order() > cap {
        return Err(Error::TooLarge { order: g.order(), cap });
    }
    let tuple = g.small_generators(&g.whole());
    let candidates: Vec<Vec<Elem>> = tuple
        .iter()
        .map(|&t| g.all().filter(|&y| g.elem_order(y) == g.elem_order(t)).collect())
        .collect();
    let mut maps: Vec<Vec<Elem>> = Vec::new();
    let mut choice = Vec::with_capacity(tuple.len());
    search(g, &tuple, &candidates, &mut choice, &mut maps);
    let n = g.order();
    let perms: Vec<Perm> = maps
        .iter()
        .map(|m| Perm::from_images(m.iter().map(|x| x.0).collect()))
        .collect::<Result<_>>()?;
    let group = FiniteGroup::from_elements(n, perms)?;
    let inner_of: Vec<Elem> = g
        .all()
        .map(|c| {
            let p = Perm::from_images(g.all().map(|x| g.conj(c, x).0).collect()).unwrap();
            group.elem_of(&p).expect("inner automorphism")
        })
        .collect();
    let mut inner: Vec<Elem> = inner_of.clone();
    inner.sort();
    inner.dedup();
    let inner = group.subgroup(inner)?;
    Ok(AutomorphismGroup { group, inner, inner_of, generating_tuple: tuple })
}

fn search(
    g: &FiniteGroup,
    tuple: &[Elem],
    candidates: &[Vec<Elem>],
    choice: &mut Vec<Elem>,
    out: &mut Vec<Vec<Elem>>,
) {
    let k = choice.len();
    if k == tuple.len() {
        if let Some(m) = extend_to_hom(g, tuple, choice) {
            out.push(m);
        }
        return;
    }
    for &c in &candidates[k] {
        // orders of pairwise products must be preserved
        let ok = (0..k).all(|i| {
            g.elem_order(g.mul(tuple[i], tuple[k])) == g.elem_order(g.mul(choice[i], c))
                && g.elem_order(g.mul(tuple[k], tuple[i])) == g.elem_order(g.mul(c, choice[i]))
        });
        if ok {
            choice.push(c);
            search(g, tuple, candidates, choice, out);
            choice.pop();
        }
    }
}

/// Extends generator images along the Cayley graph, returning a bijective
/// homomorphism or `None` on any inconsistency.
fn extend_to_hom(g: &FiniteGroup, tuple: &[Elem], images: &[Elem]) -> Option<Vec<Elem>> {
    const UNSET: Elem = Elem(u32::MAX);
    let n = g.order();
    let mut map = vec![UNSET; n];
    map[0] = Elem::ONE;
    let mut order = vec![Elem::ONE];
    let mut i = 0;
    while i < order.len() {
        let y = order[i];
        for (t, &img) in tuple.iter().zip(images) {
            let x = g.mul(y, *t);
            let v = g.mul(map[y.idx()], img);
            if map[x.idx()] == UNSET {
                map[x.idx()] = v;
                order.push(x);
            } else if map[x.idx()] != v {
                return None;
            }
        }
        i += 1;
    }
    let mut hit = vec![false; n];
    for &v in &map {
        if hit[v.idx()] {
            return None;
        }
        hit[v.idx()] = true;
    }
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(deg: usize, gens: &[&str]) -> FiniteGroup {
        FiniteGroup::from_generators(deg, gens.iter().map(|s| Perm::from_cycles(deg, s).unwrap()).collect())
            .unwrap()
    }

    #[test]
    fn every_listed_map_is_an_automorphism() {
        let g = group(4, &["(1,2,3)", "(1,2)(3,4)"]);
        let a = automorphism_group(&g).unwrap();
        for m in a.value_maps() {
            for x in g.all() {
                for y in g.all() {
                    assert_eq!(m[g.mul(x, y).idx()], g.mul(m[x.idx()], m[y.idx()]));
                }
            }
        }
    }

    #[test]
    fn trivial_group_has_one_automorphism() {
        let g = group(1, &[]);
        let a = automorphism_group(&g).unwrap();
        assert_eq!(a.group.order(), 1);
    }

    #[test]
    fn cap() {
        let g = group(5, &["(1,2,3,4,5)", "(1,2)"]);
        assert!(matches!(automorphism_group_capped(&g, 100), Err(Error::TooLarge { .. })));
    }
}
