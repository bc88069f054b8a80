//! Fusion systems of finite groups on a Sylow subgroup, and subgroup classification.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grp::{Elem, FiniteGroup, Perm, Subgroup};

/// Index into the canonical list of subgroups of S.
pub type SubId = usize;

/// A morphism `P -> S` given by its values on the members of P.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupHom {
    pub domain: SubId,
    pub image: SubId,
    /// `images[i]` is the image of the i-th member of the domain.
    pub images: Vec<Elem>,
    /// Smallest ambient element inducing this map.
    pub witness: Elem,
}

pub struct FusionSystem {
    group: Arc<FiniteGroup>,
    ambient: Subgroup,
    sylow: Subgroup,
    prime: u32,
    subs: Vec<Subgroup>,
    index: HashMap<Vec<Elem>, SubId>,
    le: Vec<bool>,
    homs: Vec<Vec<GroupHom>>,
    hom_index: Vec<HashMap<Vec<Elem>, usize>>,
}

impl std::fmt::Debug for FusionSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FusionSystem(|S| = {}, p = {})", self.sylow.order(), self.prime)
    }
}

impl FusionSystem {
    /// The fusion system of the whole group on its canonical Sylow p-subgroup.
    pub fn build(group: Arc<FiniteGroup>, p: u32) -> Result<FusionSystem> {
        let whole = group.whole();
        let s = group.sylow(&whole, p);
        FusionSystem::build_in(group, whole, s, p)
    }

    /// The fusion system of `ambient` on its Sylow subgroup `sylow`.
    pub fn build_in(group: Arc<FiniteGroup>, ambient: Subgroup, sylow: Subgroup, p: u32) -> Result<FusionSystem> {
        if !group.is_p_group(&sylow, p) || !sylow.is_subgroup_of(&ambient) {
            return Err(Error::NotAPGroup(p));
        }
        if crate::grp::group::p_part(ambient.order(), p) != sylow.order() {
            return Err(Error::NotASubgroup("not a Sylow subgroup of the ambient group".into()));
        }
        let subs = group.subgroups(&sylow);
        let index: HashMap<Vec<Elem>, SubId> =
            subs.iter().enumerate().map(|(i, h)| (h.members().to_vec(), i)).collect();
        let n = subs.len();
        let mut le = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                le[a * n + b] = subs[a].is_subgroup_of(&subs[b]);
            }
        }
        let mut homs = Vec::with_capacity(n);
        let mut hom_index = Vec::with_capacity(n);
        for (pid, p_sub) in subs.iter().enumerate() {
            let gens = group.small_generators(p_sub);
            let mut found: HashMap<Vec<Elem>, Elem> = HashMap::new();
            for &g in ambient.members() {
                if !gens.iter().all(|&x| sylow.contains(group.conj(g, x))) {
                    continue;
                }
                let images: Vec<Elem> = p_sub.members().iter().map(|&x| group.conj(g, x)).collect();
                found.entry(images).or_insert(g);
            }
            let mut list: Vec<GroupHom> = found
                .into_iter()
                .map(|(images, witness)| {
                    let mut m = images.clone();
                    m.sort();
                    GroupHom { domain: pid, image: index[&m], images, witness }
                })
                .collect();
            list.sort_by(|a, b| a.images.cmp(&b.images));
            hom_index.push(list.iter().enumerate().map(|(i, h)| (h.images.clone(), i)).collect());
            homs.push(list);
        }
        Ok(FusionSystem { group, ambient, sylow, prime: p, subs, index, le, homs, hom_index })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn ambient(&self) -> &Subgroup {
        &self.ambient
    }

    pub fn sylow(&self) -> &Subgroup {
        &self.sylow
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subs
    }

    pub fn sub(&self, id: SubId) -> &Subgroup {
        &self.subs[id]
    }

    pub fn num_subgroups(&self) -> usize {
        self.subs.len()
    }

    pub fn sub_id(&self, h: &Subgroup) -> Option<SubId> {
        self.index.get(h.members()).copied()
    }

    pub fn sylow_id(&self) -> SubId {
        self.subs.len() - 1
    }

    pub fn trivial_id(&self) -> SubId {
        0
    }

    /// Short name such as `P5(4)`: subgroup index and order.
    pub fn label(&self, id: SubId) -> String {
        format!("P{}({})", id, self.subs[id].order())
    }

    /// Label followed by a small generating set in cycle notation.
    pub fn describe_sub(&self, id: SubId) -> String {
        let gens: Vec<String> =
            self.group.small_generators(&self.subs[id]).iter().map(|&x| self.group.perm(x).to_string()).collect();
        format!("{} <{}>", self.label(id), gens.join(", "))
    }

    pub fn le(&self, a: SubId, b: SubId) -> bool {
        self.le[a * self.subs.len() + b]
    }

    /// All morphisms from P into S, sorted by value map.
    pub fn homs_from(&self, p: SubId) -> &[GroupHom] {
        &self.homs[p]
    }

    /// `Hom_F(P, Q)`.
    pub fn hom_set(&self, p: SubId, q: SubId) -> Vec<&GroupHom> {
        self.homs[p].iter().filter(|h| self.le(h.image, q)).collect()
    }

    pub fn find_hom(&self, p: SubId, images: &[Elem]) -> Option<usize> {
        self.hom_index[p].get(images).copied()
    }

    pub fn hom(&self, p: SubId, k: usize) -> &GroupHom {
        &self.homs[p][k]
    }

    pub fn identity_hom(&self, p: SubId) -> usize {
        self.find_hom(p, self.subs[p].members()).expect("identity")
    }

    pub fn apply(&self, h: &GroupHom, x: Elem) -> Elem {
        h.images[self.subs[h.domain].position(x).expect("element of the domain")]
    }

    /// `psi ∘ phi`, where the image of phi lies in the domain of psi.
    pub fn compose(&self, psi: &GroupHom, phi: &GroupHom) -> usize {
        let images: Vec<Elem> = phi.images.iter().map(|&x| self.apply(psi, x)).collect();
        self.find_hom(phi.domain, &images).expect("composite of fusion morphisms")
    }

    pub fn restrict(&self, phi: &GroupHom, p0: SubId) -> usize {
        let images: Vec<Elem> = self.subs[p0].members().iter().map(|&x| self.apply(phi, x)).collect();
        self.find_hom(p0, &images).expect("restriction of a fusion morphism")
    }

    /// `phi^-1` as a morphism from the image of phi.
    pub fn inverse(&self, phi: &GroupHom) -> usize {
        let dom = &self.subs[phi.domain];
        let img = &self.subs[phi.image];
        let mut inv = vec![Elem::ONE; img.order()];
        for (i, &y) in phi.images.iter().enumerate() {
            inv[img.position(y).unwrap()] = dom.members()[i];
        }
        self.find_hom(phi.image, &inv).expect("inverse of a fusion morphism")
    }

    /// Image of a subgroup `X <= domain(phi)` under phi.
    pub fn image_of(&self, phi: &GroupHom, x: SubId) -> SubId {
        let mut m: Vec<Elem> = self.subs[x].members().iter().map(|&e| self.apply(phi, e)).collect();
        m.sort();
        self.index[&m]
    }

    /// F-conjugates of P.
    pub fn conjugacy_class(&self, p: SubId) -> Vec<SubId> {
        let mut c: Vec<SubId> = self.homs[p].iter().map(|h| h.image).collect();
        c.sort();
        c.dedup();
        c
    }

    pub fn is_automorphism(&self, h: &GroupHom) -> bool {
        h.image == h.domain
    }

    pub fn normalizer_in_s(&self, p: SubId) -> Subgroup {
        self.group.normalizer(&self.sylow, &self.subs[p])
    }

    pub fn centralizer_in_s(&self, p: SubId) -> Subgroup {
        self.group.centralizer(&self.sylow, &self.subs[p])
    }

    /// `Aut_F(P)` as a permutation group on the member positions of P,
    /// with `Inn(P)` and the fusion-morphism index of each element.
    pub fn automizer(&self, p: SubId) -> Result<Automizer> {
        let sub = &self.subs[p];
        let auts: Vec<usize> = (0..self.homs[p].len()).filter(|&k| self.homs[p][k].image == p).collect();
        let to_perm = |h: &GroupHom| {
            Perm::from_images(h.images.iter().map(|&y| sub.position(y).unwrap() as u32).collect())
        };
        let perms: Vec<Perm> = auts.iter().map(|&k| to_perm(&self.homs[p][k])).collect::<Result<_>>()?;
        let group = FiniteGroup::from_elements(sub.order(), perms.clone())?;
        let mut hom_of = vec![0usize; group.order()];
        for (k, perm) in auts.iter().zip(&perms) {
            hom_of[group.elem_of(perm).unwrap().idx()] = *k;
        }
        let mut inner: Vec<Elem> = sub
            .members()
            .iter()
            .map(|&x| {
                let images: Vec<Elem> = sub.members().iter().map(|&y| self.group.conj(x, y)).collect();
                group.elem_of(&Perm::from_images(images.iter().map(|&y| sub.position(y).unwrap() as u32).collect()).unwrap()).unwrap()
            })
            .collect();
        inner.sort();
        inner.dedup();
        let inner = group.subgroup(inner)?;
        Ok(Automizer { group, inner, hom_of })
    }

    pub fn out_f(&self, p: SubId) -> Result<crate::grp::Quotient> {
        let a = self.automizer(p)?;
        a.group.quotient(&a.group.whole(), &a.inner)
    }

    pub fn is_fully_normalized(&self, p: SubId) -> bool {
        let n = self.normalizer_in_s(p).order();
        self.conjugacy_class(p).iter().all(|&q| self.normalizer_in_s(q).order() <= n)
    }

    pub fn is_centric(&self, p: SubId) -> bool {
        self.conjugacy_class(p)
            .iter()
            .all(|&q| self.centralizer_in_s(q).is_subgroup_of(&self.subs[q]))
    }

    pub fn is_radical(&self, p: SubId) -> Result<bool> {
        let out = self.out_f(p)?;
        Ok(out.group.o_p(&out.group.whole(), self.prime).order() == 1)
    }

    /// `N_F(Q)` realized as the fusion system of `N_G(Q)` on `N_S(Q)`.
    pub fn normalizer_fusion(&self, q: SubId) -> Result<FusionSystem> {
        if !self.is_fully_normalized(q) {
            return Err(Error::NotFullyNormalized);
        }
        let n_h = self.group.normalizer(&self.ambient, &self.subs[q]);
        let n_s = self.normalizer_in_s(q);
        FusionSystem::build_in(self.group.clone(), n_h, n_s, self.prime)
    }

    /// Largest normal subgroup R of S such that every morphism `P -> S`
    /// extends to a morphism `PR -> S` mapping R onto R.
    pub fn op_of_fusion(&self) -> Subgroup {
        let g = &self.group;
        let mut normals: Vec<SubId> = (0..self.subs.len())
            .filter(|&r| g.is_normal(&self.sylow, &self.subs[r]))
            .collect();
        normals.sort_by(|a, b| self.subs[*b].cmp(&self.subs[*a]));
        for r in normals {
            if self.is_normal_in_fusion(r) {
                return self.subs[r].clone();
            }
        }
        Subgroup::trivial()
    }

    fn is_normal_in_fusion(&self, r: SubId) -> bool {
        for p in 0..self.subs.len() {
            let pr = self.index[self.group.join(&self.subs[p], &self.subs[r]).members()];
            for (k, _) in self.homs[p].iter().enumerate() {
                let ok = self.homs[pr]
                    .iter()
                    .any(|psi| self.image_of(psi, r) == r && self.restrict(psi, p) == k);
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// True iff every morphism into S is a composite of restrictions of
    /// automorphisms of members of `family`.
    pub fn verify_conjugation_family(&self, family: &[SubId]) -> bool {
        let mut gens: Vec<(SubId, Vec<usize>)> = Vec::new();
        for &r in family {
            let auts: Vec<usize> = (0..self.homs[r].len()).filter(|&k| self.homs[r][k].image == r).collect();
            gens.push((r, auts));
        }
        for p in 0..self.subs.len() {
            let start = self.identity_hom(p);
            let mut seen: HashSet<usize> = HashSet::from([start]);
            let mut queue = VecDeque::from([start]);
            while let Some(k) = queue.pop_front() {
                let phi = &self.homs[p][k];
                for (r, auts) in &gens {
                    if !self.le(phi.image, *r) {
                        continue;
                    }
                    for &a in auts {
                        let alpha = &self.homs[*r][a];
                        let images: Vec<Elem> = phi.images.iter().map(|&x| self.apply(alpha, x)).collect();
                        let next = self.find_hom(p, &images).expect("composite");
                        if seen.insert(next) {
                            queue.push_back(next);
                        }
                    }
                }
            }
            if seen.len() != self.homs[p].len() {
                return false;
            }
        }
        true
    }

    /// Group-theoretic centric test: `C_G(P) = Z(P) x O_p'(C_G(P))`.
    pub fn is_centric_in_group(&self, p: SubId) -> bool {
        let g = &self.group;
        let c = g.centralizer(&self.ambient, &self.subs[p]);
        let z = g.center(&self.subs[p]);
        let o = g.o_p_prime(&c, self.prime);
        z.is_subgroup_of(&c) && z.order() * o.order() == c.order() && z.intersection(&o).order() == 1
    }
}

/// `Aut_F(P)` as a permutation group of the members of P.
pub struct Automizer {
    pub group: FiniteGroup,
    pub inner: Subgroup,
    /// Fusion-morphism index (in `homs_from(P)`) of each element.
    pub hom_of: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupFlags {
    pub fully_normalized: bool,
    pub centric: bool,
    pub radical: bool,
    pub centric_radical: bool,
    pub subcentric: bool,
    pub essential_candidate: bool,
    pub class_id: usize,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub flags: Vec<SubgroupFlags>,
    /// F-conjugacy classes, each sorted, listed by smallest member.
    pub classes: Vec<Vec<SubId>>,
}

impl Classification {
    pub fn centric(&self) -> Vec<SubId> {
        (0..self.flags.len()).filter(|&i| self.flags[i].centric).collect()
    }

    pub fn subcentric(&self) -> Vec<SubId> {
        (0..self.flags.len()).filter(|&i| self.flags[i].subcentric).collect()
    }

    pub fn centric_radical(&self) -> Vec<SubId> {
        (0..self.flags.len()).filter(|&i| self.flags[i].centric_radical).collect()
    }
}

pub fn classify(f: &FusionSystem) -> Result<Classification> {
    let n = f.num_subgroups();
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for p in 0..n {
        if class_of[p] == usize::MAX {
            let c = f.conjugacy_class(p);
            for &q in &c {
                class_of[q] = classes.len();
            }
            classes.push(c);
        }
    }
    let mut flags = Vec::with_capacity(n);
    let mut subcentric_of_class = vec![false; classes.len()];
    for (ci, c) in classes.iter().enumerate() {
        let rep = *c.iter().find(|&&q| f.is_fully_normalized(q)).expect("fully normalized member");
        let nf = f.normalizer_fusion(rep)?;
        let o = nf.op_of_fusion();
        let oid = f.sub_id(&o).expect("subgroup of S");
        subcentric_of_class[ci] = f.is_centric(oid);
    }
    for p in 0..n {
        let centric = f.is_centric(p);
        let radical = f.is_radical(p)?;
        let essential_candidate = centric && has_strongly_p_embedded(&f.out_f(p)?.group, f.prime());
        flags.push(SubgroupFlags {
            fully_normalized: f.is_fully_normalized(p),
            centric,
            radical,
            centric_radical: centric && radical,
            subcentric: subcentric_of_class[class_of[p]],
            essential_candidate,
            class_id: class_of[p],
        });
    }
    Ok(Classification { flags, classes })
}

/// A proper subgroup H with p dividing |H| and `H ∩ xHx^-1` a p'-group for all x outside H.
pub fn has_strongly_p_embedded(g: &FiniteGroup, p: u32) -> bool {
    let whole = g.whole();
    let pp = p as usize;
    g.subgroups(&whole).iter().any(|h| {
        h.order() < g.order()
            && h.order() % pp == 0
            && g.all().filter(|&x| !h.contains(x)).all(|x| h.intersection(&g.conjugate(x, h)).order() % pp != 0)
    })
}
