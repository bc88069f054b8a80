//! Localities as finite partial groups, the group locality `L_Δ(G)`, and the
//! passage between localities and transporter systems (Θ, Λ, η, ζ).

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::{Classification, FusionSystem, SubId};
use crate::grp::{Elem, Subgroup};
use crate::translink::{
    validate_object_set, AxiomResult, CatAutomorphism, Kind, MorId, ObjId, Payload, RawMorphism, TransporterSystem,
};

const NONE: u32 = u32::MAX;
/// Largest carrier for which a product table is built.
pub const LOCALITY_CAP: usize = 2048;
/// Node bound of the rigid-automorphism search.
pub const SEARCH_NODE_CAP: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub enum Realization {
    /// Carrier elements are elements of the ambient group.
    Group(Vec<Elem>),
    /// Carrier elements are ≡-classes of isomorphisms, named by their maximal member.
    Transporter { max_member: Vec<MorId>, class_of: Vec<u32> },
    /// Carrier elements are elements of a larger locality.
    Restricted(Vec<u32>),
}

/// A locality `(L, Δ, S)`. Words are slices `(f_n, ..., f_1)` with `f_1` acting first;
/// a word lies in the domain exactly when the subgroup `S_w` of elements of S carried
/// into S at every step is an object.
#[derive(Clone, Debug)]
pub struct Locality {
    fusion: Arc<FusionSystem>,
    objects: Vec<SubId>,
    in_delta: Vec<bool>,
    inverse: Vec<u32>,
    s_f: Vec<SubId>,
    act: Vec<Vec<u32>>,
    product: Vec<u32>,
    s_embed: Vec<u32>,
    s_pos: Vec<u32>,
    realization: Realization,
    /// `step[f * k + X]` is `^f (X ∩ S_f)` for each subgroup X of S (k subgroups).
    step: Vec<u32>,
}

impl Locality {
    fn assemble(
        fusion: Arc<FusionSystem>,
        objects: Vec<SubId>,
        inverse: Vec<u32>,
        act: Vec<Vec<u32>>,
        s_embed: Vec<u32>,
        realization: Realization,
        mul: impl Fn(u32, u32, SubId) -> Result<u32>,
    ) -> Result<Locality> {
        let n = inverse.len();
        if n > LOCALITY_CAP {
            return Err(Error::TooLarge { order: n, cap: LOCALITY_CAP });
        }
        let mut in_delta = vec![false; fusion.num_subgroups()];
        for &o in &objects {
            in_delta[o] = true;
        }
        let s = fusion.sylow().clone();
        let s_f = act
            .iter()
            .map(|a| {
                let m: Vec<Elem> = (0..s.order()).filter(|&x| a[x] != NONE).map(|x| s.members()[x]).collect();
                fusion.sub_id(&Subgroup::from_sorted(m)).ok_or_else(|| Error::NotASubgroup("S_f is not a subgroup".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut s_pos = vec![NONE; n];
        for (i, &e) in s_embed.iter().enumerate() {
            s_pos[e as usize] = i as u32;
        }
        let mut l = Locality {
            fusion,
            objects,
            in_delta,
            inverse,
            s_f,
            act,
            product: Vec::new(),
            s_embed,
            s_pos,
            realization,
            step: Vec::new(),
        };
        let k = l.fusion.num_subgroups();
        let mut step = vec![0u32; n * k];
        for f in 0..n {
            for x in 0..k {
                let pos: Vec<usize> = l.fusion.sub(x).members().iter().map(|&y| s.position(y).unwrap()).collect();
                let mut m: Vec<Elem> =
                    pos.iter().filter_map(|&y| l.act(f as u32, y)).map(|y| s.members()[y]).collect();
                m.sort();
                step[f * k + x] = l.fusion.sub_id(&Subgroup::from_sorted(m)).expect("image of a subgroup") as u32;
            }
        }
        l.step = step;
        let mut product = vec![NONE; n * n];
        for f in 0..n as u32 {
            for g in 0..n as u32 {
                if let Some(w) = l.s_word(&[f, g]) {
                    if l.in_delta[w] {
                        product[f as usize * n + g as usize] = mul(f, g, w)?;
                    }
                }
            }
        }
        l.product = product;
        Ok(l)
    }

    pub fn fusion(&self) -> &Arc<FusionSystem> {
        &self.fusion
    }

    pub fn objects(&self) -> &[SubId] {
        &self.objects
    }

    pub fn in_delta(&self, p: SubId) -> bool {
        self.in_delta[p]
    }

    pub fn len(&self) -> usize {
        self.inverse.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inverse.is_empty()
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }

    pub fn inverse(&self, f: u32) -> u32 {
        self.inverse[f as usize]
    }

    pub fn s_f(&self, f: u32) -> SubId {
        self.s_f[f as usize]
    }

    /// Position in S of `^f x` for the member of S at position `x`.
    pub fn act(&self, f: u32, x: usize) -> Option<usize> {
        let y = self.act[f as usize][x];
        (y != NONE).then_some(y as usize)
    }

    pub fn product(&self, f: u32, g: u32) -> Option<u32> {
        let v = self.product[f as usize * self.len() + g as usize];
        (v != NONE).then_some(v)
    }

    /// Carrier element of the member of S at position `x`.
    pub fn s_elem(&self, x: usize) -> u32 {
        self.s_embed[x]
    }

    /// Position in S of a carrier element, if it lies in S.
    pub fn s_position(&self, f: u32) -> Option<usize> {
        let v = self.s_pos[f as usize];
        (v != NONE).then_some(v as usize)
    }

    /// Overwrites one product entry. Only meant for fault-injection tests.
    pub fn set_product(&mut self, f: u32, g: u32, value: Option<u32>) {
        let n = self.len();
        self.product[f as usize * n + g as usize] = value.unwrap_or(NONE);
    }

    pub fn identity(&self) -> u32 {
        self.s_embed[0]
    }

    /// `S_w` for a word `(f_n, ..., f_1)`.
    pub fn s_word(&self, word: &[u32]) -> Option<SubId> {
        let s = self.fusion.sylow();
        let mut m = Vec::new();
        'x: for x in 0..s.order() {
            let mut y = x;
            for &f in word.iter().rev() {
                match self.act(f, y) {
                    Some(z) => y = z,
                    None => continue 'x,
                }
            }
            m.push(s.members()[x]);
        }
        self.fusion.sub_id(&Subgroup::from_sorted(m))
    }

    pub fn in_domain(&self, word: &[u32]) -> bool {
        // track ^w S_w, an F-conjugate of S_w
        let k = self.fusion.num_subgroups();
        let mut cur = self.fusion.sylow_id();
        for &f in word.iter().rev() {
            cur = self.step[f as usize * k + cur] as usize;
        }
        self.in_delta[cur]
    }

    /// `Π(w)` for a word in the domain.
    pub fn pi(&self, word: &[u32]) -> Option<u32> {
        if !self.in_domain(word) {
            return None;
        }
        let mut acc = self.identity();
        for &f in word.iter().rev() {
            acc = self.product(f, acc)?;
        }
        Some(acc)
    }

    /// `^f P` for `P <= S_f`.
    pub fn image_sub(&self, f: u32, p: SubId) -> Option<SubId> {
        let s = self.fusion.sylow();
        let mut m = Vec::new();
        for &x in self.fusion.sub(p).members() {
            let y = self.act(f, s.position(x)?)?;
            m.push(s.members()[y]);
        }
        m.sort();
        self.fusion.sub_id(&Subgroup::from_sorted(m))
    }

    /// `N_L(P) = {f : ^f P = P}`.
    pub fn normalizer(&self, p: SubId) -> Vec<u32> {
        (0..self.len() as u32).filter(|&f| self.image_sub(f, p) == Some(p)).collect()
    }

    /// Name of an element: a permutation for group localities, otherwise an index.
    pub fn label(&self, f: u32) -> String {
        match &self.realization {
            Realization::Group(e) => self.fusion.group().perm(e[f as usize]).to_string(),
            _ => format!("f{f}"),
        }
    }

    /// Value map of `c_f` on the members of `S_f`.
    fn conj_map(&self, f: u32, p: SubId) -> Vec<Elem> {
        let s = self.fusion.sylow();
        self.fusion.sub(p).members().iter().map(|&x| s.members()[self.act(f, s.position(x).unwrap()).unwrap()]).collect()
    }

    /// Carrier roster, object list and a sample of defined words.
    pub fn dump(&self) -> String {
        let f = &self.fusion;
        let mut out = String::new();
        let _ = writeln!(out, "carrier {}", self.len());
        for x in 0..self.len() as u32 {
            let _ = writeln!(out, "  {} {} S_f={}", x, self.label(x), f.label(self.s_f(x)));
        }
        let _ = writeln!(out, "objects {}", self.objects.len());
        for &o in &self.objects {
            let _ = writeln!(out, "  {}", f.describe_sub(o));
        }
        let _ = writeln!(out, "words");
        let mut shown = 0;
        'outer: for a in 0..self.len() as u32 {
            for b in 0..self.len() as u32 {
                if let Some(w) = self.s_word(&[a, b]).filter(|&w| self.in_delta[w]) {
                    let _ = writeln!(
                        out,
                        "  ({}, {}) via {} = {}",
                        self.label(a),
                        self.label(b),
                        f.label(w),
                        self.label(self.product(a, b).unwrap())
                    );
                    shown += 1;
                    if shown == 16 {
                        break 'outer;
                    }
                }
            }
        }
        out
    }
}

fn check_delta(f: &FusionSystem, c: &Classification, objects: &[SubId]) -> Result<()> {
    validate_object_set(f, objects)?;
    for q in c.centric_radical() {
        if !objects.contains(&q) {
            return Err(Error::BadObjectSet(format!("centric radical subgroup {} is not an object", f.label(q))));
        }
    }
    Ok(())
}

/// `L_Δ(G)`: elements g of the ambient group with `S_g ∈ Δ`, multiplied in G.
pub fn build_group_locality(fusion: Arc<FusionSystem>, c: &Classification, objects: Vec<SubId>) -> Result<Locality> {
    let mut objects = objects;
    objects.sort();
    objects.dedup();
    check_delta(&fusion, c, &objects)?;
    let g = fusion.group().clone();
    let s = fusion.sylow().clone();
    let mut elems = Vec::new();
    let mut acts = Vec::new();
    for x in fusion.ambient().members().iter().copied() {
        let a: Vec<u32> = s
            .members()
            .iter()
            .map(|&y| s.position(g.conj(x, y)).map_or(NONE, |p| p as u32))
            .collect();
        let m: Vec<Elem> = (0..s.order()).filter(|&i| a[i] != NONE).map(|i| s.members()[i]).collect();
        let sf = fusion.sub_id(&Subgroup::from_sorted(m)).expect("S ∩ S^g is a subgroup of S");
        if objects.binary_search(&sf).is_ok() {
            elems.push(x);
            acts.push(a);
        }
    }
    let index: HashMap<Elem, u32> = elems.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
    let inverse = elems.iter().map(|&e| index[&g.inv(e)]).collect();
    let s_embed = s.members().iter().map(|e| index[e]).collect();
    let el = elems.clone();
    Locality::assemble(fusion, objects, inverse, acts, s_embed, Realization::Group(elems), move |a, b, _| {
        index
            .get(&g.mul(el[a as usize], el[b as usize]))
            .copied()
            .ok_or_else(|| Error::NotASubgroup("product leaves the locality".into()))
    })
}

/// The transporter system `T_Δ(L)`: morphisms `(f, P, Q)` with `^f P <= Q`.
pub fn theta(l: &Locality) -> Result<TransporterSystem> {
    let f = &l.fusion;
    let mut raws = Vec::new();
    for x in 0..l.len() as u32 {
        for (pi, &p) in l.objects.iter().enumerate() {
            if !f.le(p, l.s_f(x)) {
                continue;
            }
            let img = l.image_sub(x, p).expect("image of a subgroup of S_f");
            let map = l.conj_map(x, p);
            for (qi, &q) in l.objects.iter().enumerate() {
                if f.le(img, q) {
                    raws.push(RawMorphism { source: pi, target: qi, payload: Payload::Locality(x), keys: vec![x], map: map.clone() });
                }
            }
        }
    }
    let s_key = l.s_embed.clone();
    TransporterSystem::assemble(f.clone(), Kind::FromLocality, l.objects.clone(), raws, s_key, |a, b| {
        l.product(a, b).expect("composable morphisms multiply")
    })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.0[hi] = lo;
        }
    }
}

/// The locality `Iso(T)/≡` of a transporter system.
pub fn lambda(t: &TransporterSystem) -> Result<Locality> {
    let f = t.fusion().clone();
    let m = t.num_morphisms();
    let isos: Vec<bool> = (0..m).map(|x| t.is_iso(x)).collect();
    let mut uf = UnionFind((0..m).collect());
    for x in 0..m {
        if !isos[x] {
            continue;
        }
        let p = t.source(x);
        let phi = t.pi(x);
        for p0 in 0..t.num_objects() {
            if p0 != p && f.le(t.obj_sub(p0), t.obj_sub(p)) {
                let q0 = t.obj_of(f.image_of(phi, t.obj_sub(p0))).expect("images of objects are objects");
                let r = t.restrict(x, p0, q0)?;
                uf.union(x, r);
            }
        }
    }
    let mut members: HashMap<usize, Vec<MorId>> = HashMap::new();
    for x in (0..m).filter(|&x| isos[x]) {
        members.entry(uf.find(x)).or_default().push(x);
    }
    // the maximal member: the unique member of largest source that restricts to all others
    let mut max_member = Vec::with_capacity(members.len());
    for cls in members.values() {
        let top = cls.iter().map(|&x| f.sub(t.obj_sub(t.source(x))).order()).max().unwrap();
        let tops: Vec<MorId> = cls.iter().copied().filter(|&x| f.sub(t.obj_sub(t.source(x))).order() == top).collect();
        if tops.len() != 1 {
            return Err(Error::NotATransporterSystem("an ≡-class has several maximal members".into()));
        }
        let mx = tops[0];
        for &x in cls {
            if x != mx && t.restrict(mx, t.source(x), t.target(x)).ok() != Some(x) {
                return Err(Error::NotATransporterSystem("an ≡-class member is not a restriction of the maximal one".into()));
            }
        }
        max_member.push(mx);
    }
    let id_s = t.identity(t.sylow_obj());
    max_member.sort_by_key(|&x| (x != id_s, x));
    let mut class_of = vec![NONE; m];
    for (c, &mx) in max_member.iter().enumerate() {
        let root = uf.find(mx);
        for &x in &members[&root] {
            class_of[x] = c as u32;
        }
    }
    let s = f.sylow();
    let inverse = max_member
        .iter()
        .map(|&x| {
            let inv = t.inverse(x).ok_or_else(|| Error::NotATransporterSystem("isomorphism without inverse".into()))?;
            Ok(class_of[inv])
        })
        .collect::<Result<Vec<u32>>>()?;
    let act = max_member
        .iter()
        .map(|&x| {
            let phi = t.pi(x);
            let dom = f.sub(phi.domain);
            let mut a = vec![NONE; s.order()];
            for (i, &y) in dom.members().iter().enumerate() {
                a[s.position(y).unwrap()] = s.position(phi.images[i]).unwrap() as u32;
            }
            a
        })
        .collect();
    let so = t.sylow_obj();
    let s_embed = s
        .members()
        .iter()
        .map(|&x| class_of[t.delta(so, so, x).expect("δ_S is defined on S")])
        .collect();
    let mm = max_member.clone();
    let realization = Realization::Transporter { max_member: max_member.clone(), class_of: class_of.clone() };
    Locality::assemble(f.clone(), t.objects().to_vec(), inverse, act, s_embed, realization, move |a, b, w| {
        // restrict the two maximal members along S_(a,b) and compose
        let p = t.obj_of(w).unwrap();
        let (ma, mb) = (mm[a as usize], mm[b as usize]);
        let q = t.obj_of(f.image_of(t.pi(mb), w)).unwrap();
        let r = t.obj_of(f.image_of(t.pi(ma), t.obj_sub(q))).unwrap();
        let rb = t.restrict(mb, p, q)?;
        let ra = t.restrict(ma, q, r)?;
        Ok(class_of[t.compose(ra, rb)])
    })
}

/// `L|_Δ`: elements f with `S_f ∈ Δ`, with the domain cut down to Δ.
pub fn restrict_locality(l: &Locality, c: &Classification, objects: Vec<SubId>) -> Result<Locality> {
    let mut objects = objects;
    objects.sort();
    objects.dedup();
    check_delta(&l.fusion, c, &objects)?;
    if let Some(&o) = objects.iter().find(|&&o| !l.in_delta[o]) {
        return Err(Error::BadObjectSet(format!("{} is not an object of the larger locality", l.fusion.label(o))));
    }
    let keep: Vec<u32> = (0..l.len() as u32).filter(|&x| objects.binary_search(&l.s_f(x)).is_ok()).collect();
    let mut new_of = vec![NONE; l.len()];
    for (i, &x) in keep.iter().enumerate() {
        new_of[x as usize] = i as u32;
    }
    let inverse = keep.iter().map(|&x| new_of[l.inverse(x) as usize]).collect();
    let act = keep.iter().map(|&x| l.act[x as usize].clone()).collect();
    let s_embed = l.s_embed.iter().map(|&x| new_of[x as usize]).collect();
    let k = keep.clone();
    Locality::assemble(l.fusion.clone(), objects, inverse, act, s_embed, Realization::Restricted(keep), move |a, b, _| {
        let p = l.product(k[a as usize], k[b as usize]).ok_or_else(|| Error::NotASubgroup("undefined product".into()))?;
        match new_of[p as usize] {
            NONE => Err(Error::NotASubgroup("product leaves the restriction".into())),
            v => Ok(v),
        }
    })
}

/// Partial-group axioms on all words of length at most four, plus (L1a), (L1b), (L2).
pub fn verify_locality(l: &Locality) -> Vec<AxiomResult> {
    vec![
        AxiomResult::new("partial-group", check_partial_group(l).err()),
        AxiomResult::new("L1a", check_l1a(l).err()),
        AxiomResult::new("L1b", check_l1b(l).err()),
        AxiomResult::new("L2", check_l2(l).err()),
        AxiomResult::new("normalizers", check_normalizers(l).err()),
    ]
}

type Check = std::result::Result<(), String>;

fn fold(l: &Locality, word: &[u32]) -> Option<u32> {
    let mut acc = l.identity();
    for &f in word.iter().rev() {
        acc = l.product(f, acc)?;
    }
    Some(acc)
}

fn check_word(l: &Locality, w: &[u32]) -> Check {
    let n = w.len();
    let show = || format!("({})", w.iter().map(|&x| l.label(x)).collect::<Vec<_>>().join(", "));
    let p = fold(l, w).ok_or_else(|| format!("no product for the word {}", show()))?;
    let mut buf = [0u32; 8];
    for i in 0..n {
        for j in i + 1..=n {
            if !l.in_domain(&w[i..j]) {
                return Err(format!("a subword of {} leaves the domain", show()));
            }
            if j - i == n || j - i == 1 {
                continue;
            }
            let v = fold(l, &w[i..j]).unwrap();
            buf[..i].copy_from_slice(&w[..i]);
            buf[i] = v;
            buf[i + 1..i + 1 + n - j].copy_from_slice(&w[j..]);
            let spliced = &buf[..i + 1 + n - j];
            if !l.in_domain(spliced) || fold(l, spliced) != Some(p) {
                return Err(format!("splicing fails for {}", show()));
            }
        }
    }
    for (i, &x) in w.iter().rev().enumerate() {
        buf[i] = l.inverse(x);
    }
    buf[n..2 * n].copy_from_slice(w);
    let inv = &buf[..2 * n];
    if !l.in_domain(inv) || fold(l, inv) != Some(l.identity()) {
        return Err(format!("w^-1 w fails for {}", show()));
    }
    Ok(())
}

fn check_partial_group(l: &Locality) -> Check {
    if !l.in_delta[l.fusion.sylow_id()] {
        return Err("the empty word is not in the domain".into());
    }
    for f in 0..l.len() as u32 {
        let fi = l.inverse(f);
        if l.inverse(fi) != f {
            return Err(format!("inversion is not an involution at {}", l.label(f)));
        }
        if l.pi(&[f]) != Some(f) {
            return Err(format!("Π({}) differs from {}", l.label(f), l.label(f)));
        }
    }
    // words of the domain, grown on the left, depth first
    let mut buf = [0u32; 4];
    for f in 0..l.len() as u32 {
        buf[3] = f;
        walk_words(l, &mut buf, 3)?;
    }
    Ok(())
}

/// Checks `buf[start..]` and every domain word obtained by prepending letters.
fn walk_words(l: &Locality, buf: &mut [u32; 4], start: usize) -> Check {
    if !l.in_domain(&buf[start..]) {
        return Ok(());
    }
    check_word(l, &buf[start..])?;
    if start > 0 {
        for h in 0..l.len() as u32 {
            buf[start - 1] = h;
            walk_words(l, buf, start - 1)?;
        }
    }
    Ok(())
}

fn check_l1a(l: &Locality) -> Check {
    // the product is defined on a pair exactly when the pair admits an object chain
    let s = l.fusion.sylow();
    for f in 0..l.len() as u32 {
        if !l.in_delta[l.s_f(f)] {
            return Err(format!("S_f is not an object for {}", l.label(f)));
        }
        for g in 0..l.len() as u32 {
            let chain = l.objects.iter().any(|&x| {
                l.image_sub(g, x).and_then(|y| l.image_sub(f, y)).is_some_and(|z| l.in_delta[z])
            });
            if chain != l.product(f, g).is_some() {
                return Err(format!("domain disagrees with object chains at ({}, {})", l.label(f), l.label(g)));
            }
            if let Some(h) = l.product(f, g) {
                // conjugation by the product is the composite on S_(f,g)
                let w = l.s_word(&[f, g]).unwrap();
                for &x in l.fusion.sub(w).members() {
                    let px = s.position(x).unwrap();
                    if l.act(h, px) != l.act(g, px).and_then(|y| l.act(f, y)) {
                        return Err(format!("c_fg differs from c_f c_g at ({}, {})", l.label(f), l.label(g)));
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_l1b(l: &Locality) -> Check {
    let f = &l.fusion;
    for x in 0..l.len() as u32 {
        for &p in &l.objects {
            if !f.le(p, l.s_f(x)) {
                continue;
            }
            let img = l.image_sub(x, p).ok_or("image is not a subgroup")?;
            for q in 0..f.num_subgroups() {
                if f.le(img, q) && !l.in_delta[q] {
                    return Err(format!("{} contains ^f{} but is not an object", f.label(q), f.label(p)));
                }
            }
        }
    }
    Ok(())
}

fn check_l2(l: &Locality) -> Check {
    let s = l.fusion.sylow_id();
    let n = l.normalizer(s).len();
    let order = l.fusion.sylow().order();
    if n % order != 0 || (n / order) % l.fusion.prime() as usize == 0 {
        return Err(format!("S is not a maximal p-subgroup: |N_L(S)| = {n}"));
    }
    Ok(())
}

fn check_normalizers(l: &Locality) -> Check {
    for &p in &l.objects {
        let nl = l.normalizer(p);
        for &a in &nl {
            if !nl.contains(&l.inverse(a)) {
                return Err(format!("N_L({}) is not closed under inverses", l.fusion.label(p)));
            }
            for &b in &nl {
                match l.product(a, b) {
                    Some(c) if nl.binary_search(&c).is_ok() => {}
                    _ => return Err(format!("N_L({}) is not a subgroup", l.fusion.label(p))),
                }
            }
        }
    }
    Ok(())
}

/// `N_L(P)` is of characteristic p at every object.
pub fn check_normalizers_characteristic_p(l: &Locality) -> AxiomResult {
    for &p in &l.objects {
        let nl = l.normalizer(p);
        let pos: HashMap<u32, usize> = nl.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let g = crate::grp::FiniteGroup::from_table(nl.len(), |a, b| pos[&l.product(nl[a], nl[b]).unwrap()]);
        match g {
            Ok((g, _)) if g.is_characteristic_p(&g.whole(), l.fusion.prime()) => {}
            Ok(_) => {
                return AxiomResult::new(
                    "characteristic-p",
                    Some(format!("N_L({}) is not of characteristic p", l.fusion.label(p))),
                )
            }
            Err(e) => return AxiomResult::new("characteristic-p", Some(e.to_string())),
        }
    }
    AxiomResult::new("characteristic-p", None)
}

/// A bijection of the carrier.
pub type LocalityMap = Vec<u32>;

/// Checks that `b` is an automorphism of `l` mapping S onto S and Δ onto Δ.
pub fn verify_locality_automorphism(l: &Locality, b: &[u32]) -> Check {
    let n = l.len();
    if b.len() != n {
        return Err("wrong length".into());
    }
    let mut hit = vec![false; n];
    for &x in b {
        if x as usize >= n || std::mem::replace(&mut hit[x as usize], true) {
            return Err("not a bijection".into());
        }
    }
    let beta_s = map_on_s(l, b).ok_or("S is not mapped onto S")?;
    let f = &l.fusion;
    let s = f.sylow();
    let sub_image = |p: SubId| -> Option<SubId> {
        let mut m: Vec<Elem> = f.sub(p).members().iter().map(|&x| s.members()[beta_s[s.position(x).unwrap()]]).collect();
        m.sort();
        f.sub_id(&Subgroup::from_sorted(m))
    };
    for &p in &l.objects {
        if !sub_image(p).is_some_and(|q| l.in_delta[q]) {
            return Err("Δ is not preserved".into());
        }
    }
    for x in 0..n as u32 {
        if b[l.inverse(x) as usize] != l.inverse(b[x as usize]) {
            return Err(format!("inverse not preserved at {}", l.label(x)));
        }
        if sub_image(l.s_f(x)) != Some(l.s_f(b[x as usize])) {
            return Err(format!("S_f not preserved at {}", l.label(x)));
        }
        for y in 0..n as u32 {
            let lhs = l.product(x, y).map(|z| b[z as usize]);
            if lhs != l.product(b[x as usize], b[y as usize]) {
                return Err(format!("product not preserved at ({}, {})", l.label(x), l.label(y)));
            }
        }
    }
    Ok(())
}

/// The permutation of positions in S induced by a carrier map, if it preserves S.
fn map_on_s(l: &Locality, b: &[u32]) -> Option<Vec<usize>> {
    (0..l.fusion.sylow().order()).map(|x| l.s_position(b[l.s_elem(x) as usize])).collect()
}

/// Conjugation by an element of `N_L(S)`.
pub fn inner_locality_automorphism(l: &Locality, f: u32) -> Option<LocalityMap> {
    let fi = l.inverse(f);
    (0..l.len() as u32).map(|x| l.pi(&[f, x, fi])).collect()
}

/// `Θ(β)` on morphisms.
pub fn theta_map(l: &Locality, tl: &TransporterSystem, b: &[u32]) -> Option<CatAutomorphism> {
    let f = &l.fusion;
    let s = f.sylow();
    let beta_s = map_on_s(l, b)?;
    let obj: Vec<ObjId> = (0..tl.num_objects())
        .map(|o| {
            let mut m: Vec<Elem> =
                f.sub(tl.obj_sub(o)).members().iter().map(|&x| s.members()[beta_s[s.position(x).unwrap()]]).collect();
            m.sort();
            f.sub_id(&Subgroup::from_sorted(m)).and_then(|q| tl.obj_of(q))
        })
        .collect::<Option<_>>()?;
    let mor = (0..tl.num_morphisms())
        .map(|m| tl.lookup_key(obj[tl.source(m)], obj[tl.target(m)], b[tl.rep_key(m) as usize]))
        .collect::<Option<_>>()?;
    Some(CatAutomorphism { obj, mor })
}

/// `Λ(α)`: `[φ] ↦ [α(φ)]`.
pub fn lambda_map(l: &Locality, a: &CatAutomorphism) -> Option<LocalityMap> {
    let Realization::Transporter { max_member, class_of } = &l.realization else { return None };
    max_member.iter().map(|&m| Some(class_of[a.mor[m]]).filter(|&c| c != NONE)).collect()
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RoundTripReport {
    pub checks: Vec<AxiomResult>,
    pub naturality_cases: usize,
}

impl RoundTripReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// `η_T: T -> Θ(Λ(T))` on morphisms: `φ ↦ ([φ_0], P, Q)`.
pub fn eta(t: &TransporterSystem, lt: &Locality, tlt: &TransporterSystem) -> Result<Vec<MorId>> {
    let Realization::Transporter { class_of, .. } = lt.realization() else {
        return Err(Error::NotATransporterSystem("the locality does not come from a transporter system".into()));
    };
    let f = t.fusion();
    (0..t.num_morphisms())
        .map(|m| {
            let (p, q) = (t.source(m), t.target(m));
            let q0 = t.obj_of(f.image_of(t.pi(m), t.obj_sub(p))).unwrap();
            let m0 = t.restrict(m, p, q0)?;
            tlt.lookup_key(p, q, class_of[m0]).ok_or_else(|| Error::NotATransporterSystem("η is undefined".into()))
        })
        .collect()
}

/// `ζ_L: L -> Λ(Θ(L))`: `f ↦ [(f, S_f, ^f S_f)]`.
pub fn zeta(l: &Locality, tl: &TransporterSystem, ltl: &Locality) -> Result<LocalityMap> {
    let Realization::Transporter { class_of, .. } = ltl.realization() else {
        return Err(Error::NotATransporterSystem("the locality does not come from a transporter system".into()));
    };
    (0..l.len() as u32)
        .map(|x| {
            let p = tl.obj_of(l.s_f(x)).unwrap();
            let q = tl.obj_of(l.image_sub(x, l.s_f(x)).unwrap()).unwrap();
            let m = tl.lookup_key(p, q, x).ok_or_else(|| Error::NotATransporterSystem("ζ is undefined".into()))?;
            Ok(class_of[m])
        })
        .collect()
}

fn check_eta(t: &TransporterSystem, tlt: &TransporterSystem, e: &[MorId]) -> Check {
    if t.objects() != tlt.objects() {
        return Err("object sets differ".into());
    }
    let mut hit = vec![false; tlt.num_morphisms()];
    for &x in e {
        if std::mem::replace(&mut hit[x], true) {
            return Err("η is not injective".into());
        }
    }
    if e.len() != tlt.num_morphisms() {
        return Err("η is not surjective".into());
    }
    let n = t.num_objects();
    for p in 0..n {
        for q in 0..n {
            for &a in t.hom(p, q) {
                if tlt.source(e[a]) != p || tlt.target(e[a]) != q {
                    return Err("η moves objects".into());
                }
                if t.pi_index(a) != tlt.pi_index(e[a]) {
                    return Err(format!("π ∘ η differs from π at {}", t.describe(a)));
                }
                for r in 0..n {
                    for &b in t.hom(q, r) {
                        if e[t.compose(b, a)] != tlt.compose(e[b], e[a]) {
                            return Err(format!("η is not a functor at {} ; {}", t.describe(b), t.describe(a)));
                        }
                    }
                }
            }
            for &s in &t.fusion().group().transporter(t.fusion().sylow(), t.fusion().sub(t.obj_sub(p)), t.fusion().sub(t.obj_sub(q))) {
                if t.delta(p, q, s).map(|m| e[m]) != tlt.delta(p, q, s) {
                    return Err("η ∘ δ differs from δ".into());
                }
            }
        }
    }
    Ok(())
}

fn check_zeta(l: &Locality, ltl: &Locality, z: &[u32]) -> Check {
    if l.objects() != ltl.objects() {
        return Err("object sets differ".into());
    }
    if l.len() != ltl.len() {
        return Err(format!("carrier sizes differ: {} vs {}", l.len(), ltl.len()));
    }
    let mut hit = vec![false; ltl.len()];
    for &x in z {
        if std::mem::replace(&mut hit[x as usize], true) {
            return Err("ζ is not injective".into());
        }
    }
    for x in 0..l.fusion.sylow().order() {
        if z[l.s_elem(x) as usize] != ltl.s_elem(x) {
            return Err("ζ is not the identity on S".into());
        }
    }
    for x in 0..l.len() as u32 {
        if ltl.s_f(z[x as usize]) != l.s_f(x) {
            return Err(format!("S_f not preserved at {}", l.label(x)));
        }
        if z[l.inverse(x) as usize] != ltl.inverse(z[x as usize]) {
            return Err(format!("inverse not preserved at {}", l.label(x)));
        }
        for y in 0..l.len() as u32 {
            if l.product(x, y).map(|p| z[p as usize]) != ltl.product(z[x as usize], z[y as usize]) {
                return Err(format!("ζ is not a homomorphism at ({}, {})", l.label(x), l.label(y)));
            }
        }
    }
    Ok(())
}

/// Both round trips: `η_T` for `T = Θ(L)` and `ζ_L`, with naturality squares for every
/// conjugation by `N_L(S)` on L and every inner automorphism of `T`.
pub fn roundtrip_locality(l: &Locality) -> Result<RoundTripReport> {
    let tl = theta(l)?;
    let ltl = lambda(&tl)?;
    let z = zeta(l, &tl, &ltl)?;
    let mut checks = vec![AxiomResult::new("zeta-isomorphism", check_zeta(l, &ltl, &z).err())];
    let mut cases = 0;
    let mut nat: Check = Ok(());
    for f in l.normalizer(l.fusion.sylow_id()) {
        let Some(b) = inner_locality_automorphism(l, f) else {
            nat = Err(format!("conjugation by {} is undefined", l.label(f)));
            break;
        };
        cases += 1;
        let square = theta_map(l, &tl, &b).and_then(|tb| lambda_map(&ltl, &tb)).map(|lb| {
            (0..l.len()).all(|x| lb[z[x] as usize] == z[b[x] as usize])
        });
        if square != Some(true) {
            nat = Err(format!("ζ naturality fails for conjugation by {}", l.label(f)));
            break;
        }
    }
    checks.push(AxiomResult::new("zeta-naturality", nat.err()));
    let t = roundtrip_transporter(&tl)?;
    cases += t.naturality_cases;
    checks.extend(t.checks);
    Ok(RoundTripReport { checks, naturality_cases: cases })
}

/// `η_T` for a transporter system, with naturality for every inner automorphism `c_γ`.
pub fn roundtrip_transporter(t: &TransporterSystem) -> Result<RoundTripReport> {
    let lt = lambda(t)?;
    let tlt = theta(&lt)?;
    let e = eta(t, &lt, &tlt)?;
    let mut checks = vec![AxiomResult::new("eta-isomorphism", check_eta(t, &tlt, &e).err())];
    let s = t.sylow_obj();
    let mut nat: Check = Ok(());
    let mut cases = 0;
    for &g in t.hom(s, s) {
        let a = crate::translink::inner_automorphism(t, g)?;
        cases += 1;
        let square = lambda_map(&lt, &a).and_then(|la| theta_map(&lt, &tlt, &la)).map(|tla| {
            (0..t.num_morphisms()).all(|m| e[a.mor[m]] == tla.mor[e[m]])
        });
        if square != Some(true) {
            nat = Err(format!("η naturality fails for conjugation by {}", t.describe(g)));
            break;
        }
    }
    checks.push(AxiomResult::new("eta-naturality", nat.err()));
    Ok(RoundTripReport { checks, naturality_cases: cases })
}

/// Result of the exhaustive search for rigid automorphisms.
#[derive(Clone, Debug)]
pub struct RigidSearch {
    /// All rigid automorphisms, sorted.
    pub automorphisms: Vec<LocalityMap>,
    /// Conjugations by elements of `Z(S)`, sorted and deduplicated.
    pub z_conjugations: Vec<LocalityMap>,
    pub nodes: u64,
}

/// Every bijection of L fixing S pointwise and preserving the domain and the product.
pub fn rigid_automorphisms_bruteforce(l: &Locality, node_cap: u64) -> Result<RigidSearch> {
    let n = l.len();
    // a rigid automorphism keeps S_f and the conjugation map of every f
    let mut cand: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut by_action: HashMap<&Vec<u32>, Vec<u32>> = HashMap::new();
    for x in 0..n {
        by_action.entry(&l.act[x]).or_default().push(x as u32);
    }
    for x in 0..n {
        cand[x] = by_action[&l.act[x]].clone();
    }
    let mut assign = vec![NONE; n];
    let mut out = Vec::new();
    let mut nodes = 0u64;
    let mut trail = Vec::new();
    for x in 0..l.fusion.sylow().order() {
        let e = l.s_elem(x);
        if !propagate(l, &mut assign, &mut trail, e, e) {
            return Err(Error::NotASubgroup("S is not closed in the locality".into()));
        }
    }
    search(l, &cand, &mut assign, &mut trail, &mut out, &mut nodes, node_cap)?;
    out.sort();
    let z = l.fusion.group().center(l.fusion.sylow());
    let mut z_conjugations: Vec<LocalityMap> = z
        .members()
        .iter()
        .filter_map(|&x| inner_locality_automorphism(l, l.s_elem(l.fusion.sylow().position(x).unwrap())))
        .collect();
    z_conjugations.sort();
    z_conjugations.dedup();
    Ok(RigidSearch { automorphisms: out, z_conjugations, nodes })
}

/// Assigns `x ↦ y` and everything it forces; false on a contradiction.
fn propagate(l: &Locality, assign: &mut [u32], trail: &mut Vec<u32>, x: u32, y: u32) -> bool {
    let mut queue = vec![(x, y)];
    while let Some((x, y)) = queue.pop() {
        match assign[x as usize] {
            v if v == y => continue,
            NONE => {}
            _ => return false,
        }
        assign[x as usize] = y;
        trail.push(x);
        let xi = l.inverse(x);
        queue.push((xi, l.inverse(y)));
        for z in 0..l.len() as u32 {
            let w = assign[z as usize];
            if w == NONE {
                continue;
            }
            for (a, b, ia, ib) in [(x, z, y, w), (z, x, w, y)] {
                match (l.product(a, b), l.product(ia, ib)) {
                    (Some(p), Some(q)) => queue.push((p, q)),
                    (None, None) => {}
                    _ => return false,
                }
            }
        }
    }
    true
}

fn search(
    l: &Locality,
    cand: &[Vec<u32>],
    assign: &mut Vec<u32>,
    trail: &mut Vec<u32>,
    out: &mut Vec<LocalityMap>,
    nodes: &mut u64,
    cap: u64,
) -> Result<()> {
    *nodes += 1;
    if *nodes > cap {
        return Err(Error::SearchSpaceTooLarge { size: *nodes as u128, bound: cap as u128 });
    }
    let Some(x) = assign.iter().position(|&v| v == NONE) else {
        let mut used = vec![false; assign.len()];
        if assign.iter().all(|&v| !std::mem::replace(&mut used[v as usize], true)) {
            out.push(assign.clone());
        }
        return Ok(());
    };
    for &y in &cand[x] {
        let mark = trail.len();
        if propagate(l, assign, trail, x as u32, y) {
            search(l, cand, assign, trail, out, nodes, cap)?;
        }
        for z in trail.drain(mark..) {
            assign[z as usize] = NONE;
        }
    }
    Ok(())
}

/// Restriction `Aut_0(L⁺) -> Aut_0(L)` for `L = L⁺|_Δ`, compared against exhaustive searches on both.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RestrictionReport {
    pub larger_objects: usize,
    pub smaller_objects: usize,
    pub larger_aut0: usize,
    pub smaller_aut0: usize,
    pub larger_autz: usize,
    pub smaller_autz: usize,
    /// Normalizers in the larger locality are of characteristic p.
    pub hypothesis: AxiomResult,
    pub checks: Vec<AxiomResult>,
}

/// `β ↦ β|_L` on carrier indices of the restriction.
pub fn restrict_map(small: &Locality, b: &[u32]) -> Option<LocalityMap> {
    let Realization::Restricted(keep) = &small.realization else { return None };
    keep.iter().map(|&x| keep.binary_search(&b[x as usize]).ok().map(|i| i as u32)).collect()
}

pub fn restriction_isomorphism(large: &Locality, small: &Locality, node_cap: u64) -> Result<RestrictionReport> {
    if !matches!(small.realization, Realization::Restricted(_)) {
        return Err(Error::BadObjectSet("the smaller locality is not a restriction".into()));
    }
    let big = rigid_automorphisms_bruteforce(large, node_cap)?;
    let sm = rigid_automorphisms_bruteforce(small, node_cap)?;
    let mut checks = Vec::new();
    let images: Option<Vec<LocalityMap>> = big.automorphisms.iter().map(|b| restrict_map(small, b)).collect();
    checks.push(AxiomResult::new(
        "restriction-defined",
        images.is_none().then(|| "a rigid automorphism does not preserve the smaller carrier".to_string()),
    ));
    let images = images.unwrap_or_default();
    let mut sorted = images.clone();
    sorted.sort();
    sorted.dedup();
    let w = (sorted.len() != images.len()).then(|| "two automorphisms have the same restriction".to_string());
    checks.push(AxiomResult::new("restriction-injective", w));
    let w = (sorted != sm.automorphisms)
        .then(|| format!("{} restrictions, {} rigid automorphisms of the restriction", sorted.len(), sm.automorphisms.len()));
    checks.push(AxiomResult::new("restriction-onto", w));

    let pos: HashMap<&LocalityMap, usize> = big.automorphisms.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut w = None;
    'outer: for (i, a) in big.automorphisms.iter().enumerate() {
        for (j, b) in big.automorphisms.iter().enumerate() {
            let ab: LocalityMap = b.iter().map(|&x| a[x as usize]).collect();
            let Some(&k) = pos.get(&ab) else {
                w = Some("rigid automorphisms are not closed under composition".to_string());
                break 'outer;
            };
            let composed: LocalityMap = images[j].iter().map(|&x| images[i][x as usize]).collect();
            if images[k] != composed {
                w = Some(format!("restriction is not multiplicative at ({i}, {j})"));
                break 'outer;
            }
        }
    }
    checks.push(AxiomResult::new("restriction-multiplicative", w));

    let zr: Option<Vec<LocalityMap>> = big.z_conjugations.iter().map(|b| restrict_map(small, b)).collect();
    let mut zr = zr.unwrap_or_default();
    zr.sort();
    zr.dedup();
    let w = (zr != sm.z_conjugations).then(|| "Aut_Z(S) is not carried onto Aut_Z(S)".to_string());
    checks.push(AxiomResult::new("restriction-autz", w));
    Ok(RestrictionReport {
        larger_objects: large.objects.len(),
        smaller_objects: small.objects.len(),
        larger_aut0: big.automorphisms.len(),
        smaller_aut0: sm.automorphisms.len(),
        larger_autz: big.z_conjugations.len(),
        smaller_autz: sm.z_conjugations.len(),
        hypothesis: check_normalizers_characteristic_p(large),
        checks,
    })
}
