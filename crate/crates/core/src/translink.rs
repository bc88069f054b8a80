//! Transporter systems as explicit finite categories: transporter categories,
//! centric linking systems, axiom checks, restriction and extension of morphisms.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::{Classification, FusionSystem, GroupHom, SubId};
use crate::grp::group::p_part;
use crate::grp::{Elem, FiniteGroup, Perm, Subgroup};

pub type ObjId = usize;
pub type MorId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Payload {
    /// A group element g with gP <= Q.
    Element(Elem),
    /// A coset g·O_p'(C_G(P)), sorted; the first member is the representative.
    Coset(Vec<Elem>),
    /// A carrier element f of a locality with fP <= Q.
    Locality(u32),
}

#[derive(Clone, Debug)]
pub struct Morphism {
    pub source: ObjId,
    pub target: ObjId,
    pub payload: Payload,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Transporter,
    Linking,
    FromLocality,
}

/// Which subgroups of S serve as objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjectChoice {
    Centric,
    Subcentric,
    AllNonidentity,
}

pub fn object_set(f: &FusionSystem, c: &Classification, choice: ObjectChoice) -> Vec<SubId> {
    match choice {
        ObjectChoice::Centric => c.centric(),
        ObjectChoice::Subcentric => c.subcentric(),
        ObjectChoice::AllNonidentity => (1..f.num_subgroups()).collect(),
    }
}

/// Checks that a set of subgroups of S is nonempty and closed under F-conjugacy and overgroups.
pub fn validate_object_set(f: &FusionSystem, objects: &[SubId]) -> Result<()> {
    if objects.is_empty() {
        return Err(Error::BadObjectSet("empty object set".into()));
    }
    let mut member = vec![false; f.num_subgroups()];
    for &o in objects {
        member[o] = true;
    }
    for &o in objects {
        for q in f.conjugacy_class(o) {
            if !member[q] {
                return Err(Error::BadObjectSet(format!(
                    "{} is F-conjugate to the object {} but is not an object",
                    f.label(q),
                    f.label(o)
                )));
            }
        }
        for r in 0..f.num_subgroups() {
            if f.le(o, r) && !member[r] {
                return Err(Error::BadObjectSet(format!(
                    "{} contains the object {} but is not an object",
                    f.label(r),
                    f.label(o)
                )));
            }
        }
    }
    Ok(())
}

/// A morphism before assembly: its payload, the keys identifying it, and its value map.
pub(crate) struct RawMorphism {
    pub source: ObjId,
    pub target: ObjId,
    pub payload: Payload,
    /// Every key standing for this morphism; the first is the representative.
    pub keys: Vec<u32>,
    /// Images of the members of the source subgroup.
    pub map: Vec<Elem>,
}

/// A finite category with structural functors from `T_Δ(S)` and to `F`.
pub struct TransporterSystem {
    fusion: Arc<FusionSystem>,
    kind: Kind,
    objects: Vec<SubId>,
    obj_of: Vec<Option<ObjId>>,
    morphisms: Vec<Morphism>,
    rep_key: Vec<u32>,
    local: Vec<u32>,
    hom: Vec<Vec<MorId>>,
    comp: Vec<Vec<u32>>,
    identity: Vec<MorId>,
    pi: Vec<usize>,
    by_key: HashMap<(ObjId, ObjId, u32), MorId>,
    s_key: Vec<u32>,
}

impl std::fmt::Debug for TransporterSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TransporterSystem({:?}, {} objects, {} morphisms)", self.kind, self.objects.len(), self.morphisms.len())
    }
}

impl TransporterSystem {
    pub(crate) fn assemble(
        fusion: Arc<FusionSystem>,
        kind: Kind,
        objects: Vec<SubId>,
        mut raws: Vec<RawMorphism>,
        s_key: Vec<u32>,
        mul: impl Fn(u32, u32) -> u32,
    ) -> Result<TransporterSystem> {
        let n = objects.len();
        let mut obj_of = vec![None; fusion.num_subgroups()];
        for (i, &o) in objects.iter().enumerate() {
            obj_of[o] = Some(i);
        }
        raws.sort_by(|a, b| (a.source, a.target, a.keys[0]).cmp(&(b.source, b.target, b.keys[0])));
        let mut morphisms = Vec::with_capacity(raws.len());
        let mut rep_key = Vec::with_capacity(raws.len());
        let mut local = Vec::with_capacity(raws.len());
        let mut hom = vec![Vec::new(); n * n];
        let mut pi = Vec::with_capacity(raws.len());
        let mut by_key = HashMap::new();
        for (id, r) in raws.into_iter().enumerate() {
            let h = &mut hom[r.source * n + r.target];
            local.push(h.len() as u32);
            h.push(id);
            for &k in &r.keys {
                by_key.insert((r.source, r.target, k), id);
            }
            rep_key.push(r.keys[0]);
            let idx = fusion.find_hom(objects[r.source], &r.map).ok_or_else(|| {
                Error::NotATransporterSystem("a morphism does not induce a fusion morphism".into())
            })?;
            pi.push(idx);
            morphisms.push(Morphism { source: r.source, target: r.target, payload: r.payload });
        }
        let mut t = TransporterSystem {
            fusion,
            kind,
            objects,
            obj_of,
            morphisms,
            rep_key,
            local,
            hom,
            comp: vec![Vec::new(); n * n * n],
            identity: Vec::new(),
            pi,
            by_key,
            s_key,
        };
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    let (pq, qr) = (&t.hom[p * n + q], &t.hom[q * n + r]);
                    let mut table = Vec::with_capacity(pq.len() * qr.len());
                    for &psi in qr {
                        for &phi in pq {
                            let k = mul(t.rep_key[psi], t.rep_key[phi]);
                            let m = *t.by_key.get(&(p, r, k)).ok_or_else(|| {
                                Error::NotATransporterSystem("composition leaves the morphism set".into())
                            })?;
                            table.push(m as u32);
                        }
                    }
                    t.comp[(p * n + q) * n + r] = table;
                }
            }
        }
        let one = t.s_key[0];
        t.identity = (0..n)
            .map(|p| {
                t.by_key
                    .get(&(p, p, one))
                    .copied()
                    .ok_or_else(|| Error::NotATransporterSystem("missing identity".into()))
            })
            .collect::<Result<_>>()?;
        Ok(t)
    }

    pub fn fusion(&self) -> &Arc<FusionSystem> {
        &self.fusion
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn objects(&self) -> &[SubId] {
        &self.objects
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn obj_sub(&self, o: ObjId) -> SubId {
        self.objects[o]
    }

    pub fn obj_of(&self, s: SubId) -> Option<ObjId> {
        self.obj_of[s]
    }

    pub fn sylow_obj(&self) -> ObjId {
        self.obj_of(self.fusion.sylow_id()).expect("S is an object")
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn morphism(&self, m: MorId) -> &Morphism {
        &self.morphisms[m]
    }

    pub fn source(&self, m: MorId) -> ObjId {
        self.morphisms[m].source
    }

    pub fn target(&self, m: MorId) -> ObjId {
        self.morphisms[m].target
    }

    pub fn rep_key(&self, m: MorId) -> u32 {
        self.rep_key[m]
    }

    pub fn hom(&self, p: ObjId, q: ObjId) -> &[MorId] {
        &self.hom[p * self.objects.len() + q]
    }

    pub fn lookup_key(&self, p: ObjId, q: ObjId, key: u32) -> Option<MorId> {
        self.by_key.get(&(p, q, key)).copied()
    }

    /// `psi ∘ phi`.
    pub fn compose(&self, psi: MorId, phi: MorId) -> MorId {
        let (p, q) = (self.source(phi), self.target(phi));
        debug_assert_eq!(self.source(psi), q);
        let r = self.target(psi);
        let n = self.objects.len();
        let width = self.hom[p * n + q].len();
        self.comp[(p * n + q) * n + r][self.local[psi] as usize * width + self.local[phi] as usize] as MorId
    }

    /// Overwrites one composition entry. Only meant for fault-injection tests.
    pub fn set_composition(&mut self, psi: MorId, phi: MorId, result: MorId) {
        let (p, q) = (self.source(phi), self.target(phi));
        let r = self.target(psi);
        let n = self.objects.len();
        let width = self.hom[p * n + q].len();
        self.comp[(p * n + q) * n + r][self.local[psi] as usize * width + self.local[phi] as usize] = result as u32;
    }

    pub fn identity(&self, p: ObjId) -> MorId {
        self.identity[p]
    }

    /// `δ_{P,Q}(s)` for `s ∈ N_S(P,Q)`.
    pub fn delta(&self, p: ObjId, q: ObjId, s: Elem) -> Option<MorId> {
        let pos = self.fusion.sylow().position(s)?;
        self.lookup_key(p, q, self.s_key[pos])
    }

    pub fn inclusion(&self, p: ObjId, q: ObjId) -> Option<MorId> {
        self.delta(p, q, Elem::ONE)
    }

    pub fn is_inclusion(&self, m: MorId) -> bool {
        self.inclusion(self.source(m), self.target(m)) == Some(m)
    }

    pub fn pi(&self, m: MorId) -> &GroupHom {
        self.fusion.hom(self.objects[self.source(m)], self.pi[m])
    }

    pub fn pi_index(&self, m: MorId) -> usize {
        self.pi[m]
    }

    pub fn is_iso(&self, m: MorId) -> bool {
        self.pi(m).image == self.objects[self.target(m)]
    }

    pub fn inverse(&self, m: MorId) -> Option<MorId> {
        let (p, q) = (self.source(m), self.target(m));
        let id = self.identity(p);
        self.hom(q, p).iter().copied().find(|&x| self.compose(x, m) == id)
    }

    /// The unique `φ0: P0 -> Q0` with `ι ∘ φ0 = φ ∘ ι`.
    pub fn restrict(&self, phi: MorId, p0: ObjId, q0: ObjId) -> Result<MorId> {
        let (p, q) = (self.source(phi), self.target(phi));
        let ip = self
            .inclusion(p0, p)
            .ok_or_else(|| Error::NoSuchRestriction("source is not a subgroup".into()))?;
        let iq = self
            .inclusion(q0, q)
            .ok_or_else(|| Error::NoSuchRestriction("target is not a subgroup".into()))?;
        let lhs = self.compose(phi, ip);
        let found: Vec<MorId> = self.hom(p0, q0).iter().copied().filter(|&x| self.compose(iq, x) == lhs).collect();
        match found.len() {
            1 => Ok(found[0]),
            0 => Err(Error::NoSuchRestriction(format!(
                "{} does not map {} into {}",
                self.describe(phi),
                self.fusion.label(self.objects[p0]),
                self.fusion.label(self.objects[q0])
            ))),
            _ => Err(Error::NotATransporterSystem("restriction is not unique".into())),
        }
    }

    /// The unique `φ: P -> Q` with `φ ∘ ι = ι ∘ φ0`.
    pub fn extend(&self, phi0: MorId, p: ObjId, q: ObjId) -> Result<MorId> {
        let (p0, q0) = (self.source(phi0), self.target(phi0));
        let ip = self
            .inclusion(p0, p)
            .ok_or_else(|| Error::NoSuchExtension("source is not a subgroup".into()))?;
        let iq = self
            .inclusion(q0, q)
            .ok_or_else(|| Error::NoSuchExtension("target is not a subgroup".into()))?;
        let rhs = self.compose(iq, phi0);
        let found: Vec<MorId> = self.hom(p, q).iter().copied().filter(|&x| self.compose(x, ip) == rhs).collect();
        match found.len() {
            1 => Ok(found[0]),
            0 => Err(Error::NoSuchExtension(format!("{} has no extension", self.describe(phi0)))),
            _ => Err(Error::NotATransporterSystem("extension is not unique".into())),
        }
    }

    /// `Aut_T(P)` as an abstract group, with the morphism of each element.
    pub fn aut_group(&self, p: ObjId) -> Result<(FiniteGroup, Vec<MorId>)> {
        let auts = self.hom(p, p).to_vec();
        let pos: HashMap<MorId, usize> = auts.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let (g, map) = FiniteGroup::from_table(auts.len(), |a, b| pos[&self.compose(auts[a], auts[b])])?;
        let mut mor_of = vec![0; auts.len()];
        for (i, e) in map.iter().enumerate() {
            mor_of[e.idx()] = auts[i];
        }
        Ok((g, mor_of))
    }

    /// Short human-readable description of a morphism.
    pub fn describe(&self, m: MorId) -> String {
        let mo = &self.morphisms[m];
        format!(
            "{} -> {} [{}]",
            self.fusion.label(self.objects[mo.source]),
            self.fusion.label(self.objects[mo.target]),
            self.payload_text(m)
        )
    }

    pub fn payload_text(&self, m: MorId) -> String {
        let g = self.fusion.group();
        match &self.morphisms[m].payload {
            Payload::Element(e) => g.perm(*e).to_string(),
            Payload::Coset(c) => format!("{}*K", g.perm(c[0])),
            Payload::Locality(f) => format!("f{f}"),
        }
    }

    /// Text dump: objects, then the morphisms of every nonempty hom set.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "kind {:?}", self.kind);
        let _ = writeln!(out, "objects {}", self.objects.len());
        for (i, &o) in self.objects.iter().enumerate() {
            let _ = writeln!(out, "  {} {}", i, self.fusion.describe_sub(o));
        }
        let n = self.objects.len();
        for p in 0..n {
            for q in 0..n {
                let h = self.hom(p, q);
                if h.is_empty() {
                    continue;
                }
                let _ = writeln!(out, "hom {} {} ({})", p, q, h.len());
                for &m in h {
                    let _ = writeln!(out, "  m{} {}", m, self.payload_text(m));
                }
            }
        }
        out
    }
}

fn group_mul(g: &FiniteGroup) -> impl Fn(u32, u32) -> u32 + '_ {
    move |a, b| g.mul(Elem(a), Elem(b)).0
}

fn s_keys(f: &FusionSystem) -> Vec<u32> {
    f.sylow().members().iter().map(|e| e.0).collect()
}

/// The transporter category `T_Δ(G)` of the ambient group of `f`.
pub fn build_transporter(fusion: Arc<FusionSystem>, objects: Vec<SubId>) -> Result<TransporterSystem> {
    let mut objects = objects;
    objects.sort();
    objects.dedup();
    validate_object_set(&fusion, &objects)?;
    let g = fusion.group().clone();
    let mut raws = Vec::new();
    for (pi, &p) in objects.iter().enumerate() {
        for (qi, &q) in objects.iter().enumerate() {
            for x in g.transporter(fusion.ambient(), fusion.sub(p), fusion.sub(q)) {
                let map = fusion.sub(p).members().iter().map(|&y| g.conj(x, y)).collect();
                raws.push(RawMorphism { source: pi, target: qi, payload: Payload::Element(x), keys: vec![x.0], map });
            }
        }
    }
    let s_key = s_keys(&fusion);
    TransporterSystem::assemble(fusion, Kind::Transporter, objects, raws, s_key, group_mul(&g))
}

/// The quotient of `T_Δ(G)` by `O_p'(C_G(P))` at each object; for Δ the centric
/// subgroups this is the centric linking system.
pub fn build_linking(fusion: Arc<FusionSystem>, objects: Vec<SubId>) -> Result<TransporterSystem> {
    let mut objects = objects;
    objects.sort();
    objects.dedup();
    validate_object_set(&fusion, &objects)?;
    let g = fusion.group().clone();
    let p = fusion.prime();
    let mut raws = Vec::new();
    for (pi, &ps) in objects.iter().enumerate() {
        let k = kernel_subgroup(&fusion, ps, p);
        for (qi, &qs) in objects.iter().enumerate() {
            let trans = g.transporter(fusion.ambient(), fusion.sub(ps), fusion.sub(qs));
            let mut seen = std::collections::HashSet::new();
            for x in trans {
                if seen.contains(&x) {
                    continue;
                }
                let mut coset: Vec<Elem> = k.members().iter().map(|&y| g.mul(x, y)).collect();
                coset.sort();
                seen.extend(coset.iter().copied());
                let map = fusion.sub(ps).members().iter().map(|&y| g.conj(coset[0], y)).collect();
                raws.push(RawMorphism {
                    source: pi,
                    target: qi,
                    keys: coset.iter().map(|e| e.0).collect(),
                    payload: Payload::Coset(coset),
                    map,
                });
            }
        }
    }
    let s_key = s_keys(&fusion);
    TransporterSystem::assemble(fusion, Kind::Linking, objects, raws, s_key, group_mul(&g))
}

/// `O_p'(C_H(P))` for the ambient group H.
pub fn kernel_subgroup(f: &FusionSystem, p: SubId, prime: u32) -> Subgroup {
    let g = f.group();
    let c = g.centralizer(f.ambient(), f.sub(p));
    g.o_p_prime(&c, prime)
}

pub fn build_centric_linking(fusion: Arc<FusionSystem>, classification: &Classification) -> Result<TransporterSystem> {
    build_linking(fusion, classification.centric())
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AxiomResult {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl AxiomResult {
    pub fn new(name: &str, witness: Option<String>) -> AxiomResult {
        AxiomResult { name: name.to_string(), pass: witness.is_none(), witness }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AxiomReport {
    pub results: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.name == name)
    }
}

/// Category laws, axioms (A1) (A2) (B) (C) (I) (II), and monic/epic morphisms.
pub fn verify_transporter_axioms(t: &TransporterSystem) -> AxiomReport {
    let results = vec![
        AxiomResult::new("category", check_category(t).err()),
        AxiomResult::new("A1", validate_object_set(t.fusion(), t.objects()).err().map(|e| e.to_string())),
        AxiomResult::new("A2", check_a2(t).err()),
        AxiomResult::new("B", check_b(t).err()),
        AxiomResult::new("C", check_c(t).err()),
        AxiomResult::new("I", check_i(t).err()),
        AxiomResult::new("II", check_ii(t).err()),
        AxiomResult::new("monic-epic", check_monic_epic(t).err()),
    ];
    AxiomReport { results }
}

pub type Check = std::result::Result<(), String>;

fn check_category(t: &TransporterSystem) -> Check {
    let n = t.num_objects();
    for m in 0..t.num_morphisms() {
        let (p, q) = (t.source(m), t.target(m));
        if t.compose(m, t.identity(p)) != m || t.compose(t.identity(q), m) != m {
            return Err(format!("identity law fails at {}", t.describe(m)));
        }
    }
    for p in 0..n {
        for q in 0..n {
            for &f in t.hom(p, q) {
                for r in 0..n {
                    for &g in t.hom(q, r) {
                        let gf = t.compose(g, f);
                        if t.source(gf) != p || t.target(gf) != r {
                            return Err(format!("composite of {} and {} has wrong ends", t.describe(g), t.describe(f)));
                        }
                        for s in 0..n {
                            for &h in t.hom(r, s) {
                                if t.compose(h, gf) != t.compose(t.compose(h, g), f) {
                                    return Err(format!(
                                        "associativity fails at {} ; {} ; {}",
                                        t.describe(h),
                                        t.describe(g),
                                        t.describe(f)
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Kernel of `Aut_T(P) -> Aut_F(P)`.
pub fn kernel_e(t: &TransporterSystem, p: ObjId) -> Vec<MorId> {
    let id = t.fusion.identity_hom(t.objects[p]);
    t.hom(p, p).iter().copied().filter(|&m| t.pi_index(m) == id).collect()
}

fn check_a2(t: &TransporterSystem) -> Check {
    let n = t.num_objects();
    for p in 0..n {
        let e = kernel_e(t, p);
        for q in 0..n {
            let mors = t.hom(p, q);
            // π is onto Hom_F(P, Q)
            let images: std::collections::HashSet<usize> = mors.iter().map(|&m| t.pi_index(m)).collect();
            if images.len() != t.fusion.hom_set(t.objects[p], t.objects[q]).len() {
                return Err(format!(
                    "π is not onto Hom_F({}, {})",
                    t.fusion.label(t.objects[p]),
                    t.fusion.label(t.objects[q])
                ));
            }
            for &m in mors {
                let mut orbit: Vec<MorId> = e.iter().map(|&x| t.compose(m, x)).collect();
                orbit.sort();
                orbit.dedup();
                if orbit.len() != e.len() {
                    return Err(format!("E(P) does not act freely on {}", t.describe(m)));
                }
                let mut fiber: Vec<MorId> = mors.iter().copied().filter(|&x| t.pi_index(x) == t.pi_index(m)).collect();
                fiber.sort();
                if fiber != orbit {
                    return Err(format!("fiber of π through {} is not an E(P)-orbit", t.describe(m)));
                }
            }
        }
    }
    Ok(())
}

fn check_b(t: &TransporterSystem) -> Check {
    let f = t.fusion.clone();
    let g = f.group();
    let n = t.num_objects();
    for p in 0..n {
        for q in 0..n {
            let ns = g.transporter(f.sylow(), f.sub(t.objects[p]), f.sub(t.objects[q]));
            let mut seen = std::collections::HashSet::new();
            for &s in &ns {
                let Some(m) = t.delta(p, q, s) else {
                    return Err(format!("δ undefined at {}", g.perm(s)));
                };
                if !seen.insert(m) {
                    return Err(format!("δ not injective on N_S({}, {})", f.label(t.objects[p]), f.label(t.objects[q])));
                }
                let images: Vec<Elem> = f.sub(t.objects[p]).members().iter().map(|&y| g.conj(s, y)).collect();
                if t.pi(m).images != images {
                    return Err(format!("π(δ({})) is not conjugation", g.perm(s)));
                }
                for r in 0..n {
                    for &s2 in &g.transporter(f.sylow(), f.sub(t.objects[q]), f.sub(t.objects[r])) {
                        let lhs = t.compose(t.delta(q, r, s2).unwrap(), m);
                        if t.delta(p, r, g.mul(s2, s)) != Some(lhs) {
                            return Err(format!("δ is not a functor at {} , {}", g.perm(s2), g.perm(s)));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_c(t: &TransporterSystem) -> Check {
    let f = t.fusion.clone();
    for m in 0..t.num_morphisms() {
        let (p, q) = (t.source(m), t.target(m));
        let phi = t.pi(m);
        for &x in f.sub(t.objects[p]).members() {
            let lhs = t.compose(m, t.delta(p, p, x).unwrap());
            let rhs = t.compose(t.delta(q, q, f.apply(phi, x)).unwrap(), m);
            if lhs != rhs {
                return Err(format!("(C) fails for {} at {}", t.describe(m), f.group().perm(x)));
            }
        }
    }
    Ok(())
}

fn check_i(t: &TransporterSystem) -> Check {
    let s = t.sylow_obj();
    let aut = t.hom(s, s).len();
    let order = t.fusion.sylow().order();
    if p_part(aut, t.fusion.prime()) != order || aut % order != 0 {
        return Err(format!("δ_S(S) of order {order} is not Sylow in Aut_T(S) of order {aut}"));
    }
    Ok(())
}

fn check_ii(t: &TransporterSystem) -> Check {
    let f = t.fusion.clone();
    let n = t.num_objects();
    for m in 0..t.num_morphisms() {
        if !t.is_iso(m) {
            continue;
        }
        let (p, q) = (t.source(m), t.target(m));
        let inv = t.inverse(m).ok_or_else(|| format!("{} has no inverse", t.describe(m)))?;
        for pb in 0..n {
            if !f.le(t.objects[p], t.objects[pb]) || !f.group().is_normal(f.sub(t.objects[pb]), f.sub(t.objects[p])) {
                continue;
            }
            for qb in 0..n {
                if !f.le(t.objects[q], t.objects[qb])
                    || !f.group().is_normal(f.sub(t.objects[qb]), f.sub(t.objects[q]))
                {
                    continue;
                }
                let delta_q: Vec<MorId> = f.sub(t.objects[qb]).members().iter().map(|&x| t.delta(q, q, x).unwrap()).collect();
                let hyp = f.sub(t.objects[pb]).members().iter().all(|&x| {
                    let c = t.compose(t.compose(m, t.delta(p, p, x).unwrap()), inv);
                    delta_q.contains(&c)
                });
                if hyp && t.extend(m, pb, qb).is_err() {
                    return Err(format!(
                        "{} does not extend to {} -> {}",
                        t.describe(m),
                        f.label(t.objects[pb]),
                        f.label(t.objects[qb])
                    ));
                }
            }
        }
    }
    Ok(())
}

fn check_monic_epic(t: &TransporterSystem) -> Check {
    let n = t.num_objects();
    for m in 0..t.num_morphisms() {
        let (p, q) = (t.source(m), t.target(m));
        for r in 0..n {
            let mut after: Vec<MorId> = t.hom(r, p).iter().map(|&a| t.compose(m, a)).collect();
            let len = after.len();
            after.sort();
            after.dedup();
            if after.len() != len {
                return Err(format!("{} is not a monomorphism", t.describe(m)));
            }
            let mut before: Vec<MorId> = t.hom(q, r).iter().map(|&a| t.compose(a, m)).collect();
            let len = before.len();
            before.sort();
            before.dedup();
            if before.len() != len {
                return Err(format!("{} is not an epimorphism", t.describe(m)));
            }
        }
    }
    Ok(())
}

/// Every automizer `Aut_T(P)` is a group of characteristic p.
pub fn check_characteristic_p(t: &TransporterSystem) -> AxiomResult {
    for p in 0..t.num_objects() {
        match t.aut_group(p) {
            Ok((g, _)) => {
                if !g.is_characteristic_p(&g.whole(), t.fusion.prime()) {
                    return AxiomResult::new(
                        "characteristic-p",
                        Some(format!("Aut_T({}) is not of characteristic p", t.fusion.label(t.objects[p]))),
                    );
                }
            }
            Err(e) => return AxiomResult::new("characteristic-p", Some(e.to_string())),
        }
    }
    AxiomResult::new("characteristic-p", None)
}

/// `E(P) = δ_P(Z(P))` at every object.
pub fn check_kernel_is_center(t: &TransporterSystem) -> AxiomResult {
    let f = t.fusion.clone();
    for p in 0..t.num_objects() {
        let mut e = kernel_e(t, p);
        e.sort();
        let z = f.group().center(f.sub(t.objects[p]));
        let mut dz: Vec<MorId> = z.members().iter().map(|&x| t.delta(p, p, x).unwrap()).collect();
        dz.sort();
        if e != dz {
            return AxiomResult::new("E-is-center", Some(format!("E({}) differs from δ(Z(P))", f.label(t.objects[p]))));
        }
    }
    AxiomResult::new("E-is-center", None)
}

/// An automorphism of a transporter system: maps on objects and morphisms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CatAutomorphism {
    pub obj: Vec<ObjId>,
    pub mor: Vec<MorId>,
}

impl CatAutomorphism {
    pub fn identity(t: &TransporterSystem) -> CatAutomorphism {
        CatAutomorphism { obj: (0..t.num_objects()).collect(), mor: (0..t.num_morphisms()).collect() }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &CatAutomorphism) -> CatAutomorphism {
        CatAutomorphism {
            obj: other.obj.iter().map(|&o| self.obj[o]).collect(),
            mor: other.mor.iter().map(|&m| self.mor[m]).collect(),
        }
    }

    pub fn inverse(&self) -> CatAutomorphism {
        let mut obj = vec![0; self.obj.len()];
        for (i, &o) in self.obj.iter().enumerate() {
            obj[o] = i;
        }
        let mut mor = vec![0; self.mor.len()];
        for (i, &m) in self.mor.iter().enumerate() {
            mor[m] = i;
        }
        CatAutomorphism { obj, mor }
    }

    pub fn pow(&self, k: u32) -> CatAutomorphism {
        let mut r = CatAutomorphism { obj: (0..self.obj.len()).collect(), mor: (0..self.mor.len()).collect() };
        for _ in 0..k {
            r = self.compose(&r);
        }
        r
    }

    pub fn is_identity(&self) -> bool {
        self.obj.iter().enumerate().all(|(i, &o)| i == o) && self.mor.iter().enumerate().all(|(i, &m)| i == m)
    }

    /// The action on morphisms as a permutation.
    pub fn to_perm(&self) -> Perm {
        Perm::from_images(self.mor.iter().map(|&m| m as u32).collect()).expect("bijective")
    }

    pub fn from_perm(t: &TransporterSystem, p: &Perm) -> CatAutomorphism {
        let mor: Vec<MorId> = p.images().iter().map(|&m| m as MorId).collect();
        let obj = (0..t.num_objects()).map(|o| t.target(mor[t.identity(o)])).collect();
        CatAutomorphism { obj, mor }
    }
}

/// Checks that `a` is an isotypical, inclusion-preserving automorphism of `t`.
pub fn verify_automorphism(t: &TransporterSystem, a: &CatAutomorphism) -> Check {
    let n = t.num_objects();
    let mut hit = vec![false; n];
    for &o in &a.obj {
        if o >= n || std::mem::replace(&mut hit[o], true) {
            return Err("object map is not a bijection".into());
        }
    }
    let mut hit = vec![false; t.num_morphisms()];
    for &m in &a.mor {
        if m >= t.num_morphisms() || std::mem::replace(&mut hit[m], true) {
            return Err("morphism map is not a bijection".into());
        }
    }
    for m in 0..t.num_morphisms() {
        if t.source(a.mor[m]) != a.obj[t.source(m)] || t.target(a.mor[m]) != a.obj[t.target(m)] {
            return Err(format!("{} is sent to a morphism between the wrong objects", t.describe(m)));
        }
    }
    for p in 0..n {
        if a.mor[t.identity(p)] != t.identity(a.obj[p]) {
            return Err("identities are not preserved".into());
        }
        for q in 0..n {
            for &f in t.hom(p, q) {
                for r in 0..n {
                    for &g in t.hom(q, r) {
                        if a.mor[t.compose(g, f)] != t.compose(a.mor[g], a.mor[f]) {
                            return Err(format!("not a functor at {} ; {}", t.describe(g), t.describe(f)));
                        }
                    }
                }
            }
            if let Some(i) = t.inclusion(p, q) {
                if Some(a.mor[i]) != t.inclusion(a.obj[p], a.obj[q]) {
                    return Err(format!("inclusion {} is not sent to an inclusion", t.describe(i)));
                }
            }
        }
        // isotypical: δ_P(P) goes to δ_{α(P)}(α(P))
        let f = t.fusion();
        let mut img: Vec<MorId> = f.sub(t.objects[p]).members().iter().map(|&x| a.mor[t.delta(p, p, x).unwrap()]).collect();
        let mut want: Vec<MorId> =
            f.sub(t.objects[a.obj[p]]).members().iter().map(|&x| t.delta(a.obj[p], a.obj[p], x).unwrap()).collect();
        img.sort();
        want.sort();
        if img != want {
            return Err(format!("not isotypical at {}", f.label(t.objects[p])));
        }
    }
    Ok(())
}

/// Conjugation `c_γ` by `γ ∈ Aut_T(S)`.
pub fn inner_automorphism(t: &TransporterSystem, gamma: MorId) -> Result<CatAutomorphism> {
    let s = t.sylow_obj();
    if t.source(gamma) != s || t.target(gamma) != s {
        return Err(Error::NotATransporterSystem("conjugation needs an automorphism of S".into()));
    }
    let f = t.fusion().clone();
    let pg = t.pi(gamma).clone();
    let n = t.num_objects();
    let obj: Vec<ObjId> = (0..n).map(|p| t.obj_of(f.image_of(&pg, t.objects[p])).unwrap()).collect();
    let mut restr = Vec::with_capacity(n);
    for p in 0..n {
        let r = t.restrict(gamma, p, obj[p])?;
        let inv = t.inverse(r).ok_or_else(|| Error::NotATransporterSystem("restriction is not invertible".into()))?;
        restr.push((r, inv));
    }
    let mor = (0..t.num_morphisms())
        .map(|m| {
            let (p, q) = (t.source(m), t.target(m));
            t.compose(t.compose(restr[q].0, m), restr[p].1)
        })
        .collect();
    Ok(CatAutomorphism { obj, mor })
}
