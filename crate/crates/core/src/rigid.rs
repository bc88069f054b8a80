//! Rigid automorphisms of a centric linking system through normalized cocycles,
//! the rigid inner ones, and the exponent and splitting checks.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::AbelianCoords;
use crate::cohom::{coboundary, k_of, Cochains, CohomData};
use crate::error::{Error, Result};
use crate::grp::{thompson_j, Elem, FiniteGroup, Perm, Subgroup};
use crate::locality::{lambda, lambda_map, rigid_automorphisms_bruteforce, Locality, LocalityMap};
use crate::translink::{inner_automorphism, verify_automorphism, AxiomResult, CatAutomorphism, MorId, TransporterSystem};

/// `λ̃(t)`: identity on objects, `φ ↦ φ ∘ δ_P(t([φ]))`.
pub fn lambda_tilde(t: &TransporterSystem, cd: &CohomData, cocycle: &[i128]) -> Result<CatAutomorphism> {
    let o = &cd.orbit;
    if t.objects() != o.objects() {
        return Err(Error::BadObjectSet("linking system and orbit category have different objects".into()));
    }
    let g = t.fusion().group().clone();
    let ch = Cochains::new(o, &cd.center);
    let mut mor = Vec::with_capacity(t.num_morphisms());
    for m in 0..t.num_morphisms() {
        let (p, q) = (t.source(m), t.target(m));
        let class = o
            .class_of(p, q, t.pi_index(m))
            .ok_or_else(|| Error::NotACocycle(format!("{} has no orbit class", t.describe(m))))?;
        let z = cd.center.coords[p].element(&g, ch.block1(o, &cd.center, cocycle, class));
        mor.push(t.compose(m, t.delta(p, p, z).expect("center element")));
    }
    let a = CatAutomorphism { obj: (0..t.num_objects()).collect(), mor };
    verify_automorphism(t, &a).map_err(Error::NotACocycle)?;
    let s = t.sylow_obj();
    for &x in t.fusion().sylow().members() {
        let d = t.delta(s, s, x).unwrap();
        if a.mor[d] != d {
            return Err(Error::NotACocycle("image is not the identity on S".into()));
        }
    }
    Ok(a)
}

/// `μ̃(α) = δ_S^{-1} α_S δ_S` as a value map on the members of S; checks that it preserves fusion.
pub fn mu_tilde(t: &TransporterSystem, a: &CatAutomorphism) -> Result<Vec<Elem>> {
    let f = t.fusion();
    let s = t.sylow_obj();
    let members = f.sylow().members();
    let of_delta: HashMap<MorId, Elem> = members.iter().map(|&x| (t.delta(s, s, x).unwrap(), x)).collect();
    let beta: Vec<Elem> = members
        .iter()
        .map(|&x| {
            of_delta
                .get(&a.mor[t.delta(s, s, x).unwrap()])
                .copied()
                .ok_or_else(|| Error::NotATransporterSystem("α does not preserve δ_S(S)".into()))
        })
        .collect::<Result<_>>()?;
    let sylow = f.sylow();
    let apply = |x: Elem| beta[sylow.position(x).unwrap()];
    let mut inv = vec![Elem::ONE; members.len()];
    for (i, &y) in beta.iter().enumerate() {
        inv[sylow.position(y).unwrap()] = members[i];
    }
    // β φ β^{-1} lies in F for every φ
    for p in 0..f.num_subgroups() {
        let mut img: Vec<Elem> = f.sub(p).members().iter().map(|&x| apply(x)).collect();
        img.sort();
        let bp = f
            .sub_id(&Subgroup::from_sorted(img))
            .ok_or_else(|| Error::NotATransporterSystem("β is not an automorphism of S".into()))?;
        for h in f.homs_from(p) {
            let vals: Vec<Elem> = f
                .sub(bp)
                .members()
                .iter()
                .map(|&y| apply(f.apply(h, inv[sylow.position(y).unwrap()])))
                .collect();
            if f.find_hom(bp, &vals).is_none() {
                return Err(Error::NotATransporterSystem("β does not preserve fusion".into()));
            }
        }
    }
    Ok(beta)
}

/// `Aut_0(L)` as the image of `λ̃`, with `Aut_{Z(S)}(L)` and the conjugations `c_φ`.
pub struct AutTable {
    /// Permutation group of the rigid automorphisms acting on morphisms.
    pub group: FiniteGroup,
    /// `elements[i]` is the automorphism of group element `i`.
    pub elements: Vec<CatAutomorphism>,
    /// The cocycle with `λ̃(cocycles[i]) = elements[i]`.
    pub cocycles: Vec<Vec<i128>>,
    /// Conjugations by `δ_S(Z(S))`.
    pub z_inner: Subgroup,
    /// `{c_φ : φ ∈ Aut_L(S)}`, sorted.
    pub inner: Vec<CatAutomorphism>,
    pub checks: Vec<AxiomResult>,
}

impl AutTable {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn index_of(&self, a: &CatAutomorphism) -> Option<usize> {
        self.group.elem_of(&a.to_perm()).map(|e| e.idx())
    }

    pub fn out0(&self) -> Result<crate::grp::Quotient> {
        self.group.quotient(&self.group.whole(), &self.z_inner)
    }

    /// Orders of the cyclic factors of `Out_0`, sorted; `None` if `Out_0` is not abelian.
    pub fn out0_invariants(&self) -> Result<Option<Vec<i128>>> {
        let q = self.out0()?;
        if !q.group.is_abelian(&q.group.whole()) {
            return Ok(None);
        }
        let mut v = AbelianCoords::new(&q.group, &q.group.whole())?.orders;
        v.sort();
        Ok(Some(v))
    }
}

/// Builds `Aut_0(L)` from `Ẑ¹` and checks the isomorphism of short exact sequences:
/// `λ̃` injective and multiplicative, and `λ̃(du_z) = c_{δ_S(z)}`.
pub fn compute_aut0(t: &TransporterSystem, cd: &CohomData) -> Result<AutTable> {
    let z1 = cd.lim1.z1_elements()?;
    let autos: Vec<CatAutomorphism> = z1.par_iter().map(|c| lambda_tilde(t, cd, c)).collect::<Result<_>>()?;
    let mut checks = Vec::new();

    let distinct: HashSet<&CatAutomorphism> = autos.iter().collect();
    let w = (distinct.len() != autos.len()).then(|| "two cocycles give the same automorphism".to_string());
    checks.push(AxiomResult::new("lambda-injective", w));

    let moduli = &cd.lim1.z1.moduli;
    let pos: HashMap<&Vec<i128>, usize> = z1.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut w = None;
    'outer: for i in 0..z1.len() {
        for j in 0..z1.len() {
            let sum: Vec<i128> = (0..moduli.len()).map(|k| (z1[i][k] + z1[j][k]).rem_euclid(moduli[k])).collect();
            let ok = pos.get(&sum).is_some_and(|&k| autos[k] == autos[i].compose(&autos[j]));
            if !ok {
                w = Some(format!("λ̃(t + t') differs from λ̃(t) λ̃(t') at pair ({i}, {j})"));
                break 'outer;
            }
        }
    }
    checks.push(AxiomResult::new("lambda-multiplicative", w));

    let perms: Vec<Perm> = autos.iter().map(|a| a.to_perm()).collect();
    let group = FiniteGroup::from_elements(t.num_morphisms(), perms)?;
    let mut elements = vec![CatAutomorphism::identity(t); group.order()];
    let mut cocycles = vec![Vec::new(); group.order()];
    for (a, c) in autos.iter().zip(&z1) {
        let e = group.elem_of(&a.to_perm()).unwrap().idx();
        elements[e] = a.clone();
        cocycles[e] = c.clone();
    }

    // λ̃(du_z) is conjugation by δ_S(z)
    let o = &cd.orbit;
    let ch = Cochains::new(o, &cd.center);
    let f = t.fusion();
    let s = t.sylow_obj();
    let mut w = None;
    let mut zi = Vec::new();
    for &z in f.group().center(f.sylow()).members() {
        let du = coboundary(o, &cd.center, &ch, &ch.constant(&cd.center, z));
        let cz = inner_automorphism(t, t.delta(s, s, z).unwrap())?;
        match pos.get(&du) {
            Some(&k) if autos[k] == cz => zi.push(group.elem_of(&cz.to_perm()).unwrap()),
            _ => w = Some(format!("λ̃(du_z) is not c_δ(z) for z = {}", f.group().perm(z))),
        }
    }
    checks.push(AxiomResult::new("coboundary-is-z-conjugation", w));
    zi.sort();
    zi.dedup();
    let z_inner = group.subgroup(zi)?;
    let w = (z_inner.order() as u128 != cd.lim1.b1_order).then(|| "|Aut_Z(S)| differs from |B1|".to_string());
    checks.push(AxiomResult::new("B1-matches-AutZ", w));
    let w = (group.order() as u128 != cd.lim1.z1_order).then(|| "|Aut_0| differs from |Z1|".to_string());
    checks.push(AxiomResult::new("Z1-matches-Aut0", w));

    let mut inner: Vec<CatAutomorphism> =
        t.hom(s, s).iter().map(|&gm| inner_automorphism(t, gm)).collect::<Result<_>>()?;
    inner.sort();
    inner.dedup();
    Ok(AutTable { group, elements, cocycles, z_inner, inner, checks })
}

/// Checks on `μ̃`: trivial on `Aut_0`, onto `Aut_F(S)` from the conjugations, and multiplicative.
pub fn check_mu(t: &TransporterSystem, table: &AutTable) -> Result<Vec<AxiomResult>> {
    let f = t.fusion();
    let s = t.sylow_obj();
    let id: Vec<Elem> = f.sylow().members().to_vec();
    let mut out = Vec::new();
    let mut w = None;
    for a in &table.elements {
        if mu_tilde(t, a)? != id {
            w = Some("μ̃ of a rigid automorphism is not the identity".to_string());
        }
    }
    out.push(AxiomResult::new("mu-rigid", w));
    let mut conj = Vec::new();
    let mut w = None;
    for &gm in t.hom(s, s) {
        let c = inner_automorphism(t, gm)?;
        let b = mu_tilde(t, &c)?;
        if b != t.pi(gm).images {
            w = Some(format!("μ̃(c_φ) differs from π(φ) at {}", t.describe(gm)));
        }
        conj.push((c, b));
    }
    out.push(AxiomResult::new("mu-inner-is-pi", w));
    let mut images: Vec<Vec<Elem>> = conj.iter().map(|(_, b)| b.clone()).collect();
    images.sort();
    images.dedup();
    let mut autf: Vec<Vec<Elem>> = f.hom_set(f.sylow_id(), f.sylow_id()).iter().map(|h| h.images.clone()).collect();
    autf.sort();
    let w = (images != autf).then(|| "{μ̃(c_φ)} differs from Aut_F(S)".to_string());
    out.push(AxiomResult::new("mu-inner-onto-AutF", w));
    let sylow = f.sylow();
    let mut w = None;
    for (a, ba) in &conj {
        for (b, bb) in &conj {
            let ab = mu_tilde(t, &a.compose(b))?;
            let want: Vec<Elem> = bb.iter().map(|&y| ba[sylow.position(y).unwrap()]).collect();
            if ab != want {
                w = Some("μ̃ is not multiplicative".to_string());
            }
        }
    }
    out.push(AxiomResult::new("mu-multiplicative", w));
    Ok(out)
}

/// Exponent, abelianness and splitting of `Aut_0 -> Out_0`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SplitReport {
    pub aut0_order: usize,
    pub autz_order: usize,
    pub out0_invariants: Option<Vec<String>>,
    pub out0_exponent: usize,
    /// Cocycles of a generating set of the complement `E_0`.
    pub split_witness: Option<Vec<Vec<String>>>,
    /// Whether the complement was found inside the automorphisms fixing `Aut_L(J(S))`.
    pub from_thompson_candidate: bool,
    pub checks: Vec<AxiomResult>,
}

/// The object `J(S)` of a linking system.
pub fn thompson_object(t: &TransporterSystem) -> Result<usize> {
    let f = t.fusion();
    let j = thompson_j(f.group(), f.sylow(), f.prime())?;
    let id = f.sub_id(&j.j).ok_or_else(|| Error::NotASubgroup("J(S)".into()))?;
    t.obj_of(id).ok_or_else(|| Error::BadObjectSet("J(S) is not an object".into()))
}

/// Rigid automorphisms that are the identity on `Aut_L(J(S))`.
pub fn fixing_thompson(t: &TransporterSystem, table: &AutTable) -> Result<Vec<usize>> {
    let j = thompson_object(t)?;
    let aut_j = t.hom(j, j);
    Ok((0..table.order()).filter(|&i| aut_j.iter().all(|&m| table.elements[i].mor[m] == m)).collect())
}

fn is_complement(g: &FiniteGroup, c: &Subgroup, n: &Subgroup) -> bool {
    c.intersection(n).order() == 1 && c.order() * n.order() == g.order()
}

pub fn verify_exponent_and_split(t: &TransporterSystem, table: &AutTable) -> Result<SplitReport> {
    let g = &table.group;
    let p = t.fusion().prime();
    let k = k_of(p) as u64;
    let mut checks = Vec::new();
    let q = table.out0()?;
    let abelian = q.group.is_abelian(&q.group.whole());
    checks.push(AxiomResult::new("out0-abelian", (!abelian).then(|| "Out_0 is not abelian".to_string())));
    let bad = g.all().find(|&a| !table.z_inner.contains(g.pow(a, k)));
    let w = bad.map(|a| format!("automorphism {} has α^{k} outside Aut_Z(S)", a.0));
    checks.push(AxiomResult::new("out0-exponent", w));
    if p != 2 {
        let w = (q.group.order() != 1).then(|| "Out_0 is nontrivial at an odd prime".to_string());
        checks.push(AxiomResult::new("out0-trivial-odd", w));
    }

    // complement inside E = {α fixing Aut_L(J(S))} to E ∩ Aut_Z(S)
    let e_idx = fixing_thompson(t, table)?;
    let e = g.subgroup(e_idx.iter().map(|&i| Elem(i as u32)).collect());
    let mut from_thompson_candidate = false;
    let mut complement = None;
    if let Ok(e) = e {
        let kz = e.intersection(&table.z_inner);
        for c in g.subgroups(&e) {
            if c.intersection(&kz).order() == 1 && c.order() * kz.order() == e.order() && is_complement(g, &c, &table.z_inner) {
                complement = Some(c);
                from_thompson_candidate = true;
                break;
            }
        }
    }
    if complement.is_none() {
        complement = g.subgroups(&g.whole()).into_iter().find(|c| is_complement(g, c, &table.z_inner));
    }
    let w = complement.is_none().then(|| "no complement to Aut_Z(S) in Aut_0".to_string());
    checks.push(AxiomResult::new("split", w));
    let split_witness = complement.as_ref().map(|c| {
        g.small_generators(c)
            .iter()
            .map(|&x| table.cocycles[x.idx()].iter().map(|v| v.to_string()).collect())
            .collect()
    });
    let out0_invariants = table.out0_invariants()?.map(|v| v.iter().map(|x| x.to_string()).collect());
    Ok(SplitReport {
        aut0_order: g.order(),
        autz_order: table.z_inner.order(),
        out0_invariants,
        out0_exponent: q.group.exponent(&q.group.whole()) as usize,
        split_witness,
        from_thompson_candidate,
        checks,
    })
}

/// Every rigid automorphism fixing `Aut_L(J(S))` satisfies `τ^{k(p)} = id`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct StrongerReport {
    pub hypothesis_size: usize,
    pub excluded: usize,
    pub result: AxiomResult,
}

pub fn remark_stronger_check(t: &TransporterSystem, table: &AutTable) -> Result<StrongerReport> {
    let k = k_of(t.fusion().prime());
    let h = fixing_thompson(t, table)?;
    let bad = h.iter().find(|&&i| !table.elements[i].pow(k).is_identity());
    let result = AxiomResult::new("stronger", bad.map(|&i| format!("τ = element {i} has τ^{k} ≠ id")));
    Ok(StrongerReport { hypothesis_size: h.len(), excluded: table.order() - h.len(), result })
}

/// `Aut_0(T)` against an exhaustive search in `Λ(T)`, through `α ↦ Λ(α)`.
pub fn cross_check_bruteforce(t: &TransporterSystem, table: &AutTable, node_cap: u64) -> Result<AxiomResult> {
    let l = lambda(t)?;
    let search = rigid_automorphisms_bruteforce(&l, node_cap)?;
    Ok(AxiomResult::new("bruteforce-match", compare_with_search(&l, table, &search.automorphisms).err()))
}

fn compare_with_search(l: &Locality, table: &AutTable, found: &[LocalityMap]) -> std::result::Result<(), String> {
    let images: Vec<LocalityMap> = table
        .elements
        .iter()
        .map(|a| lambda_map(l, a).ok_or_else(|| "Λ(α) is undefined".to_string()))
        .collect::<std::result::Result<_, _>>()?;
    let mut sorted = images.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != images.len() {
        return Err("α ↦ Λ(α) is not injective".into());
    }
    if sorted != found {
        return Err(format!("{} rigid automorphisms from cocycles, {} from search", sorted.len(), found.len()));
    }
    for i in 0..images.len() {
        for j in 0..images.len() {
            let ab = table.group.mul(Elem(i as u32), Elem(j as u32)).idx();
            let composed: LocalityMap = images[j].iter().map(|&x| images[i][x as usize]).collect();
            if images[ab] != composed {
                return Err("composition tables differ".into());
            }
        }
    }
    Ok(())
}
