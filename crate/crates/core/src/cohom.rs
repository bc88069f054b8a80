//! The orbit category of the centric subgroups, the center functor on it,
//! normalized 1-cocycles and the first two limits.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{AbelianCoords, AbelianQuotient, LatticeSubgroup};
use crate::error::{Error, Result};
use crate::fusion::{FusionSystem, SubId};
use crate::grp::{Elem, Subgroup};
use crate::translink::{AxiomResult, Check};

/// Default bound on the number of normalized cochains the brute-force oracle may visit.
pub const BRUTE_BOUND: u128 = 1_000_000;

/// An `Inn(Q)`-orbit of morphisms `P -> Q`.
#[derive(Clone, Debug)]
pub struct OrbitMor {
    pub source: usize,
    pub target: usize,
    /// Index (into `homs_from(P)`) of the member with the smallest value map.
    pub rep: usize,
    pub members: Vec<usize>,
    pub inclusion: bool,
}

pub struct OrbitCategory {
    fusion: Arc<FusionSystem>,
    objects: Vec<SubId>,
    obj_of: HashMap<SubId, usize>,
    mors: Vec<OrbitMor>,
    hom: Vec<Vec<usize>>,
    class_of: HashMap<(usize, usize, usize), usize>,
    comp: HashMap<(usize, usize), usize>,
}

impl OrbitCategory {
    pub fn fusion(&self) -> &Arc<FusionSystem> {
        &self.fusion
    }

    pub fn objects(&self) -> &[SubId] {
        &self.objects
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn obj_of(&self, s: SubId) -> Option<usize> {
        self.obj_of.get(&s).copied()
    }

    pub fn sylow_obj(&self) -> usize {
        self.obj_of[&self.fusion.sylow_id()]
    }

    pub fn num_morphisms(&self) -> usize {
        self.mors.len()
    }

    pub fn morphism(&self, m: usize) -> &OrbitMor {
        &self.mors[m]
    }

    pub fn hom(&self, p: usize, q: usize) -> &[usize] {
        &self.hom[p * self.objects.len() + q]
    }

    /// The class of the fusion morphism `homs_from(P)[k]` viewed in `Hom_F(P, Q)`.
    pub fn class_of(&self, p: usize, q: usize, k: usize) -> Option<usize> {
        self.class_of.get(&(p, q, k)).copied()
    }

    /// `[ψ] ∘ [φ]`.
    pub fn compose(&self, psi: usize, phi: usize) -> usize {
        self.comp[&(psi, phi)]
    }

    pub fn label(&self, m: usize) -> String {
        let o = &self.mors[m];
        let f = &self.fusion;
        let h = f.hom(self.objects[o.source], o.rep);
        format!(
            "[{} -> {} via {}]",
            f.label(self.objects[o.source]),
            f.label(self.objects[o.target]),
            f.group().perm(h.witness)
        )
    }

    /// Associativity and independence of the composition from orbit members.
    pub fn verify(&self) -> Check {
        let f = &self.fusion;
        let n = self.objects.len();
        for phi in 0..self.mors.len() {
            let (p, q) = (self.mors[phi].source, self.mors[phi].target);
            for r in 0..n {
                for &psi in self.hom(q, r) {
                    let c = self.compose(psi, phi);
                    for &a in &self.mors[phi].members {
                        for &b in &self.mors[psi].members {
                            let k = f.compose(f.hom(self.objects[q], b), f.hom(self.objects[p], a));
                            if self.class_of(p, r, k) != Some(c) {
                                return Err(format!(
                                    "composite {} ; {} depends on orbit members",
                                    self.label(psi),
                                    self.label(phi)
                                ));
                            }
                        }
                    }
                    for s in 0..n {
                        for &chi in self.hom(r, s) {
                            if self.compose(chi, c) != self.compose(self.compose(chi, psi), phi) {
                                return Err("composition is not associative".into());
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// `O(F^c)` on the given objects, which must be F-centric.
pub fn orbit_category(fusion: Arc<FusionSystem>, mut objects: Vec<SubId>) -> Result<OrbitCategory> {
    objects.sort();
    objects.dedup();
    if objects.is_empty() || objects.iter().any(|&p| !fusion.is_centric(p)) {
        return Err(Error::BadObjectSet("orbit category objects must be F-centric".into()));
    }
    let f = &fusion;
    let g = f.group();
    let n = objects.len();
    let obj_of: HashMap<SubId, usize> = objects.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut mors = Vec::new();
    let mut hom = vec![Vec::new(); n * n];
    let mut class_of = HashMap::new();
    for (pi, &p) in objects.iter().enumerate() {
        let homs = f.homs_from(p);
        let id = f.identity_hom(p);
        for (qi, &q) in objects.iter().enumerate() {
            let mut seen = vec![false; homs.len()];
            for k in 0..homs.len() {
                if seen[k] || !f.le(homs[k].image, q) {
                    continue;
                }
                let mut members: Vec<usize> = f
                    .sub(q)
                    .members()
                    .iter()
                    .map(|&x| {
                        let img: Vec<Elem> = homs[k].images.iter().map(|&y| g.conj(x, y)).collect();
                        f.find_hom(p, &img).expect("conjugate of a fusion morphism")
                    })
                    .collect();
                members.sort();
                members.dedup();
                for &m in &members {
                    seen[m] = true;
                }
                let m = mors.len();
                for &k in &members {
                    class_of.insert((pi, qi, k), m);
                }
                hom[pi * n + qi].push(m);
                mors.push(OrbitMor { source: pi, target: qi, rep: members[0], inclusion: members.contains(&id), members });
            }
        }
    }
    let mut comp = HashMap::new();
    for phi in 0..mors.len() {
        let (p, q) = (mors[phi].source, mors[phi].target);
        for r in 0..n {
            for &psi in &hom[q * n + r] {
                let k = f.compose(f.hom(objects[q], mors[psi].rep), f.hom(objects[p], mors[phi].rep));
                comp.insert((psi, phi), class_of[&(p, r, k)]);
            }
        }
    }
    let o = OrbitCategory { fusion, objects, obj_of, mors, hom, class_of, comp };
    o.verify().map_err(Error::NotATransporterSystem)?;
    Ok(o)
}

/// Coordinates of every `Z(P)` and the induced maps `Z(Q) -> Z(P)` as integer matrices.
#[derive(Clone, Debug)]
pub struct CenterFunctor {
    pub coords: Vec<AbelianCoords>,
    /// Per orbit morphism `P -> Q`: the images of the generators of `Z(Q)`, in coordinates of `Z(P)`.
    pub maps: Vec<Vec<Vec<i128>>>,
}

impl CenterFunctor {
    pub fn build(o: &OrbitCategory) -> Result<CenterFunctor> {
        let f = &o.fusion;
        let g = f.group();
        let coords: Vec<AbelianCoords> =
            o.objects.iter().map(|&p| AbelianCoords::new(g, &g.center(f.sub(p)))).collect::<Result<_>>()?;
        let mut maps = Vec::with_capacity(o.mors.len());
        for m in &o.mors {
            let (p, q) = (o.objects[m.source], o.objects[m.target]);
            let h = f.hom(p, m.rep);
            let dom = f.sub(p).members();
            let mut cols = Vec::new();
            for &z in &coords[m.target].generators {
                let i = h.images.iter().position(|&y| y == z).ok_or_else(|| {
                    Error::NotASubgroup(format!("Z({}) is not inside the image of {}", f.label(q), f.label(p)))
                })?;
                cols.push(coords[m.source].coords(dom[i]).to_vec());
            }
            maps.push(cols);
        }
        Ok(CenterFunctor { coords, maps })
    }

    pub fn rank(&self, obj: usize) -> usize {
        self.coords[obj].rank()
    }

    /// `Z_F([φ])(v)` for `v` in coordinates of `Z(target)`.
    pub fn apply(&self, o: &OrbitCategory, m: usize, v: &[i128]) -> Vec<i128> {
        let src = &self.coords[o.mors[m].source];
        let mut out = vec![0i128; src.rank()];
        for (col, &c) in self.maps[m].iter().zip(v) {
            for (x, &y) in out.iter_mut().zip(col) {
                *x += c * y;
            }
        }
        for (x, &d) in out.iter_mut().zip(&src.orders) {
            *x = x.rem_euclid(d);
        }
        out
    }

    /// `Z([ψ][φ]) = Z([φ]) Z([ψ])` on every composable pair, and identities.
    pub fn verify(&self, o: &OrbitCategory) -> Check {
        for (m, mor) in o.mors.iter().enumerate() {
            if mor.inclusion && mor.source == mor.target {
                for j in 0..self.rank(mor.source) {
                    let e = unit(self.rank(mor.source), j);
                    if self.apply(o, m, &e) != e {
                        return Err(format!("identity {} does not induce the identity", o.label(m)));
                    }
                }
            }
        }
        for phi in 0..o.mors.len() {
            let q = o.mors[phi].target;
            for r in 0..o.num_objects() {
                for &psi in o.hom(q, r) {
                    let chi = o.compose(psi, phi);
                    for j in 0..self.rank(r) {
                        let e = unit(self.rank(r), j);
                        if self.apply(o, chi, &e) != self.apply(o, phi, &self.apply(o, psi, &e)) {
                            return Err(format!("not a functor at {} ; {}", o.label(psi), o.label(phi)));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn unit(n: usize, j: usize) -> Vec<i128> {
    (0..n).map(|i| i128::from(i == j)).collect()
}

/// Layout of 0- and 1-cochains as flat coordinate vectors.
#[derive(Clone, Debug)]
pub struct Cochains {
    /// Offset of each object's `Z(P)` block in a 0-cochain.
    pub offset0: Vec<usize>,
    pub moduli0: Vec<i128>,
    /// Offset of each orbit morphism's `Z(source)` block in a 1-cochain.
    pub offset1: Vec<usize>,
    pub moduli1: Vec<i128>,
}

impl Cochains {
    pub fn new(o: &OrbitCategory, zf: &CenterFunctor) -> Cochains {
        let mut offset0 = Vec::new();
        let mut moduli0 = Vec::new();
        for c in &zf.coords {
            offset0.push(moduli0.len());
            moduli0.extend(&c.orders);
        }
        let mut offset1 = Vec::new();
        let mut moduli1 = Vec::new();
        for m in &o.mors {
            offset1.push(moduli1.len());
            moduli1.extend(&zf.coords[m.source].orders);
        }
        Cochains { offset0, moduli0, offset1, moduli1 }
    }

    pub fn block0<'a>(&self, zf: &CenterFunctor, u: &'a [i128], p: usize) -> &'a [i128] {
        &u[self.offset0[p]..self.offset0[p] + zf.rank(p)]
    }

    pub fn block1<'a>(&self, o: &OrbitCategory, zf: &CenterFunctor, t: &'a [i128], m: usize) -> &'a [i128] {
        let r = zf.rank(o.mors[m].source);
        &t[self.offset1[m]..self.offset1[m] + r]
    }

    /// The constant 0-cochain `P ↦ z` for `z ∈ Z(S)`.
    pub fn constant(&self, zf: &CenterFunctor, z: Elem) -> Vec<i128> {
        zf.coords.iter().flat_map(|c| c.coords(z).iter().copied()).collect()
    }

    /// Whether `t` vanishes on every inclusion class.
    pub fn is_normalized(&self, o: &OrbitCategory, zf: &CenterFunctor, t: &[i128]) -> bool {
        (0..o.mors.len()).filter(|&m| o.mors[m].inclusion).all(|m| self.block1(o, zf, t, m).iter().all(|&x| x == 0))
    }

    /// Whether `t([ψφ]) = t([φ]) + Z([φ])(t([ψ]))` holds on all composable pairs.
    pub fn is_cocycle(&self, o: &OrbitCategory, zf: &CenterFunctor, t: &[i128]) -> bool {
        (0..o.mors.len()).all(|phi| {
            let q = o.mors[phi].target;
            let orders = &zf.coords[o.mors[phi].source].orders;
            (0..o.num_objects()).all(|r| {
                o.hom(q, r).iter().all(|&psi| {
                    let chi = o.compose(psi, phi);
                    let rhs = zf.apply(o, phi, self.block1(o, zf, t, psi));
                    let lhs = self.block1(o, zf, t, chi);
                    let tp = self.block1(o, zf, t, phi);
                    (0..orders.len()).all(|i| (lhs[i] - tp[i] - rhs[i]).rem_euclid(orders[i]) == 0)
                })
            })
        })
    }
}

/// `(du)([φ]: P -> Q) = Z([φ])(u(Q)) - u(P)` in `Z(P)`.
pub fn coboundary(o: &OrbitCategory, zf: &CenterFunctor, ch: &Cochains, u: &[i128]) -> Vec<i128> {
    let mut t = Vec::with_capacity(ch.moduli1.len());
    for m in 0..o.mors.len() {
        let (p, q) = (o.mors[m].source, o.mors[m].target);
        let a = zf.apply(o, m, ch.block0(zf, u, q));
        let b = ch.block0(zf, u, p);
        for i in 0..a.len() {
            t.push((a[i] - b[i]).rem_euclid(zf.coords[p].orders[i]));
        }
    }
    t
}

/// One linear condition `row . t = 0 mod modulus` on 1-cochains.
#[derive(Clone, Debug)]
pub struct Equation {
    pub row: Vec<i128>,
    pub modulus: i128,
    pub origin: String,
}

/// Normalization rows for the inclusion classes, then the cocycle rows for every composable pair.
pub fn cocycle_system(o: &OrbitCategory, zf: &CenterFunctor, ch: &Cochains) -> Vec<Equation> {
    let n = ch.moduli1.len();
    let mut eqs = Vec::new();
    for m in 0..o.mors.len() {
        if o.mors[m].inclusion {
            for (i, &d) in zf.coords[o.mors[m].source].orders.iter().enumerate() {
                eqs.push(Equation { row: unit(n, ch.offset1[m] + i), modulus: d, origin: format!("{} is an inclusion", o.label(m)) });
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (0..o.mors.len())
        .flat_map(|phi| (0..o.num_objects()).flat_map(move |r| o.hom(o.mors[phi].target, r).iter().map(move |&psi| (phi, psi))))
        .collect();
    let rows: Vec<Vec<Equation>> = pairs
        .par_iter()
        .map(|&(phi, psi)| {
            let chi = o.compose(psi, phi);
            let p = o.mors[phi].source;
            let orders = &zf.coords[p].orders;
            let origin = format!("{} ; {}", o.label(psi), o.label(phi));
            (0..orders.len())
                .map(|i| {
                    let mut row = vec![0i128; n];
                    row[ch.offset1[chi] + i] += 1;
                    row[ch.offset1[phi] + i] -= 1;
                    for (j, col) in zf.maps[phi].iter().enumerate() {
                        row[ch.offset1[psi] + j] -= col[i];
                    }
                    for x in row.iter_mut() {
                        *x = x.rem_euclid(orders[i]);
                    }
                    Equation { row, modulus: orders[i], origin: origin.clone() }
                })
                .collect()
        })
        .collect();
    eqs.extend(rows.into_iter().flatten());
    eqs
}

/// Text dump of the cocycle system: moduli, then one row per line.
pub fn dump_system(o: &OrbitCategory, zf: &CenterFunctor, ch: &Cochains) -> String {
    let mut s = String::new();
    writeln!(s, "variables {}", ch.moduli1.len()).unwrap();
    for m in 0..o.mors.len() {
        writeln!(s, "  {} at {} moduli {:?}", o.label(m), ch.offset1[m], zf.coords[o.mors[m].source].orders).unwrap();
    }
    let eqs = cocycle_system(o, zf, ch);
    writeln!(s, "equations {}", eqs.len()).unwrap();
    for e in &eqs {
        let row: Vec<String> = e.row.iter().map(|x| x.to_string()).collect();
        writeln!(s, "  [{}] = 0 mod {}", row.join(" "), e.modulus).unwrap();
    }
    s
}

/// `Ẑ¹`, `B̂¹`, their quotient and a complement to `B̂¹`.
#[derive(Clone, Debug)]
pub struct Lim1 {
    pub z1: LatticeSubgroup,
    pub b1_generators: Vec<Vec<i128>>,
    pub z1_order: u128,
    pub b1_order: u128,
    pub lim1: AbelianQuotient,
    /// Generators of a subgroup of `Ẑ¹` meeting `B̂¹` trivially and mapping onto `lim¹`.
    pub complement: Option<Vec<Vec<i128>>>,
}

impl Lim1 {
    pub fn z1_elements(&self) -> Result<Vec<Vec<i128>>> {
        Ok(self.z1.structure()?.enumerate())
    }

    pub fn b1_elements(&self) -> Result<Vec<Vec<i128>>> {
        Ok(LatticeSubgroup::from_generators(self.z1.moduli.clone(), &self.b1_generators)?.structure()?.enumerate())
    }
}

/// `Ẑ¹` as the solution lattice of the cocycle system.
pub fn z1_lattice(o: &OrbitCategory, zf: &CenterFunctor) -> Result<LatticeSubgroup> {
    let ch = Cochains::new(o, zf);
    let mut z1 = LatticeSubgroup::whole(ch.moduli1.clone());
    for e in cocycle_system(o, zf, &ch) {
        z1.impose(&e.row, e.modulus)?;
    }
    Ok(z1)
}

/// Solves the cocycle system over the integers and forms `lim¹ = Ẑ¹ / B̂¹`.
pub fn solve_z1hat(o: &OrbitCategory, zf: &CenterFunctor) -> Result<Lim1> {
    let ch = Cochains::new(o, zf);
    let z1 = z1_lattice(o, zf)?;
    let s = o.sylow_obj();
    let b1_generators: Vec<Vec<i128>> = zf.coords[s]
        .generators
        .iter()
        .map(|&z| coboundary(o, zf, &ch, &ch.constant(zf, z)))
        .collect();
    let lim1 = z1.quotient_by(&b1_generators)?;
    let b1_order = LatticeSubgroup::from_generators(ch.moduli1.clone(), &b1_generators)?.order();
    let z1_order = z1.order();
    let complement = find_complement(&z1, &b1_generators, &lim1)?;
    Ok(Lim1 { z1, b1_generators, z1_order, b1_order, lim1, complement })
}

/// Lifts each generator of `lim¹` to an element of `Ẑ¹` of the same order.
fn find_complement(z1: &LatticeSubgroup, b1: &[Vec<i128>], lim1: &AbelianQuotient) -> Result<Option<Vec<Vec<i128>>>> {
    let moduli = &z1.moduli;
    let b1_elems = LatticeSubgroup::from_generators(moduli.clone(), b1)?.structure()?.enumerate();
    let mut lifts = Vec::new();
    for (gen, &d) in lim1.generators.iter().zip(&lim1.invariants) {
        let lift = b1_elems.iter().find_map(|b| {
            let c: Vec<i128> = (0..moduli.len()).map(|i| (gen[i] + b[i]).rem_euclid(moduli[i])).collect();
            c.iter().zip(moduli).all(|(&x, &m)| (x * d).rem_euclid(m) == 0).then_some(c)
        });
        match lift {
            Some(c) => lifts.push(c),
            None => return Ok(None),
        }
    }
    let c = LatticeSubgroup::from_generators(moduli.clone(), &lifts)?;
    let mut both = lifts.clone();
    both.extend(b1.iter().cloned());
    let span = LatticeSubgroup::from_generators(moduli.clone(), &both)?;
    let b_order = LatticeSubgroup::from_generators(moduli.clone(), b1)?.order();
    let ok = c.order() == lim1.order() && span.order() == z1.order() && c.order() * b_order == z1.order();
    Ok(ok.then_some(lifts))
}

/// Every normalized cocycle by exhaustive search, evaluated on group elements.
/// Only the coordinates of `zf` are used, to express the result.
pub fn brute_z1hat(o: &OrbitCategory, zf: &CenterFunctor, bound: u128) -> Result<Vec<Vec<i128>>> {
    let f = &o.fusion;
    let g = f.group();
    let centers: Vec<Subgroup> = o.objects.iter().map(|&p| g.center(f.sub(p))).collect();
    let vars: Vec<usize> = (0..o.mors.len()).filter(|&m| !o.mors[m].inclusion).collect();
    let mut size: u128 = 1;
    for &m in &vars {
        size = size.saturating_mul(centers[o.mors[m].source].order() as u128);
    }
    if size > bound {
        return Err(Error::SearchSpaceTooLarge { size, bound });
    }
    // φ^{-1} on Z(target), from the representative's value map
    let inv: Vec<HashMap<Elem, Elem>> = o
        .mors
        .iter()
        .map(|m| {
            let h = f.hom(o.objects[m.source], m.rep);
            let dom = f.sub(o.objects[m.source]).members();
            h.images.iter().zip(dom).map(|(&y, &x)| (y, x)).collect()
        })
        .collect();
    let mut pos = vec![usize::MAX; o.mors.len()];
    for (i, &m) in vars.iter().enumerate() {
        pos[m] = i;
    }
    // each equation is checked once its last variable is set
    let mut due: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); vars.len() + 1];
    for phi in 0..o.mors.len() {
        for r in 0..o.num_objects() {
            for &psi in o.hom(o.mors[phi].target, r) {
                let chi = o.compose(psi, phi);
                let last = [phi, psi, chi].iter().filter(|&&m| pos[m] != usize::MAX).map(|&m| pos[m] + 1).max().unwrap_or(0);
                due[last].push((phi, psi, chi));
            }
        }
    }
    let mut value = vec![Elem::ONE; o.mors.len()];
    let holds = |value: &[Elem], (phi, psi, chi): (usize, usize, usize)| {
        inv[phi].get(&value[psi]).map(|&x| g.mul(value[phi], x)) == Some(value[chi])
    };
    if !due[0].iter().all(|&e| holds(&value, e)) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; vars.len()];
    let mut depth = 0usize;
    // iterative backtracking over the variables in order
    loop {
        if depth == vars.len() {
            out.push(value.clone());
            if depth == 0 {
                break;
            }
            depth -= 1;
            idx[depth] += 1;
            continue;
        }
        let m = vars[depth];
        let cands = centers[o.mors[m].source].members();
        if idx[depth] >= cands.len() {
            idx[depth] = 0;
            value[m] = Elem::ONE;
            if depth == 0 {
                break;
            }
            depth -= 1;
            idx[depth] += 1;
            continue;
        }
        value[m] = cands[idx[depth]];
        if due[depth + 1].iter().all(|&e| holds(&value, e)) {
            depth += 1;
        } else {
            idx[depth] += 1;
        }
    }
    let mut coords: Vec<Vec<i128>> = out
        .into_iter()
        .map(|v| {
            let mut t = Vec::new();
            for (m, &x) in v.iter().enumerate() {
                t.extend(zf.coords[o.mors[m].source].coords(x));
            }
            t
        })
        .collect();
    coords.sort();
    Ok(coords)
}

/// `Z(F)` as the inverse limit: elements of `Z(S)` fixed by every induced map.
#[derive(Clone, Debug)]
pub struct Lim0 {
    pub elements: Vec<Elem>,
    pub invariants: Vec<i128>,
}

pub fn lim0(o: &OrbitCategory, zf: &CenterFunctor) -> Result<Lim0> {
    let f = &o.fusion;
    let g = f.group();
    let zs = g.center(f.sylow());
    let elements: Vec<Elem> = zs
        .members()
        .iter()
        .copied()
        .filter(|&z| {
            (0..o.mors.len()).all(|m| {
                let (p, q) = (o.mors[m].source, o.mors[m].target);
                zf.apply(o, m, zf.coords[q].coords(z)) == zf.coords[p].coords(z)
            })
        })
        .collect();
    let sub = g.subgroup(elements.clone())?;
    let mut invariants = AbelianCoords::new(g, &sub)?.orders;
    invariants.sort();
    Ok(Lim0 { elements, invariants })
}

/// Checks linking the coboundaries to the limits:
/// `d∘d = 0`, `B̂¹ ⊆ Ẑ¹`, `ker(d∘cnst) = Z(F)` and `B̂¹ ≅ Z(S)/Z(F)`.
pub fn verify_sequence(o: &OrbitCategory, zf: &CenterFunctor, lim: &Lim1, l0: &Lim0) -> Result<Vec<AxiomResult>> {
    let ch = Cochains::new(o, zf);
    let f = &o.fusion;
    let g = f.group();
    let zs = g.center(f.sylow());
    let mut out = Vec::new();

    // every coboundary is a cocycle; u ranges over a generating set of 0-cochains
    let mut w = None;
    for (p, c) in zf.coords.iter().enumerate() {
        for &z in &c.generators {
            let mut u = vec![0i128; ch.moduli0.len()];
            u[ch.offset0[p]..ch.offset0[p] + c.rank()].copy_from_slice(c.coords(z));
            if !ch.is_cocycle(o, zf, &coboundary(o, zf, &ch, &u)) {
                w = Some(format!("d(u) is not a cocycle for u supported at {}", f.label(o.objects[p])));
            }
        }
    }
    out.push(AxiomResult::new("dd-zero", w));

    let mut w = None;
    let mut images: HashMap<Vec<i128>, Vec<Elem>> = HashMap::new();
    for &z in zs.members() {
        let t = coboundary(o, zf, &ch, &ch.constant(zf, z));
        if !ch.is_normalized(o, zf, &t) || !lim.z1.contains(&t)? {
            w = Some(format!("d(u_z) is not a normalized cocycle for z = {}", g.perm(z)));
        }
        images.entry(t).or_default().push(z);
    }
    out.push(AxiomResult::new("B1-in-Z1", w));

    let zero = vec![0i128; ch.moduli1.len()];
    let kernel = images.get(&zero).cloned().unwrap_or_default();
    let w = (kernel != l0.elements).then(|| "ker(d∘cnst) differs from the inverse limit".to_string());
    out.push(AxiomResult::new("lim0-kernel", w));

    // du_z ↦ z Z(F) is well defined and bijective
    let mut w = None;
    let b1 = lim.b1_elements()?;
    let mut keys: Vec<Vec<i128>> = images.keys().cloned().collect();
    keys.sort();
    if keys != b1 || (b1.len() as u128) != lim.b1_order || b1.len() * l0.elements.len() != zs.order() {
        w = Some("|B1| * |Z(F)| differs from |Z(S)|".to_string());
    }
    for fiber in images.values() {
        let mut coset: Vec<Elem> = l0.elements.iter().map(|&k| g.mul(fiber[0], k)).collect();
        coset.sort();
        let mut fb = fiber.clone();
        fb.sort();
        if coset != fb {
            w = Some(format!("fiber over z = {} is not a coset of Z(F)", g.perm(fiber[0])));
        }
    }
    out.push(AxiomResult::new("B1-iso-ZS-mod-ZF", w));

    let w = (lim.z1_order != lim.b1_order * lim.lim1.order()).then(|| "|Z1| != |B1| * |lim1|".to_string());
    out.push(AxiomResult::new("lim1-order", w));
    let w = lim.complement.is_none().then(|| "no complement to B1 in Z1".to_string());
    out.push(AxiomResult::new("B1-splits", w));
    Ok(out)
}

/// `1` for odd p, `2` for p = 2.
pub fn k_of(p: u32) -> u32 {
    if p == 2 {
        2
    } else {
        1
    }
}

/// Summary fields for reports.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CohomReport {
    pub orbit_objects: usize,
    pub orbit_morphisms: usize,
    pub z1_order: String,
    pub b1_order: String,
    pub lim1_invariants: Vec<String>,
    pub lim1_exponent: String,
    pub lim0_invariants: Vec<String>,
    pub complement: Option<Vec<Vec<String>>>,
    pub oracle: Option<bool>,
    pub checks: Vec<AxiomResult>,
}

/// Everything about `lim¹` for one fusion system and object set.
pub struct CohomData {
    pub orbit: OrbitCategory,
    pub center: CenterFunctor,
    pub lim1: Lim1,
    pub lim0: Lim0,
}

pub fn compute(fusion: Arc<FusionSystem>, objects: Vec<SubId>) -> Result<CohomData> {
    let orbit = orbit_category(fusion, objects)?;
    let center = CenterFunctor::build(&orbit)?;
    center.verify(&orbit).map_err(Error::NotACocycle)?;
    let lim1 = solve_z1hat(&orbit, &center)?;
    let lim0 = lim0(&orbit, &center)?;
    Ok(CohomData { orbit, center, lim1, lim0 })
}

impl CohomData {
    /// Report with the sequence checks, the exponent bound and optionally the oracle comparison.
    pub fn report(&self, oracle: bool) -> Result<CohomReport> {
        self.report_bounded(oracle, BRUTE_BOUND)
    }

    /// As `report`, with the oracle skipped when its search space exceeds `bound`.
    pub fn report_bounded(&self, oracle: bool, bound: u128) -> Result<CohomReport> {
        let mut checks = verify_sequence(&self.orbit, &self.center, &self.lim1, &self.lim0)?;
        let k = k_of(self.orbit.fusion.prime()) as u128;
        let e = self.lim1.lim1.exponent();
        checks.push(AxiomResult::new("lim1-exponent", (k % e != 0).then(|| format!("exponent {e} does not divide {k}"))));
        let oracle_result = if oracle {
            match brute_z1hat(&self.orbit, &self.center, bound) {
                Ok(set) => {
                    let same = set == self.lim1.z1_elements()?;
                    checks.push(AxiomResult::new("oracle", (!same).then(|| "SNF and brute force disagree".to_string())));
                    Some(same)
                }
                Err(Error::SearchSpaceTooLarge { .. }) => None,
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        let strs = |v: &[i128]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        Ok(CohomReport {
            orbit_objects: self.orbit.num_objects(),
            orbit_morphisms: self.orbit.num_morphisms(),
            z1_order: self.lim1.z1_order.to_string(),
            b1_order: self.lim1.b1_order.to_string(),
            lim1_invariants: strs(&self.lim1.lim1.invariants),
            lim1_exponent: e.to_string(),
            lim0_invariants: strs(&self.lim0.invariants),
            complement: self.lim1.complement.as_ref().map(|c| c.iter().map(|v| strs(v)).collect()),
            oracle: oracle_result,
            checks,
        })
    }
}
