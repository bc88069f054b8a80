//! Automorphisms of G normalizing S acting on the centric linking system,
//! the kernel of the induced map on outer automorphisms, and the structure of
//! `C_Aut(G)(S) / C_Inn(G)(S)`.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::SubId;
use crate::grp::group::gcd;
use crate::grp::{AutomorphismGroup, Elem, Subgroup};
use crate::rigid::mu_tilde;
use crate::translink::{inner_automorphism, verify_automorphism, AxiomResult, CatAutomorphism, Kind, TransporterSystem};

/// `κ̃_G` on `N_Aut(G)(S)`.
pub struct KappaData {
    /// Automorphisms of G (elements of `aut.group`) with `a(S) = S`, sorted.
    pub domain: Vec<Elem>,
    /// `images[i] = κ̃(domain[i])`.
    pub images: Vec<CatAutomorphism>,
    /// `{c_γ : γ ∈ Aut_L(S)}`, sorted.
    pub inner: Vec<CatAutomorphism>,
    pub checks: Vec<AxiomResult>,
}

impl KappaData {
    pub fn image_of(&self, a: Elem) -> Option<&CatAutomorphism> {
        self.domain.binary_search(&a).ok().map(|i| &self.images[i])
    }
}

fn image_sub(t: &TransporterSystem, aut: &AutomorphismGroup, a: Elem, p: SubId) -> Option<SubId> {
    let f = t.fusion();
    let mut m: Vec<Elem> = f.sub(p).members().iter().map(|&x| aut.apply(a, x)).collect();
    m.sort();
    f.sub_id(&Subgroup::from_sorted(m))
}

/// `κ̃(a)`: `P ↦ a(P)` and `g O_p'(C_G(P)) ↦ a(g) O_p'(C_G(a(P)))`.
pub fn kappa_image(t: &TransporterSystem, aut: &AutomorphismGroup, a: Elem) -> Result<CatAutomorphism> {
    if t.kind() != Kind::Linking {
        return Err(Error::NotATransporterSystem("κ̃ acts on a linking system of G".into()));
    }
    let not_normal = || Error::NotASubgroup("automorphism does not normalize S".into());
    let obj: Vec<usize> = (0..t.num_objects())
        .map(|o| image_sub(t, aut, a, t.obj_sub(o)).and_then(|q| t.obj_of(q)).ok_or_else(not_normal))
        .collect::<Result<_>>()?;
    let mor = (0..t.num_morphisms())
        .map(|m| {
            let g = aut.apply(a, Elem(t.rep_key(m)));
            t.lookup_key(obj[t.source(m)], obj[t.target(m)], g.0).ok_or_else(not_normal)
        })
        .collect::<Result<_>>()?;
    Ok(CatAutomorphism { obj, mor })
}

pub fn kappa_tilde(t: &TransporterSystem, aut: &AutomorphismGroup) -> Result<KappaData> {
    let f = t.fusion().clone();
    let g = f.group();
    let sid = f.sylow_id();
    let domain: Vec<Elem> = aut.group.all().filter(|&a| image_sub(t, aut, a, sid) == Some(sid)).collect();
    let images: Vec<CatAutomorphism> = domain.iter().map(|&a| kappa_image(t, aut, a)).collect::<Result<_>>()?;
    let s = t.sylow_obj();
    let mut inner: Vec<CatAutomorphism> =
        t.hom(s, s).iter().map(|&gm| inner_automorphism(t, gm)).collect::<Result<_>>()?;
    inner.sort();
    inner.dedup();
    let mut checks = Vec::new();

    let w = domain
        .iter()
        .zip(&images)
        .find_map(|(a, img)| verify_automorphism(t, img).err().map(|e| format!("κ̃({}): {e}", a.0)));
    checks.push(AxiomResult::new("kappa-automorphism", w));

    let pos: HashMap<Elem, usize> = domain.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut w = None;
    'outer: for (i, &a) in domain.iter().enumerate() {
        for (j, &b) in domain.iter().enumerate() {
            let ab = pos[&aut.group.mul(a, b)];
            if images[ab] != images[i].compose(&images[j]) {
                w = Some(format!("κ̃(ab) ≠ κ̃(a)κ̃(b) for a = {}, b = {}", a.0, b.0));
                break 'outer;
            }
        }
    }
    checks.push(AxiomResult::new("kappa-homomorphism", w));

    // conjugation by g ∈ N_G(S) goes to conjugation by the class of g in Aut_L(S)
    let mut w = None;
    let mut from_inner = BTreeSet::new();
    for x in g.normalizer(f.ambient(), f.sylow()).members() {
        let a = aut.inner_of(*x);
        let gamma = t.lookup_key(s, s, x.0).expect("normalizer element");
        let c = inner_automorphism(t, gamma)?;
        if images[pos[&a]] != c {
            w = Some(format!("κ̃(c_g) is not c_[g] for g = {}", g.perm(*x)));
        }
        from_inner.insert(c);
    }
    if from_inner.into_iter().collect::<Vec<_>>() != inner {
        w = Some("κ̃(Aut_G(S)) differs from the conjugations of L".into());
    }
    checks.push(AxiomResult::new("kappa-inner", w));

    // μ̃ ∘ κ̃ is restriction to S
    let mut w = None;
    for (&a, img) in domain.iter().zip(&images) {
        let beta = mu_tilde(t, img)?;
        let restr: Vec<Elem> = f.sylow().members().iter().map(|&x| aut.apply(a, x)).collect();
        if beta != restr {
            w = Some(format!("μ̃(κ̃(a)) differs from a|_S for a = {}", a.0));
        }
    }
    checks.push(AxiomResult::new("mu-kappa-restriction", w));
    Ok(KappaData { domain, images, inner, checks })
}

/// The kernel of `κ_G: Out(G) -> Out(L)`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct KernelReport {
    pub out_order: usize,
    /// Indices (into `outer_classes()`) of the classes in the kernel.
    pub kernel_classes: Vec<usize>,
    pub kernel_order: usize,
    pub op_prime_trivial: bool,
    /// `gcd(|ker κ_G|, p) = 1`.
    pub prime_to_p: bool,
    pub checks: Vec<AxiomResult>,
}

/// A member of the outer class of `a0` normalizing S: `c_g ∘ a0` for the first suitable g.
pub fn normalize_class(t: &TransporterSystem, aut: &AutomorphismGroup, a0: Elem) -> Option<Elem> {
    let f = t.fusion();
    let sid = f.sylow_id();
    f.group()
        .all()
        .map(|x| aut.group.mul(aut.inner_of(x), a0))
        .find(|&a| image_sub(t, aut, a, sid) == Some(sid))
}

pub fn kappa_kernel(t: &TransporterSystem, aut: &AutomorphismGroup, kd: &KappaData) -> Result<KernelReport> {
    let f = t.fusion();
    let p = f.prime();
    let g = f.group();
    let classes = aut.outer_classes();
    let mut kernel_classes = Vec::new();
    let mut w = None;
    for (i, class) in classes.iter().enumerate() {
        let Some(a) = normalize_class(t, aut, class[0]) else {
            w = Some(format!("outer class {i} has no member normalizing S"));
            continue;
        };
        let in_kernel = kd.inner.binary_search(kd.image_of(a).unwrap()).is_ok();
        // every member normalizing S gives the same verdict
        for &b in class {
            if let Some(img) = kd.image_of(b) {
                if kd.inner.binary_search(img).is_ok() != in_kernel {
                    w = Some(format!("outer class {i} has members with different verdicts"));
                }
            }
        }
        if in_kernel {
            kernel_classes.push(i);
        }
    }
    let op_prime_trivial = g.o_p_prime(&g.whole(), p).order() == 1;
    let kernel_order = kernel_classes.len();
    let prime_to_p = gcd(kernel_order as u64, p as u64) == 1;
    let mut checks = vec![AxiomResult::new("kernel-well-defined", w)];
    if op_prime_trivial {
        let w = (!prime_to_p).then(|| format!("|ker κ| = {kernel_order} is divisible by {p}"));
        checks.push(AxiomResult::new("kernel-prime-to-p", w));
    }
    Ok(KernelReport { out_order: aut.out_order(), kernel_classes, kernel_order, op_prime_trivial, prime_to_p, checks })
}

/// `A = C_Aut(G)(S) / C_Inn(G)(S)` and its normal p-complement.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CentralizingReport {
    /// `O_p'(G) = 1`; the checks are verdicts only then.
    pub hypothesis: bool,
    pub a_order: usize,
    pub op_prime_order: usize,
    pub trivial_on_l: usize,
    pub complement_order: Option<usize>,
    pub checks: Vec<AxiomResult>,
}

pub fn centralizing_aut_structure(
    t: &TransporterSystem,
    aut: &AutomorphismGroup,
    kd: &KappaData,
    kr: &KernelReport,
) -> Result<CentralizingReport> {
    let f = t.fusion();
    let p = f.prime();
    let g = f.group();
    let s = f.sylow();
    let ag = &aut.group;
    let cent: Vec<Elem> = ag.all().filter(|&a| s.members().iter().all(|&x| aut.apply(a, x) == x)).collect();
    let cent = ag.subgroup(cent)?;
    let mut ci: Vec<Elem> = g.centralizer(&g.whole(), s).members().iter().map(|&x| aut.inner_of(x)).collect();
    ci.sort();
    ci.dedup();
    let ci = ag.subgroup(ci)?;
    let q = ag.quotient(&cent, &ci)?;
    let a_group = &q.group;
    let op = a_group.o_p_prime(&a_group.whole(), p);

    // classes with a representative acting trivially on L
    let mut trivial: Vec<Elem> = cent
        .members()
        .iter()
        .filter(|&&a| kd.image_of(a).is_some_and(|img| img.is_identity()))
        .map(|&a| q.project(a))
        .collect();
    trivial.sort();
    trivial.dedup();
    let mut checks = Vec::new();
    let w = (trivial != op.members()).then(|| "O_p'(A) differs from the classes trivial on L".to_string());
    checks.push(AxiomResult::new("op-prime-is-trivial-on-L", w));

    let complement = a_group
        .subgroups(&a_group.whole())
        .into_iter()
        .find(|b| b.intersection(&op).order() == 1 && b.order() * op.order() == a_group.order());
    let w = match &complement {
        None => Some("no complement to O_p'(A)".to_string()),
        Some(b) if p == 2 && !(a_group.is_abelian(b) && 2 % a_group.exponent(b) == 0) => {
            Some("complement is not elementary abelian".to_string())
        }
        Some(b) if p != 2 && b.order() != 1 => Some("complement is nontrivial at an odd prime".to_string()),
        _ => None,
    };
    checks.push(AxiomResult::new("complement-elementary", w));

    // κ_G is injective on a Sylow p-subgroup of Out(G)
    let out = ag.quotient(&ag.whole(), &aut.inner)?;
    let classes = aut.outer_classes();
    let mut kernel: Vec<Elem> = kr.kernel_classes.iter().map(|&i| out.project(classes[i][0])).collect();
    kernel.sort();
    let sylow = out.group.sylow(&out.group.whole(), p);
    let meet = kernel.iter().filter(|&&x| sylow.contains(x)).count();
    let w = (meet != 1).then(|| "ker κ meets a Sylow subgroup of Out(G)".to_string());
    checks.push(AxiomResult::new("sylow-injective", w));
    Ok(CentralizingReport {
        hypothesis: kr.op_prime_trivial,
        a_order: a_group.order(),
        op_prime_order: op.order(),
        trivial_on_l: trivial.len(),
        complement_order: complement.map(|b| b.order()),
        checks,
    })
}
