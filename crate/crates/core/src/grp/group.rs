use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::grp::perm::Perm;

/// Default cap on the order of an enumerated group.
pub const GROUP_CAP: usize = 10_000;
/// Groups up to this order get a full multiplication table.
const TABLE_CAP: usize = 2500;
const NONE: u32 = u32::MAX;

/// Index of an element in the canonical (lexicographic) element list of a group.
/// The identity is always `Elem(0)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Elem(pub u32);

impl Elem {
    pub const ONE: Elem = Elem(0);

    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// A subgroup as a sorted list of members. Ordered by order first, then members.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subgroup {
    members: Vec<Elem>,
}

impl Subgroup {
    pub(crate) fn from_sorted(members: Vec<Elem>) -> Subgroup {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Subgroup { members }
    }

    pub fn trivial() -> Subgroup {
        Subgroup { members: vec![Elem::ONE] }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Position of `x` in the member list.
    pub fn position(&self, x: Elem) -> Option<usize> {
        self.members.binary_search(&x).ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.order() <= other.order()
            && other.order() % self.order() == 0
            && self.members.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            members: self.members.iter().copied().filter(|&x| other.contains(x)).collect(),
        }
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.members
            .len()
            .cmp(&other.members.len())
            .then_with(|| self.members.cmp(&other.members))
    }
}

/// A permutation group held by complete enumeration.
pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Elem>,
    elements: Vec<Perm>,
    lookup: HashMap<Perm, u32>,
    table: Option<Vec<u32>>,
    inverses: Vec<u32>,
    orders: Vec<u32>,
    subgroup_cache: OnceLock<Vec<Subgroup>>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .finish()
    }
}

impl FiniteGroup {
    pub fn from_generators(degree: usize, gens: Vec<Perm>) -> Result<FiniteGroup> {
        FiniteGroup::from_generators_capped(degree, gens, GROUP_CAP)
    }

    pub fn from_generators_capped(degree: usize, gens: Vec<Perm>, cap: usize) -> Result<FiniteGroup> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::InvalidPermutation(format!(
                    "generator {} has degree {}, expected {}",
                    g,
                    g.degree(),
                    degree
                )));
            }
        }
        let id = Perm::identity(degree);
        let mut seen: HashSet<Perm> = HashSet::new();
        seen.insert(id.clone());
        let mut list = vec![id];
        let mut i = 0;
        while i < list.len() {
            for g in &gens {
                let y = list[i].compose(g);
                if !seen.contains(&y) {
                    if list.len() >= cap {
                        return Err(Error::ClosureTooLarge { cap });
                    }
                    seen.insert(y.clone());
                    list.push(y);
                }
            }
            i += 1;
        }
        let mut group = FiniteGroup::assemble(degree, list)?;
        let mut gen_elems: Vec<Elem> = gens.iter().map(|g| group.elem_of(g).unwrap()).collect();
        gen_elems.dedup();
        group.generators = gen_elems;
        Ok(group)
    }

    /// Builds a group from a complete list of permutations, verifying closure.
    pub fn from_elements(degree: usize, perms: Vec<Perm>) -> Result<FiniteGroup> {
        if perms.is_empty() {
            return Err(Error::NotASubgroup("empty element list".into()));
        }
        let mut group = FiniteGroup::assemble(degree, perms)?;
        for a in 0..group.order() {
            for b in 0..group.order() {
                if group.try_mul(Elem(a as u32), Elem(b as u32)).is_none() {
                    return Err(Error::NotASubgroup("element list is not closed".into()));
                }
            }
        }
        let whole = group.whole();
        group.generators = group.small_generators(&whole);
        Ok(group)
    }

    /// Left regular representation of an abstract group given by its table.
    /// Returns the group and the map from abstract indices to elements.
    pub fn from_table(n: usize, mul: impl Fn(usize, usize) -> usize) -> Result<(FiniteGroup, Vec<Elem>)> {
        let perms: Vec<Perm> = (0..n)
            .map(|a| Perm::from_images((0..n).map(|x| mul(a, x) as u32).collect()))
            .collect::<Result<_>>()?;
        let group = FiniteGroup::from_elements(n, perms.clone())?;
        let map = perms.iter().map(|p| group.elem_of(p).unwrap()).collect();
        Ok((group, map))
    }

    fn assemble(degree: usize, mut list: Vec<Perm>) -> Result<FiniteGroup> {
        list.sort();
        list.dedup();
        if !list[0].is_identity() {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        let n = list.len();
        let lookup: HashMap<Perm, u32> = list.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        let table = if n <= TABLE_CAP {
            let mut t = vec![NONE; n * n];
            for a in 0..n {
                for b in 0..n {
                    if let Some(&c) = lookup.get(&list[a].compose(&list[b])) {
                        t[a * n + b] = c;
                    }
                }
            }
            Some(t)
        } else {
            None
        };
        let mut inverses = vec![NONE; n];
        for (i, p) in list.iter().enumerate() {
            inverses[i] = *lookup
                .get(&p.inverse())
                .ok_or_else(|| Error::NotASubgroup("not closed under inverses".into()))?;
        }
        let mut group = FiniteGroup {
            degree,
            generators: Vec::new(),
            elements: list,
            lookup,
            table,
            inverses,
            orders: Vec::new(),
            subgroup_cache: OnceLock::new(),
        };
        let mut orders = Vec::with_capacity(n);
        for i in 0..n {
            let x = Elem(i as u32);
            let mut y = x;
            let mut k = 1;
            while y != Elem::ONE {
                y = group
                    .try_mul(y, x)
                    .filter(|_| k <= n)
                    .ok_or_else(|| Error::NotASubgroup("element list is not closed".into()))?;
                k += 1;
            }
            orders.push(k as u32);
        }
        group.orders = orders;
        Ok(group)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn perm(&self, x: Elem) -> &Perm {
        &self.elements[x.idx()]
    }

    pub fn elem_of(&self, p: &Perm) -> Option<Elem> {
        self.lookup.get(p).map(|&i| Elem(i))
    }

    pub fn all(&self) -> impl Iterator<Item = Elem> {
        (0..self.elements.len() as u32).map(Elem)
    }

    fn try_mul(&self, a: Elem, b: Elem) -> Option<Elem> {
        match &self.table {
            Some(t) => {
                let c = t[a.idx() * self.order() + b.idx()];
                (c != NONE).then_some(Elem(c))
            }
            None => self.elem_of(&self.perm(a).compose(self.perm(b))),
        }
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.table {
            Some(t) => Elem(t[a.idx() * self.order() + b.idx()]),
            None => self.elem_of(&self.perm(a).compose(self.perm(b))).expect("closed"),
        }
    }

    pub fn inv(&self, a: Elem) -> Elem {
        Elem(self.inverses[a.idx()])
    }

    /// Left conjugation `g x g^-1`.
    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, x: Elem, k: u64) -> Elem {
        let mut r = Elem::ONE;
        for _ in 0..(k % self.elem_order(x) as u64) {
            r = self.mul(r, x);
        }
        r
    }

    pub fn elem_order(&self, x: Elem) -> u32 {
        self.orders[x.idx()]
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self.all().collect())
    }

    /// Checks that a member set is a subgroup.
    pub fn subgroup(&self, mut members: Vec<Elem>) -> Result<Subgroup> {
        members.sort();
        members.dedup();
        let s = Subgroup { members };
        if !s.contains(Elem::ONE) {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        for &a in s.members() {
            for &b in s.members() {
                if !s.contains(self.mul(a, b)) {
                    return Err(Error::NotASubgroup("not closed under products".into()));
                }
            }
        }
        Ok(s)
    }

    pub fn closure(&self, gens: &[Elem]) -> Subgroup {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut list = vec![Elem::ONE];
        let mut i = 0;
        while i < list.len() {
            for &g in gens {
                let y = self.mul(list[i], g);
                if !seen[y.idx()] {
                    seen[y.idx()] = true;
                    list.push(y);
                }
            }
            i += 1;
        }
        list.sort();
        Subgroup::from_sorted(list)
    }

    /// Greedy generating set: members scanned in order, kept when not yet generated.
    pub fn small_generators(&self, h: &Subgroup) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut cur = Subgroup::trivial();
        for &x in h.members() {
            if cur.order() == h.order() {
                break;
            }
            if !cur.contains(x) {
                gens.push(x);
                cur = self.closure(&gens);
            }
        }
        gens
    }

    pub fn join(&self, h: &Subgroup, k: &Subgroup) -> Subgroup {
        let mut gens = self.small_generators(h);
        gens.extend(self.small_generators(k));
        self.closure(&gens)
    }

    pub fn conjugate(&self, g: Elem, h: &Subgroup) -> Subgroup {
        let mut m: Vec<Elem> = h.members().iter().map(|&x| self.conj(g, x)).collect();
        m.sort();
        Subgroup::from_sorted(m)
    }

    pub fn normalizer(&self, within: &Subgroup, x: &Subgroup) -> Subgroup {
        let gens = self.small_generators(x);
        let m = within
            .members()
            .iter()
            .copied()
            .filter(|&g| gens.iter().all(|&s| x.contains(self.conj(g, s))))
            .collect();
        Subgroup::from_sorted(m)
    }

    pub fn centralizer(&self, within: &Subgroup, x: &Subgroup) -> Subgroup {
        let gens = self.small_generators(x);
        let m = within
            .members()
            .iter()
            .copied()
            .filter(|&g| gens.iter().all(|&s| self.mul(g, s) == self.mul(s, g)))
            .collect();
        Subgroup::from_sorted(m)
    }

    pub fn center(&self, x: &Subgroup) -> Subgroup {
        self.centralizer(x, x)
    }

    /// `{g in within : g P g^-1 <= Q}`.
    pub fn transporter(&self, within: &Subgroup, p: &Subgroup, q: &Subgroup) -> Vec<Elem> {
        let gens = self.small_generators(p);
        within
            .members()
            .iter()
            .copied()
            .filter(|&g| gens.iter().all(|&s| q.contains(self.conj(g, s))))
            .collect()
    }

    pub fn is_normal(&self, within: &Subgroup, x: &Subgroup) -> bool {
        let gx = self.small_generators(x);
        let gw = self.small_generators(within);
        gw.iter().all(|&g| gx.iter().all(|&s| x.contains(self.conj(g, s))))
    }

    pub fn is_abelian(&self, x: &Subgroup) -> bool {
        let gens = self.small_generators(x);
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn exponent(&self, x: &Subgroup) -> u64 {
        x.members()
            .iter()
            .fold(1u64, |acc, &e| lcm(acc, self.elem_order(e) as u64))
    }

    /// Smallest normal subgroup of `within` containing `xs`.
    pub fn normal_closure(&self, within: &Subgroup, xs: &[Elem]) -> Subgroup {
        let gw = self.small_generators(within);
        let mut gens: Vec<Elem> = xs.to_vec();
        loop {
            let n = self.closure(&gens);
            let mut added = false;
            for &g in &gw {
                for k in 0..gens.len() {
                    let y = self.conj(g, gens[k]);
                    if !n.contains(y) && !gens.contains(&y) {
                        gens.push(y);
                        added = true;
                    }
                }
            }
            if !added {
                return n;
            }
        }
    }

    /// Conjugacy classes of `within`, each sorted, listed by smallest member.
    pub fn conjugacy_classes(&self, within: &Subgroup) -> Vec<Vec<Elem>> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for &x in within.members() {
            if seen[x.idx()] {
                continue;
            }
            let mut cls: Vec<Elem> = within.members().iter().map(|&g| self.conj(g, x)).collect();
            cls.sort();
            cls.dedup();
            for &y in &cls {
                seen[y.idx()] = true;
            }
            out.push(cls);
        }
        out
    }

    /// All subgroups of `within`, sorted by (order, members).
    pub fn subgroups(&self, within: &Subgroup) -> Vec<Subgroup> {
        if within.order() == self.order() {
            return self
                .subgroup_cache
                .get_or_init(|| self.enumerate_subgroups(within))
                .clone();
        }
        self.enumerate_subgroups(within)
    }

    fn enumerate_subgroups(&self, within: &Subgroup) -> Vec<Subgroup> {
        let mut cyclic: Vec<(Elem, Subgroup)> = Vec::new();
        let mut cyc_seen: HashSet<Vec<Elem>> = HashSet::new();
        for &x in within.members() {
            let c = self.closure(&[x]);
            if cyc_seen.insert(c.members.clone()) {
                cyclic.push((x, c));
            }
        }
        let mut seen: HashSet<Vec<Elem>> = HashSet::new();
        seen.insert(vec![Elem::ONE]);
        let mut out = vec![Subgroup::trivial()];
        let mut queue = VecDeque::from([Subgroup::trivial()]);
        while let Some(h) = queue.pop_front() {
            let gens = self.small_generators(&h);
            for (x, c) in &cyclic {
                if h.contains(*x) || c.is_subgroup_of(&h) {
                    continue;
                }
                let mut g2 = gens.clone();
                g2.push(*x);
                let j = self.closure(&g2);
                if seen.insert(j.members.clone()) {
                    out.push(j.clone());
                    queue.push_back(j);
                }
            }
        }
        out.sort();
        out
    }

    pub fn normal_subgroups(&self, within: &Subgroup) -> Vec<Subgroup> {
        self.subgroups(within)
            .into_iter()
            .filter(|h| self.is_normal(within, h))
            .collect()
    }

    pub fn is_p_group(&self, x: &Subgroup, p: u32) -> bool {
        is_power_of(x.order(), p)
    }

    /// Largest normal p-subgroup of `within`.
    pub fn o_p(&self, within: &Subgroup, p: u32) -> Subgroup {
        self.core_by(within, |n| is_power_of(n, p))
    }

    /// Largest normal p'-subgroup of `within`.
    pub fn o_p_prime(&self, within: &Subgroup, p: u32) -> Subgroup {
        self.core_by(within, |n| n % p as usize != 0)
    }

    /// Union of the conjugacy classes whose normal closure has order of the given type.
    /// For p- and p'-types this union is the largest normal subgroup of that type.
    fn core_by(&self, within: &Subgroup, ok: impl Fn(usize) -> bool) -> Subgroup {
        let mut members = Vec::new();
        for cls in self.conjugacy_classes(within) {
            if ok(self.normal_closure(within, &cls[..1]).order()) {
                members.extend(cls);
            }
        }
        members.sort();
        Subgroup::from_sorted(members)
    }

    /// The lexicographically smallest Sylow p-subgroup of `within`.
    pub fn sylow(&self, within: &Subgroup, p: u32) -> Subgroup {
        let mut s = Subgroup::trivial();
        loop {
            let n = self.normalizer(within, &s);
            let next = n.members().iter().copied().find(|&x| {
                !s.contains(x) && s.contains(self.pow(x, p as u64))
            });
            match next {
                Some(x) => {
                    let mut gens = self.small_generators(&s);
                    gens.push(x);
                    s = self.closure(&gens);
                }
                None => break,
            }
        }
        within
            .members()
            .iter()
            .map(|&g| self.conjugate(g, &s))
            .min()
            .unwrap_or(s)
    }

    /// `C(O_p) <= O_p` inside `within`.
    pub fn is_characteristic_p(&self, within: &Subgroup, p: u32) -> bool {
        let o = self.o_p(within, p);
        self.centralizer(within, &o).is_subgroup_of(&o)
    }

    /// Left cosets `gH` of `h` in `within`, each sorted, listed by smallest member.
    pub fn left_cosets(&self, within: &Subgroup, h: &Subgroup) -> Vec<Vec<Elem>> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for &g in within.members() {
            if seen[g.idx()] {
                continue;
            }
            let mut c: Vec<Elem> = h.members().iter().map(|&k| self.mul(g, k)).collect();
            c.sort();
            for &y in &c {
                seen[y.idx()] = true;
            }
            out.push(c);
        }
        out
    }

    /// The quotient `within / n` for a normal subgroup `n`.
    pub fn quotient(&self, within: &Subgroup, n: &Subgroup) -> Result<Quotient> {
        if !n.is_subgroup_of(within) || !self.is_normal(within, n) {
            return Err(Error::NotASubgroup("quotient by a non-normal subgroup".into()));
        }
        let cosets = self.left_cosets(within, n);
        let mut class = vec![NONE; self.order()];
        for (i, c) in cosets.iter().enumerate() {
            for &y in c {
                class[y.idx()] = i as u32;
            }
        }
        let (group, map) = FiniteGroup::from_table(cosets.len(), |a, b| {
            class[self.mul(cosets[a][0], cosets[b][0]).idx()] as usize
        })?;
        let mut coset_of_elem = vec![0usize; cosets.len()];
        for (i, &e) in map.iter().enumerate() {
            coset_of_elem[e.idx()] = i;
        }
        let reps = coset_of_elem.iter().map(|&i| cosets[i][0]).collect();
        let image = class
            .iter()
            .map(|&c| if c == NONE { None } else { Some(map[c as usize]) })
            .collect();
        Ok(Quotient { group, reps, image })
    }
}

/// A quotient group with canonical (smallest) coset representatives.
pub struct Quotient {
    pub group: FiniteGroup,
    /// Smallest representative of each quotient element.
    pub reps: Vec<Elem>,
    image: Vec<Option<Elem>>,
}

impl Quotient {
    pub fn project(&self, x: Elem) -> Elem {
        self.image[x.idx()].expect("element of the numerator")
    }
}

pub fn is_power_of(n: usize, p: u32) -> bool {
    let mut n = n;
    while n % p as usize == 0 {
        n /= p as usize;
    }
    n == 1
}

pub fn p_part(n: usize, p: u32) -> usize {
    let mut n = n;
    let mut r = 1;
    while n % p as usize == 0 {
        n /= p as usize;
        r *= p as usize;
    }
    r
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: usize) -> FiniteGroup {
        let mut cyc: Vec<u32> = (1..n as u32).collect();
        cyc.push(0);
        let mut tr: Vec<u32> = (0..n as u32).collect();
        tr.swap(0, 1);
        FiniteGroup::from_generators(n, vec![Perm::from_images(cyc).unwrap(), Perm::from_images(tr).unwrap()])
            .unwrap()
    }

    #[test]
    fn identity_is_first() {
        let g = sym(4);
        assert!(g.perm(Elem::ONE).is_identity());
        assert_eq!(g.order(), 24);
    }

    #[test]
    fn cap_is_enforced() {
        let r = FiniteGroup::from_generators_capped(
            5,
            vec![Perm::from_cycles(5, "(1,2,3,4,5)").unwrap(), Perm::from_cycles(5, "(1,2)").unwrap()],
            100,
        );
        assert_eq!(r.unwrap_err(), Error::ClosureTooLarge { cap: 100 });
    }

    #[test]
    fn subgroup_count_s4() {
        let g = sym(4);
        assert_eq!(g.subgroups(&g.whole()).len(), 30);
        assert_eq!(g.normal_subgroups(&g.whole()).len(), 4);
    }

    #[test]
    fn quotient_of_s4_by_v4() {
        let g = sym(4);
        let v4 = g.normal_subgroups(&g.whole())[1].clone();
        assert_eq!(v4.order(), 4);
        let q = g.quotient(&g.whole(), &v4).unwrap();
        assert_eq!(q.group.order(), 6);
        assert!(!g.is_abelian(&g.whole()));
        assert!(!q.group.is_abelian(&q.group.whole()));
    }
}
