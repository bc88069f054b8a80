use crate::error::{Error, Result};
use crate::grp::group::{FiniteGroup, Subgroup};

/// The subgroup generated by the abelian subgroups of maximal order, with that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thompson {
    pub d: usize,
    pub j: Subgroup,
}

pub fn thompson_j(g: &FiniteGroup, p_sub: &Subgroup, p: u32) -> Result<Thompson> {
    if !g.is_p_group(p_sub, p) {
        return Err(Error::NotAPGroup(p));
    }
    let abelian: Vec<Subgroup> = g
        .subgroups(p_sub)
        .into_iter()
        .filter(|a| g.is_abelian(a))
        .collect();
    let d = abelian.iter().map(|a| a.order()).max().unwrap_or(1);
    let mut gens = Vec::new();
    for a in abelian.iter().filter(|a| a.order() == d) {
        gens.extend(g.small_generators(a));
    }
    Ok(Thompson { d, j: g.closure(&gens) })
}

/// `q <_J p`: smaller maximal abelian order, or equal order and smaller J.
pub fn j_less(q: &Thompson, p: &Thompson) -> bool {
    q.d < p.d || (q.d == p.d && q.j.order() < p.j.order())
}
