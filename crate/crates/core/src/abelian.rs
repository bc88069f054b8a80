//! Integer matrices, lattices and finite abelian group structure.
//! All arithmetic is checked `i128`; overflow is reported as an error.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::grp::{Elem, FiniteGroup, Subgroup};

pub type Mat = Vec<Vec<i128>>;

fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow("integer matrix arithmetic"))
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow("integer matrix arithmetic"))
}

/// `x - q*y`
fn sub_mul(x: i128, q: i128, y: i128) -> Result<i128> {
    add(x, -mul(q, y)?)
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Result<Mat> {
    let m = a.len();
    let k = b.len();
    let n = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0i128; n]; m];
    for i in 0..m {
        for t in 0..k {
            if a[i][t] == 0 {
                continue;
            }
            for j in 0..n {
                out[i][j] = add(out[i][j], mul(a[i][t], b[t][j])?)?;
            }
        }
    }
    Ok(out)
}

/// Smith normal form `U A V = D`, with `U^-1` and `V` retained.
#[derive(Clone, Debug)]
pub struct Snf {
    /// Diagonal entries, nonnegative, each dividing the next; length min(m, n).
    pub diag: Vec<i128>,
    pub u_inv: Mat,
    pub v: Mat,
}

pub fn smith_normal_form(a: &Mat, cols: usize) -> Result<Snf> {
    let m = a.len();
    let n = cols;
    let mut d = a.clone();
    let mut u_inv = identity(m);
    let mut v = identity(n);
    let r = m.min(n);
    for t in 0..r {
        loop {
            // smallest nonzero entry of the remaining block goes to (t, t)
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d[i][j] != 0 && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return Ok(finish(d, u_inv, v, r));
            };
            if bi != t {
                d.swap(bi, t);
                for row in u_inv.iter_mut() {
                    row.swap(bi, t);
                }
            }
            if bj != t {
                for row in d.iter_mut() {
                    row.swap(bj, t);
                }
                for row in v.iter_mut() {
                    row.swap(bj, t);
                }
            }
            let piv = d[t][t];
            let mut dirty = false;
            for i in t + 1..m {
                let q = d[i][t].div_euclid(piv);
                if q != 0 {
                    for j in t..n {
                        d[i][j] = sub_mul(d[i][j], q, d[t][j])?;
                    }
                    // row_i -= q row_t  ==>  col_t(U^-1) += q col_i(U^-1)
                    for row in u_inv.iter_mut() {
                        row[t] = add(row[t], mul(q, row[i])?)?;
                    }
                }
                dirty |= d[i][t] != 0;
            }
            for j in t + 1..n {
                let q = d[t][j].div_euclid(piv);
                if q != 0 {
                    for i in t..m {
                        d[i][j] = sub_mul(d[i][j], q, d[i][t])?;
                    }
                    for row in v.iter_mut() {
                        row[j] = sub_mul(row[j], q, row[t])?;
                    }
                }
                dirty |= d[t][j] != 0;
            }
            if dirty {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let mut bad = None;
            'scan: for i in t + 1..m {
                for j in t + 1..n {
                    if d[i][j] % piv != 0 {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => {
                    // row_t += row_i  ==>  col_i(U^-1) -= col_t(U^-1)
                    for j in t..n {
                        d[t][j] = add(d[t][j], d[i][j])?;
                    }
                    for row in u_inv.iter_mut() {
                        row[i] = add(row[i], -row[t])?;
                    }
                }
                None => break,
            }
        }
        if d[t][t] < 0 {
            for j in t..n {
                d[t][j] = -d[t][j];
            }
            for row in u_inv.iter_mut() {
                row[t] = -row[t];
            }
        }
    }
    Ok(finish(d, u_inv, v, r))
}

fn finish(d: Mat, u_inv: Mat, v: Mat, r: usize) -> Snf {
    Snf { diag: (0..r).map(|i| d[i][i]).collect(), u_inv, v }
}

/// Column echelon (Hermite) basis of the lattice spanned by `cols` in `Z^n`.
/// Returns independent columns; column `k` has its first nonzero entry
/// (positive) at a strictly increasing row, and entries to the left of each pivot are reduced.
pub fn column_hnf(mut cols: Vec<Vec<i128>>, n: usize) -> Result<Vec<Vec<i128>>> {
    let mut basis: Vec<Vec<i128>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for row in 0..n {
        loop {
            let nz: Vec<usize> = (0..cols.len()).filter(|&c| cols[c][row] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&c| cols[c][row].abs()).unwrap();
            for &c in &nz {
                if c == piv {
                    continue;
                }
                let q = cols[c][row].div_euclid(cols[piv][row]);
                for i in 0..n {
                    cols[c][i] = sub_mul(cols[c][i], q, cols[piv][i])?;
                }
            }
        }
        if let Some(c) = (0..cols.len()).find(|&c| cols[c][row] != 0) {
            let mut col = cols.swap_remove(c);
            if col[row] < 0 {
                for x in col.iter_mut() {
                    *x = -*x;
                }
            }
            for (b, &pr) in basis.iter_mut().zip(&pivots) {
                let _ = pr;
                let q = b[row].div_euclid(col[row]);
                if q != 0 {
                    for i in 0..n {
                        b[i] = sub_mul(b[i], q, col[i])?;
                    }
                }
            }
            basis.push(col);
            pivots.push(row);
        }
        cols.retain(|c| c.iter().any(|&x| x != 0));
    }
    Ok(basis)
}

/// Coordinates of `v` in an echelon basis from [`column_hnf`], if `v` lies in the lattice.
pub fn solve_in_basis(basis: &[Vec<i128>], v: &[i128]) -> Result<Option<Vec<i128>>> {
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(basis.len());
    for b in basis {
        let row = b.iter().position(|&x| x != 0).expect("nonzero basis column");
        if rest[..row].iter().any(|&x| x != 0) {
            return Ok(None);
        }
        if rest[row] % b[row] != 0 {
            return Ok(None);
        }
        let q = rest[row] / b[row];
        for i in 0..rest.len() {
            rest[i] = sub_mul(rest[i], q, b[i])?;
        }
        coords.push(q);
    }
    Ok(rest.iter().all(|&x| x == 0).then_some(coords))
}

/// A finite abelian group `Z^n / diag(moduli)` and a subgroup given by a
/// full-rank lattice containing `diag(moduli) Z^n`.
#[derive(Clone, Debug)]
pub struct LatticeSubgroup {
    pub moduli: Vec<i128>,
    /// Echelon basis of the lattice.
    pub basis: Vec<Vec<i128>>,
}

impl LatticeSubgroup {
    pub fn whole(moduli: Vec<i128>) -> LatticeSubgroup {
        let n = moduli.len();
        LatticeSubgroup { basis: identity(n), moduli }
    }

    fn modulus_columns(&self) -> Vec<Vec<i128>> {
        let n = self.moduli.len();
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { self.moduli[i] } else { 0 }).collect())
            .collect()
    }

    pub fn from_generators(moduli: Vec<i128>, gens: &[Vec<i128>]) -> Result<LatticeSubgroup> {
        let n = moduli.len();
        let mut cols: Vec<Vec<i128>> = gens.to_vec();
        let base = LatticeSubgroup { moduli, basis: Vec::new() };
        cols.extend(base.modulus_columns());
        Ok(LatticeSubgroup { basis: column_hnf(cols, n)?, moduli: base.moduli })
    }

    /// Restricts to `{x : row . x = 0 mod modulus}`. The condition must be
    /// well defined on the quotient (true on every modulus column).
    pub fn impose(&mut self, row: &[i128], modulus: i128) -> Result<()> {
        let n = self.moduli.len();
        let mut vals: Vec<i128> = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let mut s = 0i128;
            for i in 0..n {
                if row[i] != 0 && b[i] != 0 {
                    s = add(s, mul(row[i], b[i])?)?.rem_euclid(modulus);
                }
            }
            vals.push(s);
        }
        if vals.iter().all(|&x| x == 0) {
            return Ok(());
        }
        let mut cols = std::mem::take(&mut self.basis);
        // unimodular column operations gathering gcd of vals into one column
        loop {
            let nz: Vec<usize> = (0..cols.len()).filter(|&c| vals[c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&c| vals[c]).unwrap();
            for &c in &nz {
                if c == piv {
                    continue;
                }
                let q = vals[c] / vals[piv];
                vals[c] -= q * vals[piv];
                for i in 0..n {
                    cols[c][i] = sub_mul(cols[c][i], q, cols[piv][i])?;
                }
            }
        }
        let c = (0..cols.len()).find(|&c| vals[c] != 0).unwrap();
        let g = crate::grp::group::gcd(vals[c] as u64, modulus as u64) as i128;
        let k = modulus / g;
        for x in cols[c].iter_mut() {
            *x = mul(*x, k)?;
        }
        cols.extend(self.modulus_columns());
        self.basis = column_hnf(cols, n)?;
        Ok(())
    }

    pub fn contains(&self, v: &[i128]) -> Result<bool> {
        Ok(solve_in_basis(&self.basis, v)?.is_some())
    }

    /// Order of the subgroup: the product of `moduli[i] / pivot_i` over the echelon basis.
    pub fn order(&self) -> u128 {
        self.basis
            .iter()
            .map(|b| {
                let i = b.iter().position(|&x| x != 0).unwrap();
                (self.moduli[i] / b[i]) as u128
            })
            .product()
    }

    /// Structure of `self / sub` where `sub` is given by generators (vectors in this lattice).
    pub fn quotient_by(&self, sub_gens: &[Vec<i128>]) -> Result<AbelianQuotient> {
        let mut cols: Vec<Vec<i128>> = sub_gens.to_vec();
        cols.extend(self.modulus_columns());
        let k = self.basis.len();
        let mut c = vec![vec![0i128; cols.len()]; k];
        for (j, v) in cols.iter().enumerate() {
            let coords = solve_in_basis(&self.basis, v)?
                .ok_or_else(|| Error::NotASubgroup("generator outside the lattice".into()))?;
            for i in 0..k {
                c[i][j] = coords[i];
            }
        }
        let snf = smith_normal_form(&c, cols.len())?;
        // new basis of the lattice: B * U^-1
        let n = self.moduli.len();
        let mut invariants = Vec::new();
        let mut generators = Vec::new();
        for t in 0..k {
            let d = if t < snf.diag.len() { snf.diag[t] } else { 0 };
            if d == 1 {
                continue;
            }
            let mut g = vec![0i128; n];
            for (s, b) in self.basis.iter().enumerate() {
                if snf.u_inv[s][t] != 0 {
                    for i in 0..n {
                        g[i] = add(g[i], mul(b[i], snf.u_inv[s][t])?)?;
                    }
                }
            }
            for i in 0..n {
                g[i] = g[i].rem_euclid(self.moduli[i]);
            }
            invariants.push(d);
            generators.push(g);
        }
        Ok(AbelianQuotient { invariants, generators, moduli: self.moduli.clone() })
    }

    /// Structure of the subgroup itself (quotient by the zero subgroup).
    pub fn structure(&self) -> Result<AbelianQuotient> {
        self.quotient_by(&[])
    }
}

/// A finite abelian group `⊕ Z/d_i` with generator vectors in the ambient coordinates.
#[derive(Clone, Debug)]
pub struct AbelianQuotient {
    pub invariants: Vec<i128>,
    pub generators: Vec<Vec<i128>>,
    pub moduli: Vec<i128>,
}

impl AbelianQuotient {
    pub fn order(&self) -> u128 {
        self.invariants.iter().map(|&d| d as u128).product()
    }

    pub fn exponent(&self) -> u128 {
        self.invariants
            .iter()
            .fold(1u64, |a, &d| crate::grp::group::lcm(a, d as u64)) as u128
    }

    /// All combinations `Σ c_i g_i` reduced by the ambient moduli, sorted.
    pub fn enumerate(&self) -> Vec<Vec<i128>> {
        let n = self.moduli.len();
        let mut out = vec![vec![0i128; n]];
        for (g, &d) in self.generators.iter().zip(&self.invariants) {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for v in &out {
                let mut w = v.clone();
                for _ in 0..d {
                    next.push(w.clone());
                    for i in 0..n {
                        w[i] = (w[i] + g[i]).rem_euclid(self.moduli[i]);
                    }
                }
            }
            out = next;
        }
        out.sort();
        out
    }
}

/// Coordinates for an abelian p-group inside a permutation group:
/// a direct decomposition into cyclic factors with smallest available witnesses.
#[derive(Clone, Debug)]
pub struct AbelianCoords {
    pub generators: Vec<Elem>,
    pub orders: Vec<i128>,
    of_elem: HashMap<Elem, Vec<i128>>,
}

impl AbelianCoords {
    pub fn new(g: &FiniteGroup, a: &Subgroup) -> Result<AbelianCoords> {
        if !g.is_abelian(a) {
            return Err(Error::NotASubgroup("coordinates need an abelian group".into()));
        }
        let mut cand: Vec<Elem> = a.members().to_vec();
        cand.sort_by_key(|&x| (std::cmp::Reverse(g.elem_order(x)), x));
        let mut chosen = Vec::new();
        if !decompose(g, a, &cand, &mut chosen, 1) {
            return Err(Error::NotASubgroup("no cyclic decomposition found".into()));
        }
        let orders: Vec<i128> = chosen.iter().map(|&x| g.elem_order(x) as i128).collect();
        let mut of_elem = HashMap::new();
        let mut vecs = vec![(Elem::ONE, vec![])];
        for (&x, &o) in chosen.iter().zip(&orders) {
            let mut next = Vec::new();
            for (e, v) in &vecs {
                let mut y = *e;
                for c in 0..o {
                    let mut w: Vec<i128> = v.clone();
                    w.push(c);
                    next.push((y, w));
                    y = g.mul(y, x);
                }
            }
            vecs = next;
        }
        for (e, v) in vecs {
            of_elem.insert(e, v);
        }
        Ok(AbelianCoords { generators: chosen, orders, of_elem })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn coords(&self, x: Elem) -> &[i128] {
        &self.of_elem[&x]
    }

    pub fn element(&self, g: &FiniteGroup, v: &[i128]) -> Elem {
        let mut y = Elem::ONE;
        for (&x, &c) in self.generators.iter().zip(v) {
            y = g.mul(y, g.pow(x, c.rem_euclid(g.elem_order(x) as i128) as u64));
        }
        y
    }
}

fn decompose(g: &FiniteGroup, a: &Subgroup, cand: &[Elem], chosen: &mut Vec<Elem>, size: usize) -> bool {
    if size == a.order() {
        return true;
    }
    let span = g.closure(chosen);
    for &x in cand {
        let o = g.elem_order(x) as usize;
        if o == 1 || span.contains(x) {
            continue;
        }
        chosen.push(x);
        if g.closure(chosen).order() == size * o && decompose(g, a, cand, chosen, size * o) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(a: &Mat, cols: usize) -> Vec<i128> {
        let s = smith_normal_form(a, cols).unwrap();
        for w in s.diag.windows(2) {
            if w[0] != 0 {
                assert_eq!(w[1] % w[0], 0);
            }
        }
        s.diag
    }

    #[test]
    fn snf_small() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        assert_eq!(check_snf(&a, 3), vec![2, 6, 12]);
        let b = vec![vec![4, 0], vec![0, 6]];
        assert_eq!(check_snf(&b, 2), vec![2, 12]);
    }

    #[test]
    fn lattice_impose() {
        // Z/4 x Z/2, condition x0 + 2 x1 = 0 mod 4 (well defined since 2*2 = 4)
        let mut l = LatticeSubgroup::whole(vec![4, 2]);
        l.impose(&[1, 2], 4).unwrap();
        let elems = l.structure().unwrap().enumerate();
        let brute: Vec<Vec<i128>> = (0..4)
            .flat_map(|a| (0..2).map(move |b| vec![a, b]))
            .filter(|v| (v[0] + 2 * v[1]) % 4 == 0)
            .collect();
        assert_eq!(elems, brute);
        assert_eq!(l.order(), 2);
    }
}
