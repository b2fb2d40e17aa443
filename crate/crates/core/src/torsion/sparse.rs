//! Sparse symmetric positive definite solves: geometric nested dissection
//! ordering and an up-looking Cholesky factorization.

use crate::error::{Error, Result};

const NONE: usize = usize::MAX;

/// Upper triangle (row ≤ column) of a symmetric matrix in compressed columns.
#[derive(Debug, Clone)]
pub struct SymmetricCsc {
    n: usize,
    colptr: Vec<usize>,
    rowidx: Vec<usize>,
    values: Vec<f64>,
}

impl SymmetricCsc {
    /// Entries may be given in either triangle; duplicates are summed.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut t: Vec<(usize, usize, f64)> = triplets.iter().map(|&(i, j, v)| (j.max(i), j.min(i), v)).collect();
        t.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut colptr = vec![0usize; n + 1];
        let mut rowidx = Vec::with_capacity(t.len());
        let mut values: Vec<f64> = Vec::with_capacity(t.len());
        let mut last = (NONE, NONE);
        for (c, r, v) in t {
            if (c, r) == last {
                *values.last_mut().unwrap() += v;
            } else {
                rowidx.push(r);
                values.push(v);
                colptr[c + 1] += 1;
                last = (c, r);
            }
        }
        for k in 0..n {
            colptr[k + 1] += colptr[k];
        }
        Self { n, colptr, rowidx, values }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `y = A x`.
    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for j in 0..self.n {
            for p in self.colptr[j]..self.colptr[j + 1] {
                let i = self.rowidx[p];
                y[i] += self.values[p] * x[j];
                if i != j {
                    y[j] += self.values[p] * x[i];
                }
            }
        }
        y
    }
}

fn etree(a: &SymmetricCsc) -> Vec<usize> {
    let n = a.n;
    let mut parent = vec![NONE; n];
    let mut ancestor = vec![NONE; n];
    for k in 0..n {
        for p in a.colptr[k]..a.colptr[k + 1] {
            let mut i = a.rowidx[p];
            while i != NONE && i < k {
                let next = ancestor[i];
                ancestor[i] = k;
                if next == NONE {
                    parent[i] = k;
                }
                i = next;
            }
        }
    }
    parent
}

/// Nonzero pattern of row `k` of L (excluding the diagonal), left in
/// `stack[top..]`.
fn ereach(a: &SymmetricCsc, k: usize, parent: &[usize], mark: &mut [usize], stack: &mut [usize]) -> usize {
    let n = a.n;
    let mut top = n;
    mark[k] = k;
    for p in a.colptr[k]..a.colptr[k + 1] {
        let mut i = a.rowidx[p];
        let mut len = 0;
        while mark[i] != k {
            stack[len] = i;
            len += 1;
            mark[i] = k;
            i = parent[i];
        }
        while len > 0 {
            top -= 1;
            len -= 1;
            stack[top] = stack[len];
        }
    }
    top
}

/// Lower triangular Cholesky factor, diagonal first in each column.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    lp: Vec<usize>,
    li: Vec<usize>,
    lx: Vec<f64>,
}

impl Cholesky {
    pub fn factor(a: &SymmetricCsc) -> Result<Self> {
        let n = a.n;
        let parent = etree(a);
        let mut mark = vec![NONE; n];
        let mut stack = vec![0usize; n];
        let mut counts = vec![1usize; n];
        for k in 0..n {
            let top = ereach(a, k, &parent, &mut mark, &mut stack);
            for &i in &stack[top..n] {
                counts[i] += 1;
            }
        }
        let mut lp = vec![0usize; n + 1];
        for k in 0..n {
            lp[k + 1] = lp[k] + counts[k];
        }
        let nnz = lp[n];
        let mut li = vec![0usize; nnz];
        let mut lx = vec![0.0; nnz];
        let mut next = lp[..n].to_vec();
        let mut x = vec![0.0; n];
        mark.fill(NONE);
        let scale = a.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for k in 0..n {
            let top = ereach(a, k, &parent, &mut mark, &mut stack);
            x[k] = 0.0;
            for p in a.colptr[k]..a.colptr[k + 1] {
                x[a.rowidx[p]] = a.values[p];
            }
            let mut d = x[k];
            x[k] = 0.0;
            for &i in &stack[top..n] {
                let lki = x[i] / lx[lp[i]];
                x[i] = 0.0;
                for p in lp[i] + 1..next[i] {
                    x[li[p]] -= lx[p] * lki;
                }
                d -= lki * lki;
                let p = next[i];
                next[i] += 1;
                li[p] = k;
                lx[p] = lki;
            }
            if !(d > 1e-14 * scale) {
                return Err(Error::SingularSystem { pivot: k });
            }
            let p = next[k];
            next[k] += 1;
            li[p] = k;
            lx[p] = d.sqrt();
        }
        Ok(Self { n, lp, li, lx })
    }

    pub fn nnz(&self) -> usize {
        self.lx.len()
    }

    pub fn solve(&self, b: &mut [f64]) {
        let (lp, li, lx) = (&self.lp, &self.li, &self.lx);
        for j in 0..self.n {
            b[j] /= lx[lp[j]];
            let bj = b[j];
            for p in lp[j] + 1..lp[j + 1] {
                b[li[p]] -= lx[p] * bj;
            }
        }
        for j in (0..self.n).rev() {
            let mut s = b[j];
            for p in lp[j] + 1..lp[j + 1] {
                s -= lx[p] * b[li[p]];
            }
            b[j] = s / lx[lp[j]];
        }
    }
}

/// Elimination order of graph nodes by recursive coordinate bisection;
/// separators are numbered after both halves.
pub fn nested_dissection(coords: &[[f64; 2]], adjacency: &[Vec<usize>], leaf: usize) -> Vec<usize> {
    let mut side = vec![0u8; coords.len()];
    let mut order = Vec::with_capacity(coords.len());
    dissect((0..coords.len()).collect(), coords, adjacency, leaf.max(1), &mut side, &mut order);
    order
}

fn dissect(mut nodes: Vec<usize>, coords: &[[f64; 2]], adj: &[Vec<usize>], leaf: usize, side: &mut [u8], order: &mut Vec<usize>) {
    if nodes.len() <= leaf {
        order.extend(nodes);
        return;
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for &v in &nodes {
        for a in 0..2 {
            lo[a] = lo[a].min(coords[v][a]);
            hi[a] = hi[a].max(coords[v][a]);
        }
    }
    let axis = if hi[0] - lo[0] >= hi[1] - lo[1] { 0 } else { 1 };
    nodes.sort_by(|&a, &b| coords[a][axis].total_cmp(&coords[b][axis]).then(a.cmp(&b)));
    let right = nodes.split_off(nodes.len() / 2);
    let mut left = nodes;
    for &v in &left {
        side[v] = 1;
    }
    for &v in &right {
        side[v] = 2;
    }
    let (sep, rest): (Vec<usize>, Vec<usize>) = left.drain(..).partition(|&v| adj[v].iter().any(|&u| side[u] == 2));
    for &v in rest.iter().chain(&right).chain(&sep) {
        side[v] = 0;
    }
    dissect(rest, coords, adj, leaf, side, order);
    dissect(right, coords, adj, leaf, side, order);
    order.extend(sep);
}
