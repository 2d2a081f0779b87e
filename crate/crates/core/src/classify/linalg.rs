//! Sparse exact linear algebra over the rationals.
//!
//! Vectors are sorted `(column, value)` lists with no explicit zeros.
//! [`Echelon`] accepts rows one at a time and keeps them in semi-reduced
//! echelon form; [`Echelon::into_rref`] finishes the back substitution.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::ratpoly::Rational;

pub type SparseVec = Vec<(usize, Rational)>;

/// Builds a sparse vector from unsorted entries, summing duplicates.
pub fn sparse_from_entries(entries: impl IntoIterator<Item = (usize, Rational)>) -> SparseVec {
    let mut m: std::collections::BTreeMap<usize, Rational> = Default::default();
    for (c, v) in entries {
        *m.entry(c).or_insert_with(Rational::zero) += v;
    }
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

pub fn to_dense(v: &SparseVec, ncols: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); ncols];
    for (c, x) in v {
        out[*c] = x.clone();
    }
    out
}

/// `x − c·y`.
pub fn sub_scaled(x: &SparseVec, c: &Rational, y: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut a, mut b) = (x.iter().peekable(), y.iter().peekable());
    loop {
        match (a.peek(), b.peek()) {
            (Some((ca, va)), Some((cb, vb))) => {
                if ca < cb {
                    out.push((*ca, va.clone()));
                    a.next();
                } else if cb < ca {
                    out.push((*cb, -(c * vb)));
                    b.next();
                } else {
                    let v = va - c * vb;
                    if !v.is_zero() {
                        out.push((*ca, v));
                    }
                    a.next();
                    b.next();
                }
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                a.next();
            }
            (None, Some((cb, vb))) => {
                out.push((*cb, -(c * vb)));
                b.next();
            }
            (None, None) => break,
        }
    }
    out
}

pub fn scale(v: &SparseVec, c: &Rational) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * c)).collect()
}

pub fn add_scaled(x: &SparseVec, c: &Rational, y: &SparseVec) -> SparseVec {
    sub_scaled(x, &-c, y)
}

fn normalize(mut v: SparseVec) -> SparseVec {
    let lead = v[0].1.clone();
    if !lead.is_one() {
        let inv = lead.recip();
        for (_, x) in v.iter_mut() {
            *x *= &inv;
        }
    }
    v
}

/// Incrementally built echelon basis of a row space.
#[derive(Debug, Clone)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            rows: Vec::new(),
            pivot_row: HashMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` until its leading column is not a pivot. Returns the empty
    /// vector iff `v` lies in the row space.
    fn reduce_leading(&self, mut v: SparseVec) -> SparseVec {
        while let Some((lead, c)) = v.first() {
            match self.pivot_row.get(lead) {
                Some(&r) => {
                    let c = c.clone();
                    v = sub_scaled(&v, &c, &self.rows[r]);
                }
                None => break,
            }
        }
        v
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        debug_assert!(v.iter().all(|(c, _)| *c < self.ncols));
        let v = self.reduce_leading(v);
        if v.is_empty() {
            return false;
        }
        let v = normalize(v);
        self.pivot_row.insert(v[0].0, self.rows.len());
        self.rows.push(v);
        true
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce_leading(v).is_empty()
    }

    pub fn into_rref(self) -> Rref {
        let mut rows = self.rows;
        rows.sort_by_key(|r| std::cmp::Reverse(r[0].0));
        let mut done: HashMap<usize, usize> = HashMap::new();
        let mut out: Vec<SparseVec> = Vec::with_capacity(rows.len());
        for row in rows {
            let targets: Vec<usize> = row[1..]
                .iter()
                .map(|(c, _)| *c)
                .filter(|c| done.contains_key(c))
                .collect();
            let mut row = row;
            for c in targets {
                let coeff = match row.binary_search_by_key(&c, |(k, _)| *k) {
                    Ok(p) => row[p].1.clone(),
                    Err(_) => continue,
                };
                row = sub_scaled(&row, &coeff, &out[done[&c]]);
            }
            done.insert(row[0].0, out.len());
            out.push(row);
        }
        out.reverse();
        Rref::from_sorted_rows(self.ncols, out)
    }
}

/// Reduced row echelon form: rows sorted by pivot column, each pivot equal to
/// one and the only nonzero in its column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    ncols: usize,
    rows: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
}

impl Rref {
    fn from_sorted_rows(ncols: usize, rows: Vec<SparseVec>) -> Self {
        let pivot_row = rows.iter().enumerate().map(|(i, r)| (r[0].0, i)).collect();
        Self {
            ncols,
            rows,
            pivot_row,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r[0].0)
    }

    /// Eliminates every pivot column from `v`. The result is the canonical
    /// representative of `v` modulo the row space.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let targets: Vec<(usize, Rational)> = v
            .iter()
            .filter(|(c, _)| self.pivot_row.contains_key(c))
            .cloned()
            .collect();
        let mut out = v.clone();
        for (c, _) in targets {
            // pivot rows carry no other pivot columns, so each target is hit once
            if let Ok(p) = out.binary_search_by_key(&c, |(k, _)| *k) {
                let coeff = out[p].1.clone();
                out = sub_scaled(&out, &coeff, &self.rows[self.pivot_row[&c]]);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Coefficients `c` with `v = Σ c_r rows[r]`, if `v` is in the row space.
    pub fn express(&self, v: &SparseVec) -> Option<Vec<Rational>> {
        if !self.contains(v) {
            return None;
        }
        let mut coeffs = vec![Rational::zero(); self.rows.len()];
        for (c, x) in v {
            if let Some(&r) = self.pivot_row.get(c) {
                coeffs[r] = x.clone();
            }
        }
        Some(coeffs)
    }

    /// Basis of `{x : A x = 0}`, one vector per free column, in ascending
    /// order of that column.
    pub fn nullspace(&self) -> Vec<SparseVec> {
        let mut by_free: HashMap<usize, Vec<(usize, Rational)>> = HashMap::new();
        for r in &self.rows {
            let p = r[0].0;
            for (c, x) in &r[1..] {
                by_free.entry(*c).or_default().push((p, -x));
            }
        }
        (0..self.ncols)
            .filter(|c| !self.pivot_row.contains_key(c))
            .map(|f| {
                let mut v = by_free.remove(&f).unwrap_or_default();
                v.push((f, Rational::one()));
                v.sort_by_key(|(c, _)| *c);
                v
            })
            .collect()
    }
}

/// Row-reduces a list of vectors.
pub fn rref(ncols: usize, rows: impl IntoIterator<Item = SparseVec>) -> Rref {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r);
    }
    e.into_rref()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::rat;
    use proptest::prelude::*;

    fn sv(d: &[i64]) -> SparseVec {
        sparse_from_entries(d.iter().enumerate().map(|(i, x)| (i, rat(*x, 1))))
    }

    fn dense_rank(mut m: Vec<Vec<Rational>>) -> usize {
        let ncols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..ncols {
            let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            for r in 0..m.len() {
                if r != rank && !m[r][c].is_zero() {
                    let f = &m[r][c] / &m[rank][c];
                    for k in 0..ncols {
                        let d = &f * &m[rank][k];
                        m[r][k] -= d;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn small_rref() {
        let r = rref(3, [sv(&[2, 4, 6]), sv(&[1, 1, 1]), sv(&[3, 5, 7])]);
        assert_eq!(r.rank(), 2);
        assert_eq!(r.rows()[0], sv(&[1, 0, -1]));
        assert_eq!(r.rows()[1], sv(&[0, 1, 2]));
        let ns = r.nullspace();
        assert_eq!(ns, vec![sv(&[1, -2, 1])]);
    }

    #[test]
    fn reduce_and_express() {
        let r = rref(3, [sv(&[1, 0, 1]), sv(&[0, 1, 1])]);
        assert!(r.contains(&sv(&[2, 3, 5])));
        assert_eq!(r.express(&sv(&[2, 3, 5])), Some(vec![rat(2, 1), rat(3, 1)]));
        assert_eq!(r.reduce(&sv(&[0, 0, 1])), sv(&[0, 0, 1]));
        assert_eq!(r.reduce(&sv(&[1, 0, 0])), sv(&[0, 0, -1]));
    }

    proptest! {
        #[test]
        fn rank_matches_dense_oracle(
            m in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 6), 1..8)
        ) {
            let dense: Vec<Vec<Rational>> =
                m.iter().map(|r| r.iter().map(|x| rat(*x, 1)).collect()).collect();
            let r = rref(6, m.iter().map(|r| sv(r)));
            prop_assert_eq!(r.rank(), dense_rank(dense));
            prop_assert_eq!(r.rank() + r.nullspace().len(), 6);
            for v in r.nullspace() {
                let d = to_dense(&v, 6);
                for row in &m {
                    let dot: Rational = row.iter().zip(&d).map(|(a, b)| rat(*a, 1) * b).sum();
                    prop_assert!(dot.is_zero());
                }
            }
            for row in &m {
                prop_assert!(r.contains(&sv(row)));
            }
            // pivots are unit and alone in their columns
            for (i, row) in r.rows().iter().enumerate() {
                prop_assert!(row[0].1.is_one());
                for (j, other) in r.rows().iter().enumerate() {
                    if i != j {
                        prop_assert!(other.binary_search_by_key(&row[0].0, |(c, _)| *c).is_err());
                    }
                }
            }
        }
    }
}
