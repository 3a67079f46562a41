//! First homology of the surface group from its gluing presentation.
//!
//! The presentation has one relation per gluing; abelianizing gives an
//! integer matrix whose cokernel is `H_1 = Z^{2g}`. A Smith-style column
//! reduction yields a projection `Z^{gens} -> Z^{2g}` whose kernel is exactly
//! the span of the relation vectors, so a curve class is separating iff its
//! exponent vector projects to zero.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct HomologyMap {
    num_gens: usize,
    rank: usize,
    /// Unimodular column-transform V with S = R * V in column echelon form;
    /// class(x) = (x * V) with the first `pivots` coordinates dropped.
    v: Vec<Vec<i64>>,
    pivots: usize,
}

impl HomologyMap {
    /// Build from relation exponent vectors (each of length `num_gens`).
    pub fn new(relations: &[Vec<i64>], num_gens: usize) -> Result<Self> {
        let m = relations.len();
        let mut s: Vec<Vec<i64>> = relations.to_vec();
        for row in &s {
            if row.len() != num_gens {
                return Err(Error::Invalid("relation vector length mismatch".into()));
            }
        }
        // V starts as identity; we apply the same column operations to S and V.
        let mut v = vec![vec![0i64; num_gens]; num_gens];
        for (i, row) in v.iter_mut().enumerate() {
            row[i] = 1;
        }
        let col_swap = |s: &mut Vec<Vec<i64>>, v: &mut Vec<Vec<i64>>, i: usize, j: usize| {
            for row in s.iter_mut() {
                row.swap(i, j);
            }
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        };
        let col_addmul = |s: &mut Vec<Vec<i64>>, v: &mut Vec<Vec<i64>>, dst: usize, src: usize, t: i64| {
            for row in s.iter_mut() {
                row[dst] += t * row[src];
            }
            for row in v.iter_mut() {
                row[dst] += t * row[src];
            }
        };

        let mut pivot_row = 0usize;
        let mut pivot_col = 0usize;
        while pivot_row < m && pivot_col < num_gens {
            // Find a nonzero entry in this row at column >= pivot_col.
            let mut best: Option<usize> = None;
            for j in pivot_col..num_gens {
                let val = s[pivot_row][j];
                if val != 0 {
                    if best.map_or(true, |b| s[pivot_row][b].abs() > val.abs()) {
                        best = Some(j);
                    }
                }
            }
            let Some(j0) = best else {
                pivot_row += 1;
                continue;
            };
            col_swap(&mut s, &mut v, pivot_col, j0);
            // Clear the rest of the row with Euclidean column steps.
            loop {
                let mut done = true;
                for j in (pivot_col + 1)..num_gens {
                    if s[pivot_row][j] != 0 {
                        let q = s[pivot_row][j] / s[pivot_row][pivot_col];
                        col_addmul(&mut s, &mut v, j, pivot_col, -q);
                        if s[pivot_row][j] != 0 {
                            // Remainder smaller than pivot: swap roles.
                            col_swap(&mut s, &mut v, pivot_col, j);
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            // Surface-group relations must not introduce torsion.
            let d = s[pivot_row][pivot_col].abs();
            if d != 1 {
                // A later row may still fix this; but for our presentations
                // each pivot is a single +-1 cuff pairing. Treat as error.
                return Err(Error::Invalid(format!(
                    "homology has unexpected torsion (invariant factor {d})"
                )));
            }
            pivot_row += 1;
            pivot_col += 1;
        }

        Ok(HomologyMap { num_gens, rank: num_gens - pivot_col, v, pivots: pivot_col })
    }

    /// Rank of the quotient (should equal `2g`).
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Class of an exponent vector in `Z^{rank}`.
    pub fn class(&self, abelianized: &[i64]) -> Vec<i64> {
        debug_assert_eq!(abelianized.len(), self.num_gens);
        let mut out = Vec::with_capacity(self.rank);
        for j in self.pivots..self.num_gens {
            let mut acc = 0i64;
            for (i, &x) in abelianized.iter().enumerate() {
                acc += x * self.v[i][j];
            }
            out.push(acc);
        }
        out
    }

    pub fn is_null_homologous(&self, abelianized: &[i64]) -> bool {
        self.class(abelianized).iter().all(|&c| c == 0)
    }
}
