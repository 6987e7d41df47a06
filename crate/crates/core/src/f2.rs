//! Linear algebra over F₂ with vectors packed into `u64` bitmasks.

/// Row-major F₂ matrix, row `i` packed into `rows[i]`, column `j` = bit `j`.
#[derive(Debug, Clone)]
pub struct F2Matrix {
    pub rows: Vec<u64>,
    pub ncols: usize,
}

pub fn dot(u: u64, v: u64) -> bool {
    (u & v).count_ones() % 2 == 1
}

impl F2Matrix {
    pub fn new(rows: Vec<u64>, ncols: usize) -> Self {
        F2Matrix { rows, ncols }
    }

    /// `M v` as a bitmask (rows index the output coordinates).
    pub fn mul_vec(&self, v: u64) -> u64 {
        let mut out = 0u64;
        for (i, &r) in self.rows.iter().enumerate() {
            if dot(r, v) {
                out |= 1 << i;
            }
        }
        out
    }

    /// Deterministic nullspace basis, free variables in ascending column order.
    pub fn nullspace(&self) -> Vec<u64> {
        let mut rows = self.rows.clone();
        let mut pivot_col_of_row = Vec::new();
        let mut r = 0usize;
        for c in 0..self.ncols {
            if let Some(p) = (r..rows.len()).find(|&i| rows[i] >> c & 1 == 1) {
                rows.swap(r, p);
                for i in 0..rows.len() {
                    if i != r && rows[i] >> c & 1 == 1 {
                        rows[i] ^= rows[r];
                    }
                }
                pivot_col_of_row.push(c);
                r += 1;
            }
        }
        let pivots: Vec<usize> = pivot_col_of_row;
        let mut basis = Vec::new();
        for c in 0..self.ncols {
            if pivots.contains(&c) {
                continue;
            }
            let mut v = 1u64 << c;
            for (row_idx, &pc) in pivots.iter().enumerate() {
                if rows[row_idx] >> c & 1 == 1 {
                    v |= 1 << pc;
                }
            }
            basis.push(v);
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.ncols - self.nullspace().len()
    }
}

/// Solve `sum_{i in T} basis[i] = target` over F₂; returns the subset mask.
pub fn solve_in_span(basis: &[u64], ncols: usize, target: u64) -> Option<u64> {
    // Gaussian elimination on the basis, tracking combinations.
    let mut vecs: Vec<(u64, u64)> = basis
        .iter()
        .enumerate()
        .map(|(i, &b)| (b, 1u64 << i))
        .collect();
    let mut used = vec![false; vecs.len()];
    let mut t = target;
    let mut combo = 0u64;
    for c in 0..ncols {
        let p = (0..vecs.len()).find(|&i| !used[i] && vecs[i].0 >> c & 1 == 1);
        if let Some(p) = p {
            used[p] = true;
            let (pv, pc) = vecs[p];
            for i in 0..vecs.len() {
                if i != p && vecs[i].0 >> c & 1 == 1 {
                    vecs[i].0 ^= pv;
                    vecs[i].1 ^= pc;
                }
            }
            if t >> c & 1 == 1 {
                t ^= pv;
                combo ^= pc;
            }
        } else if t >> c & 1 == 1 {
            return None;
        }
    }
    (t == 0).then_some(combo)
}

/// Does `v` lie in the span of `basis`?
pub fn in_span(basis: &[u64], ncols: usize, v: u64) -> bool {
    solve_in_span(basis, ncols, v).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_zero_matrix() {
        let m = F2Matrix::new(vec![0, 0], 2);
        let ns = m.nullspace();
        assert_eq!(ns, vec![0b01, 0b10]);
    }

    #[test]
    fn nullspace_of_invertible() {
        // [[0,1],[1,0]] over F2 (A2 gram mod 2)
        let m = F2Matrix::new(vec![0b10, 0b01], 2);
        assert!(m.nullspace().is_empty());
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn span_solving() {
        let basis = vec![0b011u64, 0b110];
        assert_eq!(solve_in_span(&basis, 3, 0b101), Some(0b11));
        assert!(solve_in_span(&basis, 3, 0b001).is_none());
        assert!(in_span(&basis, 3, 0b110));
    }
}
