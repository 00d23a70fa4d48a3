//! Dense linear algebra over `F_p`: row reduction, kernels, and span
//! comparison. Used by the truncated oracles; independent of the Gröbner code.

use crate::arith::FpConfig;

/// A dense row-major matrix over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, cfg: &FpConfig, i: usize, j: usize, v: u32) {
        let cur = self.get(i, j);
        self.set(i, j, cfg.add(cur, v));
    }

    /// Reduces in place to reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self, cfg: &FpConfig) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = cfg.inv(self.get(r, c)).unwrap();
            for j in c..cols {
                let v = self.get(r, j);
                self.set(r, j, cfg.mul(v, inv));
            }
            let pivot_row: Vec<u32> = self.data[r * cols..(r + 1) * cols].to_vec();
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == 0 {
                    continue;
                }
                let nf = cfg.neg(f);
                let row = &mut self.data[i * cols..(i + 1) * cols];
                for j in c..cols {
                    if pivot_row[j] != 0 {
                        row[j] = cfg.add(row[j], cfg.mul(nf, pivot_row[j]));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// A basis of `{v : self·v = 0}`, one vector per free column.
    pub fn kernel(&self, cfg: &FpConfig) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref(cfg);
        let mut is_pivot = vec![None; self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(row);
        }
        let mut out = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = cfg.neg(m.get(row, free));
            }
            out.push(v);
        }
        out
    }

    pub fn rank(&self, cfg: &FpConfig) -> usize {
        self.clone().rref(cfg).len()
    }
}

/// Dimension of the span of `vectors` (all of length `dim`).
pub fn span_rank(cfg: &FpConfig, dim: usize, vectors: &[Vec<u32>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    DenseMatrix::from_rows(dim, vectors).rank(cfg)
}

/// True when the two families span the same subspace of `F_p^dim`.
pub fn same_span(cfg: &FpConfig, dim: usize, a: &[Vec<u32>], b: &[Vec<u32>]) -> bool {
    let ra = span_rank(cfg, dim, a);
    let rb = span_rank(cfg, dim, b);
    if ra != rb {
        return false;
    }
    let both: Vec<Vec<u32>> = a.iter().chain(b).cloned().collect();
    span_rank(cfg, dim, &both) == ra
}
