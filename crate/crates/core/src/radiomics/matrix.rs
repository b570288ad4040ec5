use alloc::vec;
use alloc::vec::Vec;

use super::Direction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Glcm,
    Glszm,
    Glrlm,
    Ngtdm,
    Gldm,
}

/// Dense row-major texture matrix. Row `i` corresponds to gray level `i + 1`.
///
/// Column meaning depends on the kind: level `j + 1` (GLCM), zone size or run
/// length `j + 1` (GLSZM, GLRLM), dependence count `j` (GLDM), and
/// `[n_i, s_i]` (NGTDM).
#[derive(Debug, Clone, PartialEq)]
pub struct TextureMatrix {
    pub kind: MatrixKind,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<f64>,
    pub delta: Option<usize>,
    pub direction: Option<Direction>,
    pub alpha: Option<u32>,
}

impl TextureMatrix {
    pub(crate) fn zeros(kind: MatrixKind, rows: usize, cols: usize) -> Self {
        Self {
            kind,
            rows,
            cols,
            entries: vec![0.0; rows * cols],
            delta: None,
            direction: None,
            alpha: None,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn add(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.cols + j] += v;
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0.0)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries.chunks(self.cols).map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for row in self.entries.chunks(self.cols) {
            for (o, v) in out.iter_mut().zip(row) {
                *o += v;
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}
