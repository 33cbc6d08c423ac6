//! Bit-packed Gaussian elimination over GF(2).

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    ncols: usize,
    rows: Vec<Vec<u64>>,
}

fn words(ncols: usize) -> usize {
    ncols.div_ceil(64)
}

#[inline]
fn get(row: &[u64], c: usize) -> bool {
    row[c / 64] >> (c % 64) & 1 == 1
}

#[inline]
fn flip(row: &mut [u64], c: usize) {
    row[c / 64] ^= 1 << (c % 64);
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn first_one(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

impl Gf2Matrix {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Appends a row with ones exactly at the columns listed an odd number
    /// of times.
    pub fn push_ones(&mut self, cols: impl IntoIterator<Item = usize>) {
        let mut row = vec![0u64; words(self.ncols)];
        for c in cols {
            assert!(c < self.ncols, "column {c} out of range");
            flip(&mut row, c);
        }
        self.rows.push(row);
    }

    pub fn push_row(&mut self, row: Vec<u64>) {
        assert_eq!(row.len(), words(self.ncols));
        self.rows.push(row);
    }

    pub fn row_bits(&self, i: usize) -> Vec<bool> {
        (0..self.ncols).map(|c| get(&self.rows[i], c)).collect()
    }

    /// Reduces to reduced row echelon form in place, dropping zero rows.
    /// Returns the pivot column of each remaining row, increasing.
    pub fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            let Some(p) = (r..self.rows.len()).find(|&i| get(&self.rows[i], c)) else {
                continue;
            };
            self.rows.swap(r, p);
            let pivot_row = self.rows[r].clone();
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i != r && get(row, c) {
                    xor_into(row, &pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows.len() {
                break;
            }
        }
        self.rows.truncate(r);
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce().len()
    }

    /// A basis of `{v : Mv = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.reduce();
        let mut is_pivot = vec![false; self.ncols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in (0..self.ncols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u64; words(self.ncols)];
            flip(&mut v, f);
            for (row, &p) in m.rows.iter().zip(&pivots) {
                if get(row, f) {
                    flip(&mut v, p);
                }
            }
            basis.push(v);
        }
        basis
    }

    pub fn kernel_dim(&self) -> usize {
        self.ncols - self.rank()
    }
}

/// Bits of `v` restricted to `cols`, packed into a new vector.
pub fn project(v: &[u64], cols: &[usize]) -> Vec<u64> {
    let mut out = vec![0u64; words(cols.len())];
    for (i, &c) in cols.iter().enumerate() {
        if get(v, c) {
            flip(&mut out, i);
        }
    }
    out
}

pub fn bits(v: &[u64], ncols: usize) -> Vec<bool> {
    (0..ncols).map(|c| get(v, c)).collect()
}

/// Dimension of the span of `vectors` (all of length `ncols`).
pub fn span_dim(vectors: Vec<Vec<u64>>, ncols: usize) -> usize {
    let mut m = Gf2Matrix::new(ncols);
    for v in vectors {
        m.push_row(v);
    }
    m.rank()
}

/// The least nonzero vector of the span of `vectors`, comparing bit
/// sequences from column 0 with `0 < 1`. That is the echelon row whose
/// leading one sits furthest right.
pub fn least_nonzero(vectors: Vec<Vec<u64>>, ncols: usize) -> Option<Vec<u64>> {
    let mut m = Gf2Matrix::new(ncols);
    for v in vectors {
        m.push_row(v);
    }
    m.reduce();
    m.rows.into_iter().max_by_key(|r| first_one(r))
}
