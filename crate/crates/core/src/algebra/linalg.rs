//! Dense exact linear algebra over `F_p`.
//!
//! Entries are `u64` residues. Row reduction keeps the pivot row fully
//! reduced and lets target rows accumulate unreduced sums; entries grow by
//! at most `p^2` per pivot step, so everything stays far below `u64`
//! overflow at desk scale (asserted). Pivoting is deterministic: first
//! nonzero entry wins, so results are reproducible.

/// Row-major matrix over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMat {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

fn modinv(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut n = p - 2;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        n >>= 1;
    }
    acc
}

impl FpMat {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMat {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * c + j] = v % p;
            }
        }
        m
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j] % self.p
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> Vec<u64> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v % self.p == 0)
    }

    pub fn mul(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        assert_eq!(self.p, other.p);
        // accumulate raw and reduce once per output entry; fine while
        // cols * p^2 stays below u64 range
        debug_assert!((self.cols as u128) * (self.p as u128) * (self.p as u128) < (1 << 62));
        let mut out = FpMat::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] % self.p;
                if a == 0 {
                    continue;
                }
                let src = k * other.cols;
                let dst = i * other.cols;
                for j in 0..other.cols {
                    out.data[dst + j] += a * (other.data[src + j] % self.p);
                }
            }
            for j in 0..other.cols {
                out.data[i * other.cols + j] %= self.p;
            }
        }
        out
    }

    pub fn pow(&self, mut n: usize) -> FpMat {
        assert_eq!(self.rows, self.cols);
        let mut acc = FpMat::identity(self.p, self.rows);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// `self - lambda * I`.
    pub fn sub_scalar_identity(&self, lambda: u64) -> FpMat {
        assert_eq!(self.rows, self.cols);
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = out.get(i, i);
            out.set(i, i, (v + self.p - lambda % self.p) % self.p);
        }
        out
    }

    pub fn add(&self, other: &FpMat) -> FpMat {
        assert!(self.rows == other.rows && self.cols == other.cols && self.p == other.p);
        let mut out = FpMat::zeros(self.p, self.rows, self.cols);
        for i in 0..self.data.len() {
            out.data[i] = (self.data[i] % self.p + other.data[i] % self.p) % self.p;
        }
        out
    }

    pub fn scale(&self, c: u64) -> FpMat {
        let c = c % self.p;
        let mut out = FpMat::zeros(self.p, self.rows, self.cols);
        for i in 0..self.data.len() {
            out.data[i] = self.data[i] % self.p * c % self.p;
        }
        out
    }

    /// In-place reduced row echelon form. Returns the pivot columns in
    /// order. Deterministic (first nonzero pivot).
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        debug_assert!((self.rows as u128 + 2) * (p as u128) * (p as u128) < (1 << 62));
        let mut pivots = Vec::new();
        let mut piv_row = 0usize;
        for col in 0..self.cols {
            if piv_row == self.rows {
                break;
            }
            let mut sel = None;
            for r in piv_row..self.rows {
                let v = self.data[r * self.cols + col] % p;
                self.data[r * self.cols + col] = v;
                if v != 0 {
                    sel = Some(r);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            if sel != piv_row {
                for j in 0..self.cols {
                    self.data.swap(sel * self.cols + j, piv_row * self.cols + j);
                }
            }
            // normalize the pivot row fully
            let inv = modinv(self.data[piv_row * self.cols + col] % p, p);
            for j in col..self.cols {
                let v = self.data[piv_row * self.cols + j] % p;
                self.data[piv_row * self.cols + j] = v * inv % p;
            }
            // eliminate everywhere else; target entries accumulate unreduced
            for r in 0..self.rows {
                if r == piv_row {
                    continue;
                }
                let lam = self.data[r * self.cols + col] % p;
                if lam == 0 {
                    self.data[r * self.cols + col] = 0;
                    continue;
                }
                let mul = p - lam;
                let (dst, src) = (r * self.cols, piv_row * self.cols);
                for j in col..self.cols {
                    self.data[dst + j] += mul * self.data[src + j];
                }
                self.data[dst + col] = 0;
            }
            pivots.push(col);
            piv_row += 1;
        }
        for v in &mut self.data {
            *v %= p;
        }
        pivots
    }

    /// Basis of the right nullspace `{x : Mx = 0}`, one vector per free
    /// column, deterministic order.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for fc in 0..self.cols {
            if pivot_set.contains(&fc) {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[fc] = 1;
            for (prow, &pcol) in pivots.iter().enumerate() {
                let c = m.get(prow, fc);
                v[pcol] = (self.p - c) % self.p;
            }
            basis.push(v);
        }
        basis
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Solve `B * X = Y` columnwise where the columns of `B` are linearly
    /// independent; `None` if some column of `Y` is outside the span.
    pub fn solve_batch(basis_cols: &[Vec<u64>], targets: &[Vec<u64>], p: u64) -> Option<FpMat> {
        let n = basis_cols.first().map_or(0, |v| v.len());
        let w = basis_cols.len();
        let t = targets.len();
        let mut aug = FpMat::zeros(p, n, w + t);
        for (j, col) in basis_cols.iter().enumerate() {
            for i in 0..n {
                aug.set(i, j, col[i]);
            }
        }
        for (j, col) in targets.iter().enumerate() {
            for i in 0..n {
                aug.set(i, w + j, col[i]);
            }
        }
        let pivots = aug.rref();
        // require pivots exactly in the basis columns
        if pivots.len() < w || pivots[..w] != (0..w).collect::<Vec<_>>()[..] {
            return None;
        }
        if pivots.len() > w {
            return None; // some target column escapes the span
        }
        let mut x = FpMat::zeros(p, w, t);
        for i in 0..w {
            for j in 0..t {
                x.set(i, j, aug.get(i, w + j));
            }
        }
        Some(x)
    }

    /// Flatten to a vector (row-major), reduced.
    pub fn vectorize(&self) -> Vec<u64> {
        self.data.iter().map(|&v| v % self.p).collect()
    }
}

/// Incremental span of vectors in `F_p^n`, tracked in reduced echelon form.
#[derive(Debug, Clone)]
pub struct SpanBuilder {
    p: u64,
    dim: usize,
    /// rows in echelon form, paired with their pivot column
    rows: Vec<(usize, Vec<u64>)>,
}

impl SpanBuilder {
    pub fn new(p: u64, dim: usize) -> Self {
        SpanBuilder {
            p,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the current span; returns the residual if nonzero.
    fn reduce(&self, mut v: Vec<u64>) -> Option<(usize, Vec<u64>)> {
        let p = self.p;
        for (pc, row) in &self.rows {
            let c = v[*pc] % p;
            if c != 0 {
                let mul = p - c;
                for j in 0..self.dim {
                    v[j] = (v[j] + mul * row[j]) % p;
                }
            }
        }
        let pivot = v.iter().position(|&x| x % p != 0)?;
        Some((pivot, v))
    }

    /// Add a vector; returns true if it enlarged the span.
    pub fn add(&mut self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.dim);
        let Some((pivot, mut row)) = self.reduce(v.to_vec()) else {
            return false;
        };
        let inv = modinv(row[pivot] % self.p, self.p);
        for x in &mut row {
            *x = *x % self.p * inv % self.p;
        }
        // back-substitute to keep earlier rows reduced against the new one
        for (_, existing) in &mut self.rows {
            let c = existing[pivot] % self.p;
            if c != 0 {
                let mul = self.p - c;
                for j in 0..self.dim {
                    existing[j] = (existing[j] + mul * row[j]) % self.p;
                }
            }
        }
        self.rows.push((pivot, row));
        self.rows.sort_by_key(|(pc, _)| *pc);
        true
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v.to_vec()).is_none()
    }

    /// The span's echelon basis rows.
    pub fn basis(&self) -> Vec<Vec<u64>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

/// Intersection of two column spans in `F_p^n`, returned as an echelon basis.
pub fn intersect_column_spans(a: &[Vec<u64>], b: &[Vec<u64>], p: u64, n: usize) -> Vec<Vec<u64>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // solve [A | -B] (u; v) = 0; the intersection is A*u
    let mut m = FpMat::zeros(p, n, a.len() + b.len());
    for (j, col) in a.iter().enumerate() {
        for i in 0..n {
            m.set(i, j, col[i]);
        }
    }
    for (j, col) in b.iter().enumerate() {
        for i in 0..n {
            m.set(i, a.len() + j, (p - col[i] % p) % p);
        }
    }
    let mut span = SpanBuilder::new(p, n);
    for ker in m.nullspace() {
        let mut vec = vec![0u64; n];
        for (j, col) in a.iter().enumerate() {
            let c = ker[j] % p;
            if c != 0 {
                for i in 0..n {
                    vec[i] = (vec[i] + c * col[i]) % p;
                }
            }
        }
        if vec.iter().any(|&x| x != 0) {
            span.add(&vec);
        }
    }
    span.basis()
}
