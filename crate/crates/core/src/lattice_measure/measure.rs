use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Weights with absolute value below this are treated as zero when trimming
/// the support window.
pub const ZERO_THRESHOLD: f64 = 1e-300;

/// A finitely supported real-weighted measure on `Z` or `Z²`.
///
/// Weights live in a dense rectangular window starting at `offset`. For
/// dimension 1 the second axis has extent 1 and offset 0. `truncated_mass`
/// records the total variation discarded by whatever truncation produced the
/// measure; every distance computed from the measure reports it as an error
/// bar.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedLatticeMeasure {
    dim: usize,
    offset: [i64; 2],
    shape: [usize; 2],
    weights: Vec<f64>,
    truncated_mass: f64,
}

/// A distance value together with the truncation error bar of its inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distance {
    pub value: f64,
    pub error: f64,
}

impl SignedLatticeMeasure {
    /// One-dimensional measure with `weights[t]` at lattice point `offset + t`.
    pub fn new_1d(offset: i64, weights: Vec<f64>, truncated_mass: f64) -> Result<Self> {
        let n = weights.len();
        Self::build(1, [offset, 0], [n, 1], weights, truncated_mass)
    }

    /// Two-dimensional measure; `weights` is row-major with `shape[0]` rows
    /// (first coordinate) and `shape[1]` columns (second coordinate).
    pub fn new_2d(
        offset: [i64; 2],
        shape: [usize; 2],
        weights: Vec<f64>,
        truncated_mass: f64,
    ) -> Result<Self> {
        Self::build(2, offset, shape, weights, truncated_mass)
    }

    fn build(
        dim: usize,
        offset: [i64; 2],
        shape: [usize; 2],
        weights: Vec<f64>,
        truncated_mass: f64,
    ) -> Result<Self> {
        if shape[0] * shape[1] != weights.len() {
            return Err(Error::InvalidParameter(format!(
                "window {}x{} does not match {} weights",
                shape[0],
                shape[1],
                weights.len()
            )));
        }
        if !(truncated_mass >= 0.0) || !truncated_mass.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "truncated mass must be finite and non-negative, got {truncated_mass}"
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter("non-finite weight".into()));
        }
        let mut m = SignedLatticeMeasure {
            dim,
            offset,
            shape,
            weights,
            truncated_mass,
        };
        m.trim();
        Ok(m)
    }

    /// The zero measure in the given dimension.
    pub fn zero(dim: usize) -> Self {
        SignedLatticeMeasure {
            dim,
            offset: [0, 0],
            shape: [0, if dim == 1 { 1 } else { 0 }],
            weights: Vec::new(),
            truncated_mass: 0.0,
        }
    }

    /// Unit point mass at `k` on `Z`.
    pub fn dirac(k: i64) -> Self {
        SignedLatticeMeasure {
            dim: 1,
            offset: [k, 0],
            shape: [1, 1],
            weights: vec![1.0],
            truncated_mass: 0.0,
        }
    }

    /// Unit point mass at `k` on `Z²`.
    pub fn dirac_2d(k: [i64; 2]) -> Self {
        SignedLatticeMeasure {
            dim: 2,
            offset: k,
            shape: [1, 1],
            weights: vec![1.0],
            truncated_mass: 0.0,
        }
    }

    /// Builds a 1D measure from `(point, weight)` pairs; repeated points add up.
    pub fn from_atoms(atoms: &[(i64, f64)]) -> Result<Self> {
        if atoms.is_empty() {
            return Ok(Self::zero(1));
        }
        let lo = atoms.iter().map(|a| a.0).min().unwrap();
        let hi = atoms.iter().map(|a| a.0).max().unwrap();
        let mut w = vec![0.0; (hi - lo + 1) as usize];
        for &(k, v) in atoms {
            w[(k - lo) as usize] += v;
        }
        Self::new_1d(lo, w, 0.0)
    }

    /// Builds a 2D measure from `(point, weight)` pairs.
    pub fn from_atoms_2d(atoms: &[([i64; 2], f64)]) -> Result<Self> {
        if atoms.is_empty() {
            return Ok(Self::zero(2));
        }
        let lo0 = atoms.iter().map(|a| a.0[0]).min().unwrap();
        let hi0 = atoms.iter().map(|a| a.0[0]).max().unwrap();
        let lo1 = atoms.iter().map(|a| a.0[1]).min().unwrap();
        let hi1 = atoms.iter().map(|a| a.0[1]).max().unwrap();
        let shape = [(hi0 - lo0 + 1) as usize, (hi1 - lo1 + 1) as usize];
        let mut w = vec![0.0; shape[0] * shape[1]];
        for &(k, v) in atoms {
            w[(k[0] - lo0) as usize * shape[1] + (k[1] - lo1) as usize] += v;
        }
        Self::new_2d([lo0, lo1], shape, w, 0.0)
    }

    /// Product measure `a ⊗ b` of two 1D measures.
    pub fn outer(a: &Self, b: &Self) -> Result<Self> {
        if a.dim != 1 || b.dim != 1 {
            return Err(Error::NotOneDimensional(a.dim.max(b.dim)));
        }
        let shape = [a.shape[0], b.shape[0]];
        let mut w = Vec::with_capacity(shape[0] * shape[1]);
        for &x in &a.weights {
            for &y in &b.weights {
                w.push(x * y);
            }
        }
        let tm = a.truncated_mass * b.tv_norm()
            + b.truncated_mass * a.tv_norm()
            + a.truncated_mass * b.truncated_mass;
        Self::new_2d([a.offset[0], b.offset[0]], shape, w, tm)
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Lowest corner of the support window (second entry is 0 in 1D).
    pub fn offset(&self) -> [i64; 2] {
        self.offset
    }

    /// Window extents (second entry is 1 in 1D).
    pub fn shape(&self) -> [usize; 2] {
        self.shape
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn truncated_mass(&self) -> f64 {
        self.truncated_mass
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Width of the window along the first axis.
    pub fn width(&self) -> usize {
        self.shape[0]
    }

    /// Weight at `k` (1D).
    pub fn at(&self, k: i64) -> f64 {
        self.at_2d([k, 0])
    }

    /// Weight at `k` (2D, or 1D with `k[1] == 0`).
    pub fn at_2d(&self, k: [i64; 2]) -> f64 {
        let i = k[0] - self.offset[0];
        let j = k[1] - self.offset[1];
        if i < 0 || j < 0 || i as usize >= self.shape[0] || j as usize >= self.shape[1] {
            return 0.0;
        }
        self.weights[i as usize * self.shape[1] + j as usize]
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `Σ |weights|`.
    pub fn tv_norm(&self) -> f64 {
        self.weights.iter().map(|w| w.abs()).sum()
    }

    /// Mean of each coordinate, `Σ k·w(k) / Σ w(k)`.
    pub fn mean(&self) -> [f64; 2] {
        let mass = self.total_mass();
        let mut m = [0.0; 2];
        for i in 0..self.shape[0] {
            for j in 0..self.shape[1] {
                let w = self.weights[i * self.shape[1] + j];
                m[0] += w * (self.offset[0] + i as i64) as f64;
                m[1] += w * (self.offset[1] + j as i64) as f64;
            }
        }
        [m[0] / mass, m[1] / mass]
    }

    /// `(point, weight)` pairs of a 1D measure in increasing order.
    pub fn atoms(&self) -> Vec<(i64, f64)> {
        self.weights
            .iter()
            .enumerate()
            .map(|(t, &w)| (self.offset[0] + t as i64, w))
            .collect()
    }

    /// Marginal law of one coordinate of a 2D measure.
    pub fn marginal(&self, axis: usize) -> Result<Self> {
        if self.dim != 2 {
            return Err(Error::DimensionMismatch(self.dim, 2));
        }
        let mut w = vec![0.0; self.shape[axis]];
        for i in 0..self.shape[0] {
            for j in 0..self.shape[1] {
                let idx = if axis == 0 { i } else { j };
                w[idx] += self.weights[i * self.shape[1] + j];
            }
        }
        Self::new_1d(self.offset[axis], w, self.truncated_mass)
    }

    /// Scalar multiple; the truncated mass scales with `|c|`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.weights.iter_mut().for_each(|w| *w *= c);
        out.truncated_mass *= c.abs();
        out.trim();
        out
    }

    /// Adds `extra` to the recorded truncated mass.
    pub fn with_extra_truncation(mut self, extra: f64) -> Self {
        self.truncated_mass += extra.max(0.0);
        self
    }

    /// Shrinks the window until no boundary row or column is entirely below
    /// [`ZERO_THRESHOLD`]. Discarded weights are added to the truncated mass.
    fn trim(&mut self) {
        let [mut r0, mut r1] = [0usize, self.shape[0]];
        let [mut c0, mut c1] = [0usize, self.shape[1]];
        let cols = self.shape[1];
        let w = &self.weights;
        let row_small = |i: usize, c0: usize, c1: usize| {
            (c0..c1).all(|j| w[i * cols + j].abs() < ZERO_THRESHOLD)
        };
        let col_small = |j: usize, r0: usize, r1: usize| {
            (r0..r1).all(|i| w[i * cols + j].abs() < ZERO_THRESHOLD)
        };
        loop {
            let mut changed = false;
            if r0 < r1 && row_small(r0, c0, c1) {
                r0 += 1;
                changed = true;
            }
            if r0 < r1 && row_small(r1 - 1, c0, c1) {
                r1 -= 1;
                changed = true;
            }
            if self.dim == 2 {
                if c0 < c1 && col_small(c0, r0, r1) {
                    c0 += 1;
                    changed = true;
                }
                if c0 < c1 && col_small(c1 - 1, r0, r1) {
                    c1 -= 1;
                    changed = true;
                }
            }
            if !changed || r0 >= r1 || c0 >= c1 {
                break;
            }
        }
        if r0 >= r1 || c0 >= c1 {
            let dropped: f64 = self.weights.iter().map(|x| x.abs()).sum();
            let tm = self.truncated_mass + dropped;
            *self = Self::zero(self.dim);
            self.truncated_mass = tm;
            return;
        }
        if r0 == 0 && r1 == self.shape[0] && c0 == 0 && c1 == self.shape[1] {
            return;
        }
        let total: f64 = self.weights.iter().map(|x| x.abs()).sum();
        let mut kept = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for i in r0..r1 {
            kept.extend_from_slice(&self.weights[i * cols + c0..i * cols + c1]);
        }
        let kept_abs: f64 = kept.iter().map(|x| x.abs()).sum();
        self.truncated_mass += (total - kept_abs).max(0.0);
        self.offset = [self.offset[0] + r0 as i64, self.offset[1] + c0 as i64];
        self.shape = [r1 - r0, c1 - c0];
        self.weights = kept;
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            Err(Error::DimensionMismatch(self.dim, other.dim))
        } else {
            Ok(())
        }
    }

    /// Smallest window containing both supports: (offset, shape).
    fn union_window(&self, other: &Self) -> ([i64; 2], [usize; 2]) {
        if self.is_empty() {
            return (other.offset, other.shape);
        }
        if other.is_empty() {
            return (self.offset, self.shape);
        }
        let mut off = [0i64; 2];
        let mut shape = [0usize; 2];
        for ax in 0..2 {
            let lo = self.offset[ax].min(other.offset[ax]);
            let hi = (self.offset[ax] + self.shape[ax] as i64)
                .max(other.offset[ax] + other.shape[ax] as i64);
            off[ax] = lo;
            shape[ax] = (hi - lo) as usize;
        }
        (off, shape)
    }

    /// Pointwise difference `self − other` on the union window, untrimmed.
    fn difference_grid(&self, other: &Self) -> ([i64; 2], [usize; 2], Vec<f64>) {
        let (off, shape) = self.union_window(other);
        let mut d = vec![0.0; shape[0] * shape[1]];
        for (m, sign) in [(self, 1.0), (other, -1.0)] {
            for i in 0..m.shape[0] {
                for j in 0..m.shape[1] {
                    let gi = (m.offset[0] - off[0]) as usize + i;
                    let gj = (m.offset[1] - off[1]) as usize + j;
                    d[gi * shape[1] + gj] += sign * m.weights[i * m.shape[1] + j];
                }
            }
        }
        (off, shape, d)
    }

    /// `self − other` as a measure; truncated masses add.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let (off, shape, d) = self.difference_grid(other);
        Self::build(
            self.dim,
            off,
            shape,
            d,
            self.truncated_mass + other.truncated_mass,
        )
    }

    /// `self + other`; truncated masses add.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.sub(&other.scaled(-1.0))
    }

    /// Full discrete convolution.
    ///
    /// The truncated mass of the result is
    /// `a.tm·‖b‖ + b.tm·‖a‖ + a.tm·b.tm`, an upper bound on the total
    /// variation between the exact and the computed product.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let tm = self.truncated_mass * other.tv_norm()
            + other.truncated_mass * self.tv_norm()
            + self.truncated_mass * other.truncated_mass;
        if self.is_empty() || other.is_empty() {
            let mut z = Self::zero(self.dim);
            z.truncated_mass = tm;
            return Ok(z);
        }
        let shape = [
            self.shape[0] + other.shape[0] - 1,
            self.shape[1] + other.shape[1] - 1,
        ];
        let mut w = vec![0.0; shape[0] * shape[1]];
        // Iterate over the smaller operand in the outer loop.
        let (big, small) = if self.weights.len() >= other.weights.len() {
            (self, other)
        } else {
            (other, self)
        };
        for si in 0..small.shape[0] {
            for sj in 0..small.shape[1] {
                let s = small.weights[si * small.shape[1] + sj];
                if s == 0.0 {
                    continue;
                }
                for bi in 0..big.shape[0] {
                    let row = (si + bi) * shape[1] + sj;
                    let brow = &big.weights[bi * big.shape[1]..(bi + 1) * big.shape[1]];
                    let out = &mut w[row..row + big.shape[1]];
                    for (o, b) in out.iter_mut().zip(brow) {
                        *o += s * b;
                    }
                }
            }
        }
        let off = [
            self.offset[0] + other.offset[0],
            self.offset[1] + other.offset[1],
        ];
        Self::build(self.dim, off, shape, w, tm)
    }

    /// Convolution with a measure carried by at most two points `{0, step}`
    /// (1D, in place on a copy). Used by the exact Bernoulli-product laws.
    pub fn convolve_two_point(&self, w0: f64, w1: f64) -> Result<Self> {
        if self.dim != 1 {
            return Err(Error::NotOneDimensional(self.dim));
        }
        let n = self.weights.len();
        let mut w = vec![0.0; n + 1];
        for t in 0..n {
            w[t] += w0 * self.weights[t];
            w[t + 1] += w1 * self.weights[t];
        }
        let tm = self.truncated_mass * (w0.abs() + w1.abs());
        Self::new_1d(self.offset[0], w, tm)
    }

    /// Writes the line-oriented text form: header
    /// `dim offset.. extent.. truncated_mass`, then one weight per line in
    /// row-major order, 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match self.dim {
            1 => writeln!(
                s,
                "1 {} {} {:.16e}",
                self.offset[0], self.shape[0], self.truncated_mass
            ),
            _ => writeln!(
                s,
                "2 {} {} {} {} {:.16e}",
                self.offset[0], self.offset[1], self.shape[0], self.shape[1], self.truncated_mass
            ),
        }
        .unwrap();
        for w in &self.weights {
            writeln!(s, "{w:.16e}").unwrap();
        }
        s
    }

    /// Parses the format written by [`to_text`](Self::to_text).
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty measure text".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let pi = |s: &str| s.parse::<i64>().map_err(|e| Error::Parse(format!("{s}: {e}")));
        let pu = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse(format!("{s}: {e}")));
        let pf = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("{s}: {e}")));
        let (dim, off, shape, tm) = match fields.as_slice() {
            ["1", o, n, tm] => (1, [pi(o)?, 0], [pu(n)?, 1], pf(tm)?),
            ["2", o0, o1, n0, n1, tm] => (2, [pi(o0)?, pi(o1)?], [pu(n0)?, pu(n1)?], pf(tm)?),
            _ => return Err(Error::Parse(format!("bad header `{header}`"))),
        };
        let weights = lines.map(|l| pf(l.trim())).collect::<Result<Vec<_>>>()?;
        Self::build(dim, off, shape, weights, tm)
    }
}

/// `sup_k |a(k) − b(k)|` with the summed truncated masses as error bar.
pub fn distance_local(a: &SignedLatticeMeasure, b: &SignedLatticeMeasure) -> Result<Distance> {
    a.check_same_dim(b)?;
    let (_, _, d) = a.difference_grid(b);
    Ok(Distance {
        value: d.iter().fold(0.0f64, |m, x| m.max(x.abs())),
        error: a.truncated_mass + b.truncated_mass,
    })
}

/// `sup_k |a([k,∞)) − b([k,∞))|` in one right-to-left cumulative pass.
pub fn distance_kolmogorov(
    a: &SignedLatticeMeasure,
    b: &SignedLatticeMeasure,
) -> Result<Distance> {
    if a.dim != 1 {
        return Err(Error::NotOneDimensional(a.dim));
    }
    if b.dim != 1 {
        return Err(Error::NotOneDimensional(b.dim));
    }
    let (_, _, d) = a.difference_grid(b);
    let mut tail = 0.0f64;
    let mut sup = 0.0f64;
    for x in d.iter().rev() {
        tail += x;
        sup = sup.max(tail.abs());
    }
    Ok(Distance {
        value: sup,
        error: a.truncated_mass + b.truncated_mass,
    })
}

/// `Σ_k |a(k) − b(k)|` (no factor ½).
pub fn distance_tv(a: &SignedLatticeMeasure, b: &SignedLatticeMeasure) -> Result<Distance> {
    a.check_same_dim(b)?;
    let (_, _, d) = a.difference_grid(b);
    Ok(Distance {
        value: d.iter().map(|x| x.abs()).sum(),
        error: a.truncated_mass + b.truncated_mass,
    })
}
