//! Dense matrices over a [`Ring`] and incremental row reduction over fields.

use std::fmt;

use crate::scalars::Ring;

#[derive(Clone, PartialEq)]
pub struct Mat<R: Ring> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Mat<R> {
    pub fn zeros(rows: usize, cols: usize, sample: &R) -> Self {
        Mat { rows, cols, data: vec![sample.zero_like(); rows * cols] }
    }

    pub fn identity(n: usize, sample: &R) -> Self {
        let mut m = Self::zeros(n, n, sample);
        for i in 0..n {
            m.data[i * n + i] = sample.one_like();
        }
        m
    }

    pub fn from_columns(rows: usize, cols: &[Vec<R>], sample: &R) -> Self {
        let mut m = Self::zeros(rows, cols.len(), sample);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: R) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Mat<S> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let mut out = Self::zeros(self.rows, o.cols, &self.data_sample(o));
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    fn data_sample(&self, o: &Self) -> R {
        self.data.first().or(o.data.first()).expect("empty matrix product").zero_like()
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = v[0].zero_like();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &R) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.mul(c)).collect() }
    }

    pub fn neg(&self) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.neg()).collect() }
    }

    pub fn div_int(&self, k: u32) -> Option<Self> {
        let data = self.data.iter().map(|x| x.div_int(k)).collect::<Option<Vec<_>>>()?;
        Some(Mat { rows: self.rows, cols: self.cols, data })
    }

    /// `self * o - o * self`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    /// Inverse over a field by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let sample = self.data[0].clone();
        let mut a = self.clone();
        let mut inv = Self::identity(n, &sample);
        for c in 0..n {
            let piv = (c..n).find(|&r| !a.get(r, c).is_zero())?;
            a.swap_rows(c, piv);
            inv.swap_rows(c, piv);
            let pinv = a.get(c, c).inverse()?;
            a.scale_row(c, &pinv);
            inv.scale_row(c, &pinv);
            for r in 0..n {
                if r != c && !a.get(r, c).is_zero() {
                    let f = a.get(r, c).clone();
                    a.axpy_row(r, c, &f);
                    inv.axpy_row(r, c, &f);
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for k in 0..self.cols {
                self.data.swap(i * self.cols + k, j * self.cols + k);
            }
        }
    }

    fn scale_row(&mut self, i: usize, c: &R) {
        for k in 0..self.cols {
            let idx = i * self.cols + k;
            self.data[idx] = self.data[idx].mul(c);
        }
    }

    /// `row_i -= f * row_j`.
    fn axpy_row(&mut self, i: usize, j: usize, f: &R) {
        for k in 0..self.cols {
            let t = self.get(j, k).mul(f);
            let idx = i * self.cols + k;
            self.data[idx] = self.data[idx].sub(&t);
        }
    }
}

impl<R: Ring> fmt::Debug for Mat<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A basis grown one candidate at a time over a field. Every stored row is
/// kept as an explicit combination of the accepted candidates, so membership
/// queries return coordinates with respect to the accepted vectors.
#[derive(Clone)]
pub struct IncrementalBasis<R: Ring> {
    dim: usize,
    rows: Vec<(usize, Vec<R>, Vec<R>)>,
    accepted: usize,
}

impl<R: Ring> IncrementalBasis<R> {
    pub fn new(dim: usize) -> Self {
        IncrementalBasis { dim, rows: Vec::new(), accepted: 0 }
    }

    pub fn len(&self) -> usize {
        self.accepted
    }

    pub fn is_empty(&self) -> bool {
        self.accepted == 0
    }

    fn reduce(&self, v: &mut [R], combo: &mut [R], sign: i64) {
        for (p, row, c) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.sub(&f.mul(r));
                }
            }
            for (k, ck) in c.iter().enumerate() {
                if ck.is_zero() {
                    continue;
                }
                let t = f.mul(ck);
                combo[k] = if sign > 0 { combo[k].add(&t) } else { combo[k].sub(&t) };
            }
        }
    }

    /// Accept `v` if it is independent of the accepted vectors.
    pub fn insert(&mut self, v: &[R]) -> bool {
        assert_eq!(v.len(), self.dim);
        let z = v[0].zero_like();
        let mut r = v.to_vec();
        let mut combo = vec![z.clone(); self.accepted + 1];
        combo[self.accepted] = z.one_like();
        for (_, _, c) in self.rows.iter_mut() {
            c.push(z.clone());
        }
        self.reduce(&mut r, &mut combo, -1);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            for (_, _, c) in self.rows.iter_mut() {
                c.pop();
            }
            return false;
        };
        let inv = r[p].inverse().expect("row reduction needs a field");
        let r: Vec<R> = r.iter().map(|x| x.mul(&inv)).collect();
        let combo: Vec<R> = combo.iter().map(|x| x.mul(&inv)).collect();
        self.rows.push((p, r, combo));
        self.accepted += 1;
        true
    }

    /// Coordinates of `v` in terms of the accepted vectors, if in their span.
    pub fn coords(&self, v: &[R]) -> Option<Vec<R>> {
        assert_eq!(v.len(), self.dim);
        let z = v[0].zero_like();
        let mut r = v.to_vec();
        let mut combo = vec![z; self.accepted];
        self.reduce(&mut r, &mut combo, 1);
        r.iter().all(|x| x.is_zero()).then_some(combo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FqField;

    #[test]
    fn inverse_and_span() {
        let f = FqField::prime(7).unwrap();
        let m = Mat::from_columns(2, &[vec![f.int(1), f.int(2)], vec![f.int(3), f.int(4)]], &f.zero());
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());

        let mut b = IncrementalBasis::new(3);
        assert!(b.insert(&[f.int(1), f.int(2), f.int(0)]));
        assert!(b.insert(&[f.int(0), f.int(1), f.int(1)]));
        assert!(!b.insert(&[f.int(2), f.int(5), f.int(1)]));
        let c = b.coords(&[f.int(3), f.int(7), f.int(1)]).unwrap();
        assert_eq!(c, vec![f.int(3), f.int(1)]);
        assert!(b.coords(&[f.int(0), f.int(0), f.int(1)]).is_none());
    }
}
