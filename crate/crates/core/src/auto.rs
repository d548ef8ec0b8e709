//! Automorphisms of `L` as exact matrices over a field, on the basis
//! `(t - tbar)_2`, `A_1`, a computed basis of `L_0`, `A_-1`, `(t - tbar)_-2`.

use std::sync::Arc;

use crate::hcns::GElem;
use crate::lie::{Lie, LieElem, LieError, Sign};
use crate::linalg::{IncrementalBasis, Mat};
use crate::scalars::Ring;

/// A basis of `L`. The `L_0` part consists of brackets `[e_i, e_j]` with
/// `e_i` in `A_1` and `e_j` in `A_-1`, chosen greedily.
pub struct LieBasis<R: Ring> {
    lie: Lie<R>,
    l0_pairs: Vec<(usize, usize)>,
    l0_elems: Vec<LieElem<R>>,
    span: IncrementalBasis<R>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum GradingSignature {
    Preserves,
    Reverses,
    Neither,
}

impl<R: Ring> LieBasis<R> {
    pub fn new(lie: Lie<R>) -> Arc<Self> {
        let m = lie.dim_a();
        let mut span = IncrementalBasis::new(2 * m * m);
        let mut l0_pairs = Vec::new();
        let mut l0_elems = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let b = lie.bracket(&lie.plus_one(lie.a_basis(i)), &lie.minus_one(lie.a_basis(j)));
                if span.insert(&flat0(&b)) {
                    l0_pairs.push((i, j));
                    l0_elems.push(b);
                }
            }
        }
        Arc::new(LieBasis { lie, l0_pairs, l0_elems, span })
    }

    pub fn lie(&self) -> &Lie<R> {
        &self.lie
    }

    pub fn dim_l0(&self) -> usize {
        self.l0_pairs.len()
    }

    pub fn dim(&self) -> usize {
        2 + 2 * self.lie.dim_a() + self.dim_l0()
    }

    /// Grade of each basis index.
    pub fn grades(&self) -> Vec<i32> {
        let m = self.lie.dim_a();
        let mut g = vec![2];
        g.extend(std::iter::repeat_n(1, m));
        g.extend(std::iter::repeat_n(0, self.dim_l0()));
        g.extend(std::iter::repeat_n(-1, m));
        g.push(-2);
        g
    }

    pub fn l0_pairs(&self) -> &[(usize, usize)] {
        &self.l0_pairs
    }

    pub fn basis_elem(&self, i: usize) -> LieElem<R> {
        let lie = &self.lie;
        let m = lie.dim_a();
        let one = lie.hcns().alpha().one_like();
        let d0 = self.dim_l0();
        if i == 0 {
            lie.top(one)
        } else if i <= m {
            lie.plus_one(lie.a_basis(i - 1))
        } else if i <= m + d0 {
            self.l0_elems[i - 1 - m].clone()
        } else if i <= 2 * m + d0 {
            lie.minus_one(lie.a_basis(i - 1 - m - d0))
        } else {
            assert_eq!(i, self.dim() - 1);
            lie.bottom(one)
        }
    }

    /// Coordinates, or `None` when the `L_0` part is outside the span.
    pub fn coords(&self, x: &LieElem<R>) -> Option<Vec<R>> {
        let lie = &self.lie;
        let mut out = vec![x.l2.clone()];
        out.extend(lie.a_coords(&x.a1));
        out.extend(self.span.coords(&flat0(x))?);
        out.extend(lie.a_coords(&x.am1));
        out.push(x.lm2.clone());
        Some(out)
    }

    pub fn elem(&self, c: &[R]) -> LieElem<R> {
        assert_eq!(c.len(), self.dim());
        let lie = &self.lie;
        let m = lie.dim_a();
        let d0 = self.dim_l0();
        let mut x = lie.zero();
        x.l2 = c[0].clone();
        x.a1 = lie.a_from_coords(&c[1..=m]);
        for (k, b) in self.l0_elems.iter().enumerate() {
            let ck = &c[1 + m + k];
            if !ck.is_zero() {
                x = x.add(&b.rscale(ck));
            }
        }
        x.am1 = lie.a_from_coords(&c[1 + m + d0..1 + 2 * m + d0]);
        x.lm2 = c[c.len() - 1].clone();
        x
    }

    /// Structure constants are closed: every bracket of basis elements has
    /// coordinates.
    pub fn is_closed(&self) -> bool {
        let n = self.dim();
        (0..n)
            .all(|i| (i..n).all(|j| self.coords(&self.lie.bracket(&self.basis_elem(i), &self.basis_elem(j))).is_some()))
    }
}

fn flat0<R: Ring>(x: &LieElem<R>) -> Vec<R> {
    x.f.entries().iter().chain(x.g.entries()).cloned().collect()
}

#[derive(Clone)]
pub struct LieAuto<R: Ring> {
    basis: Arc<LieBasis<R>>,
    mat: Mat<R>,
}

impl<R: Ring> PartialEq for LieAuto<R> {
    fn eq(&self, o: &Self) -> bool {
        self.mat == o.mat
    }
}

impl<R: Ring> std::fmt::Debug for LieAuto<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LieAuto{:?}", self.mat)
    }
}

impl<R: Ring> LieAuto<R> {
    pub fn identity(basis: &Arc<LieBasis<R>>) -> Self {
        let one = basis.lie().hcns().alpha().one_like();
        LieAuto { basis: basis.clone(), mat: Mat::identity(basis.dim(), &one) }
    }

    pub fn from_matrix(basis: &Arc<LieBasis<R>>, mat: Mat<R>) -> Self {
        assert_eq!((mat.rows(), mat.cols()), (basis.dim(), basis.dim()));
        LieAuto { basis: basis.clone(), mat }
    }

    /// The automorphism determined by its values on `L_{+-1}` and `L_{+-2}`;
    /// `L_0` columns follow from `phi [e_i, e_j] = [phi e_i, phi e_j]`.
    pub fn from_generators(
        basis: &Arc<LieBasis<R>>,
        phi: impl Fn(&LieElem<R>) -> Result<LieElem<R>, LieError>,
    ) -> Result<Self, LieError> {
        let n = basis.dim();
        let m = basis.lie().dim_a();
        let d0 = basis.dim_l0();
        let mut images: Vec<Option<LieElem<R>>> = vec![None; n];
        for (i, slot) in images.iter_mut().enumerate() {
            if !(1 + m..1 + m + d0).contains(&i) {
                *slot = Some(phi(&basis.basis_elem(i))?);
            }
        }
        for (k, &(i, j)) in basis.l0_pairs().iter().enumerate() {
            let x = images[1 + i].as_ref().unwrap();
            let y = images[1 + m + d0 + j].as_ref().unwrap();
            images[1 + m + k] = Some(basis.lie().bracket(x, y));
        }
        let cols: Vec<Vec<R>> = images
            .iter()
            .map(|x| basis.coords(x.as_ref().unwrap()).expect("image of a basis vector outside L"))
            .collect();
        let z = basis.lie().hcns().alpha().zero_like();
        Ok(LieAuto { basis: basis.clone(), mat: Mat::from_columns(n, &cols, &z) })
    }

    pub fn exp(basis: &Arc<LieBasis<R>>, sign: Sign, g: &GElem<R>) -> Result<Self, LieError> {
        let x = basis.lie().generator(sign, g)?;
        Self::from_generators(basis, |y| basis.lie().exp_ad(&x, y))
    }

    pub fn basis(&self) -> &Arc<LieBasis<R>> {
        &self.basis
    }

    pub fn matrix(&self) -> &Mat<R> {
        &self.mat
    }

    pub fn mul(&self, o: &Self) -> Self {
        LieAuto { basis: self.basis.clone(), mat: self.mat.mul(&o.mat) }
    }

    pub fn inverse(&self) -> Option<Self> {
        Some(LieAuto { basis: self.basis.clone(), mat: self.mat.inverse()? })
    }

    pub fn is_identity(&self) -> bool {
        self.mat.is_identity()
    }

    pub fn apply(&self, x: &LieElem<R>) -> LieElem<R> {
        let c = self.basis.coords(x).expect("element outside L");
        self.basis.elem(&self.mat.mul_vec(&c))
    }

    pub fn column(&self, j: usize) -> LieElem<R> {
        self.basis.elem(&self.mat.column(j))
    }

    /// `phi [b_i, b_j] = [phi b_i, phi b_j]` for all basis pairs.
    pub fn preserves_brackets(&self) -> bool {
        let b = &self.basis;
        let n = b.dim();
        let imgs: Vec<LieElem<R>> = (0..n).map(|j| self.column(j)).collect();
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let lhs = self.apply(&b.lie().bracket(&b.basis_elem(i), &b.basis_elem(j)));
                lhs == b.lie().bracket(&imgs[i], &imgs[j])
            })
        })
    }

    /// Block `(i, j)`: the part mapping grade `j` to grade `i`.
    pub fn block_is_zero(&self, to: i32, from: i32) -> bool {
        let g = self.basis.grades();
        (0..g.len()).all(|r| (0..g.len()).all(|c| g[r] != to || g[c] != from || self.mat.get(r, c).is_zero()))
    }

    pub fn grading_signature(&self) -> GradingSignature {
        let grades = [-2, -1, 0, 1, 2];
        let only = |f: &dyn Fn(i32, i32) -> bool| {
            grades.iter().all(|&i| grades.iter().all(|&j| f(i, j) || self.block_is_zero(i, j)))
        };
        if only(&|i, j| i == j) {
            GradingSignature::Preserves
        } else if only(&|i, j| i == -j) {
            GradingSignature::Reverses
        } else {
            GradingSignature::Neither
        }
    }

    /// Scalar by which the automorphism maps `(t - tbar)_-2` into
    /// `(t - tbar)_2`.
    pub fn bottom_to_top(&self) -> R {
        self.mat.get(0, self.basis.dim() - 1).clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::tests::lie_instances;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exp_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in [3, 5] {
            for lie in lie_instances(p) {
                let h = lie.hcns().clone();
                let basis = LieBasis::new(lie);
                assert!(basis.is_closed());
                let gr = basis.lie().grading_element();
                assert!(basis.coords(&gr).is_some());
                println!("p={p} n={} dim L0 = {}", h.rank(), basis.dim_l0());
                for _ in 0..5 {
                    let g = h.random_g(&mut rng);
                    let g2 = h.random_g(&mut rng);
                    let e = LieAuto::exp(&basis, Sign::Plus, &g).unwrap();
                    let e2 = LieAuto::exp(&basis, Sign::Plus, &g2).unwrap();
                    let e12 = LieAuto::exp(&basis, Sign::Plus, &h.g_mul(&g, &g2)).unwrap();
                    assert!(e.preserves_brackets());
                    assert_eq!(e.mul(&e2), e12);
                    assert_eq!(e.bottom_to_top(), h.nu(&g));
                    let em = LieAuto::exp(&basis, Sign::Minus, &g).unwrap();
                    assert!(em.preserves_brackets());
                    assert!(e.mul(&LieAuto::exp(&basis, Sign::Plus, &h.g_inv(&g)).unwrap()).is_identity());
                }
            }
        }
    }
}
