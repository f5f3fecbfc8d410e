use crate::scalar::{cz, phase, Real, C};

/// Elementary reflector `H = I − τ v v†` with `H x = α e₁`.
#[derive(Clone, Debug)]
pub(crate) struct Reflector<T> {
    pub v: Vec<C<T>>,
    pub tau: T,
    pub alpha: C<T>,
}

impl<T: Real> Reflector<T> {
    pub fn new(x: &[C<T>]) -> Self {
        let tail: T = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == T::zero() {
            return Self {
                v: vec![cz(); x.len()],
                tau: T::zero(),
                alpha: x[0],
            };
        }
        let r = (x[0].norm_sqr() + tail).sqrt();
        let ph = phase(x[0]);
        let mut v = x.to_vec();
        v[0] += ph * r;
        let vnorm2: T = v.iter().map(|z| z.norm_sqr()).sum();
        Self {
            v,
            tau: T::lit(2.0) / vnorm2,
            alpha: -ph * r,
        }
    }

    #[inline]
    pub fn is_identity(&self) -> bool {
        self.tau == T::zero()
    }

    /// `A[r0.., c0..c1] ← H · A[r0.., c0..c1]` on a row-major buffer with `stride` columns.
    pub fn apply_left(&self, a: &mut [C<T>], stride: usize, r0: usize, c0: usize, c1: usize, w: &mut Vec<C<T>>) {
        if self.is_identity() {
            return;
        }
        let width = c1 - c0;
        w.clear();
        w.resize(width, cz());
        for (i, vi) in self.v.iter().enumerate() {
            let cv = vi.conj();
            let row = &a[(r0 + i) * stride + c0..(r0 + i) * stride + c1];
            for (wj, aij) in w.iter_mut().zip(row) {
                *wj += cv * aij;
            }
        }
        for (i, vi) in self.v.iter().enumerate() {
            let f = vi * self.tau;
            let row = &mut a[(r0 + i) * stride + c0..(r0 + i) * stride + c1];
            for (aij, wj) in row.iter_mut().zip(w.iter()) {
                *aij -= f * wj;
            }
        }
    }

    /// `A[r0..r1, c0..] ← A[r0..r1, c0..] · H` on a row-major buffer with `stride` columns.
    pub fn apply_right(&self, a: &mut [C<T>], stride: usize, r0: usize, r1: usize, c0: usize) {
        if self.is_identity() {
            return;
        }
        let len = self.v.len();
        for i in r0..r1 {
            let row = &mut a[i * stride + c0..i * stride + c0 + len];
            let mut s = cz::<T>();
            for (aij, vj) in row.iter().zip(&self.v) {
                s += aij * vj;
            }
            let s = s * self.tau;
            for (aij, vj) in row.iter_mut().zip(&self.v) {
                *aij -= s * vj.conj();
            }
        }
    }
}
