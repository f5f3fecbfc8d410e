use crate::linalg::householder::Reflector;
use crate::linalg::ComplexMatrix;
use crate::scalar::{cone, cz, Real, C};

/// Thin QR factorization `M = Q R`, `Q: rows × k` with orthonormal columns,
/// `R: k × cols` upper trapezoidal, `k = min(rows, cols)`.
pub fn qr_thin<T: Real>(m: &ComplexMatrix<T>) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let rows = m.rows();
    let cols = m.cols();
    let k = rows.min(cols);
    let mut a = m.as_slice().to_vec();
    let mut work = Vec::new();
    let mut refl = Vec::with_capacity(k);
    for i in 0..k {
        let x: Vec<C<T>> = (i..rows).map(|r| a[r * cols + i]).collect();
        let h = Reflector::new(&x);
        h.apply_left(&mut a, cols, i, i, cols, &mut work);
        a[i * cols + i] = h.alpha;
        for r in i + 1..rows {
            a[r * cols + i] = cz();
        }
        refl.push(h);
    }
    let r = ComplexMatrix::from_raw(k, cols, a[..k * cols].to_vec());
    let mut q = vec![cz::<T>(); rows * k];
    for i in 0..k {
        q[i * k + i] = cone();
    }
    for (i, h) in refl.iter().enumerate().rev() {
        h.apply_left(&mut q, k, i, i, k, &mut work);
    }
    (ComplexMatrix::from_raw(rows, k, q), r)
}
