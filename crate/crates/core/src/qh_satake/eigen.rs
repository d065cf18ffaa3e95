//! Dense complex Schur decomposition: Householder reduction to upper
//! Hessenberg form followed by single-shift QR sweeps with Givens rotations.

use num_complex::Complex;

use crate::{Error, Real, Result};

/// Row-major square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self[(i, l)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * other.data[l * n + j];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
            acc + self[(i, i)]
        })
    }
}

impl<T> std::ops::Index<(usize, usize)> for DenseMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

/// `A = Q T Q^*` with `Q` unitary and `T` upper triangular.
#[derive(Clone, Debug)]
pub struct Schur<T> {
    pub q: DenseMatrix<T>,
    pub t: DenseMatrix<T>,
}

impl<T: Real> Schur<T> {
    pub fn eigenvalues(&self) -> Vec<Complex<T>> {
        (0..self.t.dim).map(|i| self.t[(i, i)]).collect()
    }

    /// `||A Q - Q T||_F / ||A||_F`.
    pub fn backward_error(&self, a: &DenseMatrix<T>) -> T {
        let norm = a.frobenius_norm();
        if norm == T::zero() {
            return self.t.frobenius_norm();
        }
        let aq = a.mul(&self.q);
        let qt = self.q.mul(&self.t);
        let diff = aq
            .data
            .iter()
            .zip(&qt.data)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<T>()
            .sqrt();
        diff / norm
    }
}

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Plane rotation `[c s; -conj(s) c]` mapping `(a, b)` to `(r, 0)`.
fn givens<T: Real>(a: Complex<T>, b: Complex<T>) -> (T, Complex<T>) {
    let na = a.norm();
    let nb = b.norm();
    if nb == T::zero() {
        return (T::one(), czero());
    }
    if na == T::zero() {
        return (T::zero(), Complex::new(T::one(), T::zero()));
    }
    let norm = na.hypot(nb);
    let phase = a / na;
    (na / norm, phase * b.conj() / norm)
}

fn rotate_rows<T: Real>(
    m: &mut DenseMatrix<T>,
    k: usize,
    c: T,
    s: Complex<T>,
    cols: std::ops::Range<usize>,
) {
    for j in cols {
        let x = m[(k, j)];
        let y = m[(k + 1, j)];
        m[(k, j)] = x * c + s * y;
        m[(k + 1, j)] = -s.conj() * x + y * c;
    }
}

fn rotate_cols<T: Real>(
    m: &mut DenseMatrix<T>,
    k: usize,
    c: T,
    s: Complex<T>,
    rows: std::ops::Range<usize>,
) {
    for i in rows {
        let x = m[(i, k)];
        let y = m[(i, k + 1)];
        m[(i, k)] = x * c + y * s.conj();
        m[(i, k + 1)] = -x * s + y * c;
    }
}

fn hessenberg<T: Real>(a: &mut DenseMatrix<T>, q: &mut DenseMatrix<T>) {
    let n = a.dim;
    if n < 3 {
        return;
    }
    let two = T::of(2.0);
    for j in 0..n - 2 {
        let alpha = a[(j + 1, j)];
        let tail: T = ((j + 2)..n).map(|i| a[(i, j)].norm_sqr()).sum();
        if tail == T::zero() {
            continue;
        }
        let xnorm = (alpha.norm_sqr() + tail).sqrt();
        let phase = if alpha.norm() == T::zero() {
            Complex::new(T::one(), T::zero())
        } else {
            alpha / alpha.norm()
        };
        let beta = -phase * xnorm;
        let mut v: Vec<Complex<T>> = ((j + 1)..n).map(|i| a[(i, j)]).collect();
        v[0] = v[0] - beta;
        let vnorm2: T = v.iter().map(|z| z.norm_sqr()).sum();
        let scale = two / vnorm2;
        // A <- H A
        for col in 0..n {
            let dot = v.iter().enumerate().fold(czero::<T>(), |acc, (r, vr)| {
                acc + vr.conj() * a[(j + 1 + r, col)]
            });
            let f = dot * scale;
            for (r, vr) in v.iter().enumerate() {
                a[(j + 1 + r, col)] = a[(j + 1 + r, col)] - *vr * f;
            }
        }
        // A <- A H, Q <- Q H
        for m in [&mut *a, &mut *q] {
            for row in 0..n {
                let dot = v
                    .iter()
                    .enumerate()
                    .fold(czero::<T>(), |acc, (c, vc)| acc + m[(row, j + 1 + c)] * *vc);
                let f = dot * scale;
                for (c, vc) in v.iter().enumerate() {
                    m[(row, j + 1 + c)] = m[(row, j + 1 + c)] - f * vc.conj();
                }
            }
        }
        for i in (j + 2)..n {
            a[(i, j)] = czero();
        }
    }
}

/// Eigenvalue of the trailing 2x2 block closest to its last diagonal entry.
fn wilkinson_shift<T: Real>(h: &DenseMatrix<T>, hi: usize) -> Complex<T> {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let half = T::of(0.5);
    let mean = (a + d) * half;
    let diff = (a - d) * half;
    let disc = (diff * diff + b * c).sqrt();
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Schur decomposition of a square matrix.
pub fn schur<T: Real>(a: &DenseMatrix<T>) -> Result<Schur<T>> {
    let n = a.dim;
    let mut h = a.clone();
    let mut q = DenseMatrix::identity(n);
    if n == 0 {
        return Ok(Schur { q, t: h });
    }
    hessenberg(&mut h, &mut q);

    let eps = T::epsilon();
    let anorm = h.frobenius_norm().max(T::min_positive_value());
    let max_iter = 60 * n.max(10);
    let mut hi = n - 1;
    let mut iter_since_deflation = 0usize;
    let mut total_iter = 0usize;

    while hi > 0 {
        // locate the start of the unreduced block ending at hi
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let scale = if diag == T::zero() { anorm } else { diag };
            if sub <= eps * scale {
                h[(l, l - 1)] = czero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter_since_deflation = 0;
            continue;
        }
        total_iter += 1;
        iter_since_deflation += 1;
        if total_iter > max_iter {
            return Err(Error::NoConvergence(format!(
                "QR sweeps exceeded {max_iter} for a {n}x{n} matrix"
            )));
        }

        let shift = if iter_since_deflation % 11 == 10 {
            // exceptional shift breaks cycles on permutation-like blocks
            let sub = h[(hi, hi - 1)].norm();
            h[(hi, hi)] + Complex::new(T::of(0.75) * sub, T::of(0.4375) * sub)
        } else {
            wilkinson_shift(&h, hi)
        };

        for i in l..=hi {
            h[(i, i)] = h[(i, i)] - shift;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            rotate_rows(&mut h, k, c, s, k..n);
            h[(k + 1, k)] = czero();
            rots.push((k, c, s));
        }
        for &(k, c, s) in &rots {
            rotate_cols(&mut h, k, c, s, 0..(k + 2).min(hi + 1));
            rotate_cols(&mut q, k, c, s, 0..n);
        }
        for i in l..=hi {
            h[(i, i)] = h[(i, i)] + shift;
        }
    }
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = czero();
        }
    }
    Ok(Schur { q, t: h })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn sorted(mut v: Vec<Complex<f64>>) -> Vec<Complex<f64>> {
        v.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        v
    }

    #[test]
    fn cyclic_permutation() {
        // companion of x^n - 1: eigenvalues are the n-th roots of unity
        for n in [2usize, 3, 5, 8, 13] {
            let mut m = DenseMatrix::<f64>::zeros(n);
            for i in 0..n {
                m[((i + 1) % n, i)] = c(1.0, 0.0);
            }
            let s = schur(&m).unwrap();
            assert!(s.backward_error(&m) < 1e-13);
            for z in s.eigenvalues() {
                let w = z.powu(n as u32);
                assert!((w - c(1.0, 0.0)).norm() < 1e-11, "n = {n}, z = {z}");
            }
        }
    }

    #[test]
    fn triangular_input() {
        let mut m = DenseMatrix::<f64>::zeros(3);
        m[(0, 0)] = c(1.0, 0.0);
        m[(0, 2)] = c(5.0, 1.0);
        m[(1, 1)] = c(0.0, 2.0);
        m[(2, 2)] = c(-3.0, 0.0);
        let s = schur(&m).unwrap();
        let ev = sorted(s.eigenvalues());
        let want = sorted(vec![c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.0)]);
        for (a, b) in ev.iter().zip(&want) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn random_complex_matrix_trace_and_residual() {
        let n = 30;
        let mut m = DenseMatrix::<f64>::zeros(n);
        let mut x: u64 = 0x9e3779b97f4a7c15;
        for i in 0..n {
            for j in 0..n {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                let re = (x % 1000) as f64 / 500.0 - 1.0;
                let im = ((x >> 20) % 1000) as f64 / 500.0 - 1.0;
                m[(i, j)] = c(re, im);
            }
        }
        let s = schur(&m).unwrap();
        assert!(s.backward_error(&m) < 1e-12);
        let tr: Complex<f64> = s.eigenvalues().iter().sum();
        assert!((tr - m.trace()).norm() < 1e-10);
    }

    #[test]
    fn zero_and_tiny() {
        let m = DenseMatrix::<f64>::zeros(4);
        let s = schur(&m).unwrap();
        assert!(s.eigenvalues().iter().all(|z| z.norm() == 0.0));
        let one = DenseMatrix::<f64>::identity(1);
        assert_eq!(schur(&one).unwrap().eigenvalues(), vec![c(1.0, 0.0)]);
    }

    #[test]
    fn works_in_single_precision() {
        let mut m = DenseMatrix::<f32>::zeros(4);
        for i in 0..4 {
            m[((i + 1) % 4, i)] = Complex::new(1.0, 0.0);
        }
        let s = schur(&m).unwrap();
        for z in s.eigenvalues() {
            assert!((z.powu(4) - Complex::new(1.0f32, 0.0)).norm() < 1e-4);
        }
    }
}
