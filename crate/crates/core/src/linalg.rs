//! Dense complex matrix helpers and the cyclic Jacobi eigensolver used by every
//! envelope-representable summand.

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative off-diagonal Frobenius mass at which a Jacobi sweep stops.
pub const JACOBI_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    Complex::new(x, 0.0)
}

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues, eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, i: usize) -> CVector {
        self.vectors.column(i).into_owned()
    }
}

/// Cyclic Jacobi on a Hermitian matrix.
///
/// Only the Hermitian part `(a + a*)/2` is diagonalised. Sweeps visit pairs in
/// row-major order, so results are reproducible bit for bit. A real symmetric
/// input never picks up imaginary parts: the rotation phase is taken as
/// `a_pq / |a_pq|`, which is exactly `±1` for real entries.
pub fn hermitian_eigen(a: &CMatrix) -> HermitianEigen {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "hermitian_eigen needs a square matrix");
    let mut m = (a + a.adjoint()).scale(0.5);
    let mut v = CMatrix::identity(n, n);
    let scale = m.norm();

    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&m) <= JACOBI_TOL * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut m, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, k| v[(r, order[k])]);
    HermitianEigen { values, vectors }
}

fn off_diagonal_norm(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let phase = apq / g;
    let tau = (m[(q, q)].re - m[(p, p)].re) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;
    let s_ph = phase * sn; // s e^{i phi}
    let s_ph_conj = s_ph.conj(); // s e^{-i phi}
    let n = m.nrows();

    // m <- m J
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * cs - mkq * s_ph_conj;
        m[(k, q)] = mkp * s_ph + mkq * cs;
    }
    // m <- J* m
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = mpk * cs - mqk * s_ph;
        m[(q, k)] = mpk * s_ph_conj + mqk * cs;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = re(m[(p, p)].re);
    m[(q, q)] = re(m[(q, q)].re);
    // v <- v J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * cs - vkq * s_ph_conj;
        v[(k, q)] = vkp * s_ph + vkq * cs;
    }
}

/// Largest singular value, computed as the square root of the top eigenvalue of `a* a`.
pub fn largest_singular_value(a: &CMatrix) -> f64 {
    let gram = a.adjoint() * a;
    let eig = hermitian_eigen(&gram);
    eig.values.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Spectral norm of a Hermitian matrix.
pub fn hermitian_norm(a: &CMatrix) -> f64 {
    let eig = hermitian_eigen(a);
    eig.values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// `v v*`
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// Projection onto the span of the given orthonormal columns.
pub fn projector(columns: &[CVector], n: usize) -> CMatrix {
    let mut out = CMatrix::zeros(n, n);
    for col in columns {
        out += outer(col);
    }
    out
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Max entrywise deviation from transpose symmetry.
pub fn transpose_asymmetry(a: &CMatrix) -> f64 {
    max_abs(&(a - a.transpose()))
}

pub fn trace(a: &CMatrix) -> C64 {
    a.diagonal().iter().sum()
}
