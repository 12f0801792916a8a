//! The exceptional factor: Hermitian 3×3 octonion matrices `H₃(𝕆)` and their
//! complexification.
//!
//! An [`AlbertElement`] stores three real diagonal entries `α₁, α₂, α₃` and
//! three octonions placed in the Hermitian pattern
//!
//! ```text
//!     ⎡ α₁   x₃   x̄₂ ⎤
//!     ⎢ x̄₃   α₂   x₁ ⎥
//!     ⎣ x₂   x̄₁   α₃ ⎦
//! ```
//!
//! so `x₁` sits at (2,3), `x₂` at (3,1) and `x₃` at (1,2). The cubic norm uses
//! the association order `2·Re((x₁x₂)x₃)`; the real part of an octonion triple
//! product does not depend on the bracketing, but the order is fixed here so
//! the formula is reproducible term by term.

use std::ops::{Add, Sub};

use crate::octonion::Octonion;

/// Roots closer than this are merged before spectral projections are built.
pub const ROOT_CLUSTER_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct AlbertElement {
    pub diag: [f64; 3],
    pub off: [Octonion; 3],
}

/// Coefficients `(T, S, N)` of the characteristic cubic `λ³ − Tλ² + Sλ − N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicForm {
    pub trace: f64,
    pub quadratic: f64,
    pub norm: f64,
}

impl CubicForm {
    pub fn eval(&self, x: f64) -> f64 {
        ((x - self.trace) * x + self.quadratic) * x - self.norm
    }

    fn derivative(&self, x: f64) -> f64 {
        (3.0 * x - 2.0 * self.trace) * x + self.quadratic
    }
}

impl AlbertElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        Self::diagonal([1.0, 1.0, 1.0])
    }

    pub fn diagonal(diag: [f64; 3]) -> Self {
        AlbertElement { diag, off: [Octonion::ZERO; 3] }
    }

    /// Diagonal matrix unit `E_ii`.
    pub fn diagonal_unit(i: usize) -> Self {
        let mut d = [0.0; 3];
        d[i] = 1.0;
        Self::diagonal(d)
    }

    pub fn scale(&self, s: f64) -> Self {
        AlbertElement { diag: self.diag.map(|x| x * s), off: self.off.map(|o| o.scale(s)) }
    }

    /// `T(a)`, the sum of the diagonal entries.
    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.diag
            .iter()
            .map(|x| x.abs())
            .chain(self.off.iter().map(|o| o.max_abs()))
            .fold(0.0, f64::max)
    }

    /// Real coordinates: three diagonal entries then the three octonions.
    pub fn coordinates(&self) -> [f64; 27] {
        let mut out = [0.0; 27];
        out[..3].copy_from_slice(&self.diag);
        for (k, o) in self.off.iter().enumerate() {
            out[3 + 8 * k..11 + 8 * k].copy_from_slice(&o.0);
        }
        out
    }

    pub fn from_coordinates(c: &[f64]) -> Self {
        assert_eq!(c.len(), 27);
        let mut a = AlbertElement::zero();
        a.diag.copy_from_slice(&c[..3]);
        for k in 0..3 {
            a.off[k].0.copy_from_slice(&c[3 + 8 * k..11 + 8 * k]);
        }
        a
    }

    /// Jordan product `½(ab + ba)` written out in coordinates.
    pub fn jordan_mul(&self, other: &AlbertElement) -> AlbertElement {
        let (a, x) = (&self.diag, &self.off);
        let (b, y) = (&other.diag, &other.off);
        let mut diag = [0.0; 3];
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            diag[i] = a[i] * b[i] + x[j].dot(&y[j]) + x[k].dot(&y[k]);
        }
        let mut off = [Octonion::ZERO; 3];
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let sum = y[i].scale(a[j] + a[k])
                + x[i].scale(b[j] + b[k])
                + (x[j] * y[k]).conj()
                + (y[j] * x[k]).conj();
            off[i] = sum.scale(0.5);
        }
        AlbertElement { diag, off }
    }

    pub fn square(&self) -> AlbertElement {
        self.jordan_mul(self)
    }

    pub fn cubic_form(&self) -> CubicForm {
        let t = self.trace();
        let t2 = self.square().trace();
        let [a1, a2, a3] = self.diag;
        let [x1, x2, x3] = self.off;
        let n = a1 * a2 * a3 - a1 * x1.norm_sqr() - a2 * x2.norm_sqr() - a3 * x3.norm_sqr()
            + 2.0 * ((x1 * x2) * x3).re();
        CubicForm { trace: t, quadratic: 0.5 * (t * t - t2), norm: n }
    }

    /// Eigenvalues with multiplicity, ascending.
    pub fn eigenvalues(&self) -> [f64; 3] {
        cubic_roots(&self.cubic_form())
    }

    /// Spectral decomposition `a = Σ λᵢ pᵢ` over distinct (clustered) eigenvalues.
    ///
    /// Projections come from Lagrange interpolation in the subalgebra generated
    /// by `a`: `pᵢ = Π_{j≠i} (a − λⱼ)/(λᵢ − λⱼ)`. Each pair carries the
    /// multiplicity of its eigenvalue.
    pub fn spectral(&self) -> Vec<(f64, AlbertElement, usize)> {
        let form = self.cubic_form();
        let roots = cubic_roots(&form);
        let mut clusters: Vec<Vec<f64>> = Vec::new();
        for r in roots {
            match clusters.last_mut() {
                Some(last) if r - last[last.len() - 1] < ROOT_CLUSTER_TOL => last.push(r),
                _ => clusters.push(vec![r]),
            }
        }
        let values: Vec<f64> = match clusters.len() {
            1 => vec![form.trace / 3.0],
            2 => {
                let (single, double_first) =
                    if clusters[0].len() == 1 { (0, false) } else { (1, true) };
                let simple = newton_polish(&form, clusters[single][0]);
                let double = 0.5 * (form.trace - simple);
                if double_first {
                    vec![double, simple]
                } else {
                    vec![simple, double]
                }
            }
            _ => clusters.iter().map(|c| newton_polish(&form, c[0])).collect(),
        };
        let mult: Vec<usize> = clusters.iter().map(|c| c.len()).collect();

        let unit = AlbertElement::unit();
        values
            .iter()
            .enumerate()
            .map(|(i, &li)| {
                let mut p = unit;
                for (j, &lj) in values.iter().enumerate() {
                    if i != j {
                        let factor = (*self - unit.scale(lj)).scale(1.0 / (li - lj));
                        p = p.jordan_mul(&factor);
                    }
                }
                (li, p, mult[i])
            })
            .collect()
    }

    /// Dense 3×3 octonion matrix, row-major.
    pub fn to_matrix(&self) -> [[Octonion; 3]; 3] {
        let [a1, a2, a3] = self.diag;
        let [x1, x2, x3] = self.off;
        [
            [Octonion::real(a1), x3, x2.conj()],
            [x3.conj(), Octonion::real(a2), x1],
            [x2, x1.conj(), Octonion::real(a3)],
        ]
    }

    /// Reads the Hermitian pattern back from a matrix, averaging mirrored entries.
    pub fn from_matrix(m: &[[Octonion; 3]; 3]) -> AlbertElement {
        let avg = |upper: Octonion, lower: Octonion| (upper + lower.conj()).scale(0.5);
        AlbertElement {
            diag: [m[0][0].re(), m[1][1].re(), m[2][2].re()],
            off: [avg(m[1][2], m[2][1]), avg(m[2][0], m[0][2]), avg(m[0][1], m[1][0])],
        }
    }
}

impl Add for AlbertElement {
    type Output = AlbertElement;
    fn add(self, rhs: AlbertElement) -> AlbertElement {
        AlbertElement {
            diag: [self.diag[0] + rhs.diag[0], self.diag[1] + rhs.diag[1], self.diag[2] + rhs.diag[2]],
            off: [self.off[0] + rhs.off[0], self.off[1] + rhs.off[1], self.off[2] + rhs.off[2]],
        }
    }
}

impl Sub for AlbertElement {
    type Output = AlbertElement;
    fn sub(self, rhs: AlbertElement) -> AlbertElement {
        self + rhs.scale(-1.0)
    }
}

/// Free-standing form of [`AlbertElement::jordan_mul`].
pub fn albert_jordan_mul(a: &AlbertElement, b: &AlbertElement) -> AlbertElement {
    a.jordan_mul(b)
}

pub fn cubic_form(a: &AlbertElement) -> CubicForm {
    a.cubic_form()
}

/// Real roots of `λ³ − Tλ² + Sλ − N` by the trigonometric method, ascending.
///
/// Hermitian elements have three real eigenvalues, so a negative discriminant is
/// rounding noise; the `acos` argument is clamped to `[-1, 1]`.
pub fn cubic_roots(form: &CubicForm) -> [f64; 3] {
    let shift = form.trace / 3.0;
    let p = form.quadratic - form.trace * form.trace / 3.0;
    let q = -2.0 * form.trace.powi(3) / 27.0 + form.trace * form.quadratic / 3.0 - form.norm;
    let scale = 1.0 + form.trace.abs() + form.quadratic.abs().sqrt() + form.norm.abs().cbrt();
    if p >= -1e-30 * scale * scale {
        // triple root (p ≈ 0 forces q ≈ 0 for real-rooted cubics)
        return [shift; 3];
    }
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
    let phi = arg.acos() / 3.0;
    let mut roots = [0, 1, 2].map(|k| shift + m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos());
    roots.sort_by(f64::total_cmp);
    roots
}

fn newton_polish(form: &CubicForm, x0: f64) -> f64 {
    let mut x = x0;
    let mut fx = form.eval(x).abs();
    for _ in 0..4 {
        let d = form.derivative(x);
        if d == 0.0 {
            break;
        }
        let next = x - form.eval(x) / d;
        let fn_ = form.eval(next).abs();
        if fn_ < fx {
            x = next;
            fx = fn_;
        } else {
            break;
        }
    }
    x
}

/// Element of the complexification `H₃(𝕆)^ℂ`, stored as `re + i·im`.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct ComplexAlbert {
    pub re: AlbertElement,
    pub im: AlbertElement,
}

impl ComplexAlbert {
    pub fn real(re: AlbertElement) -> Self {
        ComplexAlbert { re, im: AlbertElement::zero() }
    }

    /// Complex-bilinear extension of the Jordan product.
    pub fn jordan_mul(&self, other: &ComplexAlbert) -> ComplexAlbert {
        ComplexAlbert {
            re: self.re.jordan_mul(&other.re) - self.im.jordan_mul(&other.im),
            im: self.re.jordan_mul(&other.im) + self.im.jordan_mul(&other.re),
        }
    }

    pub fn conj(&self) -> ComplexAlbert {
        ComplexAlbert { re: self.re, im: self.im.scale(-1.0) }
    }
}
