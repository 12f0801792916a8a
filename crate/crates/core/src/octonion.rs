//! Real octonions built by Cayley-Dickson doubling of the quaternions.
//!
//! Coefficients are stored over the basis `e0..e7`; `e0` is the unit, `e1..e3`
//! span the imaginary quaternions of the first half and `e4..e7` the second
//! half. The doubling rule is `(a, b)(c, d) = (ac - d̄b, da + bc̄)`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Octonion(pub [f64; 8]);

type Quaternion = [f64; 4];

fn q_mul(a: &Quaternion, b: &Quaternion) -> Quaternion {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn q_conj(a: &Quaternion) -> Quaternion {
    [a[0], -a[1], -a[2], -a[3]]
}

impl Octonion {
    pub const ZERO: Octonion = Octonion([0.0; 8]);
    pub const ONE: Octonion = Octonion([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);

    /// The basis unit `e_i`, `i < 8`.
    pub fn unit(i: usize) -> Self {
        let mut c = [0.0; 8];
        c[i] = 1.0;
        Octonion(c)
    }

    pub fn real(x: f64) -> Self {
        Octonion::ONE.scale(x)
    }

    fn halves(&self) -> (Quaternion, Quaternion) {
        let c = &self.0;
        ([c[0], c[1], c[2], c[3]], [c[4], c[5], c[6], c[7]])
    }

    fn from_halves(a: Quaternion, b: Quaternion) -> Self {
        Octonion([a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]])
    }

    pub fn conj(&self) -> Self {
        let mut c = self.0.map(|x| -x);
        c[0] = self.0[0];
        Octonion(c)
    }

    /// Real part, the `e0` coefficient.
    pub fn re(&self) -> f64 {
        self.0[0]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean inner product of coefficient vectors, `Re(x ȳ)`.
    pub fn dot(&self, other: &Octonion) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Octonion(self.0.map(|x| x * s))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }
}

/// Octonion product.
pub fn oct_mul(x: &Octonion, y: &Octonion) -> Octonion {
    let (a, b) = x.halves();
    let (c, d) = y.halves();
    let ac = q_mul(&a, &c);
    let db = q_mul(&q_conj(&d), &b);
    let da = q_mul(&d, &a);
    let bc = q_mul(&b, &q_conj(&c));
    Octonion::from_halves(
        [ac[0] - db[0], ac[1] - db[1], ac[2] - db[2], ac[3] - db[3]],
        [da[0] + bc[0], da[1] + bc[1], da[2] + bc[2], da[3] + bc[3]],
    )
}

impl Mul for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: Octonion) -> Octonion {
        oct_mul(&self, &rhs)
    }
}

impl Mul<f64> for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: f64) -> Octonion {
        self.scale(rhs)
    }
}

impl Add for Octonion {
    type Output = Octonion;
    fn add(self, rhs: Octonion) -> Octonion {
        let mut c = self.0;
        for (ci, r) in c.iter_mut().zip(rhs.0.iter()) {
            *ci += r;
        }
        Octonion(c)
    }
}

impl AddAssign for Octonion {
    fn add_assign(&mut self, rhs: Octonion) {
        *self = *self + rhs;
    }
}

impl Sub for Octonion {
    type Output = Octonion;
    fn sub(self, rhs: Octonion) -> Octonion {
        self + (-rhs)
    }
}

impl Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        Octonion(self.0.map(|x| -x))
    }
}
