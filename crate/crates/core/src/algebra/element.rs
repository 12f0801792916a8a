use std::ops::{Add, Mul, Neg, Sub};

use crate::albert::{AlbertElement, ComplexAlbert};
use crate::error::{Error, Result};
use crate::linalg::{c, max_abs, re, transpose_asymmetry, CMatrix, CVector, C64};

use super::descriptor::{AlgebraDescriptor, FactorKind};

/// Entrywise tolerance for transpose symmetry of `Sₙ(ℂ)` payloads.
pub const TOL_SYM: f64 = 1e-12;

/// Payload of one summand.
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Block {
    /// `Mₙ(ℂ)` and `Sₙ(ℂ)` summands.
    Matrix(CMatrix),
    /// `scalar ⊕ vector` in a spin factor.
    Spin { scalar: C64, vector: CVector },
    Albert(ComplexAlbert),
}

impl Block {
    pub fn zero(kind: FactorKind) -> Block {
        match kind {
            FactorKind::Matrix(n) | FactorKind::Symmetric(n) => Block::Matrix(CMatrix::zeros(n, n)),
            FactorKind::Spin(k) => Block::Spin { scalar: re(0.0), vector: CVector::zeros(k) },
            FactorKind::Albert => Block::Albert(ComplexAlbert::default()),
        }
    }

    pub fn unit(kind: FactorKind) -> Block {
        match kind {
            FactorKind::Matrix(n) | FactorKind::Symmetric(n) => Block::Matrix(CMatrix::identity(n, n)),
            FactorKind::Spin(k) => Block::Spin { scalar: re(1.0), vector: CVector::zeros(k) },
            FactorKind::Albert => Block::Albert(ComplexAlbert::real(AlbertElement::unit())),
        }
    }

    fn fits(&self, kind: FactorKind) -> bool {
        match (self, kind) {
            (Block::Matrix(m), FactorKind::Matrix(n)) => m.nrows() == n && m.ncols() == n,
            (Block::Matrix(m), FactorKind::Symmetric(n)) => {
                m.nrows() == n && m.ncols() == n && transpose_asymmetry(m) <= TOL_SYM
            }
            (Block::Spin { vector, .. }, FactorKind::Spin(k)) => vector.len() == k,
            (Block::Albert(_), FactorKind::Albert) => true,
            _ => false,
        }
    }

    pub(crate) fn zip(&self, other: &Block, f: impl Fn(C64, C64) -> C64) -> Block {
        match (self, other) {
            (Block::Matrix(a), Block::Matrix(b)) => Block::Matrix(a.zip_map(b, &f)),
            (Block::Spin { scalar: a, vector: u }, Block::Spin { scalar: b, vector: v }) => {
                Block::Spin { scalar: f(*a, *b), vector: u.zip_map(v, &f) }
            }
            (Block::Albert(a), Block::Albert(b)) => {
                let mut out = [0.0; 54];
                let (ar, ai, br, bi) =
                    (a.re.coordinates(), a.im.coordinates(), b.re.coordinates(), b.im.coordinates());
                for k in 0..27 {
                    let z = f(c(ar[k], ai[k]), c(br[k], bi[k]));
                    out[k] = z.re;
                    out[27 + k] = z.im;
                }
                Block::Albert(ComplexAlbert {
                    re: AlbertElement::from_coordinates(&out[..27]),
                    im: AlbertElement::from_coordinates(&out[27..]),
                })
            }
            _ => unreachable!("block shapes are fixed by the descriptor"),
        }
    }

    pub(crate) fn map(&self, f: impl Fn(C64) -> C64) -> Block {
        self.zip(self, |a, _| f(a))
    }

    pub fn scale(&self, s: C64) -> Block {
        self.map(|z| z * s)
    }

    /// The involution: adjoint on `Mₙ`, entrywise conjugation on `Sₙ` and on spin/Albert coefficients.
    pub fn star(&self, kind: FactorKind) -> Block {
        match (self, kind) {
            (Block::Matrix(m), FactorKind::Matrix(_)) => Block::Matrix(m.adjoint()),
            _ => self.map(|z| z.conj()),
        }
    }

    pub fn jordan(&self, other: &Block) -> Block {
        match (self, other) {
            (Block::Matrix(a), Block::Matrix(b)) => {
                let ab = a * b;
                let ba = b * a;
                Block::Matrix((ab + ba).scale(0.5))
            }
            (Block::Spin { scalar: a, vector: u }, Block::Spin { scalar: b, vector: v }) => {
                let inner: C64 = u.iter().zip(v.iter()).map(|(x, y)| x * y).sum();
                Block::Spin { scalar: a * b + inner, vector: v * *a + u * *b }
            }
            (Block::Albert(a), Block::Albert(b)) => Block::Albert(a.jordan_mul(b)),
            _ => unreachable!("block shapes are fixed by the descriptor"),
        }
    }

    /// `U_a(b)`; `a·b·a` in the envelope.
    pub fn u_map(&self, b: &Block) -> Block {
        match (self, b) {
            (Block::Matrix(a), Block::Matrix(m)) => Block::Matrix(a * m * a),
            _ => {
                let ab = self.jordan(b);
                let twice = ab.jordan(self).scale(re(2.0));
                twice.zip(&self.jordan(self).jordan(b), |x, y| x - y)
            }
        }
    }

    /// `U_{a,c}(b) = (a∘b)∘c + (b∘c)∘a − (a∘c)∘b`; `½(abc + cba)` in the envelope.
    pub fn u_bilinear(&self, cc: &Block, b: &Block) -> Block {
        match (self, cc, b) {
            (Block::Matrix(a), Block::Matrix(cm), Block::Matrix(bm)) => {
                Block::Matrix((a * bm * cm + cm * bm * a).scale(0.5))
            }
            _ => {
                let t1 = self.jordan(b).jordan(cc);
                let t2 = b.jordan(cc).jordan(self);
                let t3 = self.jordan(cc).jordan(b);
                t1.zip(&t2, |x, y| x + y).zip(&t3, |x, y| x - y)
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        match self {
            Block::Matrix(m) => max_abs(m),
            Block::Spin { scalar, vector } => {
                vector.iter().fold(scalar.norm(), |acc, z| acc.max(z.norm()))
            }
            Block::Albert(a) => a.re.max_abs().max(a.im.max_abs()),
        }
    }

    pub(crate) fn is_exact_zero(&self) -> bool {
        match self {
            Block::Matrix(m) => m.iter().all(|z| *z == re(0.0)),
            Block::Spin { scalar, vector } => *scalar == re(0.0) && vector.iter().all(|z| *z == re(0.0)),
            Block::Albert(a) => a.re == AlbertElement::zero() && a.im == AlbertElement::zero(),
        }
    }
}

/// An element of a finite direct sum: one [`Block`] per summand.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    descriptor: AlgebraDescriptor,
    blocks: Vec<Block>,
}

impl Element {
    pub fn from_blocks(descriptor: AlgebraDescriptor, blocks: Vec<Block>) -> Result<Element> {
        if blocks.len() != descriptor.len() {
            return Err(Error::InvalidDescriptor(format!(
                "{} blocks supplied for {} summands of {descriptor}",
                blocks.len(),
                descriptor.len()
            )));
        }
        for (i, (b, k)) in blocks.iter().zip(descriptor.summands()).enumerate() {
            if !b.fits(*k) {
                return Err(Error::InvalidDescriptor(format!("block {i} does not fit summand {k}")));
            }
        }
        Ok(Element { descriptor, blocks })
    }

    pub(crate) fn from_blocks_unchecked(descriptor: AlgebraDescriptor, blocks: Vec<Block>) -> Element {
        debug_assert_eq!(descriptor.len(), blocks.len());
        Element { descriptor, blocks }
    }

    /// Single-summand `Mₙ(ℂ)` element.
    pub fn matrix(m: CMatrix) -> Result<Element> {
        let kind = FactorKind::Matrix(m.nrows());
        Element::from_blocks(AlgebraDescriptor::single(kind)?, vec![Block::Matrix(m)])
    }

    /// Single-summand `Sₙ(ℂ)` element; the payload must be transpose-symmetric.
    pub fn symmetric(m: CMatrix) -> Result<Element> {
        let kind = FactorKind::Symmetric(m.nrows());
        Element::from_blocks(AlgebraDescriptor::single(kind)?, vec![Block::Matrix(m)])
    }

    /// Single-summand element from real row data.
    pub fn from_real_rows(kind: FactorKind, rows: &[&[f64]]) -> Result<Element> {
        let n = rows.len();
        let m = CMatrix::from_fn(n, n, |i, j| re(rows[i][j]));
        Element::from_blocks(AlgebraDescriptor::single(kind)?, vec![Block::Matrix(m)])
    }

    /// `scalar ⊕ vector` in the spin factor of dimension `vector.len()`.
    pub fn spin(scalar: C64, vector: CVector) -> Result<Element> {
        let kind = FactorKind::Spin(vector.len());
        Element::from_blocks(AlgebraDescriptor::single(kind)?, vec![Block::Spin { scalar, vector }])
    }

    /// Real `scalar ⊕ vector` in a spin factor.
    pub fn spin_real(scalar: f64, vector: &[f64]) -> Result<Element> {
        Element::spin(re(scalar), CVector::from_iterator(vector.len(), vector.iter().map(|&x| re(x))))
    }

    pub fn albert(a: ComplexAlbert) -> Element {
        Element {
            descriptor: AlgebraDescriptor::single(FactorKind::Albert).expect("albert is valid"),
            blocks: vec![Block::Albert(a)],
        }
    }

    /// Real diagonal element of a single `Mₙ` or `Sₙ` summand.
    pub fn real_diagonal(kind: FactorKind, diag: &[f64]) -> Result<Element> {
        let m = CMatrix::from_fn(diag.len(), diag.len(), |i, j| if i == j { re(diag[i]) } else { re(0.0) });
        Element::from_blocks(AlgebraDescriptor::single(kind)?, vec![Block::Matrix(m)])
    }

    /// Direct sum of elements, concatenating summands in order.
    pub fn direct_sum(parts: &[Element]) -> Result<Element> {
        let summands = parts.iter().flat_map(|p| p.descriptor.summands().iter().copied()).collect();
        let blocks = parts.iter().flat_map(|p| p.blocks.iter().cloned()).collect();
        Ok(Element { descriptor: AlgebraDescriptor::new(summands)?, blocks })
    }

    pub fn zero(descriptor: &AlgebraDescriptor) -> Element {
        let blocks = descriptor.summands().iter().map(|k| Block::zero(*k)).collect();
        Element { descriptor: descriptor.clone(), blocks }
    }

    pub fn unit(descriptor: &AlgebraDescriptor) -> Element {
        Element::central(descriptor, &vec![1.0; descriptor.len()])
    }

    /// Central element `Σ zᵢ 1ᵢ`.
    pub fn central(descriptor: &AlgebraDescriptor, values: &[f64]) -> Element {
        assert_eq!(values.len(), descriptor.len());
        let blocks = descriptor
            .summands()
            .iter()
            .zip(values)
            .map(|(k, z)| Block::unit(*k).scale(re(*z)))
            .collect();
        Element { descriptor: descriptor.clone(), blocks }
    }

    /// Unit of summand `i`, zero elsewhere.
    pub fn summand_unit(descriptor: &AlgebraDescriptor, i: usize) -> Element {
        let mut v = vec![0.0; descriptor.len()];
        v[i] = 1.0;
        Element::central(descriptor, &v)
    }

    /// Keeps summand `i` and zeroes the others.
    pub fn restrict(&self, i: usize) -> Element {
        let blocks = self
            .blocks
            .iter()
            .zip(self.descriptor.summands())
            .enumerate()
            .map(|(j, (b, k))| if i == j { b.clone() } else { Block::zero(*k) })
            .collect();
        Element { descriptor: self.descriptor.clone(), blocks }
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.descriptor
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &Block {
        &self.blocks[i]
    }

    /// Matrix payload of summand `i`, if it is a matrix summand.
    pub fn matrix_block(&self, i: usize) -> Option<&CMatrix> {
        match &self.blocks[i] {
            Block::Matrix(m) => Some(m),
            _ => None,
        }
    }

    pub(crate) fn kinds_blocks(&self) -> impl Iterator<Item = (FactorKind, &Block)> {
        self.descriptor.summands().iter().copied().zip(self.blocks.iter())
    }

    fn combine(&self, other: &Element, f: impl Fn(&Block, &Block) -> Block) -> Element {
        assert_eq!(
            self.descriptor, other.descriptor,
            "arithmetic needs equal descriptors ({} vs {})",
            self.descriptor, other.descriptor
        );
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect();
        Element { descriptor: self.descriptor.clone(), blocks }
    }

    fn each(&self, f: impl Fn(FactorKind, &Block) -> Block) -> Element {
        let blocks = self.kinds_blocks().map(|(k, b)| f(k, b)).collect();
        Element { descriptor: self.descriptor.clone(), blocks }
    }

    pub fn scale(&self, s: f64) -> Element {
        self.scale_complex(re(s))
    }

    pub fn scale_complex(&self, s: C64) -> Element {
        self.each(|_, b| b.scale(s))
    }

    /// The involution `a ↦ a*`.
    pub fn star(&self) -> Element {
        self.each(|k, b| b.star(k))
    }

    /// Jordan product. Panics on descriptor mismatch; see [`jordan_mul`] for the checked form.
    pub fn circ(&self, other: &Element) -> Element {
        self.combine(other, |a, b| a.jordan(b))
    }

    /// `U_a(b)`. Panics on descriptor mismatch; see [`u_map`].
    pub fn u(&self, b: &Element) -> Element {
        self.combine(b, |a, m| a.u_map(m))
    }

    /// `U_{a,c}(b)`. Panics on descriptor mismatch; see [`u_bilinear`].
    pub fn u2(&self, c: &Element, b: &Element) -> Element {
        assert!(
            self.descriptor == c.descriptor && self.descriptor == b.descriptor,
            "arithmetic needs equal descriptors"
        );
        let blocks = self
            .blocks
            .iter()
            .zip(&c.blocks)
            .zip(&b.blocks)
            .map(|((a, cc), bb)| a.u_bilinear(cc, bb))
            .collect();
        Element { descriptor: self.descriptor.clone(), blocks }
    }

    pub fn square(&self) -> Element {
        self.circ(self)
    }

    /// Hermitian part `(x + x*)/2`.
    pub fn real_part(&self) -> Element {
        (self + &self.star()).scale(0.5)
    }

    /// Skew part as a self-adjoint element: `(x − x*)/(2i)`.
    pub fn imag_part(&self) -> Element {
        (self - &self.star()).scale_complex(c(0.0, -0.5))
    }

    /// Largest entry modulus over all coordinates.
    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().fold(0.0, |acc, b| acc.max(b.max_abs()))
    }

    pub fn is_exact_zero(&self) -> bool {
        self.blocks.iter().all(Block::is_exact_zero)
    }
}

/// Checked Jordan product `½(ab + ba)`.
pub fn jordan_mul(a: &Element, b: &Element) -> Result<Element> {
    a.descriptor.ensure_same(&b.descriptor)?;
    Ok(a.circ(b))
}

/// Checked `U_{a,c}(b)`.
pub fn u_bilinear(a: &Element, c: &Element, b: &Element) -> Result<Element> {
    a.descriptor.ensure_same(&c.descriptor)?;
    a.descriptor.ensure_same(&b.descriptor)?;
    Ok(a.u2(c, b))
}

/// Checked `U_a(b)`.
pub fn u_map(a: &Element, b: &Element) -> Result<Element> {
    a.descriptor.ensure_same(&b.descriptor)?;
    Ok(a.u(b))
}

/// `{a, b, c} = U_{a,c}(b*)`.
pub fn triple_product(a: &Element, b: &Element, c: &Element) -> Result<Element> {
    u_bilinear(a, c, &b.star())
}

pub fn involution(a: &Element) -> Element {
    a.star()
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Element> for &Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                self.combine(rhs, |a, b| a.zip(b, |x, y| x $op y))
            }
        }
        impl $trait<Element> for Element {
            type Output = Element;
            fn $method(self, rhs: Element) -> Element {
                &self $op &rhs
            }
        }
        impl $trait<&Element> for Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                &self $op rhs
            }
        }
        impl $trait<Element> for &Element {
            type Output = Element;
            fn $method(self, rhs: Element) -> Element {
                self $op &rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}

impl Mul<&Element> for f64 {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        rhs.scale(self)
    }
}

impl Mul<Element> for f64 {
    type Output = Element;
    fn mul(self, rhs: Element) -> Element {
        rhs.scale(self)
    }
}
