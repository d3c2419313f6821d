//! Four-component wavefunctions ordered by Fermi number: `(F=0, F=1 first, F=1 second, F=2)`.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::geometry::CartesianPoint;

use super::ModelError;

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Spinor4(pub [Complex64; 4]);

impl Spinor4 {
    pub const ZERO: Spinor4 = Spinor4([Complex64::new(0.0, 0.0); 4]);

    pub fn from_real(c: [f64; 4]) -> Self {
        Spinor4(c.map(|x| Complex64::new(x, 0.0)))
    }

    /// A spinor with a single nonzero component.
    pub fn component(index: usize, value: f64) -> Self {
        let mut s = Spinor4::ZERO;
        s.0[index] = Complex64::new(value, 0.0);
        s
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Spinor4(self.0.map(|c| c * s))
    }

    /// Real 4x4 matrix times spinor.
    pub fn transform(self, m: &[[f64; 4]; 4]) -> Self {
        let mut out = Spinor4::ZERO;
        for (i, row) in m.iter().enumerate() {
            out.0[i] = row.iter().zip(self.0.iter()).map(|(a, c)| c * *a).sum();
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Index<usize> for Spinor4 {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Spinor4 {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl Add for Spinor4 {
    type Output = Spinor4;
    fn add(self, o: Spinor4) -> Spinor4 {
        Spinor4(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Spinor4 {
    type Output = Spinor4;
    fn sub(self, o: Spinor4) -> Spinor4 {
        Spinor4(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for Spinor4 {
    type Output = Spinor4;
    fn neg(self) -> Spinor4 {
        Spinor4(self.0.map(|c| -c))
    }
}

impl Mul<f64> for Spinor4 {
    type Output = Spinor4;
    fn mul(self, s: f64) -> Spinor4 {
        self.scale(s)
    }
}

impl Mul<Complex64> for Spinor4 {
    type Output = Spinor4;
    fn mul(self, s: Complex64) -> Spinor4 {
        Spinor4(self.0.map(|c| c * s))
    }
}

/// Value and first Cartesian partials of a spinor field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorJet {
    pub value: Spinor4,
    pub d1: Spinor4,
    pub d2: Spinor4,
}

/// A spinor-valued field on the plane.
pub trait SpinorField: Sync {
    fn value(&self, p: CartesianPoint) -> Result<Spinor4, ModelError>;

    /// Value and partials; central differences unless overridden.
    fn jet(&self, p: CartesianPoint, h: f64) -> Result<SpinorJet, ModelError> {
        let value = self.value(p)?;
        let d1 = (self.value(p.offset(h, 0.0))? - self.value(p.offset(-h, 0.0))?) * (0.5 / h);
        let d2 = (self.value(p.offset(0.0, h))? - self.value(p.offset(0.0, -h))?) * (0.5 / h);
        Ok(SpinorJet { value, d1, d2 })
    }
}

impl<T: SpinorField + ?Sized> SpinorField for &T {
    fn value(&self, p: CartesianPoint) -> Result<Spinor4, ModelError> {
        (**self).value(p)
    }
    fn jet(&self, p: CartesianPoint, h: f64) -> Result<SpinorJet, ModelError> {
        (**self).jet(p, h)
    }
}

/// Wraps a closure as a [`SpinorField`].
pub struct FnField<F>(pub F);

impl<F> SpinorField for FnField<F>
where
    F: Fn(CartesianPoint) -> Result<Spinor4, ModelError> + Sync,
{
    fn value(&self, p: CartesianPoint) -> Result<Spinor4, ModelError> {
        (self.0)(p)
    }
}
