//! Rademacher and generalized Walsh functions of order `a`, evaluated
//! exactly as exponents of `ω = e^{2πi/a}`.
//!
//! `φ_j` takes the value `ω^{x_{j+1}}` on a cell whose a-adic digits are
//! `x_1 x_2 ...`. For `n = Σ d_j a^j`, `ψ_n = Π φ_j^{d_j}`, so its exponent on
//! a cell is the digit dot product `Σ d_j · x_{j+1} mod a` (Paley order).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::radix::{digits, AdicCell, Limits, Order};

/// A power `ω_a^e`, `0 <= e < a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZaExponent {
    e: u32,
    order: Order,
}

impl ZaExponent {
    pub fn new(e: u32, order: Order) -> Self {
        ZaExponent {
            e: e % order.get(),
            order,
        }
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn value(&self) -> Complex64 {
        root_of_unity(self.order, self.e)
    }
}

impl std::ops::Add for ZaExponent {
    type Output = ZaExponent;

    fn add(self, rhs: ZaExponent) -> ZaExponent {
        debug_assert_eq!(self.order, rhs.order);
        ZaExponent::new(self.e + rhs.e, self.order)
    }
}

/// `e^{2πi e / a}`. Quarter turns are returned exactly.
pub fn root_of_unity(order: Order, e: u32) -> Complex64 {
    let a = order.get();
    let e = e % a;
    if (4 * e).is_multiple_of(a) {
        return match 4 * e / a {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let theta = std::f64::consts::TAU * f64::from(e) / f64::from(a);
    Complex64::new(theta.cos(), theta.sin())
}

/// Table of all `a`-th roots of unity.
pub fn roots_table(order: Order) -> Vec<Complex64> {
    (0..order.get()).map(|e| root_of_unity(order, e)).collect()
}

/// Exponent of `φ_j` on `cell`: the digit `x_{j+1}`.
pub fn rademacher_exponent(j: u32, cell: &AdicCell) -> Result<ZaExponent> {
    if j + 1 > cell.resolution() {
        return Err(Error::ResolutionTooCoarse {
            resolution: cell.resolution(),
            needed: format!("at least {} for φ_{}", j + 1, j),
        });
    }
    Ok(ZaExponent::new(cell.digit(j + 1), cell.order()))
}

/// Exponent of `ψ_n` on `cell`.
pub fn walsh_exponent(n: u64, cell: &AdicCell) -> Result<ZaExponent> {
    let order = cell.order();
    if order.digits_needed(n) > cell.resolution() {
        return Err(Error::ResolutionTooCoarse {
            resolution: cell.resolution(),
            needed: format!("a^N > {n}"),
        });
    }
    Ok(ZaExponent::new(
        exponent_unchecked(n, cell.index(), cell.resolution(), order),
        order,
    ))
}

/// `Σ_j d_j(n) · x_{j+1}(m) mod a` with no range checks. `n < a^N`.
#[inline]
pub(crate) fn exponent_unchecked(n: u64, m: u64, resolution: u32, order: Order) -> u32 {
    let a = order.as_u64();
    // x_{j+1} is digit (N - 1 - j) of m, counted from the least significant.
    let mut nn = n;
    let mut sum = 0u64;
    let mut j = 0;
    while nn > 0 {
        let d = nn % a;
        if d != 0 {
            let shift = resolution - 1 - j;
            let x = (m / a.pow(shift)) % a;
            sum += d * x;
        }
        nn /= a;
        j += 1;
    }
    (sum % a) as u32
}

/// A complex function constant on every resolution-`N` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    order: Order,
    resolution: u32,
    values: Vec<Complex64>,
}

impl StepFunction {
    pub fn new(order: Order, resolution: u32, values: Vec<Complex64>) -> Result<Self> {
        let cells = order.pow(resolution)?;
        if values.len() as u64 != cells {
            return Err(Error::NotPowerOfOrder {
                len: values.len(),
                order: order.get(),
            });
        }
        Ok(StepFunction {
            order,
            resolution,
            values,
        })
    }

    /// Infers the resolution from the length of `values`.
    pub fn from_values(order: Order, values: Vec<Complex64>) -> Result<Self> {
        let resolution = order.ceil_log(values.len() as u64);
        if order.pow(resolution)? != values.len() as u64 {
            return Err(Error::NotPowerOfOrder {
                len: values.len(),
                order: order.get(),
            });
        }
        Ok(StepFunction {
            order,
            resolution,
            values,
        })
    }

    pub fn zeros(order: Order, resolution: u32) -> Result<Self> {
        let cells = order.pow(resolution)? as usize;
        Ok(StepFunction {
            order,
            resolution,
            values: vec![Complex64::new(0.0, 0.0); cells],
        })
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `∫_0^1 f`, the mean of the cell values.
    pub fn integral(&self) -> Complex64 {
        let n = self.values.len() as f64;
        let re = crate::sum::pairwise(self.values.len(), |m| self.values[m].re);
        let im = crate::sum::pairwise(self.values.len(), |m| self.values[m].im);
        Complex64::new(re / n, im / n)
    }

    /// The same function on a grid `a` times finer.
    pub fn refine(&self) -> Result<StepFunction> {
        let a = self.order.as_usize();
        self.order.pow(self.resolution + 1)?;
        let values = self
            .values
            .iter()
            .flat_map(|&v| std::iter::repeat_n(v, a))
            .collect();
        Ok(StepFunction {
            order: self.order,
            resolution: self.resolution + 1,
            values,
        })
    }

    /// Pointwise `self - other` on a common grid.
    pub fn sub(&self, other: &StepFunction) -> Result<StepFunction> {
        self.zip_with(other, |x, y| x - y)
    }

    /// Pointwise `self + other` on a common grid.
    pub fn add(&self, other: &StepFunction) -> Result<StepFunction> {
        self.zip_with(other, |x, y| x + y)
    }

    fn zip_with(
        &self,
        other: &StepFunction,
        op: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<StepFunction> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                expected: self.order.get(),
                got: other.order.get(),
            });
        }
        if self.resolution != other.resolution {
            return Err(Error::OutOfRange(format!(
                "resolution mismatch: {} vs {}",
                self.resolution, other.resolution
            )));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&x, &y)| op(x, y))
            .collect();
        Ok(StepFunction {
            order: self.order,
            resolution: self.resolution,
            values,
        })
    }
}

/// `ψ_n` sampled on the resolution-`N` grid.
pub fn sample_walsh(n: u64, resolution: u32, order: Order) -> Result<StepFunction> {
    sample_walsh_with(n, resolution, order, &Limits { cell_cap: u64::MAX })
}

pub fn sample_walsh_with(
    n: u64,
    resolution: u32,
    order: Order,
    limits: &Limits,
) -> Result<StepFunction> {
    let cells = order.cells(resolution, limits)?;
    if order.digits_needed(n) > resolution {
        return Err(Error::ResolutionTooCoarse {
            resolution,
            needed: format!("a^N > {n}"),
        });
    }
    let roots = roots_table(order);
    let nd = digits(n, order);
    let a = order.as_u64();
    // Per-digit strides of the cell index for x_{j+1}.
    let strides: Vec<(u64, u64)> = nd
        .digits()
        .iter()
        .enumerate()
        .filter(|(_, &d)| d != 0)
        .map(|(j, &d)| (a.pow(resolution - 1 - j as u32), u64::from(d)))
        .collect();
    let values = (0..cells)
        .into_par_iter()
        .map(|m| {
            let e = strides
                .iter()
                .fold(0u64, |acc, &(s, d)| acc + d * ((m / s) % a));
            roots[(e % a) as usize]
        })
        .collect();
    Ok(StepFunction {
        order,
        resolution,
        values,
    })
}
