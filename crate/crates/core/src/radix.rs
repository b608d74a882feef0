//! Base-a digit arithmetic and the a-adic cell model.
//!
//! Every function handled by this crate is piecewise constant on the cells
//! `I(N, m) = [m / a^N, (m + 1) / a^N)` of some resolution `N`. Cells are
//! half-open on the right; the point 1 is never represented.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported order.
pub const MAX_ORDER: u32 = 16;

/// Largest integer accepted for `a^N` and cell indices.
pub const INDEX_LIMIT: u64 = 1 << 62;

/// Default memory guard: cells per grid.
pub const DEFAULT_CELL_CAP: u64 = 1 << 26;

/// The order `a` of the system, `2 <= a <= 16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Order(u32);

impl Order {
    pub fn new(a: u32) -> Result<Self> {
        if (2..=MAX_ORDER).contains(&a) {
            Ok(Order(a))
        } else {
            Err(Error::InvalidOrder {
                got: a,
                max: MAX_ORDER,
            })
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_u64(self) -> u64 {
        u64::from(self.0)
    }

    #[inline]
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    /// `a^exp`, rejected above [`INDEX_LIMIT`].
    pub fn pow(self, exp: u32) -> Result<u64> {
        self.as_u64()
            .checked_pow(exp)
            .filter(|&v| v <= INDEX_LIMIT)
            .ok_or_else(|| Error::Overflow(format!("{}^{} exceeds 2^62", self.0, exp)))
    }

    /// Number of cells at resolution `resolution`, checked against `limits`.
    pub fn cells(self, resolution: u32, limits: &Limits) -> Result<u64> {
        let cells = self.pow(resolution)?;
        limits.check(cells)?;
        Ok(cells)
    }

    /// Smallest `N` with `a^N >= n` (0 for `n <= 1`).
    pub fn ceil_log(self, n: u64) -> u32 {
        let a = self.as_u64();
        let mut p: u64 = 1;
        let mut exp = 0;
        while p < n {
            p = p.saturating_mul(a);
            exp += 1;
        }
        exp
    }

    /// Smallest `N` with `a^N > n`.
    pub fn digits_needed(self, n: u64) -> u32 {
        let a = self.as_u64();
        let mut exp = 0;
        let mut rest = n;
        while rest > 0 {
            rest /= a;
            exp += 1;
        }
        exp
    }

    /// Exact real logarithm base `a`.
    pub fn log(self, x: f64) -> f64 {
        x.ln() / f64::from(self.0).ln()
    }
}

impl TryFrom<u32> for Order {
    type Error = Error;

    fn try_from(a: u32) -> Result<Self> {
        Order::new(a)
    }
}

impl From<Order> for u32 {
    fn from(o: Order) -> u32 {
        o.0
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Grid size limits (the memory guard).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub cell_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            cell_cap: DEFAULT_CELL_CAP,
        }
    }
}

impl Limits {
    pub fn with_cell_cap(cell_cap: u64) -> Self {
        Limits { cell_cap }
    }

    pub fn check(&self, cells: u64) -> Result<()> {
        if cells > self.cell_cap {
            Err(Error::MemoryGuard {
                cells,
                cap: self.cell_cap,
            })
        } else {
            Ok(())
        }
    }
}

/// Canonical little-endian base-a digits of a non-negative integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitVector {
    digits: Vec<u32>,
    order: Order,
}

impl DigitVector {
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `Σ digits[j] · a^j`.
    pub fn value(&self) -> u64 {
        let a = self.order.as_u64();
        self.digits
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * a + u64::from(d))
    }
}

/// Base-a digits of `n`, least significant first; `digits(0)` is empty.
pub fn digits(n: u64, order: Order) -> DigitVector {
    let a = order.as_u64();
    let mut out = Vec::new();
    let mut rest = n;
    while rest > 0 {
        out.push((rest % a) as u32);
        rest /= a;
    }
    DigitVector { digits: out, order }
}

/// The half-open interval `[index / a^N, (index + 1) / a^N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AdicCell {
    resolution: u32,
    index: u64,
    order: Order,
}

impl AdicCell {
    pub fn new(resolution: u32, index: u64, order: Order) -> Result<Self> {
        let cells = order.pow(resolution)?;
        if index >= cells {
            return Err(Error::CellOutOfRange { index, resolution });
        }
        Ok(AdicCell {
            resolution,
            index,
            order,
        })
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn order(&self) -> Order {
        self.order
    }

    /// Left endpoint as a float.
    pub fn left(&self) -> f64 {
        self.index as f64 / (self.order.as_u64() as f64).powi(self.resolution as i32)
    }

    /// The s-th a-adic digit (`1 <= s <= N`) of every point in the cell.
    #[inline]
    pub fn digit(&self, s: u32) -> u32 {
        debug_assert!(s >= 1 && s <= self.resolution);
        let a = self.order.as_u64();
        let shift = self.resolution - s;
        ((self.index / a.pow(shift)) % a) as u32
    }

    /// Number of leading zero digits `x_1 = ... = x_z = 0`, at most `N`.
    pub fn leading_zeros(&self) -> u32 {
        if self.index == 0 {
            return self.resolution;
        }
        self.resolution - self.order.digits_needed(self.index)
    }
}

/// Digits `x_1 .. x_N` of the cell, most significant first.
pub fn adic_digits(cell: &AdicCell) -> Vec<u32> {
    let a = cell.order.as_u64();
    let mut out = vec![0u32; cell.resolution as usize];
    let mut rest = cell.index;
    for slot in out.iter_mut().rev() {
        *slot = (rest % a) as u32;
        rest /= a;
    }
    out
}
