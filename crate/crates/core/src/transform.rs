//! Forward and inverse Chrestenson transform on resolution-`N` grids.
//!
//! The fast path is a radix-`a` decimation: `N` passes of length-`a` DFTs,
//! one pass per digit of the cell index, using only the `a`-th roots of unity.
//! Pass `p` turns digit `p` of the cell index into the frequency digit paired
//! with it, which leaves the coefficients in digit-reversed order; the last
//! step restores natural (Paley) order.
//!
//! Normalization: the forward transform is the integral
//! `a_n(f) = ∫ f · conj(ψ_n)` and carries `1/a^N`; the inverse carries none.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::radix::{Limits, Order};
use crate::walsh::{exponent_unchecked, roots_table, StepFunction};

/// Coefficients `a_n(f)` for `n = 0..len`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    order: Order,
    coefficients: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(order: Order, coefficients: Vec<Complex64>) -> Self {
        Spectrum {
            order,
            coefficients,
        }
    }

    pub fn zeros(order: Order, len: usize) -> Self {
        Spectrum {
            order,
            coefficients: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    /// Spectrum with a single unit coefficient at `n`.
    pub fn unit(order: Order, len: usize, n: usize) -> Self {
        let mut s = Spectrum::zeros(order, len);
        s.coefficients[n] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex64] {
        &mut self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `Σ |c_n|^2`.
    pub fn energy(&self) -> f64 {
        crate::sum::pairwise(self.len(), |n| self.coefficients[n].norm_sqr())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Analysis,
    Synthesis,
}

/// Index with its `resolution` base-a digits reversed.
fn digit_reverse(mut n: usize, resolution: u32, a: usize) -> usize {
    let mut r = 0;
    for _ in 0..resolution {
        r = r * a + n % a;
        n /= a;
    }
    r
}

fn butterflies(data: &mut [Complex64], order: Order, resolution: u32, dir: Direction) {
    let a = order.as_usize();
    let mut roots = roots_table(order);
    if dir == Direction::Analysis {
        roots.iter_mut().for_each(|w| *w = w.conj());
    }
    let mut stride = 1usize;
    for _ in 0..resolution {
        let span = stride * a;
        let pass = |block: &mut [Complex64]| {
            let mut gathered = vec![Complex64::new(0.0, 0.0); a];
            for t in 0..stride {
                for (q, g) in gathered.iter_mut().enumerate() {
                    *g = block[t + q * stride];
                }
                for r in 0..a {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (q, g) in gathered.iter().enumerate() {
                        acc += g * roots[(r * q) % a];
                    }
                    block[t + r * stride] = acc;
                }
            }
        };
        if data.len() / span >= 4 && data.len() >= 1 << 14 {
            data.par_chunks_mut(span).for_each(pass);
        } else {
            data.chunks_mut(span).for_each(pass);
        }
        stride = span;
    }
}

fn permute_digit_reversed(data: &[Complex64], resolution: u32, a: usize) -> Vec<Complex64> {
    (0..data.len())
        .into_par_iter()
        .map(|n| data[digit_reverse(n, resolution, a)])
        .collect()
}

/// Fast forward transform, `O(N · a^{N+1})`.
pub fn forward(f: &StepFunction) -> Spectrum {
    let order = f.order();
    let a = order.as_usize();
    let resolution = f.resolution();
    let mut data = f.values().to_vec();
    butterflies(&mut data, order, resolution, Direction::Analysis);
    let scale = 1.0 / data.len() as f64;
    let mut out = permute_digit_reversed(&data, resolution, a);
    out.iter_mut().for_each(|c| *c *= scale);
    Spectrum {
        order,
        coefficients: out,
    }
}

/// Forward transform of a raw value vector whose length must be `a^N`.
pub fn forward_values(order: Order, values: Vec<Complex64>) -> Result<Spectrum> {
    Ok(forward(&StepFunction::from_values(order, values)?))
}

/// Synthesis `Σ_n c_n ψ_n` on the resolution-`N` grid.
pub fn inverse(spectrum: &Spectrum, resolution: u32) -> Result<StepFunction> {
    inverse_with(spectrum, resolution, &Limits { cell_cap: u64::MAX })
}

pub fn inverse_with(spectrum: &Spectrum, resolution: u32, limits: &Limits) -> Result<StepFunction> {
    let order = spectrum.order();
    let a = order.as_usize();
    let cells = order.cells(resolution, limits)? as usize;
    if spectrum.len() > cells {
        return Err(Error::ResolutionTooCoarse {
            resolution,
            needed: format!("a^N >= {} coefficients", spectrum.len()),
        });
    }
    let mut data = vec![Complex64::new(0.0, 0.0); cells];
    for (n, &c) in spectrum.coefficients().iter().enumerate() {
        data[digit_reverse(n, resolution, a)] = c;
    }
    butterflies(&mut data, order, resolution, Direction::Synthesis);
    StepFunction::new(order, resolution, data)
}

/// Literal double-sum transform for one `(order, resolution)`; the exponent
/// table is built once and reused across inputs.
pub struct NaiveTransform {
    order: Order,
    resolution: u32,
    cells: usize,
    exponents: Vec<u8>,
}

impl NaiveTransform {
    pub fn new(order: Order, resolution: u32) -> Result<Self> {
        let cells = order.pow(resolution)? as usize;
        if cells > 1 << 13 {
            return Err(Error::OutOfRange(format!(
                "naive transform limited to 8192 cells, got {cells}"
            )));
        }
        let exponents = (0..cells * cells)
            .into_par_iter()
            .map(|idx| {
                let (n, m) = (idx / cells, idx % cells);
                exponent_unchecked(n as u64, m as u64, resolution, order) as u8
            })
            .collect();
        Ok(NaiveTransform {
            order,
            resolution,
            cells,
            exponents,
        })
    }

    /// `a_n = (1/a^N) Σ_m f_m conj(ψ_n(m))`.
    pub fn forward(&self, f: &StepFunction) -> Result<Spectrum> {
        if f.order() != self.order {
            return Err(Error::OrderMismatch {
                expected: self.order.get(),
                got: f.order().get(),
            });
        }
        if f.resolution() != self.resolution {
            return Err(Error::OutOfRange("resolution mismatch".into()));
        }
        let conj_roots: Vec<Complex64> = roots_table(self.order).iter().map(|w| w.conj()).collect();
        let cells = self.cells;
        let values = f.values();
        let scale = 1.0 / cells as f64;
        let coefficients = (0..cells)
            .into_par_iter()
            .map(|n| {
                let row = &self.exponents[n * cells..(n + 1) * cells];
                let mut acc = Complex64::new(0.0, 0.0);
                for (v, &e) in values.iter().zip(row) {
                    acc += v * conj_roots[e as usize];
                }
                acc * scale
            })
            .collect();
        Ok(Spectrum {
            order: self.order,
            coefficients,
        })
    }
}

/// Literal `O(a^{2N})` forward transform.
pub fn naive_forward(f: &StepFunction) -> Result<Spectrum> {
    NaiveTransform::new(f.order(), f.resolution())?.forward(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walsh::sample_walsh;

    fn order(a: u32) -> Order {
        Order::new(a).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn max_diff(x: &[Complex64], y: &[Complex64]) -> f64 {
        x.iter()
            .zip(y)
            .map(|(p, q)| (p - q).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn constant_has_dc_only() {
        for a in [2u32, 3, 5] {
            let f = StepFunction::new(order(a), 3, vec![c(1.0); (a * a * a) as usize]).unwrap();
            let s = forward(&f);
            assert!((s.coefficients()[0] - c(1.0)).norm() < 1e-15);
            assert!(s.coefficients()[1..].iter().all(|z| z.norm() < 1e-14));
            let s = naive_forward(&f).unwrap();
            assert!((s.coefficients()[0] - c(1.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn walsh_maps_to_unit_vector() {
        let o = order(3);
        for n in [0u64, 1, 4, 13, 26] {
            let s = forward(&sample_walsh(n, 3, o).unwrap());
            for (k, z) in s.coefficients().iter().enumerate() {
                let expect = if k as u64 == n { 1.0 } else { 0.0 };
                assert!((z - c(expect)).norm() < 1e-14, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn unit_synthesis_is_walsh() {
        for a in [2u32, 3, 5] {
            let o = order(a);
            let len = (a * a) as usize;
            for n in 0..len {
                let f = inverse(&Spectrum::unit(o, len, n), 2).unwrap();
                let g = sample_walsh(n as u64, 2, o).unwrap();
                assert!(max_diff(f.values(), g.values()) < 1e-14);
            }
        }
    }

    /// Brute-force evaluation of `Σ c_n ψ_n` by sign tables for `a = 2`.
    fn brute_synthesis_a2(coeffs: &[f64], resolution: u32) -> Vec<f64> {
        let cells = 1usize << resolution;
        (0..cells)
            .map(|m| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(n, &cn)| {
                        // x_{j+1} = bit (N-1-j) of m; ψ_n = (-1)^{Σ n_j x_{j+1}}
                        let mut e = 0;
                        for j in 0..resolution {
                            if (n >> j) & 1 == 1 {
                                e += (m >> (resolution - 1 - j)) & 1;
                            }
                        }
                        if e % 2 == 0 {
                            cn
                        } else {
                            -cn
                        }
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn two_term_synthesis() {
        let o = order(2);
        // 0.5ψ_2 + 0.375ψ_3
        let coeffs = [0.0, 0.0, 0.5, 0.375];
        let brute = brute_synthesis_a2(&coeffs, 2);
        assert_eq!(brute, vec![0.875, -0.875, 0.125, -0.125]);
        let s = Spectrum::new(o, coeffs.iter().map(|&x| c(x)).collect());
        let f = inverse(&s, 2).unwrap();
        let got: Vec<f64> = f.values().iter().map(|z| z.re).collect();
        assert_eq!(got, brute);

        // 0.5ψ_1 + 0.375ψ_2
        let coeffs = [0.0, 0.5, 0.375];
        let brute = brute_synthesis_a2(&coeffs, 2);
        assert_eq!(brute, vec![0.875, 0.125, -0.125, -0.875]);
        let s = Spectrum::new(o, coeffs.iter().map(|&x| c(x)).collect());
        let got: Vec<f64> = inverse(&s, 2)
            .unwrap()
            .values()
            .iter()
            .map(|z| z.re)
            .collect();
        assert_eq!(got, brute);
    }

    #[test]
    fn too_many_coefficients() {
        let s = Spectrum::zeros(order(2), 5);
        assert!(matches!(
            inverse(&s, 2),
            Err(Error::ResolutionTooCoarse { .. })
        ));
    }

    #[test]
    fn bad_length() {
        assert!(forward_values(order(3), vec![c(0.0); 10]).is_err());
    }

    #[test]
    fn digit_reverse_involution() {
        for n in 0..125 {
            assert_eq!(digit_reverse(digit_reverse(n, 3, 5), 3, 5), n);
        }
        assert_eq!(digit_reverse(1, 3, 2), 4);
    }
}
