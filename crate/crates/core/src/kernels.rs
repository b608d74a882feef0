//! Dirichlet kernels `D_n = Σ_{j<n} ψ_j`, Lebesgue constants `L_n = ‖D_n‖_1`,
//! and the lower bound `L_{n_k} > (k/2 + 1)/a` along the sequence
//! `n_k = a^k + a^{k-2} + ...`.
//!
//! Kernels are kept as exact integer tallies: on each cell, `D_n` is a sum of
//! `n` roots of unity, so it is stored as the count of summands landing on
//! each power `ω^e`. Complex arithmetic happens only when `|D_n|` is taken.
//!
//! The tally on a cell follows the digit recursion
//! `D_{d·a^k + m} = (Σ_{β<d} φ_k^β) · D_{a^k} + φ_k^d · D_m`, unrolled from the
//! top digit of `n` down. `D_{a^k}` vanishes unless the first `k` digits of the
//! cell are zero, where it equals `a^k`; so only the levels `k <= z` (`z` the
//! count of leading zero digits of the cell) contribute.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::radix::{digits, Limits, Order};
use crate::sum;
use crate::walsh::{roots_table, StepFunction};

/// Per-cell counts of each power of `ω` among the `n` summands of `D_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentTally {
    order: Order,
    resolution: u32,
    n: u64,
    counts: Vec<u64>,
}

impl ExponentTally {
    pub fn order(&self) -> Order {
        self.order
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn cells(&self) -> usize {
        self.counts.len() / self.order.as_usize()
    }

    /// Counts for cell `m`, indexed by exponent.
    pub fn cell(&self, m: usize) -> &[u64] {
        let a = self.order.as_usize();
        &self.counts[m * a..(m + 1) * a]
    }

    /// Value on cell `m`; exactly zero wherever [`is_zero_at`](Self::is_zero_at) holds.
    pub fn value(&self, m: usize) -> Complex64 {
        let phi = cyclotomic(self.order.get());
        snapped_value(self.cell(m), &roots_table(self.order), &phi)
    }

    /// Whether the kernel vanishes on cell `m`, decided in integer arithmetic:
    /// `Σ c_e ω^e = 0` iff the cyclotomic polynomial `Φ_a` divides `Σ c_e x^e`.
    pub fn is_zero_at(&self, m: usize) -> bool {
        vanishes(self.cell(m), &cyclotomic(self.order.get()))
    }

    /// The kernel as a complex step function, with exact zeros.
    pub fn to_step_function(&self) -> StepFunction {
        let roots = roots_table(self.order);
        let phi = cyclotomic(self.order.get());
        let a = self.order.as_usize();
        let values = self
            .counts
            .chunks(a)
            .map(|c| snapped_value(c, &roots, &phi))
            .collect();
        StepFunction::new(self.order, self.resolution, values).expect("tally grid is a^N cells")
    }
}

fn vanishes(counts: &[u64], phi: &[i128]) -> bool {
    let counts: Vec<i128> = counts.iter().map(|&c| i128::from(c)).collect();
    reduce_mod_cyclotomic(counts, phi).iter().all(|&c| c == 0)
}

fn snapped_value(counts: &[u64], roots: &[Complex64], phi: &[i128]) -> Complex64 {
    if vanishes(counts, phi) {
        Complex64::new(0.0, 0.0)
    } else {
        tally_value(counts, roots)
    }
}

#[inline]
fn tally_value(counts: &[u64], roots: &[Complex64]) -> Complex64 {
    counts
        .iter()
        .zip(roots)
        .filter(|(&c, _)| c != 0)
        .fold(Complex64::new(0.0, 0.0), |acc, (&c, w)| acc + w * c as f64)
}

fn gcd(mut x: u64, mut y: u64) -> u64 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

/// Integer coefficients of `Φ_a`, lowest degree first.
fn cyclotomic(a: u32) -> Vec<i128> {
    // x^a - 1 = Π_{d | a} Φ_d(x)
    let mut poly = vec![0i128; a as usize + 1];
    poly[0] = -1;
    poly[a as usize] = 1;
    for d in (1..a).filter(|d| a.is_multiple_of(*d)) {
        poly = exact_divide(&poly, &cyclotomic(d));
    }
    poly
}

/// Quotient of monic-divisor polynomial division with zero remainder.
fn exact_divide(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i128; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let q = rem[i + dd];
        quot[i] = q;
        for (j, &c) in den.iter().enumerate() {
            rem[i + j] -= q * c;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

fn reduce_mod_cyclotomic(mut poly: Vec<i128>, phi: &[i128]) -> Vec<i128> {
    let dd = phi.len() - 1;
    for i in (dd..poly.len()).rev() {
        let q = poly[i];
        if q != 0 {
            for (j, &c) in phi.iter().enumerate() {
                poly[i - dd + j] -= q * c;
            }
        }
    }
    poly.truncate(dd);
    poly
}

/// Precomputed digits of `n` for repeated per-cell evaluation.
#[derive(Debug, Clone)]
struct KernelDigits {
    order: Order,
    resolution: u32,
    /// `(level k, digit d_k, a^k)` for nonzero digits, highest level first.
    levels: Vec<(u32, u64, u64)>,
}

impl KernelDigits {
    fn new(n: u64, resolution: u32, order: Order) -> Result<Self> {
        let cells = order.pow(resolution)?;
        if n > cells {
            return Err(Error::ResolutionTooCoarse {
                resolution,
                needed: format!("a^N >= n = {n}"),
            });
        }
        let a = order.as_u64();
        let mut levels = Vec::new();
        let mut scale = 1u64;
        for (k, &d) in digits(n, order).digits().iter().enumerate() {
            if d != 0 {
                levels.push((k as u32, u64::from(d), scale));
            }
            scale = scale.saturating_mul(a);
        }
        levels.reverse();
        Ok(KernelDigits {
            order,
            resolution,
            levels,
        })
    }

    /// Writes the tally of `D_n` on cell `m` into `out` (length `a`).
    ///
    /// On a cell with digits `x_1 x_2 ...`, the exponents of `ψ_j`, `j < a^k`,
    /// are uniform over the multiples of `g_k = gcd(a, x_1, ..., x_k)`, so
    /// `D_{a^k}` has `a^k g_k / a` summands in each of those classes.
    fn tally(&self, m: u64, out: &mut [u64]) {
        let a = self.order.as_u64();
        let res = self.resolution;
        out.iter_mut().for_each(|c| *c = 0);
        let mut xs = [0u64; 64];
        let mut rest = m;
        for s in (0..res as usize).rev() {
            xs[s] = rest % a;
            rest /= a;
        }
        // prefix_gcd[k] = gcd(a, x_1, ..., x_k)
        let mut prefix_gcd = [0u64; 65];
        prefix_gcd[0] = a;
        for k in 0..res as usize {
            prefix_gcd[k + 1] = gcd(prefix_gcd[k], xs[k]);
        }
        let mut phase = 0u64;
        for &(k, d, scale) in &self.levels {
            let k = k as usize;
            // x_{k+1} is past the grid only for n = a^N, where d = 1.
            let x = if k < res as usize { xs[k] } else { 0 };
            let g = prefix_gcd[k.min(res as usize)];
            let per_class = if k == 0 { 1 } else { scale / a * g };
            for beta in 0..d {
                let base = phase + beta * x;
                let mut t = 0;
                while t < a {
                    out[((base + t) % a) as usize] += per_class;
                    t += g;
                }
            }
            phase = (phase + d * x) % a;
        }
    }

    /// Like [`tally`](Self::tally) but drops every complete coset of
    /// `g`-classes with `g < a`, each of which sums to zero. Only the levels
    /// `k <= z` survive, `z` the number of leading zero digits of the cell.
    /// The represented complex value is unchanged.
    fn reduced_tally(&self, m: u64, out: &mut [u64]) {
        let a = self.order.as_u64();
        let res = self.resolution;
        out.iter_mut().for_each(|c| *c = 0);
        let zeros = if m == 0 {
            res
        } else {
            res - self.order.digits_needed(m)
        };
        let digit = |k: u32| -> u64 {
            if k >= res {
                0
            } else {
                (m / a.pow(res - 1 - k)) % a
            }
        };
        let mut phase = 0u64;
        for &(k, d, scale) in &self.levels {
            let x = digit(k);
            if k <= zeros {
                for beta in 0..d {
                    out[((phase + beta * x) % a) as usize] += scale;
                }
            }
            phase = (phase + d * x) % a;
        }
    }

    fn abs_value(&self, m: u64, roots: &[Complex64], buf: &mut [u64]) -> f64 {
        self.reduced_tally(m, buf);
        tally_value(buf, roots).norm()
    }
}

/// Exact tally of `D_n` on the resolution-`N` grid.
pub fn dirichlet(n: u64, resolution: u32, order: Order) -> Result<ExponentTally> {
    dirichlet_with(n, resolution, order, &Limits::default())
}

pub fn dirichlet_with(
    n: u64,
    resolution: u32,
    order: Order,
    limits: &Limits,
) -> Result<ExponentTally> {
    if n == 0 {
        return Err(Error::OutOfRange(
            "Dirichlet kernel index must be >= 1".into(),
        ));
    }
    let cells = order.cells(resolution, limits)? as usize;
    let kd = KernelDigits::new(n, resolution, order)?;
    let a = order.as_usize();
    let mut counts = vec![0u64; cells * a];
    counts
        .par_chunks_mut(a)
        .enumerate()
        .for_each(|(m, out)| kd.tally(m as u64, out));
    Ok(ExponentTally {
        order,
        resolution,
        n,
        counts,
    })
}

/// Integrals of `|D_n|` at a fixed resolution, split as the leftmost cell
/// value and the sum over the remaining cells.
#[derive(Debug, Clone, Copy)]
struct AbsIntegrals {
    cells: u64,
    head: f64,
    tail_sum: f64,
    /// Absolute error bound on `(head + tail_sum) / cells`.
    error_bound: f64,
}

fn abs_integrals(n: u64, resolution: u32, order: Order, limits: &Limits) -> Result<AbsIntegrals> {
    let cells = order.cells(resolution, limits)?;
    let kd = KernelDigits::new(n, resolution, order)?;
    let roots = roots_table(order);
    let a = order.as_usize();
    let head = kd.abs_value(0, &roots, &mut vec![0u64; a]);
    let tail_len = (cells - 1) as usize;
    let tail_sum = sum::pairwise(tail_len, |i| {
        let mut buf = [0u64; crate::radix::MAX_ORDER as usize];
        kd.abs_value(i as u64 + 1, &roots, &mut buf[..a])
    });
    let mean = (head + tail_sum) / cells as f64;
    // Per cell: a rounded products plus the modulus, each relative to at most n.
    let per_cell = (a as f64 + 3.0) * f64::EPSILON * n as f64;
    let summation = (sum::error_factor(cells as usize) + 2.0 * f64::EPSILON) * mean;
    Ok(AbsIntegrals {
        cells,
        head,
        tail_sum,
        error_bound: per_cell + summation,
    })
}

/// `L_n` with a rigorous bound on its floating-point error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lebesgue {
    pub n: u64,
    pub resolution: u32,
    pub value: f64,
    pub error_bound: f64,
}

/// `L_n = ∫_0^1 |D_n|` on the grid `N = ⌈log_a n⌉`.
pub fn lebesgue_constant(n: u64, order: Order) -> Result<f64> {
    Ok(lebesgue(n, order, &Limits::default())?.value)
}

pub fn lebesgue(n: u64, order: Order, limits: &Limits) -> Result<Lebesgue> {
    if n == 0 {
        return Err(Error::OutOfRange(
            "Lebesgue constant index must be >= 1".into(),
        ));
    }
    let resolution = order.ceil_log(n);
    let ints = abs_integrals(n, resolution, order, limits)?;
    Ok(Lebesgue {
        n,
        resolution,
        value: (ints.head + ints.tail_sum) / ints.cells as f64,
        error_bound: ints.error_bound,
    })
}

/// `n_0, n_1, ...` with `n_{2s} = Σ_{i<=s} a^{2i}` and `n_{2s+1} = Σ_{i<=s} a^{2i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaSequence {
    pub order: Order,
    pub values: Vec<u64>,
}

impl LemmaSequence {
    pub fn get(&self, k: usize) -> Option<u64> {
        self.values.get(k).copied()
    }
}

pub fn lemma_sequence(k_max: u32, order: Order) -> Result<LemmaSequence> {
    let a = order.as_u64();
    let mut values: Vec<u64> = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        let ak = order.pow(k)?;
        let prev = if k >= 2 { values[k as usize - 2] } else { 0 };
        let nk = ak
            .checked_add(prev)
            .filter(|&v| v <= crate::radix::INDEX_LIMIT)
            .ok_or_else(|| Error::Overflow(format!("n_{k} exceeds 2^62")))?;
        // a^k <= n_k < a^{k+1} and n_k (a^2 - 1) < a^2 · a^k
        let upper = u128::from(ak) * u128::from(a);
        debug_assert!(u128::from(nk) < upper);
        debug_assert!(u128::from(nk) * u128::from(a * a - 1) < u128::from(a * a) * u128::from(ak));
        values.push(nk);
    }
    Ok(LemmaSequence { order, values })
}

/// One `k` of the Lebesgue-constant lower bound with its intermediate checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaRow {
    pub k: u32,
    pub n_k: u64,
    pub resolution: u32,
    /// `L_{n_k}`.
    pub lebesgue: f64,
    /// `(k/2 + 1) / a`.
    pub bound_half_k: f64,
    /// `log_a(n_k) / (2a)`.
    pub bound_log: f64,
    /// `∫_{a^{-(k+2)}}^1 |D_{n_k}|`.
    pub partial_integral: f64,
    /// `∫ over [a^{-(k+2)}, a^{-k})` of `|D_{n_k}|`, for `k >= 2`.
    pub block_integral: Option<f64>,
    /// `(a^2 - 2) / a^2`, for `k >= 2`.
    pub block_bound: Option<f64>,
    pub error_bound: f64,
    pub lebesgue_half_pass: bool,
    pub lebesgue_log_pass: bool,
    pub partial_pass: bool,
    pub block_pass: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub order: Order,
    pub k_max: u32,
    pub bound_scale: f64,
    pub rows: Vec<LemmaRow>,
    pub all_pass: bool,
}

/// Largest `k` whose check grid `a^{k+1}` fits the cell cap, or -1.
pub fn largest_feasible_k(order: Order, limits: &Limits) -> i64 {
    let mut k: i64 = -1;
    while let Ok(cells) = order.pow((k + 2) as u32) {
        if cells > limits.cell_cap {
            break;
        }
        k += 1;
    }
    k
}

pub fn verify_lemma(k_max: u32, order: Order, limits: &Limits) -> Result<LemmaReport> {
    verify_lemma_scaled(k_max, order, limits, 1.0)
}

/// As [`verify_lemma`], with every asserted lower bound multiplied by
/// `bound_scale`.
pub fn verify_lemma_scaled(
    k_max: u32,
    order: Order,
    limits: &Limits,
    bound_scale: f64,
) -> Result<LemmaReport> {
    let feasible = largest_feasible_k(order, limits);
    if i64::from(k_max) > feasible {
        return Err(Error::LemmaInfeasible {
            requested: k_max,
            largest_feasible: feasible,
        });
    }
    let seq = lemma_sequence(k_max, order)?;
    let af = f64::from(order.get());
    let rows = seq
        .values
        .iter()
        .enumerate()
        .map(|(k, &n_k)| lemma_row(k as u32, n_k, order, af, limits, bound_scale))
        .collect::<Result<Vec<_>>>()?;
    let all_pass = rows.iter().all(|r| r.pass);
    Ok(LemmaReport {
        order,
        k_max,
        bound_scale,
        rows,
        all_pass,
    })
}

fn lemma_row(
    k: u32,
    n_k: u64,
    order: Order,
    af: f64,
    limits: &Limits,
    bound_scale: f64,
) -> Result<LemmaRow> {
    // n_k < a^{k+1}, so D_{n_k} is constant on resolution-(k+1) cells.
    let resolution = k + 1;
    let ints = abs_integrals(n_k, resolution, order, limits)?;
    let cells = ints.cells as f64;
    let err = ints.error_bound;
    let lebesgue = (ints.head + ints.tail_sum) / cells;

    // [a^{-(k+2)}, 1): the tail cells plus the part of cell 0 right of a^{-(k+2)},
    // which is a fraction 1 - 1/a of it.
    let partial_integral = (ints.tail_sum + ints.head * (1.0 - 1.0 / af)) / cells;

    let (block_integral, block_bound) = if k >= 2 {
        let kd = KernelDigits::new(n_k, resolution, order)?;
        let roots = roots_table(order);
        let mut buf = vec![0u64; order.as_usize()];
        let mut s = ints.head * (1.0 - 1.0 / af);
        for m in 1..order.as_u64() {
            s += kd.abs_value(m, &roots, &mut buf);
        }
        (Some(s / cells), Some((af * af - 2.0) / (af * af)))
    } else {
        (None, None)
    };

    let bound_half_k = (f64::from(k) / 2.0 + 1.0) / af;
    let bound_log = order.log(n_k as f64) / (2.0 * af);

    let strictly_above = |value: f64, bound: f64| value - bound * bound_scale > err;
    let lebesgue_half_pass = strictly_above(lebesgue, bound_half_k);
    let lebesgue_log_pass = strictly_above(lebesgue, bound_log);
    // At k = 1 the partial integral is `a(1/a - 1/a^3)` against `3/(2a)`,
    // equal when a = 2.
    let partial_pass = if k == 1 {
        partial_integral - bound_half_k * bound_scale >= -err
    } else {
        strictly_above(partial_integral, bound_half_k)
    };
    let block_pass = match (block_integral, block_bound) {
        (Some(v), Some(b)) => strictly_above(v, b),
        _ => true,
    };
    Ok(LemmaRow {
        k,
        n_k,
        resolution,
        lebesgue,
        bound_half_k,
        bound_log,
        partial_integral,
        block_integral,
        block_bound,
        error_bound: err,
        lebesgue_half_pass,
        lebesgue_log_pass,
        partial_pass,
        block_pass,
        pass: lebesgue_half_pass && lebesgue_log_pass && partial_pass && block_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radix::AdicCell;
    use crate::walsh::walsh_exponent;

    fn order(a: u32) -> Order {
        Order::new(a).unwrap()
    }

    /// `D_n` by direct summation of `ψ_0 .. ψ_{n-1}`.
    fn brute_tally(n: u64, resolution: u32, o: Order) -> Vec<u64> {
        let a = o.as_usize();
        let cells = o.pow(resolution).unwrap();
        let mut out = vec![0u64; cells as usize * a];
        for m in 0..cells {
            let c = AdicCell::new(resolution, m, o).unwrap();
            for j in 0..n {
                let e = walsh_exponent(j, &c).unwrap().exponent() as usize;
                out[m as usize * a + e] += 1;
            }
        }
        out
    }

    #[test]
    fn d5_order2() {
        let t = dirichlet(5, 3, order(2)).unwrap();
        let vals: Vec<f64> = (0..8).map(|m| t.value(m).re).collect();
        assert_eq!(vals, vec![5.0, 3.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0]);
        assert_eq!(t.counts, brute_tally(5, 3, order(2)));
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(2), vec![1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn power_kernel_vanishes_off_first_cell_composite_orders() {
        for a in [4u32, 6, 9, 12] {
            let o = order(a);
            for r in 1..3u32 {
                let t = dirichlet(o.pow(r).unwrap(), 3, o).unwrap();
                let inside = o.pow(3 - r).unwrap() as usize;
                for m in 0..t.cells() {
                    assert_eq!(t.is_zero_at(m), m >= inside, "a={a} r={r} m={m}");
                }
            }
        }
    }

    #[test]
    fn reduced_tally_differs_by_zero_sums() {
        for a in [2u32, 3, 4, 6] {
            let o = order(a);
            let phi = cyclotomic(a);
            for n in [1u64, 5, 17, 40, 100] {
                let res = o.ceil_log(n).max(1);
                let kd = KernelDigits::new(n, res, o).unwrap();
                let (mut full, mut reduced) = (vec![0u64; a as usize], vec![0u64; a as usize]);
                for m in 0..o.pow(res).unwrap() {
                    kd.tally(m, &mut full);
                    kd.reduced_tally(m, &mut reduced);
                    let diff: Vec<i128> = full
                        .iter()
                        .zip(&reduced)
                        .map(|(&x, &y)| x as i128 - y as i128)
                        .collect();
                    assert!(reduce_mod_cyclotomic(diff, &phi).iter().all(|&c| c == 0));
                }
            }
        }
    }

    #[test]
    fn d1_is_one() {
        let t = dirichlet(1, 2, order(3)).unwrap();
        for m in 0..9 {
            assert_eq!(t.cell(m), &[1, 0, 0]);
        }
    }

    #[test]
    fn power_kernel_is_box() {
        for a in [2u32, 3, 5] {
            let o = order(a);
            for r in 0..4u32 {
                let ar = o.pow(r).unwrap();
                let t = dirichlet(ar, 4, o).unwrap();
                let inside = o.pow(4 - r).unwrap() as usize;
                for m in 0..t.cells() {
                    let cell = t.cell(m);
                    if m < inside {
                        assert_eq!(cell[0], ar);
                        assert!(cell[1..].iter().all(|&c| c == 0));
                    } else {
                        // The a^r summands cancel in equal groups.
                        assert!(cell.iter().all(|&c| c == ar / u64::from(a)));
                    }
                }
            }
        }
    }

    #[test]
    fn recursion_matches_brute_small() {
        for a in [2u32, 3, 4] {
            let o = order(a);
            for n in 1..=o.pow(3).unwrap() {
                assert_eq!(
                    dirichlet(n, 3, o).unwrap().counts,
                    brute_tally(n, 3, o),
                    "a={a} n={n}"
                );
            }
        }
    }

    #[test]
    fn lebesgue_examples() {
        assert_eq!(lebesgue_constant(1, order(2)).unwrap(), 1.0);
        assert_eq!(lebesgue_constant(5, order(2)).unwrap(), 1.75);
        assert_eq!(lebesgue_constant(2, order(2)).unwrap(), 1.0);
        for a in [2u32, 3, 5] {
            for r in 0..6 {
                let l = lebesgue_constant(order(a).pow(r).unwrap(), order(a)).unwrap();
                assert!((l - 1.0).abs() < 1e-12, "a={a} r={r} L={l}");
            }
        }
    }

    #[test]
    fn lebesgue_matches_tally_mean() {
        let o = order(3);
        for n in [7u64, 10, 30, 100] {
            let res = o.ceil_log(n);
            let t = dirichlet(n, res, o).unwrap();
            let mean: f64 =
                (0..t.cells()).map(|m| t.value(m).norm()).sum::<f64>() / t.cells() as f64;
            let l = lebesgue(n, o, &Limits::default()).unwrap();
            assert!((l.value - mean).abs() < 1e-12);
            assert!(l.error_bound > 0.0);
        }
    }

    #[test]
    fn lemma_sequence_values() {
        assert_eq!(
            lemma_sequence(4, order(2)).unwrap().values,
            vec![1, 2, 5, 10, 21]
        );
        let s = lemma_sequence(3, order(3)).unwrap();
        assert_eq!(s.get(2), Some(10));
        assert_eq!(s.get(3), Some(30));
        for a in [2u32, 3, 5, 16] {
            let o = order(a);
            let kmax = (62.0 / f64::from(a).log2()).floor() as u32 - 1;
            let s = lemma_sequence(kmax, o).unwrap();
            for (k, &nk) in s.values.iter().enumerate() {
                let ak = o.pow(k as u32).unwrap() as u128;
                assert!(ak <= nk as u128 && (nk as u128) < ak * a as u128);
            }
        }
        assert!(lemma_sequence(63, order(2)).is_err());
    }

    #[test]
    fn lemma_small_rows() {
        let rep = verify_lemma(4, order(2), &Limits::default()).unwrap();
        assert!(rep.all_pass);
        let r1 = &rep.rows[1];
        assert_eq!((r1.n_k, r1.lebesgue, r1.bound_half_k), (2, 1.0, 0.75));
        let r2 = &rep.rows[2];
        assert_eq!((r2.n_k, r2.lebesgue, r2.bound_half_k), (5, 1.75, 1.0));
        // k = 0 base case: ∫_{1/4}^1 |D_1| = 3/4.
        assert_eq!(rep.rows[0].partial_integral, 0.75);
        // k = 2: [1/16, 1/4) holds 5 on half of cell 0 and 3 on cell 1.
        assert_eq!(r2.block_integral, Some(11.0 / 16.0));
    }

    #[test]
    fn lemma_tamper_fails() {
        let rep = verify_lemma_scaled(4, order(3), &Limits::default(), 10.0).unwrap();
        assert!(!rep.all_pass);
    }

    #[test]
    fn lemma_guard() {
        let limits = Limits::with_cell_cap(1000);
        assert_eq!(largest_feasible_k(order(2), &limits), 8);
        match verify_lemma(9, order(2), &limits) {
            Err(Error::LemmaInfeasible {
                largest_feasible, ..
            }) => assert_eq!(largest_feasible, 8),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coarse_resolution_rejected() {
        assert!(dirichlet(10, 2, order(3)).is_err());
        assert!(dirichlet(9, 2, order(3)).is_ok());
        assert!(dirichlet(10, 3, order(3)).is_ok());
        assert!(dirichlet(0, 1, order(3)).is_err());
    }
}
