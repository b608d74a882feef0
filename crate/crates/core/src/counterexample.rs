//! An integrable function whose greedy approximants do not converge in `L^1`.
//!
//! The coefficients come in blocks: for `a^{(k-1)^2} <= i < a^{k^2}`,
//! `C_i = 1/k^2 + 2^{-i}`. They decrease strictly in `i`, so the greedy
//! approximant with `m` terms is the partial sum over `i = 1..=m`. The
//! function is `f = g + h` with
//! `g = Σ_k (1/k^2)(D_{a^{k^2}} − D_{a^{(k-1)^2}})` and `h = Σ_{j>=1} 2^{-j} ψ_j`,
//! both bounded in `L^1`.
//!
//! Inside block `k`, the first `m_k` terms split as `J_1 + J_2` with
//! `J_1 = (1/k^2) Σ_{i<m_k} ψ_{a^{(k-1)^2}+i}` and `|J_2| <= 2^{1 − a^{(k-1)^2}}`.
//! `J_1` has the same `L^1` norm as `(1/k^2) D_{m_k}` (see
//! [`verify_j1_factorization`]). Taking `m_k` from the Lebesgue-constant
//! sequence makes the `L^1` norm of the block at least
//! `1/(4a) − 2^{1 − a^{(k-1)^2}}` for every `k >= 4`, so the greedy
//! approximants are not Cauchy.
//!
//! The reported gap is the `L^1` norm of the explicit block
//! `Σ_{i = a^{(k-1)^2}}^{a^{(k-1)^2} + m_k − 1} C_i ψ_i`. Written as a difference
//! of greedy approximants (in term counts, with the sum starting at `i = 1`)
//! this is `G_{a^{(k-1)^2} + m_k − 1} − G_{a^{(k-1)^2} − 1}`.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::greedy::l1_norm;
use crate::kernels::{lebesgue, lemma_sequence};
use crate::radix::{Limits, Order};
use crate::sum;
use crate::transform::{inverse_with, Spectrum};
use crate::walsh::{exponent_unchecked, StepFunction};

/// Below `2^{-1060}` the dyadic part is dropped from synthesized values.
pub const DYADIC_CUTOFF: u64 = 1060;

/// `a^{e}` as `u128`, `None` past `u128`.
fn big_pow(order: Order, e: u64) -> Option<u128> {
    u128::from(order.get()).checked_pow(u32::try_from(e).ok()?)
}

/// `[a^{(k-1)^2}, a^{k^2})`; the end is `None` when it exceeds `u128`.
pub fn block_range(k: u64, order: Order) -> Result<(u128, Option<u128>)> {
    if k == 0 {
        return Err(Error::OutOfRange("blocks are numbered from 1".into()));
    }
    let start = big_pow(order, (k - 1) * (k - 1))
        .ok_or_else(|| Error::Overflow(format!("a^(({k}-1)^2) exceeds 128 bits")))?;
    Ok((start, big_pow(order, k * k)))
}

/// The coefficient `C_i = 1/k^2 + 2^{-i}`, identified by its block and index.
///
/// Ordered by coefficient value, computed exactly: a larger key has a
/// larger coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CoefficientKey {
    pub order: Order,
    pub block: u64,
    pub index: u64,
}

impl CoefficientKey {
    /// `1/k^2 + 2^{-i}` in double precision, dyadic part dropped past the cutoff.
    pub fn value(&self) -> f64 {
        let k = self.block as f64;
        let base = 1.0 / (k * k);
        if self.index > DYADIC_CUTOFF {
            base
        } else {
            base + (-(self.index as f64)).exp2()
        }
    }

    /// Exponent of the dyadic part, `-i`.
    pub fn dyadic_log2(&self) -> i64 {
        -(self.index as i64)
    }
}

impl Ord for CoefficientKey {
    fn cmp(&self, other: &Self) -> Ordering {
        // Smaller block, then smaller index, means a larger coefficient.
        other
            .block
            .cmp(&self.block)
            .then(other.index.cmp(&self.index))
    }
}

impl PartialOrd for CoefficientKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn coefficient(i: u64, order: Order) -> Result<CoefficientKey> {
    if i == 0 {
        return Err(Error::OutOfRange("coefficients start at i = 1".into()));
    }
    let mut k = 1u64;
    loop {
        let (start, end) = block_range(k, order)?;
        debug_assert!(u128::from(i) >= start);
        match end {
            Some(end) if u128::from(i) >= end => k += 1,
            _ => {
                return Ok(CoefficientKey {
                    order,
                    block: k,
                    index: i,
                })
            }
        }
    }
}

/// `(i, key)` for `1 <= i <= max_index`.
pub fn coefficient_keys(max_index: u64, order: Order) -> Result<Vec<(usize, CoefficientKey)>> {
    let mut out = Vec::with_capacity(max_index as usize);
    if max_index == 0 {
        return Ok(out);
    }
    let mut key = coefficient(1, order)?;
    let mut block_end = block_range(key.block, order)?.1;
    for i in 1..=max_index {
        while block_end.is_some_and(|e| u128::from(i) >= e) {
            key.block += 1;
            block_end = block_range(key.block, order)?.1;
        }
        key.index = i;
        out.push((i as usize, key));
    }
    Ok(out)
}

/// Coefficients `C_i`, `1 <= i < a^{K^2}`, with `C_0 = 0`.
pub fn partial_spectrum(blocks: u32, order: Order, limits: &Limits) -> Result<Spectrum> {
    let len = order.cells(blocks * blocks, limits)?;
    let keys = coefficient_keys(len - 1, order)?;
    let mut coefficients = Vec::with_capacity(len as usize);
    coefficients.push(Complex64::new(0.0, 0.0));
    coefficients.extend(keys.iter().map(|(_, key)| Complex64::new(key.value(), 0.0)));
    Ok(Spectrum::new(order, coefficients))
}

/// `L^1` norms of `g_K`, `h_K` and `f_K = g_K + h_K` with their bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormsReport {
    pub order: Order,
    pub blocks: u32,
    pub resolution: u32,
    pub g_norm: f64,
    pub h_norm: f64,
    pub f_norm: f64,
    /// `2 Σ_{k<=K} 1/k^2`.
    pub g_bound: f64,
    pub h_bound: f64,
    /// `π^2/3 + 1`.
    pub f_bound: f64,
    /// `max |f_K − (g_K + h_K)|` over the grid.
    pub decomposition_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub const NORMS_TOLERANCE: f64 = 1e-10;

pub fn decomposition_norms(blocks: u32, order: Order, limits: &Limits) -> Result<NormsReport> {
    decomposition_norms_scaled(blocks, order, limits, 1.0)
}

/// As [`decomposition_norms`], with every upper bound multiplied by `bound_scale`.
pub fn decomposition_norms_scaled(
    blocks: u32,
    order: Order,
    limits: &Limits,
    bound_scale: f64,
) -> Result<NormsReport> {
    if blocks == 0 {
        return Err(Error::OutOfRange("need at least one block".into()));
    }
    let resolution = blocks * blocks;
    let cells = order.cells(resolution, limits)?;

    let g = g_function(blocks, order, resolution)?;

    let mut h_spec = Spectrum::zeros(order, cells as usize);
    for (j, c) in h_spec.coefficients_mut().iter_mut().enumerate().skip(1) {
        if j as u64 <= DYADIC_CUTOFF {
            *c = Complex64::new((-(j as f64)).exp2(), 0.0);
        }
    }
    let h = inverse_with(&h_spec, resolution, limits)?;
    let f = inverse_with(
        &partial_spectrum(blocks, order, limits)?,
        resolution,
        limits,
    )?;

    let residual = f
        .values()
        .iter()
        .zip(g.values().iter().zip(h.values()))
        .map(|(fv, (gv, hv))| (fv - gv - hv).norm())
        .fold(0.0, f64::max);

    let g_norm = l1_norm(&g);
    let h_norm = l1_norm(&h);
    let f_norm = l1_norm(&f);
    let g_bound = 2.0 * (1..=blocks).map(|k| 1.0 / f64::from(k * k)).sum::<f64>();
    let h_bound = 1.0;
    let f_bound = std::f64::consts::PI.powi(2) / 3.0 + 1.0;
    let tol = NORMS_TOLERANCE;
    let pass = g_norm <= g_bound * bound_scale + tol
        && h_norm <= h_bound * bound_scale + tol
        && f_norm <= f_bound * bound_scale + tol
        && f_norm <= g_norm + h_norm + tol
        && residual <= tol;
    Ok(NormsReport {
        order,
        blocks,
        resolution,
        g_norm,
        h_norm,
        f_norm,
        g_bound,
        h_bound,
        f_bound,
        decomposition_residual: residual,
        tolerance: tol,
        pass,
    })
}

/// `g_K` from the closed form `D_{a^r} = a^r · 1_{[0, a^{-r})}`.
fn g_function(blocks: u32, order: Order, resolution: u32) -> Result<StepFunction> {
    let mut f = StepFunction::zeros(order, resolution)?;
    let a = order.as_u64();
    let box_value = |r: u32, zeros: u32| -> f64 {
        if r <= zeros {
            (a as f64).powi(r as i32)
        } else {
            0.0
        }
    };
    for (m, v) in f.values_mut().iter_mut().enumerate() {
        let zeros = if m == 0 {
            resolution
        } else {
            resolution - order.digits_needed(m as u64)
        };
        let mut acc = 0.0;
        for k in 1..=blocks {
            let w = 1.0 / f64::from(k * k);
            acc += w * (box_value(k * k, zeros) - box_value((k - 1) * (k - 1), zeros));
        }
        *v = Complex64::new(acc, 0.0);
    }
    Ok(f)
}

/// The block-`k` divergence check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub order: Order,
    pub k: u32,
    pub block_start: u64,
    pub m_k: u64,
    pub block_end: u64,
    pub resolution: u32,
    /// `‖Σ_{start <= i < start + m_k} C_i ψ_i‖_1`.
    pub gap: f64,
    pub gap_error_bound: f64,
    /// `L_{m_k}`.
    pub lebesgue_m: f64,
    /// `2^{1 − a^{(k-1)^2}}`, 0.0 when it underflows.
    pub j2_bound: f64,
    pub j2_bound_log2: i64,
    /// `L_{m_k}/k^2 − j2_bound`.
    pub dirichlet_bound: f64,
    /// `1/(4a) − j2_bound`, for `k >= 4`.
    pub final_bound: Option<f64>,
    pub bound_scale: f64,
    /// `start + m_k < a^{k^2}`.
    pub block_fits: bool,
    /// `a^{(k-1)^2} <= m_k < a^{(k-1)^2 + 1}`.
    pub m_k_in_range: bool,
    /// `L_{m_k} >= log_a(m_k) / (2a)`.
    pub lemma_chain_pass: bool,
    /// `(k-1)^2 / (2a k^2) >= 1/(4a)`, for `k >= 4`.
    pub scalar_chain_pass: Option<bool>,
    pub dirichlet_pass: bool,
    pub final_pass: Option<bool>,
    pub pass: bool,
}

pub fn block_gap(k: u32, order: Order, limits: &Limits) -> Result<GapReport> {
    block_gap_scaled(k, order, limits, 1.0)
}

/// As [`block_gap`], with the asserted lower bounds multiplied by `bound_scale`.
pub fn block_gap_scaled(
    k: u32,
    order: Order,
    limits: &Limits,
    bound_scale: f64,
) -> Result<GapReport> {
    if k < 2 {
        return Err(Error::OutOfRange(format!(
            "block gap needs k >= 2, got {k}"
        )));
    }
    let lemma_index = (k - 1) * (k - 1);
    let block_start = order.pow(lemma_index)?;
    let m_k = lemma_sequence(lemma_index, order)?.values[lemma_index as usize];
    let block_end = block_start
        .checked_add(m_k - 1)
        .ok_or_else(|| Error::Overflow("block end".into()))?;
    let resolution = order.digits_needed(block_end);
    let cells = order.cells(resolution, limits)?;

    let block_fits = match big_pow(order, u64::from(k) * u64::from(k)) {
        Some(end) => u128::from(block_start) + u128::from(m_k) < end,
        None => true,
    };
    let next_power = u128::from(block_start) * u128::from(order.get());
    let m_k_in_range = block_start <= m_k && u128::from(m_k) < next_power;

    let mut spectrum = Spectrum::zeros(order, cells as usize);
    let mut abs_sum = 0.0;
    let keys = coefficient_keys(block_end, order)?;
    for (i, key) in &keys[block_start as usize - 1..] {
        let v = key.value();
        spectrum.coefficients_mut()[*i] = Complex64::new(v, 0.0);
        abs_sum += v;
    }
    let block = inverse_with(&spectrum, resolution, limits)?;
    let gap = l1_norm(&block);
    let eps = f64::EPSILON;
    let gap_error_bound =
        (2.0 * f64::from(resolution) * f64::from(order.get()) + 4.0) * eps * abs_sum
            + sum::error_factor(cells as usize) * gap;

    let lm = lebesgue(m_k, order, limits)?;
    let kk = f64::from(k * k);
    let af = f64::from(order.get());

    let j2_bound_log2 = 1i64 - block_start as i64;
    let j2_bound = (j2_bound_log2 as f64).exp2();
    let dirichlet_bound = lm.value / kk - j2_bound;
    let final_bound = (k >= 4).then(|| 1.0 / (4.0 * af) - j2_bound);

    let tolerance = gap_error_bound + lm.error_bound / kk;
    let dirichlet_pass = gap - dirichlet_bound * bound_scale >= -tolerance;
    let final_pass = final_bound.map(|b| gap - b * bound_scale >= -tolerance);
    let lemma_chain_pass = lm.value - order.log(m_k as f64) / (2.0 * af) > lm.error_bound;
    let scalar_chain_pass = (k >= 4).then(|| {
        let lhs = f64::from((k - 1) * (k - 1)) / (2.0 * af * kk);
        lhs >= 1.0 / (4.0 * af)
    });
    let pass = block_fits
        && m_k_in_range
        && lemma_chain_pass
        && dirichlet_pass
        && final_pass.unwrap_or(true)
        && scalar_chain_pass.unwrap_or(true);

    Ok(GapReport {
        order,
        k,
        block_start,
        m_k,
        block_end,
        resolution,
        gap,
        gap_error_bound,
        lebesgue_m: lm.value,
        j2_bound,
        j2_bound_log2,
        dirichlet_bound,
        final_bound,
        bound_scale,
        block_fits,
        m_k_in_range,
        lemma_chain_pass,
        scalar_chain_pass,
        dirichlet_pass,
        final_pass,
        pass,
    })
}

/// Outcome of comparing `Σ_{i<m_k} ψ_{s+i}` with `ψ_s · D_{m_k}`, `s = a^{(k-1)^2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FactorizationCheck {
    /// Equal exponent tallies on every cell.
    pub pointwise: bool,
    /// Equal multisets of per-cell tallies up to a common rotation, hence
    /// equal distributions of `|·|` and equal `L^1` norms.
    pub same_distribution: bool,
}

/// Compares the block sum with `ψ_s · D_{m_k}` in exact exponent arithmetic.
///
/// `ψ_{s+i} = ψ_s ψ_i` needs `i < s`, but `m_k >= s`. The digits of `m_k` are
/// 0 or 1, so for `a >= 3` adding `s` never carries and the identity holds on
/// every cell. For `a = 2` the indices `i >= s` carry into the next digit;
/// the block is then a measure-preserving rearrangement of `ψ_s · D_{m_k}`,
/// which `same_distribution` detects.
pub fn verify_j1_factorization(
    k: u32,
    order: Order,
    limits: &Limits,
) -> Result<FactorizationCheck> {
    if k < 2 {
        return Err(Error::OutOfRange(format!("need k >= 2, got {k}")));
    }
    let lemma_index = (k - 1) * (k - 1);
    let start = order.pow(lemma_index)?;
    let m_k = lemma_sequence(lemma_index, order)?.values[lemma_index as usize];
    let resolution = order.digits_needed(start + m_k - 1);
    let cells = order.cells(resolution, limits)?;
    let kernel = crate::kernels::dirichlet_with(m_k, resolution, order, limits)?;
    let a = order.as_usize();
    let mut pointwise = true;
    let mut block_forms = Vec::with_capacity(cells as usize);
    let mut kernel_forms = Vec::with_capacity(cells as usize);
    let mut direct = vec![0u64; a];
    for m in 0..cells {
        direct.iter_mut().for_each(|c| *c = 0);
        for i in 0..m_k {
            direct[exponent_unchecked(start + i, m, resolution, order) as usize] += 1;
        }
        let shift = exponent_unchecked(start, m, resolution, order) as usize;
        let kt = kernel.cell(m as usize);
        if (0..a).any(|e| direct[(e + shift) % a] != kt[e]) {
            pointwise = false;
        }
        block_forms.push(canonical_rotation(&direct));
        kernel_forms.push(canonical_rotation(kt));
    }
    block_forms.sort_unstable();
    kernel_forms.sort_unstable();
    Ok(FactorizationCheck {
        pointwise,
        same_distribution: block_forms == kernel_forms,
    })
}

/// Lexicographically smallest cyclic rotation; `|Σ c_e ω^e|` is invariant
/// under rotation.
fn canonical_rotation(counts: &[u64]) -> Vec<u64> {
    let a = counts.len();
    (0..a)
        .map(|r| (0..a).map(|e| counts[(e + r) % a]).collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// `max |J_2|` over the grid, `J_2 = Σ_{s <= i < s + m_k} 2^{-i} ψ_i`.
pub fn j2_sup(k: u32, order: Order, limits: &Limits) -> Result<f64> {
    if k < 2 {
        return Err(Error::OutOfRange(format!("need k >= 2, got {k}")));
    }
    let lemma_index = (k - 1) * (k - 1);
    let start = order.pow(lemma_index)?;
    let m_k = lemma_sequence(lemma_index, order)?.values[lemma_index as usize];
    let end = start + m_k - 1;
    let resolution = order.digits_needed(end);
    let cells = order.cells(resolution, limits)?;
    let mut spec = Spectrum::zeros(order, cells as usize);
    for i in start..=end.min(DYADIC_CUTOFF) {
        spec.coefficients_mut()[i as usize] = Complex64::new((-(i as f64)).exp2(), 0.0);
    }
    let j2 = inverse_with(&spec, resolution, limits)?;
    Ok(j2.values().iter().map(|v| v.norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(a: u32) -> Order {
        Order::new(a).unwrap()
    }

    #[test]
    fn coefficient_examples() {
        let c = coefficient(1, order(2)).unwrap();
        assert_eq!((c.block, c.value()), (1, 1.5));
        let c = coefficient(2, order(2)).unwrap();
        assert_eq!((c.block, c.value()), (2, 0.5));
        let c = coefficient(16, order(2)).unwrap();
        assert_eq!(c.block, 3);
        assert_eq!(c.value(), 1.0 / 9.0 + 2f64.powi(-16));
        assert_eq!(c.dyadic_log2(), -16);
        assert!(coefficient(0, order(2)).is_err());
    }

    #[test]
    fn deep_coefficients_stay_ordered() {
        let o = order(2);
        let x = coefficient(70_000, o).unwrap();
        let y = coefficient(70_001, o).unwrap();
        // Equal in double precision, ordered exactly.
        assert_eq!(x.value(), y.value());
        assert!(x > y);
        let z = coefficient(1 << 25, o).unwrap();
        assert_eq!(z.block, 6);
        assert!(y > z);
    }

    #[test]
    fn keys_match_single_lookups() {
        let o = order(3);
        let keys = coefficient_keys(800, o).unwrap();
        for (i, key) in keys.iter().step_by(37) {
            assert_eq!(*key, coefficient(*i as u64, o).unwrap());
        }
    }

    #[test]
    fn partial_spectrum_examples() {
        let l = Limits::default();
        let s = partial_spectrum(1, order(2), &l).unwrap();
        assert_eq!(
            s.coefficients(),
            &[Complex64::new(0.0, 0.0), Complex64::new(1.5, 0.0)]
        );
        let s = partial_spectrum(2, order(2), &l).unwrap();
        assert_eq!(s.len(), 16);
        for i in 2..16 {
            assert_eq!(s.coefficients()[i].re, 0.25 + 2f64.powi(-(i as i32)));
        }
    }

    #[test]
    fn norms_first_block() {
        let r = decomposition_norms(1, order(2), &Limits::default()).unwrap();
        assert_eq!(r.g_norm, 1.0);
        assert_eq!(r.g_bound, 2.0);
        assert!(r.h_norm <= 1.0);
        assert!(r.pass);
    }

    #[test]
    fn gap_k2() {
        let r = block_gap(2, order(2), &Limits::default()).unwrap();
        assert_eq!(
            (r.block_start, r.m_k, r.block_end, r.resolution),
            (2, 2, 3, 2)
        );
        assert!((r.gap - 0.5).abs() < 1e-12);
        assert_eq!(r.j2_bound, 0.5);
        assert_eq!(r.dirichlet_bound, 0.25 - 0.5);
        assert!(r.pass);
    }

    #[test]
    fn gap_k3() {
        let r = block_gap(3, order(2), &Limits::default()).unwrap();
        assert_eq!((r.block_start, r.m_k), (16, 21));
        assert_eq!(r.j2_bound_log2, -15);
        assert!(r.gap >= r.lebesgue_m / 9.0 - 2f64.powi(-15));
        assert!(r.pass);
    }

    #[test]
    fn gap_rejects_small_k() {
        assert!(block_gap(1, order(2), &Limits::default()).is_err());
    }

    #[test]
    fn gap_tamper_fails() {
        let r = block_gap_scaled(3, order(2), &Limits::default(), 100.0).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn j1_factorization_without_carries() {
        for (k, a) in [(2, 2), (2, 3), (3, 3), (2, 5), (3, 5)] {
            let c = verify_j1_factorization(k, order(a), &Limits::default()).unwrap();
            assert!(c.pointwise && c.same_distribution, "a={a} k={k}");
        }
    }

    #[test]
    fn j1_factorization_order_two_carries() {
        for k in [3, 4] {
            let c = verify_j1_factorization(k, order(2), &Limits::default()).unwrap();
            assert!(!c.pointwise);
            assert!(c.same_distribution);
        }
    }

    #[test]
    fn j2_bound_at_k2() {
        for a in [2u32, 3, 5] {
            let o = order(a);
            let sup = j2_sup(2, o, &Limits::default()).unwrap();
            let bound = (1.0 - a as f64).exp2();
            assert!(sup <= bound, "a={a} sup={sup} bound={bound}");
        }
    }
}
