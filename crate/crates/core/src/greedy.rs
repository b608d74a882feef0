//! Greedy approximants `G_m` and thresholding sums `S_Λ`.
//!
//! A selection of size `m` keeps the `m` coefficients of largest magnitude.
//! Ties go to the smaller index, so the ranking is a total order and the
//! size-`m` selection is always a prefix of the size-`M` selection for `m <= M`.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sum;
use crate::transform::{inverse, Spectrum};
use crate::walsh::StepFunction;

/// Index set `Λ`, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedySelection {
    indices: Vec<usize>,
}

impl GreedySelection {
    pub fn from_indices(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        GreedySelection { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }
}

/// `|c|` with a total order, for ranking complex coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Magnitude(pub f64);

impl Eq for Magnitude {}

impl PartialOrd for Magnitude {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Magnitude {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn rank_cmp<K: Ord>(x: &(usize, K), y: &(usize, K)) -> Ordering {
    y.1.cmp(&x.1).then(x.0.cmp(&y.0))
}

/// All indices from largest to smallest key, ties by smaller index.
pub fn greedy_ranking<K: Ord + Clone>(entries: &[(usize, K)]) -> Vec<usize> {
    let mut v = entries.to_vec();
    v.sort_by(rank_cmp);
    v.into_iter().map(|(i, _)| i).collect()
}

/// The `m` entries with largest keys.
pub fn greedy_select_by_key<K: Ord + Clone>(
    entries: &[(usize, K)],
    m: usize,
) -> Result<GreedySelection> {
    if m > entries.len() {
        return Err(Error::OutOfRange(format!(
            "m = {m} exceeds the {} available coefficients",
            entries.len()
        )));
    }
    if m == 0 {
        return Ok(GreedySelection {
            indices: Vec::new(),
        });
    }
    let mut v = entries.to_vec();
    v.select_nth_unstable_by(m - 1, rank_cmp);
    v.truncate(m);
    Ok(GreedySelection::from_indices(
        v.into_iter().map(|(i, _)| i).collect(),
    ))
}

/// Keys `(n, |c_n|)` for every coefficient of `spectrum`.
pub fn magnitude_keys(spectrum: &Spectrum) -> Vec<(usize, Magnitude)> {
    spectrum
        .coefficients()
        .iter()
        .enumerate()
        .map(|(n, c)| (n, Magnitude(c.norm())))
        .collect()
}

/// Greedy selection by coefficient magnitude.
pub fn greedy_select(spectrum: &Spectrum, m: usize) -> Result<GreedySelection> {
    greedy_select_by_key(&magnitude_keys(spectrum), m)
}

/// Whether every selected magnitude dominates every omitted one.
pub fn satisfies_greedy_condition(magnitudes: &[f64], selection: &GreedySelection) -> bool {
    let min_in = selection
        .indices()
        .iter()
        .map(|&i| magnitudes[i])
        .fold(f64::INFINITY, f64::min);
    let max_out = magnitudes
        .iter()
        .enumerate()
        .filter(|(i, _)| !selection.contains(*i))
        .map(|(_, &v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    min_in >= max_out
}

/// `S_Λ = Σ_{n ∈ Λ} c_n ψ_n` on the resolution-`N` grid.
pub fn thresholding_sum(
    spectrum: &Spectrum,
    selection: &GreedySelection,
    resolution: u32,
) -> Result<StepFunction> {
    let kept = restrict(spectrum, selection.indices().iter().copied())?;
    inverse(&kept, resolution)
}

fn restrict(spectrum: &Spectrum, indices: impl Iterator<Item = usize>) -> Result<Spectrum> {
    let len = spectrum.len();
    let mut out = Spectrum::zeros(spectrum.order(), len);
    for i in indices {
        let c = *spectrum.coefficients().get(i).ok_or_else(|| {
            Error::OutOfRange(format!("index {i} outside spectrum of length {len}"))
        })?;
        out.coefficients_mut()[i] = c;
    }
    Ok(out)
}

/// `G_m(f)`, the greedy approximant with `m` terms.
pub fn greedy_approximant(spectrum: &Spectrum, m: usize, resolution: u32) -> Result<StepFunction> {
    thresholding_sum(spectrum, &greedy_select(spectrum, m)?, resolution)
}

/// `∫_0^1 |f|`.
pub fn l1_norm(f: &StepFunction) -> f64 {
    let values = f.values();
    sum::pairwise(values.len(), |m| values[m].norm()) / values.len() as f64
}

/// `‖G_M − G_m‖_1`: the terms ranked `m .. M` synthesized on the grid.
pub fn approximant_gap(
    spectrum: &Spectrum,
    m: usize,
    big_m: usize,
    resolution: u32,
) -> Result<f64> {
    if m > big_m || big_m > spectrum.len() {
        return Err(Error::OutOfRange(format!(
            "need m <= M <= {}, got m = {m}, M = {big_m}",
            spectrum.len()
        )));
    }
    let ranking = greedy_ranking(&magnitude_keys(spectrum));
    let block = restrict(spectrum, ranking[m..big_m].iter().copied())?;
    Ok(l1_norm(&inverse(&block, resolution)?))
}

/// `Σ |c_n|` over the terms ranked `m .. M`, an upper bound for the gap.
pub fn gap_upper_bound(spectrum: &Spectrum, m: usize, big_m: usize) -> f64 {
    let ranking = greedy_ranking(&magnitude_keys(spectrum));
    ranking[m..big_m]
        .iter()
        .map(|&i| spectrum.coefficients()[i].norm())
        .sum()
}

/// Convenience for building real spectra.
pub fn real_spectrum(order: crate::radix::Order, coefficients: &[f64]) -> Spectrum {
    Spectrum::new(
        order,
        coefficients
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect(),
    )
}
