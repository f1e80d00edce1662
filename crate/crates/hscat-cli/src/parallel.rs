//! Worker partitioning for the enumeration scans.
//!
//! Workers stride the enumeration (worker `w` of `W` handles indexes
//! `≡ w (mod W)`); partial results merge commutatively in the core crate, so
//! verdicts and spectra are byte-identical for every worker count.

use anyhow::Result;
use hscat_core::subspace::{
    conclude_scatter, merge_scatter_parts, merge_spectrum_parts, FqSubspace, HyperplaneSpectrum,
    ScatterScanPart, ScatterVerdict, SubspaceError,
};
use num_bigint::BigUint;

pub fn scatter_verdict(
    u: &FqSubspace,
    h: usize,
    cap: u64,
    workers: u32,
) -> Result<ScatterVerdict, SubspaceError> {
    let total = u.scatter_enumeration_count(h)?;
    if total > BigUint::from(cap) {
        return Err(SubspaceError::EnumerationTooLarge { needed: total, cap });
    }
    let workers = workers.max(1);
    if workers == 1 {
        return u.is_h_scattered(h, cap);
    }
    let parts: Vec<ScatterScanPart> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| scope.spawn(move || u.scatter_scan_part(h, workers as u64, w as u64)))
            .collect();
        handles
            .into_iter()
            .map(|j| j.join().expect("worker panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(conclude_scatter(u, merge_scatter_parts(parts)))
}

pub fn spectrum(
    u: &FqSubspace,
    cap: u64,
    workers: u32,
) -> Result<HyperplaneSpectrum, SubspaceError> {
    let total = u.hyperplane_count()?;
    if total > BigUint::from(cap) {
        return Err(SubspaceError::EnumerationTooLarge { needed: total, cap });
    }
    let workers = workers.max(1);
    if workers == 1 {
        return u.hyperplane_spectrum(cap);
    }
    let parts = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| scope.spawn(move || u.hyperplane_scan_part(workers as u64, w as u64)))
            .collect();
        handles
            .into_iter()
            .map(|j| j.join().expect("worker panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(merge_spectrum_parts(u, parts))
}
