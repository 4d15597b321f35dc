//! Packed GF(2) row vectors: Vec<u64> with bit i of word i/64 holding
//! coordinate i. Internal plumbing shared by the code and permutation
//! modules.

pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

pub(crate) fn zero_row(len: usize) -> Vec<u64> {
    vec![0u64; words_for(len)]
}

#[inline]
pub(crate) fn get(row: &[u64], i: usize) -> bool {
    row[i / 64] >> (i % 64) & 1 == 1
}

#[inline]
pub(crate) fn set(row: &mut [u64], i: usize, v: bool) {
    let w = &mut row[i / 64];
    let m = 1u64 << (i % 64);
    if v {
        *w |= m;
    } else {
        *w &= !m;
    }
}

#[inline]
pub(crate) fn xor_assign(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

pub(crate) fn is_zero(row: &[u64]) -> bool {
    row.iter().all(|&w| w == 0)
}

pub(crate) fn weight(row: &[u64]) -> usize {
    row.iter().map(|w| w.count_ones() as usize).sum()
}
