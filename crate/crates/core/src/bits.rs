//! Bit-mask helpers for subsets of a small ground set.

pub type Mask = u32;

/// Largest ground set a [`Mask`] can index.
pub const MAX_GROUND: usize = 32;

pub fn full(n: usize) -> Mask {
    if n >= 32 {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

pub fn ones(m: Mask) -> impl Iterator<Item = usize> {
    let mut m = m;
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(i)
    })
}

/// All `k`-subsets of `0..n` in increasing numeric order (Gosper's hack).
pub fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = Mask> {
    let limit: u64 = 1u64 << n;
    let mut cur: Option<u64> = if k > n { None } else { Some((1u64 << k) - 1) };
    std::iter::from_fn(move || {
        let c = cur?;
        if c >= limit {
            return None;
        }
        cur = if c == 0 {
            None
        } else {
            let lowest = c & c.wrapping_neg();
            let ripple = c + lowest;
            Some((((ripple ^ c) >> 2) / lowest) | ripple)
        };
        Some(c as Mask)
    })
}

/// Packs the bits of `mask` that lie in `keep` into consecutive low bits,
/// preserving their order.
pub fn compress(mask: Mask, keep: Mask) -> Mask {
    let mut out = 0;
    for (pos, i) in ones(keep).enumerate() {
        if mask >> i & 1 == 1 {
            out |= 1 << pos;
        }
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
