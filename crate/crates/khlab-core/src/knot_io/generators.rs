//! PD codes for the twist families.
//!
//! Both families are a vertical column of `n` crossings between two strands.
//! Capping the column at both ends gives the twisted unknot; closing it as a
//! braid gives `T(2,n)`. Labels run consecutively along the orientation and
//! every under-strand passes `a -> c` with `c = a + 1 (mod 2n)`.

use super::KnotDiagram;
use crate::error::{Error, Result};

/// Kink handedness for [`twisted_unknot_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Handedness {
    /// Positive crossings; the all-0 resolution has `n + 1` loops.
    Positive,
    /// Mirror image; the all-1 resolution has `n + 1` loops.
    Negative,
}

/// Twisted unknot `TU_n` with positive kinks.
pub fn twisted_unknot(n: usize) -> KnotDiagram {
    twisted_unknot_with(n, Handedness::Positive)
}

/// Twisted unknot `TU_n` with `n >= 1` kinks of the given handedness.
///
/// One strand descends through crossings `1..n` (edges `1..=n+1`, edge 1
/// being the top cap) and returns upward (edges `n+1..=2n`).
pub fn twisted_unknot_with(n: usize, hand: Handedness) -> KnotDiagram {
    assert!(n >= 1, "twisted unknot needs at least one kink");
    let n = n as u32;
    let wrap = |x: u32| if x > 2 * n { x - 2 * n } else { x };
    let crossings = (1..=n)
        .map(|k| {
            let down_in = k;
            let down_out = k + 1;
            let up_in = 2 * n + 1 - k;
            let up_out = wrap(2 * n + 2 - k);
            match (hand, k % 2 == 1) {
                (Handedness::Positive, true) => [up_in, down_out, up_out, down_in],
                (Handedness::Positive, false) => [down_in, up_out, down_out, up_in],
                (Handedness::Negative, true) => [down_in, up_in, down_out, up_out],
                (Handedness::Negative, false) => [up_in, down_in, up_out, down_out],
            }
        })
        .collect();
    KnotDiagram::new(crossings).expect("generated twisted unknot is valid")
}

/// Torus knot `T(2,n)` for odd `n >= 3`, drawn so that the all-0 resolution
/// has `n` loops (negative crossings in this labeling).
pub fn torus_knot_2n(n: usize) -> Result<KnotDiagram> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::EvenParameter(n));
    }
    let n = n as u32;
    let wrap = |x: u32| if x > 2 * n { x - 2 * n } else { x };
    let crossings = (1..=n)
        .map(|k| {
            let (first_in, first_out) = (k, k + 1);
            let (second_in, second_out) = (n + k, wrap(n + k + 1));
            if k % 2 == 1 {
                [second_in, first_in, second_out, first_out]
            } else {
                [first_in, second_in, first_out, second_out]
            }
        })
        .collect();
    KnotDiagram::new(crossings)
}

/// Two-crossing Hopf link `X[4,1,3,2] X[2,3,1,4]`.
pub fn hopf_link() -> KnotDiagram {
    KnotDiagram::new(vec![[4, 1, 3, 2], [2, 3, 1, 4]]).expect("valid Hopf link")
}
