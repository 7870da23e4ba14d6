//! Process-wide tolerance factor.
//!
//! Geometric comparisons use an absolute tolerance `base() * diameter(P)`.
//! Center-function values are compared relative to their magnitude with the
//! same factor.

use std::sync::atomic::{AtomicU64, Ordering};

/// Default base tolerance factor.
pub const DEFAULT_BASE: f64 = 1e-9;

// bit pattern of 1e-9_f64
static BASE_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695);

/// Current base tolerance factor.
pub fn base() -> f64 {
    f64::from_bits(BASE_BITS.load(Ordering::Relaxed))
}

/// Override the base tolerance factor. Non-positive or non-finite values are
/// ignored.
pub fn set_base(value: f64) {
    if value.is_finite() && value > 0.0 {
        BASE_BITS.store(value.to_bits(), Ordering::Relaxed);
    }
}

/// `|a - b| <= base * max(|a|, |b|)`; two zeros compare equal.
pub fn rel_eq(a: f64, b: f64) -> bool {
    let scale = a.abs().max(b.abs());
    (a - b).abs() <= base() * scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_bits_decode_to_1e9() {
        assert_eq!(f64::from_bits(0x3E11_2E0B_E826_D695), DEFAULT_BASE);
    }

    #[test]
    fn relative_comparison() {
        assert!(rel_eq(0.0, 0.0));
        assert!(rel_eq(1e6, 1e6 + 1e-4));
        assert!(!rel_eq(1.0, 1.0 + 1e-6));
    }
}
