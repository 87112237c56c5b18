use serde::{Deserialize, Serialize};

/// Resource limits shared by the exponential and doubly-exponential
/// computations. Exceeding a cap is reported as an error, never truncated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceCaps {
    /// Largest vertex count for exact Cheeger enumeration.
    pub enumeration: usize,
    /// Largest numerator/denominator bit length during exact plenary powers.
    pub coefficient_bits: u64,
    /// Largest group order produced by a closure.
    pub group_order: usize,
}

pub const DEFAULT_ENUMERATION_CAP: usize = 26;
pub const DEFAULT_COEFFICIENT_BITS: u64 = 1_000_000;
pub const DEFAULT_GROUP_ORDER: usize = 200_000;

/// Hard ceiling on the enumeration cap; subsets are tracked as `u64` masks.
pub const MAX_ENUMERATION_CAP: usize = 40;

impl Default for ResourceCaps {
    fn default() -> Self {
        ResourceCaps {
            enumeration: DEFAULT_ENUMERATION_CAP,
            coefficient_bits: DEFAULT_COEFFICIENT_BITS,
            group_order: DEFAULT_GROUP_ORDER,
        }
    }
}
